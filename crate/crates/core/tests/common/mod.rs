//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use curvemoduli_core::idealcalc::IdealPresentation;
use curvemoduli_core::{FieldSpec, Scalar};
use num_traits::{One, Zero};

/// All exponent vectors of total degree `<= t` in `n` variables, in any fixed order.
pub fn exponents_upto(n: usize, t: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, t, &mut Vec::new(), &mut out);
    out
}

fn reduce_mod(field: FieldSpec, x: Scalar) -> Scalar {
    match field.size() {
        None => x,
        Some(p) => {
            let p = num_bigint::BigInt::from(p);
            let num = ((x.numer() % &p) + &p) % &p;
            let den = ((x.denom() % &p) + &p) % &p;
            // den^(p-2) by repeated multiplication (p is small in tests)
            let mut inv = num_bigint::BigInt::one();
            let e: u64 = (&p - 2u32).try_into().unwrap();
            for _ in 0..e {
                inv = (inv * &den) % &p;
            }
            Scalar::from_integer((num * inv) % &p)
        }
    }
}

/// Rank of a dense matrix by plain Gaussian elimination.
pub fn dense_rank(field: FieldSpec, mut rows: Vec<Vec<Scalar>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let piv = rows[rank][col].clone();
        let inv = reduce_mod(field, piv.recip());
        for x in rows[rank].iter_mut() {
            *x = reduce_mod(field, &*x * &inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot) {
                    *x = reduce_mod(field, &*x - &f * p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim R/(I + M^{t+1})` for `t < n`, by dense linear algebra on all products
/// `x^a * g` with every term of degree `<= t` kept.
pub fn dense_hilbert(ideal: &IdealPresentation, n: u32) -> Vec<u64> {
    let nv = ideal.nvars();
    let field = ideal.field();
    let gens: Vec<BTreeMap<Vec<u32>, Scalar>> = ideal
        .generators()
        .iter()
        .map(|g| g.terms().iter().map(|(m, c)| (m.exps().to_vec(), c.clone())).collect())
        .collect();
    (0..n)
        .map(|t| {
            let monos = exponents_upto(nv, t);
            let index: BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut rows = Vec::new();
            for g in &gens {
                for a in &monos {
                    let mut row = vec![Scalar::zero(); monos.len()];
                    let mut any = false;
                    for (e, c) in g {
                        let prod: Vec<u32> = e.iter().zip(a).map(|(x, y)| x + y).collect();
                        if let Some(&i) = index.get(&prod) {
                            row[i] = c.clone();
                            any = true;
                        }
                    }
                    if any {
                        rows.push(row);
                    }
                }
            }
            (monos.len() - dense_rank(field, rows)) as u64
        })
        .collect()
}

/// Monomial ideal colength: monomials of degree `<= t` divisible by no generator.
pub fn monomial_colength(gens: &[Vec<u32>], nvars: usize, t: u32) -> u64 {
    exponents_upto(nvars, t)
        .into_iter()
        .filter(|m| !gens.iter().any(|g| g.iter().zip(m).all(|(a, b)| a <= b)))
        .count() as u64
}

/// Elements of the semigroup generated by `gens` up to `bound`, by naive closure.
pub fn semigroup_closure(gens: &[u64], bound: u64) -> BTreeSet<u64> {
    let mut s = BTreeSet::from([0u64]);
    let mut frontier = vec![0u64];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x + g;
            if y <= bound && s.insert(y) {
                frontier.push(y);
            }
        }
    }
    s
}

/// Valuation route for a monomial branch `(t^a1, .., t^aN)`:
/// `H^1(t) = #(Gamma \ v(m^{t+1}))`, where `v(m^k)` is the set of sums of at least `k` generators.
pub fn valuation_hilbert(gens: &[u64], tmax: u32) -> Vec<u64> {
    let top = gens.iter().max().unwrap() * (tmax as u64 + 1);
    // longest representation of each value as a sum of generators
    let mut longest: Vec<i64> = vec![-1; top as usize + 1];
    longest[0] = 0;
    for v in 1..=top as usize {
        for &g in gens {
            let g = g as usize;
            if g <= v && longest[v - g] >= 0 {
                longest[v] = longest[v].max(longest[v - g] + 1);
            }
        }
    }
    (0..=tmax)
        .map(|t| longest.iter().filter(|&&l| l >= 0 && l < t as i64 + 1).count() as u64)
        .collect()
}
