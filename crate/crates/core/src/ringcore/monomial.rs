use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent vector. Ordered by degree, then lexicographically on exponents,
/// so `x1^2 > x1*x2 > x2^2` within degree 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Formats as "x1^2*x3", with `var` naming the variable by 0-based index.
    pub fn format_with(&self, var: &dyn Fn(usize) -> String) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(var(i)),
                _ => parts.push(format!("{}^{}", var(i), e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&|i| format!("x{}", i + 1)))
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// All monomials of exact degree `d` in `nvars` variables, in decreasing lex order
/// (x1^d first).
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = rem;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in (0..=rem).rev() {
            cur[i] = e;
            rec(i + 1, rem - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::new(vec![]));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// Indexed basis of R/M^level: monomials of degree < level, ascending degree,
/// decreasing lex inside a degree. Indices are a prefix-stable 0-based numbering:
/// the basis at a lower level is a prefix of the basis at a higher one.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    nvars: usize,
    level: u32,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    starts: Vec<usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, level: u32) -> Self {
        let mut monos = Vec::new();
        let mut starts = Vec::new();
        for d in 0..level {
            starts.push(monos.len());
            monos.extend(monomials_of_degree(nvars, d));
        }
        starts.push(monos.len());
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MonomialBasis { nvars, level, monos, index, starts }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monos[i]
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Degree of the monomial at index `i`.
    pub fn degree_of(&self, i: usize) -> u32 {
        self.monos[i].degree()
    }

    /// Index range of degree-`d` monomials.
    pub fn degree_range(&self, d: u32) -> std::ops::Range<usize> {
        assert!(d < self.level);
        self.starts[d as usize]..self.starts[d as usize + 1]
    }

    /// Number of monomials of degree < `d` (clamped to the level).
    pub fn count_below(&self, d: u32) -> usize {
        self.starts[d.min(self.level) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_degree_then_lex() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 2]);
        let d = Monomial::new(vec![0, 3]);
        assert!(a > b && b > c && d > a);
    }

    #[test]
    fn basis_counts_match_binomials() {
        for n in 1..4 {
            for level in 1..7u32 {
                let b = MonomialBasis::new(n, level);
                assert_eq!(b.len() as u64, binomial(n as u64 + level as u64 - 1, n as u64));
                for d in 0..level {
                    assert_eq!(b.degree_range(d).len() as u64, binomial(n as u64 - 1 + d as u64, d as u64));
                }
            }
        }
    }

    #[test]
    fn basis_prefix_stable() {
        let small = MonomialBasis::new(3, 3);
        let big = MonomialBasis::new(3, 6);
        for i in 0..small.len() {
            assert_eq!(small.monomial(i), big.monomial(i));
        }
        assert_eq!(big.monomial(big.degree_range(2).start), &Monomial::new(vec![2, 0, 0]));
    }
}
