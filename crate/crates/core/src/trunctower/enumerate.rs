//! Exhaustive enumeration of truncation-set points over a small prime field by
//! lifting through the tower `R/M -> R/M^2 -> ... -> R/M^n`.
//!
//! An ideal `J' ⊇ M^{n+1}` lifting `J ⊇ M^n` is determined by `W = J' ∩ S_n` and
//! one correction `w_k ∈ S_n/W` per echelon row `b_k` of `J`; the ideal condition
//! `x_i (b_k + w_k) ∈ J'` is affine-linear in the `w_k` once `W` is fixed.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{admissible_polys, tn_membership_with, FormSearch};
use crate::error::{Error, Result};
use crate::idealcalc::{shift_by_var, IdealPresentation};
use crate::ringcore::linalg::{solve_affine, sparse_get, Echelon, SparseVec};
use crate::ringcore::{FieldSpec, MonomialBasis, Scalar, TruncatedPoly};

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    /// Restrict to one `e1`; inadmissible values give an empty result.
    pub e1: Option<i64>,
    /// Maximum number of candidate lifts examined.
    pub budget: u64,
    /// Linear forms tried by the membership filter (default: every rational form).
    pub forms: Option<Vec<TruncatedPoly>>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { e1: None, budget: 20_000_000, forms: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Enumeration {
    pub nvars: usize,
    pub e0: u64,
    pub e1_values: Vec<i64>,
    pub level: u32,
    pub q: u64,
    pub count: usize,
    /// Canonical generators per ideal, in canonical order.
    pub ideals: Vec<Vec<String>>,
    /// Number of points at every level `1..=n` on the way up.
    pub counts_by_level: Vec<usize>,
    #[serde(skip)]
    pub spans: Vec<Echelon>,
}

struct Budget {
    left: u64,
    total: u64,
}

impl Budget {
    fn spend(&mut self, k: u64) -> Result<()> {
        if k > self.left {
            return Err(Error::BudgetExceeded { budget: self.total });
        }
        self.left -= k;
        Ok(())
    }
}

/// Minimal generators read off a canonical echelon span: rows (in pivot order)
/// not in `M J` plus the earlier choices.
pub fn canonical_generators(nvars: usize, field: FieldSpec, level: u32, ech: &Echelon) -> Vec<TruncatedPoly> {
    let basis = MonomialBasis::new(nvars, level);
    let mut acc = Echelon::new(field, basis.len());
    for r in ech.rows() {
        for i in 0..nvars {
            acc.insert(&shift_by_var(&basis, r, i)).expect("in range");
        }
    }
    ech.rows()
        .filter(|r| acc.insert(r).expect("in range").is_some())
        .map(|r| TruncatedPoly::from_sparse(&basis, field, level, r))
        .collect()
}

/// Row-reduced matrices of rank `k` on `f` columns over `elems`, as sparse rows on `cols`.
fn subspaces(cols: &[usize], k: usize, elems: &[Scalar]) -> Vec<Vec<SparseVec>> {
    let f = cols.len();
    let mut out = Vec::new();
    if k > f {
        return out;
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row, col) with col > pivot[row], col not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| ((pivots[r] + 1)..f).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let q = elems.len();
        let total = q.pow(free.len() as u32);
        for code in 0..total {
            let mut rows: Vec<BTreeMap<usize, Scalar>> =
                pivots.iter().map(|&p| BTreeMap::from([(cols[p], Scalar::from_integer(1.into()))])).collect();
            let mut c = code;
            for &(r, col) in &free {
                let v = &elems[c % q];
                c /= q;
                if !v.is_zero() {
                    rows[r].insert(cols[col], v.clone());
                }
            }
            out.push(rows.into_iter().map(|m| m.into_iter().collect()).collect());
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < f - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All lifts of `state` (a span at level `n`) to level `n+1` with `dim J' ∩ S_n` in `dims`.
fn lifts(
    state: &Echelon,
    n: u32,
    nvars: usize,
    field: FieldSpec,
    dims: &[usize],
    budget: &mut Budget,
) -> Result<Vec<Echelon>> {
    let basis = MonomialBasis::new(nvars, n + 1);
    let elems = field.elements().expect("prime field");
    let q = elems.len() as u64;
    let top = basis.degree_range(n);
    let rows: Vec<SparseVec> = state.rows().cloned().collect();
    let pivot_of: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, r)| (r[0].0, k)).collect();

    // (coefficients c_j, degree-n part) of x_i b_k
    let mut relations: Vec<(Vec<(usize, Scalar)>, SparseVec)> = Vec::new();
    let mut forced = Echelon::new(field, basis.len());
    for r in &rows {
        for i in 0..nvars {
            let y = shift_by_var(&basis, r, i);
            let (low, high): (SparseVec, SparseVec) = y.into_iter().partition(|(c, _)| *c < top.start);
            let coeffs: Vec<(usize, Scalar)> =
                low.iter().filter_map(|(c, v)| pivot_of.get(c).map(|&k| (k, v.clone()))).collect();
            if coeffs.is_empty() {
                forced.insert(&high)?;
            } else {
                relations.push((coeffs, high));
            }
        }
    }

    let top_cols: Vec<usize> = top.clone().collect();
    let free_cols: Vec<usize> = top_cols.iter().copied().filter(|c| !forced.is_pivot(*c)).collect();
    let base_dim = forced.rank();
    let mut out = Vec::new();
    for &dim_w in dims {
        if dim_w < base_dim || dim_w > top_cols.len() {
            continue;
        }
        for extra in subspaces(&free_cols, dim_w - base_dim, &elems) {
            budget.spend(1)?;
            let mut w = forced.clone();
            w.extend(extra.iter())?;
            let comp: Vec<usize> = top_cols.iter().copied().filter(|c| !w.is_pivot(*c)).collect();
            let pos: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(p, c)| (*c, p)).collect();
            let width = comp.len();
            let nunk = rows.len() * width;
            let mut eqs: Vec<(SparseVec, Scalar)> = Vec::new();
            for (coeffs, high) in &relations {
                let red = w.reduce(high);
                for (p, &c) in comp.iter().enumerate() {
                    let mut a: SparseVec = coeffs.iter().map(|(k, v)| (k * width + p, v.clone())).collect();
                    a.sort_by_key(|(c, _)| *c);
                    let rhs = sparse_get(&red, c).cloned().unwrap_or_else(Scalar::zero);
                    eqs.push((a, rhs));
                }
            }
            // forced relations must already lie in W (true by construction)
            let Some((x0, null)) = solve_affine(field, nunk, &eqs)? else { continue };
            let count = q.checked_pow(null.len() as u32).ok_or(Error::BudgetExceeded { budget: budget.total })?;
            budget.spend(count)?;
            for code in 0..count {
                let mut x = x0.clone();
                let mut c = code;
                for v in &null {
                    let lam = &elems[(c % q) as usize];
                    c /= q;
                    if lam.is_zero() {
                        continue;
                    }
                    for (idx, val) in v {
                        x[*idx] = field.add(&x[*idx], &field.mul(lam, val));
                    }
                }
                let mut lifted = w.clone();
                for (k, r) in rows.iter().enumerate() {
                    let mut v = r.clone();
                    for (c, p) in &pos {
                        let val = &x[k * width + p];
                        if !val.is_zero() {
                            v.push((*c, val.clone()));
                        }
                    }
                    lifted.insert(&v)?;
                }
                out.push(lifted);
            }
        }
    }
    Ok(out)
}

/// Points of the truncation set at level `n` with multiplicity `e0` over `F_q`.
pub fn enumerate_xi(nvars: usize, e0: u64, n: u32, field: FieldSpec) -> Result<Enumeration> {
    enumerate_xi_with(nvars, e0, n, field, &EnumerateOptions::default())
}

pub fn enumerate_xi_with(nvars: usize, e0: u64, n: u32, field: FieldSpec, opts: &EnumerateOptions) -> Result<Enumeration> {
    let q = field.size().ok_or_else(|| Error::Invalid("enumeration needs a prime field".into()))?;
    if e0 == 0 || nvars == 0 {
        return Err(Error::Invalid("enumeration needs N >= 1 and e0 >= 1".into()));
    }
    if (n as u64) < e0 + 1 {
        return Err(Error::Invalid(format!("level {n} is below e0+1 = {}", e0 + 1)));
    }
    let mut e1_values: Vec<i64> = admissible_polys(nvars, e0).into_iter().map(|(_, e1)| e1).collect();
    e1_values.sort();
    e1_values.dedup();
    if let Some(e1) = opts.e1 {
        e1_values.retain(|v| *v == e1);
    }
    let search = match &opts.forms {
        Some(f) => FormSearch::Explicit(f.clone()),
        None => FormSearch::AllRational,
    };
    let mut budget = Budget { left: opts.budget, total: opts.budget };
    let mut found: BTreeMap<Vec<SparseVec>, Echelon> = BTreeMap::new();
    let mut counts_by_level = vec![0usize; n as usize];
    for &e1 in &e1_values {
        let p = |t: u32| e0 as i64 * (t as i64 + 1) - e1;
        let mut states = vec![Echelon::new(field, 1)];
        if e0 == 1 && p(0) != 1 {
            continue;
        }
        counts_by_level[0] += 1;
        for lvl in 1..n {
            // lift from level `lvl` to `lvl + 1`, adding degree `lvl`
            let top_dim = MonomialBasis::new(nvars, lvl + 1).degree_range(lvl).len();
            let mut next = Vec::new();
            for s in &states {
                let colength = (MonomialBasis::new(nvars, lvl).len() - s.rank()) as i64;
                let dims: Vec<usize> = if lvl as u64 + 1 >= e0 {
                    let dim_w = top_dim as i64 - (p(lvl) - colength);
                    if dim_w < 0 || dim_w > top_dim as i64 {
                        continue;
                    }
                    vec![dim_w as usize]
                } else {
                    (0..=top_dim).collect()
                };
                for cand in lifts(s, lvl, nvars, field, &dims, &mut budget)? {
                    if lvl as u64 + 1 > e0 {
                        let pres = IdealPresentation::from_echelon(nvars, field, lvl + 1, &cand)?;
                        if !tn_membership_with(&pres, lvl + 1, e0, &search)?.is_member() {
                            continue;
                        }
                    }
                    next.push(cand);
                }
            }
            next.sort_by_key(|e| e.key());
            next.dedup_by(|a, b| a.same_span(b));
            counts_by_level[lvl as usize] += next.len();
            states = next;
        }
        for s in states {
            found.insert(s.key(), s);
        }
    }
    let spans: Vec<Echelon> = found.into_values().collect();
    let ideals = spans
        .iter()
        .map(|e| canonical_generators(nvars, field, n, e).iter().map(|g| g.to_string()).collect())
        .collect();
    Ok(Enumeration { nvars, e0, e1_values, level: n, q, count: spans.len(), ideals, counts_by_level, spans })
}
