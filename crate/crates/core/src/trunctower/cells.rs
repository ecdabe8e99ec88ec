use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::candidate_forms;
use crate::error::{Error, Result};
use crate::idealcalc::{hilbert_data, ideal_spans, IdealPresentation};
use crate::ringcore::linalg::Echelon;
use crate::ringcore::{binomial, MonomialBasis};

/// Cell label: monomials `m_i` (degree `< e0`), monomials `m_j` (degree `e0`),
/// and the index `q` of the candidate linear form. Indices are 1-based positions
/// in the degree-lex monomial list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellIndex {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub q: usize,
}

/// True iff `m_i` and `L_q^r m_j` (`0 <= r < n - e0`) project to a basis of `R/J`.
pub fn cell_membership(jideal: &IdealPresentation, n: u32, cell: &CellIndex, e0: u64) -> Result<bool> {
    let nv = jideal.nvars() as u64;
    if e0 == 0 || (n as u64) <= e0 {
        return Err(Error::MalformedCell(format!("need 1 <= e0 < n (e0={e0}, n={n})")));
    }
    let low = binomial(nv + e0 - 1, nv) as usize;
    let high = binomial(nv + e0, nv) as usize;
    let unique = |v: &[usize]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
    if !unique(&cell.i) || !unique(&cell.j) {
        return Err(Error::MalformedCell("repeated index".into()));
    }
    if let Some(bad) = cell.i.iter().find(|&&k| k == 0 || k > low) {
        return Err(Error::MalformedCell(format!("i-index {bad} outside 1..={low}")));
    }
    if let Some(bad) = cell.j.iter().find(|&&k| k <= low || k > high) {
        return Err(Error::MalformedCell(format!("j-index {bad} outside {}..={high}", low + 1)));
    }
    if cell.j.len() as u64 != e0 {
        return Err(Error::MalformedCell(format!("{} j-indices, expected e0 = {e0}", cell.j.len())));
    }
    let forms = candidate_forms(jideal.nvars(), e0, jideal.field(), n)?;
    let form = forms
        .get(cell.q)
        .ok_or_else(|| Error::MalformedCell(format!("form index {} outside 0..{}", cell.q, forms.len())))?;

    let j = jideal.truncate(n)?;
    let spans = ideal_spans(&j, n)?;
    let count = cell.i.len() + cell.j.len() * (n as usize - e0 as usize);
    if spans.colength() as usize != count {
        return Ok(false);
    }
    let basis = MonomialBasis::new(jideal.nvars(), n);
    let mut e: Echelon = spans.echelon().clone();
    let base = e.rank();
    for &k in &cell.i {
        e.insert(&vec![(k - 1, num_traits::One::one())])?;
    }
    let mut powers = vec![crate::TruncatedPoly::constant(jideal.nvars(), jideal.field(), n, 1)];
    for r in 1..(n as u64 - e0) as u32 {
        let next = powers[r as usize - 1].mul_trunc(form)?;
        powers.push(next);
    }
    for &k in &cell.j {
        let m = basis.monomial(k - 1);
        for p in &powers {
            e.insert(&p.mul_monomial(m).to_sparse(&basis))?;
        }
    }
    Ok(e.rank() - base == count)
}

/// Hilbert values match `f` (indexed by `t`) on `t` in `[r-1, e0-1]`; empty for `r = e0+1`.
pub fn hilbert_stratum_check(ideal: &IdealPresentation, f: &[u64], r: u32) -> Result<bool> {
    if r == 0 {
        return Err(Error::Invalid("stratum index r must be >= 1".into()));
    }
    let level = ideal.level().max(3);
    let h = hilbert_data(ideal, level)?;
    let (e0, _) = h.require_stable()?;
    let hi = e0 - 1;
    for t in (r as i64 - 1)..=hi {
        let t = t as usize;
        let have = *h.values.get(t).ok_or(Error::LevelTooLow { have: level, want: t as u32 + 1 })?;
        let want = *f.get(t).ok_or_else(|| Error::Invalid(format!("function table has no value at t={t}")))?;
        if have != want {
            return Ok(false);
        }
    }
    Ok(true)
}
