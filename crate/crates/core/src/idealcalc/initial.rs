use super::{ideal_spans, shift_by_var, DegreeSpans, IdealPresentation};
use crate::error::Result;
use crate::ringcore::linalg::{DegreeSlice, Echelon, SparseVec};
use crate::ringcore::{MonomialBasis, TruncatedPoly};

/// Initial ideal `I*` up to level `n`, with Hironaka's degree multiset `v*`.
#[derive(Debug, Clone)]
pub struct InitialIdealData {
    pub level: u32,
    pub slices: Vec<DegreeSlice>,
    /// Degrees of minimal homogeneous generators of `I*`, with multiplicity.
    pub v_star: Vec<u32>,
    pub nu: usize,
    /// The minimal generators themselves (echelon pivot order).
    pub generators: Vec<TruncatedPoly>,
}

impl InitialIdealData {
    pub fn dims(&self) -> Vec<usize> {
        self.slices.iter().map(|s| s.dimension).collect()
    }
}

/// Span of `S_1 * W` for a homogeneous subspace `W` of degree `d-1`.
pub fn times_linear(basis: &MonomialBasis, field: crate::FieldSpec, slice: &[SparseVec]) -> Echelon {
    let mut e = Echelon::new(field, basis.len());
    for v in slice {
        for i in 0..basis.nvars() {
            e.insert(&shift_by_var(basis, v, i)).expect("in range");
        }
    }
    e
}

pub(crate) fn initial_from_spans(spans: &DegreeSpans) -> InitialIdealData {
    let basis = spans.basis();
    let field = spans.field();
    let n = spans.level();
    let mut v_star = Vec::new();
    let mut generators = Vec::new();
    let mut prev: Vec<SparseVec> = Vec::new();
    for d in 0..n {
        let cur = spans.initial_slice(d);
        let mut lower = times_linear(basis, field, &prev);
        for row in &cur {
            if lower.insert(row).expect("in range").is_some() {
                v_star.push(d);
                generators.push(TruncatedPoly::from_sparse(basis, field, n, row));
            }
        }
        prev = cur;
    }
    InitialIdealData { level: n, slices: spans.slices(), nu: v_star.len(), v_star, generators }
}

/// `I*_d` slices, `v*` and `nu = |v*|` below level `n`.
pub fn initial_ideal(ideal: &IdealPresentation, n: u32) -> Result<InitialIdealData> {
    Ok(initial_from_spans(&ideal_spans(ideal, n)?))
}

/// `nu = dim (I+M^n)/(M I + M^n)`.
pub fn min_generators(ideal: &IdealPresentation, n: u32) -> Result<usize> {
    let spans = ideal_spans(ideal, n)?;
    Ok(spans.echelon().rank() - spans.times_maximal().rank())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardBasisReport {
    pub is_standard: bool,
    pub failing_degree: Option<u32>,
    /// An element of `I*` in the failing degree outside the ideal of given initial forms.
    pub missing_form: Option<TruncatedPoly>,
}

/// Whether the initial forms of the given generators generate `I*` in degrees `< n`.
pub fn standard_basis_check(ideal: &IdealPresentation, n: u32) -> Result<StandardBasisReport> {
    let spans = ideal_spans(ideal, n)?;
    let basis = spans.basis();
    let field = ideal.field();
    let mut forms = Echelon::new(field, basis.len());
    for g in ideal.generators() {
        let g = g.truncate(n)?;
        let Some(o) = g.order() else { continue };
        let f = g.homogeneous_part(o);
        for d in 0..n - o {
            for m in crate::ringcore::monomial::monomials_of_degree(ideal.nvars(), d) {
                forms.insert(&f.mul_monomial(&m).to_sparse(basis))?;
            }
        }
    }
    for d in 0..n {
        let cur = spans.initial_slice(d);
        if cur.len() != forms_dim(&forms, basis, d) {
            let missing = cur.iter().find(|r| !forms.contains(r)).expect("dimension gap has a witness");
            return Ok(StandardBasisReport {
                is_standard: false,
                failing_degree: Some(d),
                missing_form: Some(TruncatedPoly::from_sparse(basis, field, n, missing)),
            });
        }
    }
    Ok(StandardBasisReport { is_standard: true, failing_degree: None, missing_form: None })
}

fn forms_dim(forms: &Echelon, basis: &MonomialBasis, d: u32) -> usize {
    let r = basis.degree_range(d);
    forms.pivots().filter(|p| r.contains(p)).count()
}
