//! Truncation sets, superficial elements, admissible Hilbert polynomials, cells
//! and the finite-field enumerator.

mod admissible;
mod cells;
mod enumerate;

pub use admissible::{admissible, admissible_polys, admissible_range, AdmissibleRange};
pub use cells::{cell_membership, hilbert_stratum_check, CellIndex};
pub use enumerate::{canonical_generators, enumerate_xi, enumerate_xi_with, EnumerateOptions, Enumeration};

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::idealcalc::{ideal_spans, initial_ideal, times_linear, DegreeSpans, IdealPresentation};
use crate::ringcore::linalg::Echelon;
use crate::ringcore::monomial::monomials_of_degree;
use crate::ringcore::{binomial, FieldSpec, Monomial, Scalar, TruncatedPoly};

/// User-controlled replacement for the nonconstructive level bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutoffPolicy {
    pub n_default: u32,
    pub n_max: u32,
    pub window: u32,
}

impl CutoffPolicy {
    pub fn new(n_default: u32, n_max: u32, window: u32) -> Result<Self> {
        if n_default < 3 || n_default > n_max {
            return Err(Error::Invalid(format!("cutoff policy needs 3 <= n_default <= n_max, got {n_default}, {n_max}")));
        }
        if window < 2 {
            return Err(Error::Invalid("stabilization window must be at least 2".into()));
        }
        Ok(CutoffPolicy { n_default, n_max, window })
    }

    /// Parses "n_default:n_max:window".
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Error::Invalid(format!("cutoff policy '{text}' is not n_default:n_max:window"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Vec<u32> = parts.iter().map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        Self::new(nums[0], nums[1], nums[2])
    }

    /// Level to use once a provisional multiplicity `e0` is known: `2 e0 + 2`,
    /// clamped to `[n_default, n_max]`.
    pub fn level_for(&self, e0: u32) -> u32 {
        (2 * e0 + 2).max(self.n_default).min(self.n_max)
    }
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy { n_default: 8, n_max: 24, window: 2 }
    }
}

/// `s = e0 (N-1) + 1` linear forms `L_q = sum_i q^(i-1) X_i`, `q = 0..s-1`.
/// Any `N` of them are independent (Vandermonde).
pub fn candidate_forms(nvars: usize, e0: u64, field: FieldSpec, level: u32) -> Result<Vec<TruncatedPoly>> {
    let s = e0 * (nvars as u64 - 1) + 1;
    if let Some(q) = field.size() {
        if q < s {
            return Err(Error::FieldTooSmall { needed: s, available: q });
        }
    }
    Ok((0..s).map(|q| moment_form(nvars, field, level, &field.from_i64(q as i64))).collect())
}

fn moment_form(nvars: usize, field: FieldSpec, level: u32, q: &Scalar) -> TruncatedPoly {
    let terms = (0..nvars).map(|i| (Monomial::var(nvars, i), field.pow(q, i as u32)));
    TruncatedPoly::from_terms(nvars, field, level, terms).expect("valid form")
}

/// One representative of every point of `P(S_1)` over a prime field (leading coefficient 1).
pub fn all_rational_forms(nvars: usize, field: FieldSpec, level: u32) -> Result<Vec<TruncatedPoly>> {
    let elems = field.elements().ok_or_else(|| Error::Invalid("rational forms need a finite field".into()))?;
    let q = elems.len();
    let mut out = Vec::new();
    for lead in 0..nvars {
        let rest = nvars - lead - 1;
        let count = q.pow(rest as u32);
        for code in 0..count {
            let mut terms = vec![(Monomial::var(nvars, lead), Scalar::from_integer(1.into()))];
            let mut c = code;
            for j in 0..rest {
                terms.push((Monomial::var(nvars, lead + 1 + j), elems[c % q].clone()));
                c /= q;
            }
            out.push(TruncatedPoly::from_terms(nvars, field, level, terms)?);
        }
    }
    Ok(out)
}

/// Witness for the truncation-set conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperficialCertificate {
    pub form: TruncatedPoly,
    /// `dim R/(I + M^{e0+1} + (L))` (for membership tests, `dim R/(J+(L))`).
    pub length_with_l: u64,
    /// Degrees `t` where `L: S_t/J*_t -> S_{t+1}/J*_{t+1}` is an isomorphism of `e0`-dimensional spaces.
    pub iso_range: Vec<u32>,
}

impl Serialize for SuperficialCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SuperficialCertificate", 3)?;
        st.serialize_field("L", &self.form.to_string())?;
        st.serialize_field("length_with_L", &self.length_with_l)?;
        st.serialize_field("iso_range", &self.iso_range)?;
        st.end()
    }
}

fn form_at(form: &TruncatedPoly, level: u32) -> Result<TruncatedPoly> {
    if form.order() != Some(1) || !form.is_homogeneous() {
        return Err(Error::Invalid(format!("{form} is not a nonzero linear form")));
    }
    Ok(form.with_level(level))
}

fn colength_with_form(ideal: &IdealPresentation, form: &TruncatedPoly, level: u32) -> Result<u64> {
    let j = ideal.truncate(level)?;
    let l = IdealPresentation::new(j.nvars(), j.field(), level, vec![form_at(form, level)?])?;
    Ok(ideal_spans(&j.sum(&l)?, level)?.colength())
}

fn quotient_dim(spans: &DegreeSpans, t: u32) -> usize {
    spans.basis().degree_range(t).len() - spans.initial_dim(t)
}

/// Rank of multiplication by `L` from `S_t` into `S_{t+1}/J*_{t+1}`.
fn mult_rank(spans: &DegreeSpans, form: &TruncatedPoly, t: u32) -> Result<usize> {
    let basis = spans.basis();
    let l = form_at(form, spans.level())?;
    let mut e = Echelon::from_vectors(spans.field(), basis.len(), spans.initial_slice(t + 1).iter())?;
    let base = e.rank();
    for m in monomials_of_degree(basis.nvars(), t) {
        e.insert(&l.mul_monomial(&m).to_sparse(basis))?;
    }
    Ok(e.rank() - base)
}

fn is_iso(spans: &DegreeSpans, form: &TruncatedPoly, t: u32, e0: usize) -> Result<bool> {
    Ok(quotient_dim(spans, t) == e0 && quotient_dim(spans, t + 1) == e0 && mult_rank(spans, form, t)? == e0)
}

/// Finite-level Cohen-Macaulay/superficial criterion: `dim R/(I+M^{e0+1}+(L)) <= e0`.
pub fn cm_superficial_test(
    ideal: &IdealPresentation,
    form: &TruncatedPoly,
    e0: u64,
    n: u32,
) -> Result<(bool, SuperficialCertificate)> {
    let lvl = e0 as u32 + 1;
    if n < lvl {
        return Err(Error::Invalid(format!("level {n} is below e0+1 = {lvl}")));
    }
    let length = colength_with_form(ideal, form, lvl)?;
    let spans = ideal_spans(&ideal.truncate(n)?, n)?;
    let mut iso_range = Vec::new();
    for t in (e0 as u32).saturating_sub(1)..n.saturating_sub(1) {
        if is_iso(&spans, form, t, e0 as usize)? {
            iso_range.push(t);
        }
    }
    let cert = SuperficialCertificate { form: form.with_level(n), length_with_l: length, iso_range };
    Ok((length <= e0, cert))
}

/// How `tn_membership` chooses linear forms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FormSearch {
    /// `candidate_forms`, falling back to all rational forms over too-small prime fields.
    #[default]
    Candidates,
    /// Every point of `P(S_1)` over the (prime) field.
    AllRational,
    Explicit(Vec<TruncatedPoly>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TnFailure {
    /// 1: length condition, 2: isomorphism condition.
    pub condition: u8,
    pub degree: Option<u32>,
    #[serde(rename = "L")]
    pub form: Option<String>,
    pub detail: String,
    pub forms_tried: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TnOutcome {
    Member { certificate: SuperficialCertificate },
    NotMember { failure: TnFailure },
}

impl TnOutcome {
    pub fn is_member(&self) -> bool {
        matches!(self, TnOutcome::Member { .. })
    }

    pub fn certificate(&self) -> Option<&SuperficialCertificate> {
        match self {
            TnOutcome::Member { certificate } => Some(certificate),
            TnOutcome::NotMember { .. } => None,
        }
    }
}

/// Membership of `J` (read as `J + M^n`) in the truncation set with multiplicity `e0`.
pub fn tn_membership(j: &IdealPresentation, n: u32, e0: u64) -> Result<TnOutcome> {
    tn_membership_with(j, n, e0, &FormSearch::Candidates)
}

pub fn tn_membership_with(j: &IdealPresentation, n: u32, e0: u64, search: &FormSearch) -> Result<TnOutcome> {
    if e0 == 0 || (n as u64) < e0 + 1 {
        return Err(Error::Invalid(format!("truncation-set membership needs e0 >= 1 and n >= e0+1 (n={n}, e0={e0})")));
    }
    let j = j.truncate(n)?;
    let spans = ideal_spans(&j, n)?;
    let lo = e0 as u32 - 1;
    for t in lo..n {
        let d = quotient_dim(&spans, t);
        if d != e0 as usize {
            return Ok(TnOutcome::NotMember {
                failure: TnFailure {
                    condition: 2,
                    degree: Some(t),
                    form: None,
                    detail: format!("dim S_{t}/J*_{t} = {d}, expected {e0}"),
                    forms_tried: 0,
                },
            });
        }
    }
    let forms = match search {
        FormSearch::Candidates => match candidate_forms(j.nvars(), e0, j.field(), n) {
            Ok(f) => f,
            Err(Error::FieldTooSmall { .. }) => all_rational_forms(j.nvars(), j.field(), n)?,
            Err(e) => return Err(e),
        },
        FormSearch::AllRational => all_rational_forms(j.nvars(), j.field(), n)?,
        FormSearch::Explicit(f) => f.clone(),
    };
    let mut first_len_failure: Option<TnFailure> = None;
    let mut first_iso_failure: Option<TnFailure> = None;
    for (k, form) in forms.iter().enumerate() {
        let length = colength_with_form(&j, form, n)?;
        if length > e0 {
            first_len_failure.get_or_insert(TnFailure {
                condition: 1,
                degree: None,
                form: Some(form.to_string()),
                detail: format!("dim R/(J+(L)) = {length} > e0 = {e0}"),
                forms_tried: k + 1,
            });
            continue;
        }
        let mut bad = None;
        for t in lo..n - 1 {
            if mult_rank(&spans, form, t)? != e0 as usize {
                bad = Some(t);
                break;
            }
        }
        match bad {
            None => {
                let certificate =
                    SuperficialCertificate { form: form.with_level(n), length_with_l: length, iso_range: (lo..n - 1).collect() };
                return Ok(TnOutcome::Member { certificate });
            }
            Some(t) => {
                first_iso_failure.get_or_insert(TnFailure {
                    condition: 2,
                    degree: Some(t),
                    form: Some(form.to_string()),
                    detail: format!("multiplication by L is not injective on S_{t}/J*_{t}"),
                    forms_tried: k + 1,
                });
            }
        }
    }
    let mut failure = first_iso_failure.or(first_len_failure).unwrap_or(TnFailure {
        condition: 1,
        degree: None,
        form: None,
        detail: "no linear forms to try".into(),
        forms_tried: 0,
    });
    failure.forms_tried = forms.len();
    Ok(TnOutcome::NotMember { failure })
}

/// Degree structure of `J*` for `J` in the truncation set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub ok: bool,
    /// Minimal generator degrees of `J* + S_{>=n}`, with multiplicity (degree `n` included).
    pub generator_degrees: Vec<u32>,
    /// Generator degrees inside `e0+1 ..= n-1`.
    pub violations: Vec<u32>,
    /// Degrees `t` in `e0+1 ..= n-1` with `J*_t != S_1 J*_{t-1}`.
    pub slice_identity_failures: Vec<u32>,
}

/// No minimal generators of `J*` in degrees `e0+1 .. n-1`, and `J*_t = S_1 J*_{t-1}` there.
pub fn shape_check(j: &IdealPresentation, n: u32, e0: u64) -> Result<ShapeReport> {
    let j = j.truncate(n)?;
    let data = initial_ideal(&j, n)?;
    let mut degrees = data.v_star.clone();
    // degree n: S_n modulo S_1 J*_{n-1}
    let spans = ideal_spans(&j, n)?;
    let up = crate::ringcore::MonomialBasis::new(j.nvars(), n + 1);
    let top = if n > 0 { spans.initial_slice(n - 1) } else { vec![] };
    let lower = times_linear(&up, j.field(), &top);
    let dim_sn = binomial(j.nvars() as u64 - 1 + n as u64, n as u64) as usize;
    degrees.extend(std::iter::repeat_n(n, dim_sn - lower.rank()));
    let lo = e0 as u32 + 1;
    let violations: Vec<u32> = data.v_star.iter().copied().filter(|d| *d >= lo && *d < n).collect();
    let mut slice_identity_failures = Vec::new();
    for t in lo..n {
        let below = times_linear(spans.basis(), j.field(), &spans.initial_slice(t - 1));
        if below.rank() != spans.initial_dim(t) {
            slice_identity_failures.push(t);
        }
    }
    let ok = violations.is_empty() && slice_identity_failures.is_empty();
    Ok(ShapeReport { ok, generator_degrees: degrees, violations, slice_identity_failures })
}

/// Minimal homogeneous generators of `J*` of degree `<= e0`, verified to satisfy
/// `J~ + M^n = J*` and to have multiplicity `e0` at level `n`.
pub fn jtilde(j: &IdealPresentation, n: u32, e0: u64) -> Result<IdealPresentation> {
    let j = j.truncate(n)?;
    let data = initial_ideal(&j, n)?;
    let gens: Vec<TruncatedPoly> = data.generators.iter().filter(|g| g.order().unwrap() as u64 <= e0).cloned().collect();
    let tilde = IdealPresentation::new(j.nvars(), j.field(), n, gens)?;
    let spans_t = ideal_spans(&tilde, n)?;
    let spans_j = ideal_spans(&j, n)?;
    for d in 0..n {
        let a = Echelon::from_vectors(j.field(), spans_t.basis().len(), spans_t.initial_slice(d).iter())?;
        let b = Echelon::from_vectors(j.field(), spans_j.basis().len(), spans_j.initial_slice(d).iter())?;
        if !a.same_span(&b) {
            return Err(Error::Verification(format!("J~ + M^{n} differs from J* in degree {d}; raise the level")));
        }
    }
    if n >= 3 {
        let h = crate::idealcalc::hilbert_data(&tilde, n)?;
        if h.e0 != Some(e0 as i64) {
            return Err(Error::Verification(format!("J~ has multiplicity {:?} at level {n}, expected {e0}", h.e0)));
        }
    }
    Ok(tilde)
}

/// `J + M^{n1}`.
pub fn truncate(j: &IdealPresentation, n1: u32) -> Result<IdealPresentation> {
    j.truncate(n1)
}
