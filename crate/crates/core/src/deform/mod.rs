//! First-order deformations `f_i + eps g_i` over the dual numbers, colon spaces,
//! the dimension-count flatness oracle and determinantal constructors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::idealcalc::{hilbert_data, ideal_spans, initial_ideal, standard_basis_check, HilbertData, IdealPresentation};
use crate::ringcore::linalg::{kernel, Echelon, SparseVec};
use crate::ringcore::monomial::monomials_of_degree;
use crate::ringcore::{FieldSpec, MonomialBasis, Scalar, TruncatedPoly};

mod dual;
mod family;

pub use dual::DualPoly;
pub use family::{fiberwise_family_check, FamilyReport, FamilySource};

/// Base ideal with generators `f_i` and first-order perturbations `g_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderDeformation {
    base: IdealPresentation,
    perturbations: Vec<TruncatedPoly>,
}

impl FirstOrderDeformation {
    pub fn new(base: IdealPresentation, perturbations: Vec<TruncatedPoly>) -> Result<Self> {
        if base.generators().len() != perturbations.len() {
            return Err(Error::Mismatch(format!(
                "{} generators but {} perturbations",
                base.generators().len(),
                perturbations.len()
            )));
        }
        for g in &perturbations {
            if g.nvars() != base.nvars() || g.field() != base.field() || g.level() != base.level() {
                return Err(Error::Mismatch(format!("perturbation {g} not in the ring of the base")));
            }
        }
        Ok(FirstOrderDeformation { base, perturbations })
    }

    /// Parses both lists at a common level; zero perturbations may be written `0`.
    pub fn parse<S: AsRef<str>>(base: &[S], perturbations: &[S], nvars: usize, field: FieldSpec, level: u32) -> Result<Self> {
        let b = IdealPresentation::parse(base, nvars, field, level)?;
        if b.generators().len() != base.len() {
            return Err(Error::Invalid("base generators must be nonzero modulo the level".into()));
        }
        let g = perturbations
            .iter()
            .map(|s| TruncatedPoly::parse(s.as_ref(), nvars, field, level))
            .collect::<Result<Vec<_>>>()?;
        Self::new(b, g)
    }

    /// Pairs `f_i + eps g_i`; pairs with vanishing real part are rejected.
    pub fn from_duals(duals: &[DualPoly]) -> Result<Self> {
        let first = duals.first().ok_or_else(|| Error::Invalid("no generators".into()))?;
        if duals.iter().any(|d| d.re.is_zero() && !d.eps.is_zero()) {
            return Err(Error::Invalid("generator with zero real part".into()));
        }
        let kept: Vec<&DualPoly> = duals.iter().filter(|d| !d.re.is_zero()).collect();
        let base = IdealPresentation::new(
            first.re.nvars(),
            first.re.field(),
            first.re.level(),
            kept.iter().map(|d| d.re.clone()).collect(),
        )?;
        Self::new(base, kept.iter().map(|d| d.eps.clone()).collect())
    }

    pub fn base(&self) -> &IdealPresentation {
        &self.base
    }

    pub fn perturbations(&self) -> &[TruncatedPoly] {
        &self.perturbations
    }

    /// Orders `v_i` of the base generators.
    pub fn orders(&self) -> Vec<u32> {
        self.base.orders()
    }

    pub fn duals(&self) -> Vec<DualPoly> {
        self.base
            .generators()
            .iter()
            .zip(&self.perturbations)
            .map(|(f, g)| DualPoly { re: f.clone(), eps: g.clone() })
            .collect()
    }

    /// Checks level `>= e0+2`, a standard basis up to the level, and `v_i <= e0`.
    pub fn certify(&self, e0: u64) -> Result<()> {
        let level = self.base.level();
        if (level as u64) < e0 + 2 {
            return Err(Error::LevelTooLow { have: level, want: e0 as u32 + 2 });
        }
        let report = standard_basis_check(&self.base, level)?;
        if !report.is_standard {
            return Err(Error::Verification(format!(
                "base is not a standard basis (degree {})",
                report.failing_degree.unwrap_or_default()
            )));
        }
        if let Some(v) = self.orders().into_iter().find(|&v| v as u64 > e0) {
            return Err(Error::Verification(format!("generator order {v} exceeds e0 = {e0}")));
        }
        Ok(())
    }
}

/// `{ h mod M^a : h K ⊆ I + M^a }` as an echelon span over the monomials of degree `< a`.
#[derive(Debug, Clone)]
pub struct ColonSpace {
    level: u32,
    basis: MonomialBasis,
    echelon: Echelon,
}

impl ColonSpace {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn dimension(&self) -> usize {
        self.echelon.rank()
    }

    /// `dim R/M^a - dim`.
    pub fn codimension(&self) -> usize {
        self.basis.len() - self.dimension()
    }

    pub fn contains(&self, h: &TruncatedPoly) -> Result<bool> {
        Ok(self.echelon.contains(&h.truncate(self.level)?.to_sparse(&self.basis)))
    }

    pub fn basis_polys(&self) -> Vec<TruncatedPoly> {
        self.echelon
            .rows()
            .map(|r| TruncatedPoly::from_sparse(&self.basis, self.echelon.field(), self.level, r))
            .collect()
    }

    /// Equality with the span of `(J + M^a)/M^a`.
    pub fn equals_span_of(&self, j: &IdealPresentation) -> Result<bool> {
        let s = ideal_spans(j, self.level)?;
        Ok(s.echelon().same_span(&self.echelon))
    }
}

/// `I + M^v` presented at level `a` (generators of `I` cut at `a`, plus all monomials of degree `v`).
pub fn ideal_plus_power(i: &IdealPresentation, v: u32, a: u32) -> Result<IdealPresentation> {
    let mut gens: Vec<TruncatedPoly> = i.truncate(a)?.generators().to_vec();
    if v < a {
        for m in monomials_of_degree(i.nvars(), v) {
            gens.push(TruncatedPoly::monomial(i.nvars(), i.field(), a, m, Scalar::from_integer(1.into())));
        }
    }
    IdealPresentation::new(i.nvars(), i.field(), a, gens)
}

/// `(I + M^a : K)` modulo `M^a`, from the ideal generators of `K` (and `M^{level K}`).
pub fn colon(i: &IdealPresentation, k: &IdealPresentation, a: u32) -> Result<ColonSpace> {
    if i.nvars() != k.nvars() || i.field() != k.field() {
        return Err(Error::Mismatch("colon of ideals in different rings".into()));
    }
    if a < 2 {
        return Err(Error::Invalid(format!("colon level must be >= 2, got {a}")));
    }
    let field = i.field();
    let spans = ideal_spans(&i.truncate(a)?, a)?;
    let basis = MonomialBasis::new(i.nvars(), a);
    let ka = if k.level() >= a { k.truncate(a)? } else { ideal_plus_power(&k.with_level(a)?, k.level(), a)? };
    let kgens: Vec<TruncatedPoly> = if ka.is_span_closed() {
        ideal_spans(&ka, a)?
            .echelon()
            .rows()
            .map(|r| TruncatedPoly::from_sparse(&basis, field, a, r))
            .collect()
    } else {
        ka.generators().to_vec()
    };
    let d = basis.len();
    let images: Vec<SparseVec> = (0..d)
        .map(|j| {
            let m = basis.monomial(j);
            let mut img = SparseVec::new();
            for (s, g) in kgens.iter().enumerate() {
                let r = spans.echelon().reduce(&g.mul_monomial(m).to_sparse(&basis));
                img.extend(r.into_iter().map(|(c, x)| (s * d + c, x)));
            }
            img
        })
        .collect();
    let kvecs = kernel(field, &images)?;
    let echelon = Echelon::from_vectors(field, d, kvecs.iter())?;
    Ok(ColonSpace { level: a, basis, echelon })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorVerdict {
    pub generator: String,
    pub perturbation: String,
    pub order: u32,
    pub in_colon: bool,
    pub colon_dimension: usize,
    pub colon_codimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub is_family: bool,
    pub e0: u64,
    pub generators: Vec<GeneratorVerdict>,
}

/// `g_i ∈ (I + M^{e0+1} : I + M^{e0+1-v_i})` for every `i`.
pub fn is_family_first_order(d: &FirstOrderDeformation, e0: u64) -> Result<FamilyVerdict> {
    d.certify(e0)?;
    let a = e0 as u32 + 1;
    let ia = d.base.truncate(a)?;
    let mut out = Vec::new();
    for ((f, g), v) in d.base.generators().iter().zip(&d.perturbations).zip(d.orders()) {
        let k = ideal_plus_power(&d.base, a - v, a)?;
        let col = colon(&ia, &k, a)?;
        out.push(GeneratorVerdict {
            generator: f.to_string(),
            perturbation: g.to_string(),
            order: v,
            in_colon: col.contains(g)?,
            colon_dimension: col.dimension(),
            colon_codimension: col.codimension(),
        });
    }
    Ok(FamilyVerdict { is_family: out.iter().all(|v| v.in_colon), e0, generators: out })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub level: u32,
    pub flat: bool,
    /// `dim_k R[eps]/(J + M^n)`.
    pub dual_dimension: usize,
    /// `dim_k R/(I + M^n)`.
    pub fiber_dimension: usize,
}

/// Flat over `k[eps]` iff `dim_k R[eps]/(J+M^n) = 2 dim_k R/(I+M^n)`.
pub fn flatness_direct(d: &FirstOrderDeformation, n: u32) -> Result<FlatnessReport> {
    if n < 3 {
        return Err(Error::Invalid(format!("flatness check needs n >= 3, got {n}")));
    }
    let field = d.base.field();
    let basis = MonomialBasis::new(d.base.nvars(), n);
    let dim = basis.len();
    let fiber = ideal_spans(&d.base.truncate(n)?, n)?;
    let fiber_dimension = dim - fiber.echelon().rank();
    // real coordinates in [0, dim), eps coordinates in [dim, 2 dim)
    let mut ech = Echelon::new(field, 2 * dim);
    for (f, g) in d.base.generators().iter().zip(&d.perturbations) {
        let (f, g) = (f.truncate(n)?, g.truncate(n)?);
        for m in basis.monomials() {
            let fm = f.mul_monomial(m).to_sparse(&basis);
            let gm = g.mul_monomial(m).to_sparse(&basis);
            let mut row = fm.clone();
            row.extend(gm.into_iter().map(|(c, x)| (c + dim, x)));
            ech.insert(&row)?;
            let eps_row: SparseVec = fm.into_iter().map(|(c, x)| (c + dim, x)).collect();
            ech.insert(&eps_row)?;
        }
    }
    let dual_dimension = 2 * dim - ech.rank();
    Ok(FlatnessReport { level: n, flat: dual_dimension == 2 * fiber_dimension, dual_dimension, fiber_dimension })
}

/// For each `v`: `(I + M^{e0+1} : I + M^{e0+1-v}) = I + M^v` at level `e0+1`.
pub fn cm_colon_identity(i: &IdealPresentation, e0: u64, vlist: &[u32]) -> Result<Vec<(u32, bool)>> {
    let a = e0 as u32 + 1;
    let ia = i.truncate(a)?;
    vlist
        .iter()
        .map(|&v| {
            if v == 0 || v > a {
                return Err(Error::Invalid(format!("v = {v} outside 1..={a}")));
            }
            let col = colon(&ia, &ideal_plus_power(i, a - v, a)?, a)?;
            Ok((v, col.equals_span_of(&ideal_plus_power(i, v, a)?)?))
        })
        .collect()
}

fn determinant(m: &[Vec<DualPoly>]) -> Result<DualPoly> {
    let size = m.len();
    if size == 1 {
        return Ok(m[0][0].clone());
    }
    let proto = &m[0][0];
    let mut acc = DualPoly::zero(proto.re.nvars(), proto.re.field(), proto.re.level());
    for (r, row) in m.iter().enumerate() {
        if row[0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<DualPoly>> =
            m.iter().enumerate().filter(|(k, _)| *k != r).map(|(_, rw)| rw[1..].to_vec()).collect();
        let term = row[0].mul(&determinant(&minor)?)?;
        acc = if r % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

/// Signed maximal minors of an `a x (a-1)` matrix: minor `k` deletes row `k`, sign `(-1)^k`.
pub fn maximal_minors(matrix: &[Vec<DualPoly>]) -> Result<Vec<DualPoly>> {
    let a = matrix.len();
    if a < 2 || matrix.iter().any(|r| r.len() != a - 1) {
        return Err(Error::Invalid(format!("expected an a x (a-1) matrix with a >= 2, got {a} rows")));
    }
    for e in matrix.iter().flatten() {
        if e.re.order() == Some(0) || e.eps.order() == Some(0) {
            return Err(Error::Invalid(format!("entry {e} is not in the maximal ideal")));
        }
    }
    (0..a)
        .map(|k| {
            let sub: Vec<Vec<DualPoly>> = matrix.iter().enumerate().filter(|(r, _)| *r != k).map(|(_, r)| r.clone()).collect();
            let det = determinant(&sub)?;
            Ok(if k % 2 == 0 { det } else { det.neg() })
        })
        .collect()
}

/// Ideal of maximal minors; zero minors are dropped.
pub fn determinantal_ideal(matrix: &[Vec<TruncatedPoly>]) -> Result<IdealPresentation> {
    let first = matrix.first().and_then(|r| r.first()).ok_or_else(|| Error::Invalid("empty matrix".into()))?;
    let (nv, field, level) = (first.nvars(), first.field(), first.level());
    let duals: Vec<Vec<DualPoly>> = matrix.iter().map(|r| r.iter().cloned().map(DualPoly::real).collect()).collect();
    let minors = maximal_minors(&duals)?;
    IdealPresentation::new(nv, field, level, minors.into_iter().map(|d| d.re).collect())
}

/// Minors over the dual numbers as a first-order deformation of the real minors.
pub fn determinantal_deformation(matrix: &[Vec<DualPoly>]) -> Result<FirstOrderDeformation> {
    FirstOrderDeformation::from_duals(&maximal_minors(matrix)?)
}

/// Seeded perturbations of `base`: for each generator a few monomials of degree
/// in `[d, level)` with `d` drawn from `1..=max_low` and coefficients in `-2..=2`.
pub fn random_perturbations(base: &IdealPresentation, max_low: u32, count: usize, seed: u64) -> Result<Vec<FirstOrderDeformation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let level = base.level();
    let nv = base.nvars();
    let field = base.field();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut perts = Vec::new();
        for _ in base.generators() {
            let lo = rng.gen_range(1..=max_low.min(level - 1));
            let hi = (lo + 2).min(level);
            let support: Vec<_> = (lo..hi).flat_map(|d| monomials_of_degree(nv, d)).collect();
            let mut terms = Vec::new();
            for _ in 0..rng.gen_range(0..=3) {
                let m = support[rng.gen_range(0..support.len())].clone();
                terms.push((m, Scalar::from_integer(rng.gen_range(-2i64..=2).into())));
            }
            perts.push(TruncatedPoly::from_terms(nv, field, level, terms)?);
        }
        out.push(FirstOrderDeformation::new(base.clone(), perts)?);
    }
    Ok(out)
}

/// Hilbert data and initial-ideal generators for a fiber, used by the family checks.
pub(crate) fn fiber_invariants(i: &IdealPresentation, n: u32) -> Result<(HilbertData, Vec<String>)> {
    let h = hilbert_data(i, n)?;
    let init = initial_ideal(i, n)?;
    Ok((h, init.generators.iter().map(|g| g.to_string()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Q;

    fn ideal(g: &str, n: usize, level: u32) -> IdealPresentation {
        IdealPresentation::parse_list(g, n, Q, level).unwrap()
    }

    fn def(base: &[&str], g: &[&str], level: u32) -> FirstOrderDeformation {
        FirstOrderDeformation::parse(base, g, 2, Q, level).unwrap()
    }

    #[test]
    fn colon_of_cubic_by_maximal_ideal() {
        let c = colon(&ideal("x1^3", 2, 4), &ideal("x1, x2", 2, 4), 4).unwrap();
        assert_eq!(c.dimension(), 4);
        assert!(c.equals_span_of(&ideal_plus_power(&ideal("x1^3", 2, 4), 3, 4).unwrap()).unwrap());
    }

    #[test]
    fn colon_by_subideal_is_everything() {
        let i = ideal("x1^3, x1*x2^2", 2, 5);
        let c = colon(&i, &i, 5).unwrap();
        assert_eq!(c.codimension(), 0);
    }

    #[test]
    fn cubic_tangent_directions() {
        let not = is_family_first_order(&def(&["x1^3"], &["x1"], 5), 3).unwrap();
        assert!(!not.is_family);
        assert!(is_family_first_order(&def(&["x1^3"], &["x2^3"], 5), 3).unwrap().is_family);
        assert!(is_family_first_order(&def(&["x1^3"], &["0"], 5), 3).unwrap().is_family);
    }

    #[test]
    fn dual_dimension_count() {
        let r = flatness_direct(&def(&["x1^3"], &["x1"], 5), 4).unwrap();
        assert_eq!((r.flat, r.dual_dimension, r.fiber_dimension), (false, 14, 9));
        for n in 5..=8 {
            assert!(flatness_direct(&def(&["x1^3"], &["x1^4"], 9), n).unwrap().flat);
            assert!(flatness_direct(&def(&["x1^3"], &["0"], 9), n).unwrap().flat);
        }
    }

    #[test]
    fn certificate_required() {
        let d = def(&["x1^3"], &["x1"], 4);
        assert!(matches!(is_family_first_order(&d, 3), Err(Error::LevelTooLow { .. })));
    }

    #[test]
    fn plane_power_colon_identity() {
        for e0 in 2..=5u64 {
            let i = ideal(&format!("x1^{e0}"), 2, e0 as u32 + 2);
            assert_eq!(cm_colon_identity(&i, e0, &[e0 as u32]).unwrap(), vec![(e0 as u32, true)]);
        }
    }

    #[test]
    fn minors() {
        let p = |s: &str| TruncatedPoly::parse(s, 3, Q, 8).unwrap();
        let m = vec![vec![p("x3"), p("0")], vec![p("x1^4"), p("x3")], vec![p("0"), p("x2")]];
        let i = determinantal_ideal(&m).unwrap();
        assert_eq!(i.to_strings(), vec!["x1^4*x2", "-x2*x3", "x3^2"]);
        let m = vec![vec![p("x1"), p("0")], vec![p("0"), p("x2")], vec![p("0"), p("0")]];
        assert_eq!(determinantal_ideal(&m).unwrap().to_strings(), vec!["x1*x2"]);
    }

    #[test]
    fn eps_free_minors_match() {
        let p = |s: &str| DualPoly::parse(s, 3, Q, 8).unwrap();
        let m = vec![vec![p("x3"), p("0")], vec![p("x1^2"), p("x3")], vec![p("0"), p("x2")]];
        let d = determinantal_deformation(&m).unwrap();
        assert!(d.perturbations().iter().all(TruncatedPoly::is_zero));
        let m = vec![vec![p("x3 + eps*x1^2"), p("0")], vec![p("x1^2"), p("x3")], vec![p("0"), p("x2")]];
        let d = determinantal_deformation(&m).unwrap();
        assert_eq!(d.perturbations()[2].to_string(), "x1^2*x3");
    }

    #[test]
    fn seeded_perturbations_are_reproducible() {
        let b = ideal("x1^3", 2, 6);
        assert_eq!(random_perturbations(&b, 4, 5, 7).unwrap(), random_perturbations(&b, 4, 5, 7).unwrap());
    }
}
