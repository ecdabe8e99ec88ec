//! Parametrized branches `t -> (x1(t), .., xN(t))`: numerical semigroups, the
//! delta invariant, and the ideal `I + M^n` recovered as the kernel of substitution.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::idealcalc::{hilbert_data, HilbertData, IdealPresentation};
use crate::ringcore::dsl::{self, parse_terms};
use crate::ringcore::linalg::{kernel, sparse_add_scaled, Echelon, SparseVec};
use crate::ringcore::{FieldSpec, Monomial, MonomialBasis, Scalar, TruncatedPoly};

mod semigroup;

pub use semigroup::{milnor, semigroup, SemigroupData};

/// One branch: `N` power series in `t` with zero constant term, known modulo `t^precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    components: Vec<TruncatedPoly>,
}

impl Branch {
    pub fn new(components: Vec<TruncatedPoly>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::Invalid("branch without components".into()))?;
        let (field, level) = (first.field(), first.level());
        for c in &components {
            if c.nvars() != 1 || c.field() != field || c.level() != level {
                return Err(Error::Mismatch("branch components must be series in t over one field and precision".into()));
            }
            if c.order() == Some(0) {
                return Err(Error::Invalid(format!("component {} has a nonzero constant term", Self::show(c))));
            }
        }
        if components.iter().all(TruncatedPoly::is_zero) {
            return Err(Error::Invalid("all components vanish".into()));
        }
        Ok(Branch { components })
    }

    /// Components in the one-variable DSL with variable `t`.
    pub fn parse<S: AsRef<str>>(components: &[S], precision: u32, field: FieldSpec) -> Result<Self> {
        let names = ["t"];
        let resolve = dsl::named_vars(&names);
        let comps = components
            .iter()
            .map(|s| TruncatedPoly::parse_with(s.as_ref(), 1, field, precision, &resolve))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    /// The monomial branch `(t^a1, .., t^aN)`.
    pub fn monomial(exponents: &[u32], precision: u32, field: FieldSpec) -> Result<Self> {
        let comps = exponents
            .iter()
            .map(|&a| TruncatedPoly::monomial(1, field, precision, Monomial::new(vec![a]), Scalar::from_integer(1.into())))
            .collect();
        Self::new(comps)
    }

    pub fn components(&self) -> &[TruncatedPoly] {
        &self.components
    }

    pub fn ambient(&self) -> usize {
        self.components.len()
    }

    pub fn precision(&self) -> u32 {
        self.components[0].level()
    }

    pub fn field(&self) -> FieldSpec {
        self.components[0].field()
    }

    /// Largest `t`-order among nonzero components.
    pub fn max_order(&self) -> u32 {
        self.components.iter().filter_map(TruncatedPoly::order).max().unwrap_or(0)
    }

    /// Smallest `t`-order among nonzero components (the branch multiplicity).
    pub fn multiplicity(&self) -> u32 {
        self.components.iter().filter_map(TruncatedPoly::order).min().unwrap_or(0)
    }

    /// Same series read at another precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        Branch { components: self.components.iter().map(|c| c.with_level(precision)).collect() }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.components.iter().map(Self::show).collect()
    }

    fn show(c: &TruncatedPoly) -> String {
        c.format_with(&|_| "t".to_string())
    }
}

/// JSON form `{"branches": [["t^2", "t^3"]], "precision": 18}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub branches: Vec<Vec<String>>,
    pub precision: u32,
}

/// A nonempty list of branches in a common ambient space and precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parametrization {
    branches: Vec<Branch>,
}

impl Parametrization {
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        let first = branches.first().ok_or_else(|| Error::Invalid("parametrization without branches".into()))?;
        for b in &branches {
            if b.ambient() != first.ambient() || b.field() != first.field() || b.precision() != first.precision() {
                return Err(Error::Mismatch("branches differ in ambient dimension, field or precision".into()));
            }
        }
        Ok(Parametrization { branches })
    }

    pub fn single(branch: Branch) -> Self {
        Parametrization { branches: vec![branch] }
    }

    pub fn from_spec(spec: &ParamSpec, field: FieldSpec) -> Result<Self> {
        let bs = spec
            .branches
            .iter()
            .map(|b| Branch::parse(b, spec.precision, field))
            .collect::<Result<Vec<_>>>()?;
        Self::new(bs)
    }

    pub fn to_spec(&self) -> ParamSpec {
        ParamSpec { branches: self.branches.iter().map(Branch::to_strings).collect(), precision: self.precision() }
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Number of branches `r`.
    pub fn r(&self) -> usize {
        self.branches.len()
    }

    pub fn ambient(&self) -> usize {
        self.branches[0].ambient()
    }

    pub fn field(&self) -> FieldSpec {
        self.branches[0].field()
    }

    pub fn precision(&self) -> u32 {
        self.branches[0].precision()
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        Parametrization { branches: self.branches.iter().map(|b| b.with_precision(precision)).collect() }
    }

    /// Precision demanded at level `n`: `n` times the largest component order.
    pub fn required_precision(&self, n: u32) -> u32 {
        n * self.branches.iter().map(Branch::max_order).max().unwrap_or(0)
    }
}

/// Coordinates of `prod_b k[t]/(t^m)`: branch `b`, power `k` sits at `b*m + k`.
struct Target {
    field: FieldSpec,
    m: usize,
    /// Per variable, the concatenated image `phi(x_i)` split by branch.
    vars: Vec<Vec<SparseVec>>,
    nbranches: usize,
}

impl Target {
    fn new(p: &Parametrization) -> Self {
        let m = p.precision() as usize;
        let vars = (0..p.ambient())
            .map(|i| {
                p.branches
                    .iter()
                    .map(|b| b.components[i].terms().iter().map(|(mono, c)| (mono.exps()[0] as usize, c.clone())).collect())
                    .collect()
            })
            .collect();
        Target { field: p.field(), m, vars, nbranches: p.r() }
    }

    fn dim(&self) -> usize {
        self.m * self.nbranches
    }

    fn one(&self) -> SparseVec {
        (0..self.nbranches).map(|b| (b * self.m, Scalar::from_integer(1.into()))).collect()
    }

    /// `v * phi(x_i)` truncated per branch.
    fn times_var(&self, v: &SparseVec, i: usize) -> SparseVec {
        let mut acc: std::collections::BTreeMap<usize, Scalar> = std::collections::BTreeMap::new();
        for (idx, a) in v {
            let (b, k) = (idx / self.m, idx % self.m);
            for (j, c) in &self.vars[i][b] {
                if k + j < self.m {
                    let e = acc.entry(b * self.m + k + j).or_insert_with(Scalar::zero);
                    *e = self.field.add(e, &self.field.mul(a, c));
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Images of every monomial of `basis`, built by one multiplication each.
    fn monomial_images(&self, basis: &MonomialBasis) -> Vec<SparseVec> {
        let mut out: Vec<SparseVec> = Vec::with_capacity(basis.len());
        for idx in 0..basis.len() {
            let mono = basis.monomial(idx);
            let Some(i) = mono.exps().iter().position(|&e| e > 0) else {
                out.push(self.one());
                continue;
            };
            let mut prev = mono.exps().to_vec();
            prev[i] -= 1;
            let p = basis.index_of(&Monomial::new(prev)).expect("prefix-closed basis");
            let img = self.times_var(&out[p], i);
            out.push(img);
        }
        out
    }

    /// Smallest subspace containing `seeds` and stable under every `phi(x_i)`.
    fn closure(&self, seeds: impl IntoIterator<Item = SparseVec>) -> Result<Echelon> {
        let mut ech = Echelon::new(self.field, self.dim());
        let mut frontier = Vec::new();
        for v in seeds {
            if ech.insert(&v)?.is_some() {
                frontier.push(v);
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                for i in 0..self.vars.len() {
                    let w = self.times_var(v, i);
                    if !w.is_empty() && ech.insert(&w)?.is_some() {
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        Ok(ech)
    }
}

/// `(I + M^n)/M^n` for the curve parametrized by `p`, with its echelon kernel basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamIdeal {
    pub ideal: IdealPresentation,
    pub kernel: Vec<TruncatedPoly>,
    pub precision: u32,
}

/// Kernel of `R/M^n -> prod k[t]/(t^m)` modulo the image of `M^n`.
pub fn ideal_from_param(p: &Parametrization, n: u32) -> Result<ParamIdeal> {
    if n == 0 {
        return Err(Error::Invalid("level must be positive".into()));
    }
    let required = p.required_precision(n);
    if p.precision() < required {
        return Err(Error::InsufficientPrecision { required, have: p.precision() });
    }
    let nv = p.ambient();
    let field = p.field();
    let target = Target::new(p);
    let big = MonomialBasis::new(nv, n + 1);
    let images = target.monomial_images(&big);
    let low = big.count_below(n);
    let image_mn = target.closure(images[low..].iter().cloned())?;

    let reduced: Vec<SparseVec> = images[..low].iter().map(|v| image_mn.reduce(v)).collect();
    let kvecs = kernel(field, &reduced)?;

    let basis = MonomialBasis::new(nv, n);
    let mut gens = Vec::with_capacity(kvecs.len());
    for k in &kvecs {
        let mut img = SparseVec::new();
        for (j, c) in k {
            img = sparse_add_scaled(&field, &img, c, &images[*j]);
        }
        if !image_mn.contains(&img) {
            return Err(Error::Verification("kernel element does not vanish on the branches".into()));
        }
        gens.push(TruncatedPoly::from_sparse(&basis, field, n, k));
    }
    let ideal = IdealPresentation::from_span_basis(nv, field, n, gens.clone())?;
    Ok(ParamIdeal { ideal, kernel: gens, precision: p.precision() })
}

/// Hilbert data of the parametrized curve through the kernel ideal.
pub fn hilbert_from_param(p: &Parametrization, n: u32) -> Result<HilbertData> {
    hilbert_data(&ideal_from_param(p, n)?.ideal, n)
}

/// Outcome of the linear-algebra delta computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DeltaOutcome {
    Computed { delta: u64 },
    /// The conductor was not seen below the available precision.
    Unsupported { precision: u32 },
}

/// `delta = dim prod k[[t]] / image(R)`, found when the image contains every
/// `t^k` on each branch `b` for `m - e_b <= k < m` (which forces the tail).
pub fn delta_param(p: &Parametrization) -> Result<DeltaOutcome> {
    let target = Target::new(p);
    let seeds = std::iter::once(target.one());
    let image = target.closure(seeds)?;
    let m = target.m;
    for (b, br) in p.branches.iter().enumerate() {
        let e = br.multiplicity() as usize;
        if e == 0 || e > m {
            return Ok(DeltaOutcome::Unsupported { precision: p.precision() });
        }
        for k in (m - e)..m {
            if !image.is_pivot(b * m + k) || image.row(b * m + k).is_none_or(|r| r.len() != 1) {
                return Ok(DeltaOutcome::Unsupported { precision: p.precision() });
            }
        }
    }
    Ok(DeltaOutcome::Computed { delta: (target.dim() - image.rank()) as u64 })
}

/// One fiber of a family: a parametrization or an ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fiber {
    Param(Parametrization),
    Ideal(IdealPresentation),
}

impl Fiber {
    pub fn hilbert(&self, n: u32) -> Result<HilbertData> {
        match self {
            Fiber::Param(p) => hilbert_from_param(p, n),
            Fiber::Ideal(i) => hilbert_data(i, n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberMismatch {
    pub fiber: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberComparison {
    pub level: u32,
    pub table: Vec<Vec<u64>>,
    pub hilbert: Vec<HilbertData>,
    pub hilbert_function_constant: bool,
    pub first_mismatch: Option<FiberMismatch>,
    /// `None` when some fiber has not stabilized.
    pub polynomials_agree: Option<bool>,
    pub verdict: String,
}

/// Compares full Hilbert functions of fibers against the first one.
pub fn normally_flat_fiber_compare(fibers: &[Fiber], n: u32) -> Result<FiberComparison> {
    if fibers.is_empty() {
        return Err(Error::Invalid("no fibers to compare".into()));
    }
    let hilbert = fibers.iter().map(|f| f.hilbert(n)).collect::<Result<Vec<_>>>()?;
    let table: Vec<Vec<u64>> = hilbert.iter().map(|h| h.values.clone()).collect();
    let first_mismatch = table.iter().enumerate().skip(1).find_map(|(k, row)| {
        row.iter().zip(&table[0]).position(|(a, b)| a != b).map(|t| FiberMismatch { fiber: k, t })
    });
    let polynomials_agree = if hilbert.iter().all(HilbertData::is_stable) {
        Some(hilbert.iter().all(|h| (h.e0, h.e1) == (hilbert[0].e0, hilbert[0].e1)))
    } else {
        None
    };
    let verdict = match first_mismatch {
        None => "hilbert_function_constant".to_string(),
        Some(FiberMismatch { fiber, t }) => format!("mismatch at fiber {fiber}, t = {t}"),
    };
    Ok(FiberComparison {
        level: n,
        table,
        hilbert,
        hilbert_function_constant: first_mismatch.is_none(),
        first_mismatch,
        polynomials_agree,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rigidity {
    Rigid,
    Unknown,
}

/// `Rigid` when `e0 <= 5` or `e1` is one of `e0-1, e0, e0(e0-1)/2 - 1, e0(e0-1)/2`.
pub fn is_rigid_known(e0: u64, e1: i64) -> Result<Rigidity> {
    let admissible = (1..=e0).any(|b| crate::trunctower::admissible(b, e0, e1).unwrap_or(false));
    if !admissible {
        return Err(Error::Inadmissible { e0, e1 });
    }
    let e = e0 as i64;
    let top = e * (e - 1) / 2;
    if e0 <= 5 || [e - 1, e, top - 1, top].contains(&e1) {
        Ok(Rigidity::Rigid)
    } else {
        Ok(Rigidity::Unknown)
    }
}

/// Parses series in `t` whose coefficients may involve a parameter `u`, then sets `u = value`.
pub fn parse_with_parameter(text: &str, vars: &[&str], param: &str, value: &Scalar, field: FieldSpec, level: u32) -> Result<TruncatedPoly> {
    let mut names: Vec<&str> = vars.to_vec();
    names.push(param);
    let resolve = dsl::named_vars(&names);
    let nv = vars.len();
    let raw = parse_terms(text, nv + 1, &resolve)?;
    let value = field.normalize(value)?;
    let terms = raw.into_iter().map(|(c, mut e)| {
        let k = e.pop().unwrap_or(0);
        let c = field.mul(&field.normalize(&c).unwrap_or_else(|_| Scalar::zero()), &field.pow(&value, k));
        (Monomial::new(e), c)
    });
    TruncatedPoly::from_terms(nv, field, level, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    #[test]
    fn cusp_kernel() {
        let p = Parametrization::single(Branch::monomial(&[2, 3], 18, q()).unwrap());
        let k = ideal_from_param(&p, 6).unwrap();
        let expect = IdealPresentation::parse_list("x1^3 - x2^2", 2, q(), 6).unwrap();
        let a = crate::idealcalc::ideal_spans(&k.ideal, 6).unwrap();
        let b = crate::idealcalc::ideal_spans(&expect, 6).unwrap();
        assert!(a.echelon().same_span(b.echelon()));
        let f = TruncatedPoly::parse("x1^3 - x2^2", 2, q(), 6).unwrap();
        assert!(a.contains(&f));
    }

    #[test]
    fn precision_rule() {
        let p = Parametrization::single(Branch::monomial(&[2, 3], 17, q()).unwrap());
        assert_eq!(
            ideal_from_param(&p, 6).unwrap_err(),
            Error::InsufficientPrecision { required: 18, have: 17 }
        );
    }

    #[test]
    fn coordinate_line() {
        let p = Parametrization::single(Branch::parse(&["t", "0"], 4, q()).unwrap());
        let k = ideal_from_param(&p, 4).unwrap();
        let expect = IdealPresentation::parse_list("x2", 2, q(), 4).unwrap();
        let a = crate::idealcalc::ideal_spans(&k.ideal, 4).unwrap();
        let b = crate::idealcalc::ideal_spans(&expect, 4).unwrap();
        assert!(a.echelon().same_span(b.echelon()));
        let h = hilbert_from_param(&p, 4).unwrap();
        assert_eq!(h.values, vec![1, 2, 3, 4]);
        assert_eq!((h.e0, h.e1), (Some(1), Some(0)));
    }

    #[test]
    fn cusp_hilbert() {
        let p = Parametrization::single(Branch::parse(&["t^2", "t^3"], 24, q()).unwrap());
        let h = hilbert_from_param(&p, 8).unwrap();
        assert_eq!(h.values, vec![1, 3, 5, 7, 9, 11, 13, 15]);
        assert_eq!((h.e0, h.e1), (Some(2), Some(1)));
    }

    #[test]
    fn space_monomial_multiplicity() {
        let p = Parametrization::single(Branch::monomial(&[6, 7, 10, 15], 75, q()).unwrap());
        let h = hilbert_from_param(&p, 5).unwrap();
        assert_eq!(h.graded.last(), Some(&6));
    }

    #[test]
    fn delta_by_linear_algebra() {
        let p = Parametrization::single(Branch::monomial(&[6, 7, 10, 15], 40, q()).unwrap());
        assert_eq!(delta_param(&p).unwrap(), DeltaOutcome::Computed { delta: 8 });
        let short = p.with_precision(8);
        assert_eq!(delta_param(&short).unwrap(), DeltaOutcome::Unsupported { precision: 8 });
        // node: two smooth branches meeting transversally
        let node = Parametrization::new(vec![
            Branch::parse(&["t", "0"], 10, q()).unwrap(),
            Branch::parse(&["0", "t"], 10, q()).unwrap(),
        ])
        .unwrap();
        assert_eq!(delta_param(&node).unwrap(), DeltaOutcome::Computed { delta: 1 });
    }

    #[test]
    fn rigidity() {
        assert_eq!(is_rigid_known(5, 10).unwrap(), Rigidity::Rigid);
        assert_eq!(is_rigid_known(7, 7).unwrap(), Rigidity::Rigid);
        assert_eq!(is_rigid_known(7, 12).unwrap(), Rigidity::Unknown);
        assert!(matches!(is_rigid_known(3, 9), Err(Error::Inadmissible { .. })));
    }

    #[test]
    fn parameter_substitution() {
        let names = ["t"];
        let f = parse_with_parameter("t^9 - u*t^9 + t^10", &names, "u", &Scalar::from_integer(1.into()), q(), 20).unwrap();
        assert_eq!(f.format_with(&|_| "t".into()), "t^10");
    }

    #[test]
    fn single_fiber_is_constant() {
        let p = Parametrization::single(Branch::monomial(&[2, 3], 18, q()).unwrap());
        let r = normally_flat_fiber_compare(&[Fiber::Param(p)], 6).unwrap();
        assert!(r.hilbert_function_constant);
        assert_eq!(r.polynomials_agree, Some(true));
    }
}
