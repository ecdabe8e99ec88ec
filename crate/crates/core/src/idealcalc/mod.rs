//! Spans of ideals in `R/M^n`, Hilbert-Samuel data, initial ideals and related counts.

mod hilbert;
mod initial;
mod intersection;

pub use hilbert::{hilbert_data, hilbert_from_values, HilbertData, HilbertStatus};
pub use initial::{initial_ideal, times_linear, min_generators, standard_basis_check, InitialIdealData, StandardBasisReport};
pub use intersection::{intersection_number, IntersectionNumber};

use crate::error::{Error, Result};
use crate::ringcore::linalg::{graded_slices, DegreeSlice, Echelon, SparseVec};
use crate::ringcore::{FieldSpec, MonomialBasis, TruncatedPoly};

/// Generators of an ideal `I` of `R = k[[x1..xN]]`, read modulo `M^level`.
/// The empty list stands for the ideal `M^level` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealPresentation {
    nvars: usize,
    field: FieldSpec,
    level: u32,
    generators: Vec<TruncatedPoly>,
    span_closed: bool,
}

impl IdealPresentation {
    /// Generators vanishing modulo `M^level` are dropped; units are rejected.
    pub fn new(nvars: usize, field: FieldSpec, level: u32, generators: Vec<TruncatedPoly>) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.nvars() != nvars || g.field() != field || g.level() != level {
                return Err(Error::Mismatch(format!(
                    "generator {g} (N={}, {}, level {}) in presentation (N={nvars}, {field}, level {level})",
                    g.nvars(),
                    g.field(),
                    g.level()
                )));
            }
            match g.order() {
                None => continue,
                Some(0) => return Err(Error::Invalid(format!("generator {g} is a unit; generators must lie in M"))),
                Some(_) => gens.push(g),
            }
        }
        Ok(IdealPresentation { nvars, field, level, generators: gens, span_closed: false })
    }

    /// Parses DSL generators at the given level.
    pub fn parse<S: AsRef<str>>(gens: &[S], nvars: usize, field: FieldSpec, level: u32) -> Result<Self> {
        let polys = gens
            .iter()
            .map(|s| TruncatedPoly::parse(s.as_ref(), nvars, field, level))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nvars, field, level, polys)
    }

    /// Parses a comma-separated generator list.
    pub fn parse_list(text: &str, nvars: usize, field: FieldSpec, level: u32) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::parse(&parts, nvars, field, level)
    }

    /// A presentation whose generators already span `(I+M^level)/M^level` as a vector space.
    pub fn from_span_basis(nvars: usize, field: FieldSpec, level: u32, basis: Vec<TruncatedPoly>) -> Result<Self> {
        let mut p = Self::new(nvars, field, level, basis)?;
        p.span_closed = true;
        Ok(p)
    }

    /// The presentation given by an echelon span over `MonomialBasis::new(nvars, level)`.
    pub fn from_echelon(nvars: usize, field: FieldSpec, level: u32, ech: &Echelon) -> Result<Self> {
        let basis = MonomialBasis::new(nvars, level);
        let gens = ech.rows().map(|r| TruncatedPoly::from_sparse(&basis, field, level, r)).collect();
        Self::from_span_basis(nvars, field, level, gens)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn generators(&self) -> &[TruncatedPoly] {
        &self.generators
    }

    pub fn is_span_closed(&self) -> bool {
        self.span_closed
    }

    /// `J + M^n1`, re-truncated generators.
    pub fn truncate(&self, n1: u32) -> Result<Self> {
        if n1 > self.level {
            return Err(Error::LevelTooLow { have: self.level, want: n1 });
        }
        let gens = self.generators.iter().map(|g| g.truncate(n1)).collect::<Result<Vec<_>>>()?;
        let mut p = Self::new(self.nvars, self.field, n1, gens)?;
        p.span_closed = self.span_closed;
        Ok(p)
    }

    /// Same generators read at another level (sound for exactly known polynomials).
    pub fn with_level(&self, level: u32) -> Result<Self> {
        let gens = self.generators.iter().map(|g| g.with_level(level)).collect();
        Self::new(self.nvars, self.field, level, gens)
    }

    /// Sum of two ideals.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars || self.field != other.field || self.level != other.level {
            return Err(Error::Mismatch("sum of ideals over different rings".into()));
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::new(self.nvars, self.field, self.level, gens)
    }

    /// Orders of the generators.
    pub fn orders(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.order().expect("nonzero")).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }
}

impl std::fmt::Display for IdealPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) + M^{}", self.to_strings().join(", "), self.level)
    }
}

/// Echelonized span of `(I+M^n)/M^n` over the degree-graded monomial basis.
///
/// Row pivots are lowest-degree monomials, so the rows with pivot in degree `d`
/// carry the initial forms spanning `I*_d`, and `dim R/(I+M^{t+1})` is read off by
/// counting pivots of degree `<= t`.
#[derive(Debug, Clone)]
pub struct DegreeSpans {
    level: u32,
    basis: MonomialBasis,
    echelon: Echelon,
}

impl DegreeSpans {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn field(&self) -> FieldSpec {
        self.echelon.field()
    }

    /// `H^1(t) = dim R/(I+M^{t+1})` for `t < level`.
    pub fn colength_upto(&self, t: u32) -> u64 {
        assert!(t < self.level);
        let below = self.basis.count_below(t + 1);
        (below - self.echelon.pivots().take_while(|p| *p < below).count()) as u64
    }

    /// `dim R/(I+M^level)`.
    pub fn colength(&self) -> u64 {
        (self.basis.len() - self.echelon.rank()) as u64
    }

    /// Dimension of `(I+M^{d+1})/M^{d+1}`.
    pub fn dimension_upto(&self, d: u32) -> u64 {
        self.basis.count_below(d + 1) as u64 - self.colength_upto(d)
    }

    /// Basis of `I*_d` in global column coordinates (degree-`d` columns only).
    pub fn initial_slice(&self, d: u32) -> Vec<SparseVec> {
        let range = self.basis.degree_range(d);
        self.echelon
            .rows()
            .filter(|r| range.contains(&r[0].0))
            .map(|r| r.iter().filter(|(c, _)| range.contains(c)).cloned().collect())
            .collect()
    }

    pub fn initial_dim(&self, d: u32) -> usize {
        let range = self.basis.degree_range(d);
        self.echelon.pivots().filter(|p| range.contains(p)).count()
    }

    /// Per-degree slices of `I*` in local coordinates.
    pub fn slices(&self) -> Vec<DegreeSlice> {
        graded_slices(&self.echelon, &self.basis)
    }

    pub fn contains(&self, f: &TruncatedPoly) -> bool {
        let v = f.truncate(self.level.min(f.level())).expect("lower level").to_sparse(&self.basis);
        self.echelon.contains(&v)
    }

    /// Spans of `I+M^n1` for `n1 <= level`, by projection.
    pub fn truncate(&self, n1: u32) -> DegreeSpans {
        assert!(n1 <= self.level);
        let basis = MonomialBasis::new(self.basis.nvars(), n1);
        let echelon = self.echelon.project_prefix(basis.len());
        DegreeSpans { level: n1, basis, echelon }
    }

    /// Span of `M * (this span)`, i.e. of `(M I + M^n)/M^n`.
    pub fn times_maximal(&self) -> Echelon {
        let nv = self.basis.nvars();
        let mut out = Echelon::new(self.field(), self.basis.len());
        for row in self.echelon.rows() {
            for i in 0..nv {
                out.insert(&shift_by_var(&self.basis, row, i)).expect("in range");
            }
        }
        out
    }

    /// The span as a presentation.
    pub fn to_presentation(&self) -> Result<IdealPresentation> {
        IdealPresentation::from_echelon(self.basis.nvars(), self.field(), self.level, &self.echelon)
    }
}

/// Multiplies a coordinate vector by `x_{i+1}`, dropping degrees `>= level`.
pub fn shift_by_var(basis: &MonomialBasis, v: &SparseVec, i: usize) -> SparseVec {
    let nv = basis.nvars();
    let var = crate::ringcore::Monomial::var(nv, i);
    let mut out: SparseVec = v
        .iter()
        .filter_map(|(c, x)| basis.index_of(&basis.monomial(*c).mul(&var)).map(|j| (j, x.clone())))
        .collect();
    out.sort_by_key(|(c, _)| *c);
    out
}

/// Computes the echelon span of `(I+M^n)/M^n` from `{ x^a f_i : |a| + ord(f_i) < n }`.
pub fn ideal_spans(ideal: &IdealPresentation, n: u32) -> Result<DegreeSpans> {
    if n > ideal.level {
        return Err(Error::LevelTooLow { have: ideal.level, want: n });
    }
    let basis = MonomialBasis::new(ideal.nvars, n);
    let mut echelon = Echelon::new(ideal.field, basis.len());
    let gens: Vec<TruncatedPoly> = ideal
        .generators
        .iter()
        .map(|g| g.truncate(n))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|g| !g.is_zero())
        .collect();
    if ideal.span_closed {
        for g in &gens {
            echelon.insert(&g.to_sparse(&basis))?;
        }
    } else {
        // Multiply generator vectors by one variable at a time, degree by degree,
        // keeping the frontier of the previous degree.
        for g in &gens {
            let o = g.order().expect("nonzero");
            let mut frontier: Vec<(crate::ringcore::Monomial, SparseVec)> =
                vec![(crate::ringcore::Monomial::one(ideal.nvars), g.to_sparse(&basis))];
            echelon.insert(&frontier[0].1)?;
            for _ in o + 1..n {
                let mut next = Vec::new();
                for (m, v) in &frontier {
                    // generate each multiplier once: only raise variables at or after the last one used
                    let last = m.exps().iter().rposition(|e| *e > 0).unwrap_or(0);
                    for i in last..ideal.nvars {
                        let w = shift_by_var(&basis, v, i);
                        let mut m2 = m.exps().to_vec();
                        m2[i] += 1;
                        echelon.insert(&w)?;
                        next.push((crate::ringcore::Monomial::new(m2), w));
                    }
                }
                frontier = next;
            }
        }
    }
    Ok(DegreeSpans { level: n, basis, echelon })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(gens: &[&str], n: usize, level: u32) -> IdealPresentation {
        IdealPresentation::parse(gens, n, FieldSpec::Q, level).unwrap()
    }

    fn h1(gens: &[&str], n: usize, level: u32) -> Vec<u64> {
        let s = ideal_spans(&ideal(gens, n, level), level).unwrap();
        (0..level).map(|t| s.colength_upto(t)).collect()
    }

    #[test]
    fn smooth_curve_codimensions() {
        assert_eq!(h1(&["x2"], 2, 4), vec![1, 2, 3, 4]);
    }

    #[test]
    fn plane_cubic() {
        assert_eq!(h1(&["x1^3"], 2, 6), vec![1, 3, 6, 9, 12, 15]);
    }

    #[test]
    fn unit_generator_rejected() {
        assert!(IdealPresentation::parse(&["1 + x1"], 2, FieldSpec::Q, 4).is_err());
    }

    #[test]
    fn level_too_low() {
        let i = ideal(&["x1"], 2, 3);
        assert!(matches!(ideal_spans(&i, 5), Err(Error::LevelTooLow { .. })));
    }

    #[test]
    fn empty_presentation_is_power_of_maximal() {
        let i = IdealPresentation::new(2, FieldSpec::Q, 3, vec![]).unwrap();
        let s = ideal_spans(&i, 3).unwrap();
        assert_eq!(s.colength(), 6);
    }

    #[test]
    fn truncation_drops_vanishing_generators() {
        let i = ideal(&["x1^3 + x2^5", "x2^6"], 2, 7);
        let t = i.truncate(4).unwrap();
        assert_eq!(t.to_strings(), vec!["x1^3".to_string()]);
        assert_eq!(t.truncate(3).unwrap(), i.truncate(3).unwrap());
    }
}
