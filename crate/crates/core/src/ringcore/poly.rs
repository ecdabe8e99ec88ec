use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::dsl::{self, parse_terms};
use super::field::{format_scalar, is_negative, FieldSpec, Scalar};
use super::linalg::SparseVec;
use super::monomial::{Monomial, MonomialBasis};
use crate::error::{Error, Result};

/// Polynomial in `nvars` variables over an exact field, a representative modulo `M^level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedPoly {
    nvars: usize,
    field: FieldSpec,
    level: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl TruncatedPoly {
    pub fn zero(nvars: usize, field: FieldSpec, level: u32) -> Self {
        TruncatedPoly { nvars, field, level, terms: BTreeMap::new() }
    }

    /// Builds from arbitrary terms: coefficients normalized, duplicates summed,
    /// zero coefficients and terms of degree >= level dropped.
    pub fn from_terms<I>(nvars: usize, field: FieldSpec, level: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = Self::zero(nvars, field, level);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::Mismatch(format!("monomial with {} variables in ambient {nvars}", m.nvars())));
            }
            if m.degree() >= level {
                continue;
            }
            let c = field.normalize(&c)?;
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub fn monomial(nvars: usize, field: FieldSpec, level: u32, m: Monomial, c: Scalar) -> Self {
        Self::from_terms(nvars, field, level, [(m, c)]).expect("well-formed monomial")
    }

    pub fn constant(nvars: usize, field: FieldSpec, level: u32, c: i64) -> Self {
        Self::monomial(nvars, field, level, Monomial::one(nvars), field.from_i64(c))
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, field: FieldSpec, level: u32, i: usize) -> Self {
        Self::monomial(nvars, field, level, Monomial::var(nvars, i), Scalar::one())
    }

    pub fn parse(text: &str, nvars: usize, field: FieldSpec, level: u32) -> Result<Self> {
        let resolve = dsl::indexed_vars(nvars);
        Self::parse_with(text, nvars, field, level, &resolve)
    }

    pub fn parse_with(
        text: &str,
        nvars: usize,
        field: FieldSpec,
        level: u32,
        resolve: &dsl::Resolver<'_>,
    ) -> Result<Self> {
        let raw = parse_terms(text, nvars, resolve)?;
        Self::from_terms(nvars, field, level, raw.into_iter().map(|(c, e)| (Monomial::new(e), c)))
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let field = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
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

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Lowest degree present, `None` for the zero value.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Highest degree present.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        TruncatedPoly { nvars: self.nvars, field: self.field, level: self.level, terms }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.order() == self.max_degree()
    }

    /// Homogeneous component of minimal degree.
    pub fn initial_form(&self) -> Result<Self> {
        match self.order() {
            Some(d) => Ok(self.homogeneous_part(d)),
            None => Err(Error::OrderUndetermined { level: self.level }),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Mismatch(format!("ambient {} vs {}", self.nvars, other.nvars)));
        }
        if self.field != other.field {
            return Err(Error::Mismatch(format!("field {} vs {}", self.field, other.field)));
        }
        if self.level != other.level {
            return Err(Error::Mismatch(format!("level {} vs {}", self.level, other.level)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect();
        TruncatedPoly { terms, ..self.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let f = self.field;
        let c = f.normalize(c).expect("scalar valid in field");
        if c.is_zero() {
            return Self::zero(self.nvars, f, self.level);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), f.mul(v, &c))).collect();
        TruncatedPoly { terms, ..self.clone() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(self.nvars, self.field, self.level);
        for (k, c) in &self.terms {
            let p = k.mul(m);
            if p.degree() < self.level {
                out.terms.insert(p, c.clone());
            }
        }
        out
    }

    /// Product with all terms of degree >= level removed.
    pub fn mul_trunc(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let f = self.field;
        let mut out = Self::zero(self.nvars, f, self.level);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if da + mb.degree() >= self.level {
                    // terms of `other` are sorted by degree, later ones are no smaller
                    break;
                }
                out.add_term(ma.mul(mb), &f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow_trunc(&self, e: u32) -> Result<Self> {
        let mut acc = Self::constant(self.nvars, self.field, self.level, 1);
        for _ in 0..e {
            acc = acc.mul_trunc(self)?;
        }
        Ok(acc)
    }

    /// Re-truncates to a lower (or equal) level. Raising the level is refused.
    pub fn truncate(&self, level: u32) -> Result<Self> {
        if level > self.level {
            return Err(Error::LevelTooLow { have: self.level, want: level });
        }
        let terms = self.terms.iter().filter(|(m, _)| m.degree() < level).map(|(m, c)| (m.clone(), c.clone())).collect();
        Ok(TruncatedPoly { nvars: self.nvars, field: self.field, level, terms })
    }

    /// Reinterprets the stored terms at another level. Raising the level is only sound
    /// when the value is known exactly (e.g. a polynomial read from input).
    pub fn with_level(&self, level: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() < level).map(|(m, c)| (m.clone(), c.clone())).collect();
        TruncatedPoly { nvars: self.nvars, field: self.field, level, terms }
    }

    /// Reinterprets over another field, normalizing coefficients.
    pub fn to_field(&self, field: FieldSpec) -> Result<Self> {
        Self::from_terms(self.nvars, field, self.level, self.terms.clone())
    }

    /// Evaluates `x_i -> images[i]` with truncated arithmetic in the images' ring.
    pub fn substitute(&self, images: &[TruncatedPoly]) -> Result<TruncatedPoly> {
        if images.len() != self.nvars {
            return Err(Error::Mismatch(format!("{} images for {} variables", images.len(), self.nvars)));
        }
        let first = images.first().ok_or_else(|| Error::Invalid("no variables".into()))?;
        let (n, f, lvl) = (first.nvars, first.field, first.level);
        let mut powers: Vec<Vec<TruncatedPoly>> = images.iter().map(|g| vec![TruncatedPoly::constant(n, f, lvl, 1), g.clone()]).collect();
        let mut out = TruncatedPoly::zero(n, f, lvl);
        for (m, c) in &self.terms {
            let mut acc = TruncatedPoly::constant(n, f, lvl, 1).scale(c);
            for (i, &e) in m.exps().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_trunc(&images[i])?;
                    powers[i].push(next);
                }
                acc = acc.mul_trunc(&powers[i][e as usize])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Coordinates in `basis` (which must cover this level's monomials).
    pub fn to_sparse(&self, basis: &MonomialBasis) -> SparseVec {
        let mut v: SparseVec = self
            .terms
            .iter()
            .filter_map(|(m, c)| basis.index_of(m).map(|i| (i, c.clone())))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    pub fn from_sparse(basis: &MonomialBasis, field: FieldSpec, level: u32, v: &SparseVec) -> Self {
        let terms = v
            .iter()
            .filter(|(i, c)| !c.is_zero() && basis.degree_of(*i) < level)
            .map(|(i, c)| (basis.monomial(*i).clone(), c.clone()))
            .collect();
        TruncatedPoly { nvars: basis.nvars(), field, level, terms }
    }

    /// DSL rendering with a custom variable naming.
    pub fn format_with(&self, var: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.format_with(var);
            if m.degree() == 0 {
                s.push_str(&format_scalar(&mag));
            } else if mag.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format_scalar(&mag));
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }

    /// Absolute value of the largest numerator (debug aid for coefficient growth).
    pub fn height(&self) -> num_bigint::BigInt {
        self.terms.values().map(|c| c.numer().abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&|i| format!("x{}", i + 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize, level: u32) -> TruncatedPoly {
        TruncatedPoly::parse(s, n, FieldSpec::Q, level).unwrap()
    }

    #[test]
    fn parse_two_terms() {
        let f = p("x1^3 + 2*x1*x2", 2, 5);
        assert_eq!(f.terms().len(), 2);
        assert_eq!(f.to_string(), "x1^3 + 2*x1*x2");
    }

    #[test]
    fn cancellation_gives_empty() {
        assert!(p("x1 - x1", 2, 5).is_zero());
        assert_eq!(p("x1 - x1", 2, 5).to_string(), "0");
    }

    #[test]
    fn out_of_range_variable() {
        let e = TruncatedPoly::parse("x3^2", 2, FieldSpec::Q, 4).unwrap_err();
        assert_eq!(e.to_string(), "variable index out of range: x3 with ambient dimension 2");
    }

    #[test]
    fn high_degree_terms_dropped() {
        assert_eq!(p("x1^5 + x2", 2, 5).to_string(), "x2");
    }

    #[test]
    fn mul_trunc_examples() {
        let a = p("x1 + x2", 2, 2);
        assert!(a.mul_trunc(&a).unwrap().is_zero());
        assert_eq!(p("x1", 2, 5).mul_trunc(&p("x2", 2, 5)).unwrap().to_string(), "x1*x2");
        let g = p("1 + x1", 2, 5).mul_trunc(&p("1 - x1 + x1^2 - x1^3 + x1^4", 2, 5)).unwrap();
        assert_eq!(g.to_string(), "1");
    }

    #[test]
    fn mul_mismatch_errors() {
        assert!(p("x1", 2, 5).mul_trunc(&p("x1", 2, 4)).is_err());
        assert!(p("x1", 2, 5).mul_trunc(&p("x1", 3, 5)).is_err());
    }

    #[test]
    fn initial_forms() {
        assert_eq!(p("x1^3 + x2^4", 2, 6).initial_form().unwrap().to_string(), "x1^3");
        assert_eq!(p("x1 + x2", 2, 6).initial_form().unwrap().to_string(), "x1 + x2");
        let e = p("0", 2, 6).initial_form().unwrap_err();
        assert_eq!(e.to_string(), "order not determined below level 6");
    }

    #[test]
    fn printing_signs_and_fractions() {
        let f = p("-x2^2 + 1/2*x1 - 3", 2, 5);
        assert_eq!(f.to_string(), "-x2^2 + 1/2*x1 - 3");
        assert_eq!(p(&f.to_string(), 2, 5), f);
        let g = TruncatedPoly::parse("-x1", 2, FieldSpec::prime(5).unwrap(), 3).unwrap();
        assert_eq!(g.to_string(), "4*x1");
    }

    #[test]
    fn substitution_into_one_variable() {
        let f = p("x1^3 - x2^2", 2, 7);
        let names = ["t"];
        let r = dsl::named_vars(&names);
        let t = |s: &str| TruncatedPoly::parse_with(s, 1, FieldSpec::Q, 20, &r).unwrap();
        assert!(f.substitute(&[t("t^2"), t("t^3")]).unwrap().is_zero());
    }
}
