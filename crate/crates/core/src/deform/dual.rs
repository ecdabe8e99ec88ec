use std::fmt;

use crate::error::{Error, Result};
use crate::ringcore::dsl::{self, parse_terms};
use crate::ringcore::{FieldSpec, Monomial, TruncatedPoly};

/// `re + eps * eps_part` with `eps^2 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPoly {
    pub re: TruncatedPoly,
    pub eps: TruncatedPoly,
}

impl DualPoly {
    pub fn new(re: TruncatedPoly, eps: TruncatedPoly) -> Result<Self> {
        if re.nvars() != eps.nvars() || re.field() != eps.field() || re.level() != eps.level() {
            return Err(Error::Mismatch("dual parts live in different rings".into()));
        }
        Ok(DualPoly { re, eps })
    }

    pub fn real(re: TruncatedPoly) -> Self {
        let eps = TruncatedPoly::zero(re.nvars(), re.field(), re.level());
        DualPoly { re, eps }
    }

    pub fn zero(nvars: usize, field: FieldSpec, level: u32) -> Self {
        Self::real(TruncatedPoly::zero(nvars, field, level))
    }

    /// DSL with an extra symbol `eps`; terms with `eps^2` vanish.
    pub fn parse(text: &str, nvars: usize, field: FieldSpec, level: u32) -> Result<Self> {
        let indexed = dsl::indexed_vars(nvars);
        let resolve = |name: &str, pos: usize| if name == "eps" { Ok(nvars) } else { indexed(name, pos) };
        let raw = parse_terms(text, nvars + 1, &resolve)?;
        let (mut re, mut eps) = (Vec::new(), Vec::new());
        for (c, mut e) in raw {
            match e.pop() {
                Some(0) => re.push((Monomial::new(e), c)),
                Some(1) => eps.push((Monomial::new(e), c)),
                _ => {}
            }
        }
        Ok(DualPoly {
            re: TruncatedPoly::from_terms(nvars, field, level, re)?,
            eps: TruncatedPoly::from_terms(nvars, field, level, eps)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }

    pub fn is_eps_free(&self) -> bool {
        self.eps.is_zero()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(DualPoly { re: self.re.add(&o.re)?, eps: self.eps.add(&o.eps)? })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Ok(DualPoly { re: self.re.sub(&o.re)?, eps: self.eps.sub(&o.eps)? })
    }

    pub fn neg(&self) -> Self {
        DualPoly { re: self.re.neg(), eps: self.eps.neg() }
    }

    /// `(f1 + eps g1)(f2 + eps g2) = f1 f2 + eps (f1 g2 + f2 g1)`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let re = self.re.mul_trunc(&o.re)?;
        let eps = self.re.mul_trunc(&o.eps)?.add(&o.re.mul_trunc(&self.eps)?)?;
        Ok(DualPoly { re, eps })
    }
}

impl fmt::Display for DualPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "eps*({})", self.eps)
        } else {
            write!(f, "{} + eps*({})", self.re, self.eps)
        }
    }
}
