//! Arithmetic in `Z[L, L^-1]`, rational series in `T` with denominators
//! `prod (1 - L^a T^b)`, cylinder-measure normalization and partial volumes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ringcore::Scalar;

mod class;

pub use class::{FiltrationNorm, MotivicClass};

/// Numerator polynomial in `T` (coefficient of `T^k` at index `k`) over the
/// product of factors `1 - L^a T^b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalSeries {
    pub numerator: Vec<MotivicClass>,
    pub denominator: Vec<(i64, u32)>,
}

fn poly_mul(a: &[MotivicClass], b: &[MotivicClass]) -> Vec<MotivicClass> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![MotivicClass::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(out)
}

fn trim(mut v: Vec<MotivicClass>) -> Vec<MotivicClass> {
    while v.last().is_some_and(MotivicClass::is_zero) {
        v.pop();
    }
    v
}

fn factor_poly(a: i64, b: u32) -> Vec<MotivicClass> {
    let mut f = vec![MotivicClass::zero(); b as usize + 1];
    f[0] = MotivicClass::one();
    f[b as usize] = MotivicClass::l_power(a).neg();
    f
}

impl RationalSeries {
    pub fn new(numerator: Vec<MotivicClass>, denominator: Vec<(i64, u32)>) -> Result<Self> {
        if let Some(&(a, b)) = denominator.iter().find(|(a, b)| *a < 0 || *b == 0) {
            return Err(Error::Invalid(format!("denominator factor (1 - L^{a} T^{b}) needs a >= 0, b >= 1")));
        }
        Ok(RationalSeries { numerator: trim(numerator), denominator })
    }

    pub fn polynomial(numerator: Vec<MotivicClass>) -> Self {
        RationalSeries { numerator: trim(numerator), denominator: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// Coefficients of `T^0..=T^k`.
    pub fn expand(&self, k: usize) -> Vec<MotivicClass> {
        let mut c: Vec<MotivicClass> = (0..=k).map(|i| self.numerator.get(i).cloned().unwrap_or_default()).collect();
        for &(a, b) in &self.denominator {
            let b = b as usize;
            for i in b..=k {
                let add = c[i - b].shift(a);
                c[i] = c[i].add(&add);
            }
        }
        c
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut den = self.denominator.clone();
        den.extend(&o.denominator);
        RationalSeries { numerator: poly_mul(&self.numerator, &o.numerator), denominator: den }
    }

    /// Multiplies numerator and denominator by `1 - L^a T^b`.
    pub fn with_extra_factor(&self, a: i64, b: u32) -> Result<Self> {
        let mut den = self.denominator.clone();
        den.push((a, b));
        Self::new(poly_mul(&self.numerator, &factor_poly(a, b)), den)
    }

    fn cleared_denominator(&self) -> Vec<MotivicClass> {
        self.denominator
            .iter()
            .fold(vec![MotivicClass::one()], |acc, &(a, b)| poly_mul(&acc, &factor_poly(a, b)))
    }

    /// Equality as rational functions: `num1 * den2 == num2 * den1`.
    pub fn same_series(&self, o: &Self) -> bool {
        poly_mul(&self.numerator, &o.cleared_denominator()) == poly_mul(&o.numerator, &self.cleared_denominator())
    }
}

fn fmt_numerator(num: &[MotivicClass]) -> String {
    let parts: Vec<String> = num
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let t = match k {
                0 => String::new(),
                1 => "T".into(),
                k => format!("T^{k}"),
            };
            let single = c.terms().len() == 1;
            let cs = c.to_string();
            match (t.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => t,
                (false, _) if single && !cs.starts_with('-') => format!("{cs}*{t}"),
                (false, _) => format!("({cs})*{t}"),
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_numerator(&self.numerator))?;
        if !self.denominator.is_empty() {
            let facs: Vec<String> = self
                .denominator
                .iter()
                .map(|&(a, b)| {
                    let l = match a {
                        0 => String::new(),
                        1 => "L*".into(),
                        a => format!("L^{a}*"),
                    };
                    let t = if b == 1 { "T".into() } else { format!("T^{b}") };
                    format!("(1 - {l}{t})")
                })
                .collect();
            write!(f, " / {}", facs.join(""))?;
        }
        Ok(())
    }
}

/// Ambient dimension `N`, multiplicity `e0` and fibration rank `c = (N-1) e0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureContext {
    pub nvars: u32,
    pub e0: u32,
    pub c: i64,
}

impl MeasureContext {
    pub fn new(nvars: u32, e0: u32) -> Result<Self> {
        if nvars == 0 || e0 == 0 {
            return Err(Error::Invalid("N and e0 must be positive".into()));
        }
        Ok(MeasureContext { nvars, e0, c: (nvars as i64 - 1) * e0 as i64 })
    }
}

/// `class_n * L^{-(n+1) c}`.
pub fn measure_of_level(class_n: &MotivicClass, n: u32, ctx: &MeasureContext) -> MotivicClass {
    class_n.shift(-(n as i64 + 1) * ctx.c)
}

/// `class0 * L^{c n0} T^{n0} / (1 - L^c T)`.
pub fn mps(class0: &MotivicClass, n0: u32, ctx: &MeasureContext) -> Result<RationalSeries> {
    if n0 == 0 {
        return Err(Error::Invalid("n0 must be >= 1".into()));
    }
    if ctx.c < 0 {
        return Err(Error::Invalid("negative fibration rank".into()));
    }
    let mut num = vec![MotivicClass::zero(); n0 as usize + 1];
    num[n0 as usize] = class0.shift(ctx.c * n0 as i64);
    RationalSeries::new(num, vec![(ctx.c, 1)])
}

pub fn series_expand(rs: &RationalSeries, k: usize) -> Vec<MotivicClass> {
    rs.expand(k)
}

pub fn specialize(a: &MotivicClass, q: u64) -> Result<Scalar> {
    a.specialize(q)
}

/// Partial volume and the reported precision of the truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumePartial {
    pub upto: u64,
    pub sum: MotivicClass,
    pub sum_norm: FiltrationNorm,
    /// `2^{D - (S+1)}` with `D` the largest exponent among the supplied terms.
    pub tail_bound: FiltrationNorm,
}

/// `sum_{s <= S} term(s) L^{-s}`.
pub fn volume_partial(terms: &BTreeMap<u64, MotivicClass>) -> VolumePartial {
    let upto = terms.keys().next_back().copied().unwrap_or(0);
    let mut sum = MotivicClass::zero();
    for (s, c) in terms {
        sum = sum.add(&c.shift(-(*s as i64)));
    }
    let tail_bound = terms
        .values()
        .filter_map(MotivicClass::max_exponent)
        .max()
        .map_or(FiltrationNorm::Zero, |d| FiltrationNorm::Pow2(d - (upto as i64 + 1)));
    VolumePartial { upto, sum_norm: sum.norm(), sum, tail_bound }
}

/// Integer polynomial in `L` through point counts `(q, count)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FittedClass {
    pub class: MotivicClass,
    /// More points than unknowns and all of them consistent.
    pub overdetermined: bool,
    pub warning: String,
}

/// Interpolates counts by a polynomial of degree `<= degree_bound` (assumes polynomial-count behaviour).
pub fn fit_class_from_counts(counts: &[(u64, BigInt)], degree_bound: u32) -> Result<FittedClass> {
    let deg = (degree_bound as usize).min(counts.len().saturating_sub(1));
    if counts.is_empty() {
        return Err(Error::Invalid("no point counts".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    if counts.iter().any(|(q, _)| !seen.insert(*q)) {
        return Err(Error::Invalid("repeated q in point counts".into()));
    }
    // Newton divided differences on the first deg+1 points.
    let pts: Vec<(Scalar, Scalar)> = counts[..=deg]
        .iter()
        .map(|(q, c)| (Scalar::from_integer(BigInt::from(*q)), Scalar::from_integer(c.clone())))
        .collect();
    let mut dd: Vec<Scalar> = pts.iter().map(|p| p.1.clone()).collect();
    for j in 1..=deg {
        for i in (j..=deg).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&pts[i].0 - &pts[i - j].0);
        }
    }
    let mut poly = vec![Scalar::zero(); deg + 1];
    for i in (0..=deg).rev() {
        // poly = poly * (x - x_i) + dd[i]
        let mut next = vec![Scalar::zero(); deg + 1];
        for (k, c) in poly.iter().enumerate() {
            if k < deg {
                next[k + 1] += c;
            }
            next[k] -= c * &pts[i].0;
        }
        next[0] += &dd[i];
        poly = next;
    }
    if let Some(bad) = poly.iter().find(|c| !c.is_integer()) {
        return Err(Error::Verification(format!("point counts are not an integer polynomial (coefficient {bad})")));
    }
    let class = MotivicClass::from_terms(poly.iter().enumerate().map(|(k, c)| (k as i64, c.to_integer())));
    for (q, c) in &counts[deg + 1..] {
        if class.specialize(*q)? != Scalar::from_integer(c.clone()) {
            return Err(Error::Verification(format!("count at q = {q} disagrees with the fitted class {class}")));
        }
    }
    Ok(FittedClass {
        class,
        overdetermined: counts.len() > deg + 1,
        warning: "fitted from point counts under a polynomial-count assumption".into(),
    })
}

/// Ratio test `coeff(k+1) = coeff(k) L^c` for `k` in `[from, to)`.
pub fn satisfies_recurrence(coeffs: &[MotivicClass], c: i64, from: usize) -> bool {
    coeffs.windows(2).skip(from).all(|w| w[1] == w[0].shift(c))
}

impl RationalSeries {
    /// `1 / (1 - L^a T^b)`.
    pub fn geometric(a: i64, b: u32) -> Result<Self> {
        Self::new(vec![MotivicClass::one()], vec![(a, b)])
    }

    pub fn constant(c: MotivicClass) -> Self {
        Self::polynomial(vec![c])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> MotivicClass {
        MotivicClass::parse(s).unwrap()
    }

    #[test]
    fn mps_expansion() {
        let ctx = MeasureContext::new(3, 1).unwrap();
        let s = mps(&MotivicClass::one(), 3, &ctx).unwrap();
        let e = s.expand(5);
        assert_eq!(&e[3..], &[c("L^6"), c("L^8"), c("L^10")]);
        assert!(e[..3].iter().all(MotivicClass::is_zero));
        assert!(satisfies_recurrence(&e, 2, 3));
        assert!(mps(&MotivicClass::zero(), 2, &ctx).unwrap().is_zero());
        assert_eq!(s.to_string(), "L^6*T^3 / (1 - L^2*T)");
    }

    #[test]
    fn cross_multiplied_equality() {
        let ctx = MeasureContext::new(2, 2).unwrap();
        let s = mps(&c("L - 1"), 2, &ctx).unwrap();
        let t = s.with_extra_factor(2, 1).unwrap();
        assert!(s.same_series(&t));
        assert_eq!(s.expand(8), t.expand(8));
        assert!(!s.same_series(&mps(&c("L"), 2, &ctx).unwrap()));
    }

    #[test]
    fn geometric_and_polynomial() {
        assert_eq!(RationalSeries::geometric(1, 1).unwrap().expand(3), vec![c("1"), c("L"), c("L^2"), c("L^3")]);
        let p = RationalSeries::polynomial(vec![c("1"), c("0"), c("L")]);
        assert_eq!(p.expand(3), vec![c("1"), c("0"), c("L"), c("0")]);
    }

    #[test]
    fn measure_normalization() {
        let ctx = MeasureContext::new(2, 2).unwrap();
        assert_eq!(measure_of_level(&MotivicClass::l_power(8), 3, &ctx), MotivicClass::one());
        let k = c("L^3 - L");
        assert_eq!(measure_of_level(&k, 4, &ctx), measure_of_level(&k.shift(2), 5, &ctx));
    }

    #[test]
    fn partial_volume() {
        let single = BTreeMap::from([(0, MotivicClass::one())]);
        assert_eq!(volume_partial(&single).sum, MotivicClass::one());
        let two = BTreeMap::from([(0, c("L")), (2, c("L^2 - 1"))]);
        let v = volume_partial(&two);
        assert_eq!(v.sum, c("L + 1 - L^-2"));
        assert_eq!(v.tail_bound, FiltrationNorm::Pow2(-1));
    }

    #[test]
    fn fitting() {
        let pts: Vec<(u64, BigInt)> = [2u64, 3, 5, 7].iter().map(|&q| (q, BigInt::from(q * q * q - q + 4))).collect();
        let f = fit_class_from_counts(&pts, 3).unwrap();
        assert_eq!(f.class, c("L^3 - L + 4"));
        assert!(!f.overdetermined);
        let f = fit_class_from_counts(&pts, 2);
        assert!(f.is_err());
        let noisy = vec![(2, BigInt::from(1)), (3, BigInt::from(2))];
        assert!(fit_class_from_counts(&noisy, 1).is_ok());
        let frac = vec![(2, BigInt::from(0)), (4, BigInt::from(1))];
        assert!(fit_class_from_counts(&frac, 1).is_err());
    }
}
