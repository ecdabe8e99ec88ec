use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field element. Over a prime field the value is an integer in `[0, p)`.
pub type Scalar = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub characteristic: u64,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub const Q: FieldSpec = FieldSpec { kind: FieldKind::Rationals, characteristic: 0 };

    pub fn rationals() -> Self {
        Self::Q
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        Ok(FieldSpec { kind: FieldKind::PrimeField, characteristic: p })
    }

    /// Parses "Q" or "F<p>" (also "GF(p)", "p:<p>").
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("qq") {
            return Ok(Self::Q);
        }
        let digits = t
            .strip_prefix("GF(")
            .and_then(|s| s.strip_suffix(')'))
            .or_else(|| t.strip_prefix("p:"))
            .or_else(|| t.strip_prefix('F'))
            .or_else(|| t.strip_prefix('f'))
            .ok_or_else(|| Error::Invalid(format!("unknown field '{t}'")))?;
        let p: u64 = digits
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("unknown field '{t}'")))?;
        Self::prime(p)
    }

    pub fn is_prime_field(&self) -> bool {
        self.kind == FieldKind::PrimeField
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        self.is_prime_field().then_some(self.characteristic)
    }

    fn modulus(&self) -> BigInt {
        BigInt::from(self.characteristic)
    }

    fn reduce_int(&self, v: &BigInt) -> BigInt {
        v.mod_floor(&self.modulus())
    }

    /// Canonical representative; errors if a denominator vanishes mod p.
    pub fn normalize(&self, x: &Scalar) -> Result<Scalar> {
        if !self.is_prime_field() {
            return Ok(x.clone());
        }
        let num = self.reduce_int(x.numer());
        let den = self.reduce_int(x.denom());
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = mod_inverse(&den, &self.modulus());
        Ok(Scalar::from_integer(self.reduce_int(&(num * inv))))
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_int(BigInt::from(v))
    }

    pub fn from_int(&self, v: BigInt) -> Scalar {
        if self.is_prime_field() {
            Scalar::from_integer(self.reduce_int(&v))
        } else {
            Scalar::from_integer(v)
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if self.is_prime_field() {
            Scalar::from_integer(self.reduce_int(&(a.numer() + b.numer())))
        } else {
            a + b
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if self.is_prime_field() {
            Scalar::from_integer(self.reduce_int(&(a.numer() - b.numer())))
        } else {
            a - b
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        if self.is_prime_field() {
            Scalar::from_integer(self.reduce_int(&-a.numer()))
        } else {
            -a
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if self.is_prime_field() {
            Scalar::from_integer(self.reduce_int(&(a.numer() * b.numer())))
        } else {
            a * b
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_prime_field() {
            Ok(Scalar::from_integer(mod_inverse(a.numer(), &self.modulus())))
        } else {
            Ok(a.recip())
        }
    }

    pub fn pow(&self, a: &Scalar, e: u32) -> Scalar {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// All field elements in increasing representative order (prime fields only).
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.size().map(|q| (0..q).map(|v| Scalar::from_integer(BigInt::from(v))).collect())
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self::Q
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::PrimeField => write!(f, "F{}", self.characteristic),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.mod_floor(m).extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// Writes a scalar as "a" or "a/b".
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn scalar_to_i64(x: &Scalar) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub(crate) fn is_negative(x: &Scalar) -> bool {
    x.is_negative()
}
