use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ringcore::Scalar;

/// Laurent polynomial in `L` with integer coefficients; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MotivicClass {
    terms: BTreeMap<i64, BigInt>,
}

/// `2^k` for a nonzero class (with `k = -order`), or `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationNorm {
    Zero,
    Pow2(i64),
}

impl fmt::Display for FiltrationNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationNorm::Zero => write!(f, "0"),
            FiltrationNorm::Pow2(k) => write!(f, "2^{k}"),
        }
    }
}

impl MotivicClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_terms([(0, BigInt::from(c))])
    }

    /// `L^k`.
    pub fn l_power(k: i64) -> Self {
        Self::from_terms([(k, BigInt::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    fn add_term(&mut self, k: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        MotivicClass { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, x)| (*k, x * c)))
    }

    /// Multiplication by `L^k`.
    pub fn shift(&self, k: i64) -> Self {
        MotivicClass { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Filtration order `-(largest exponent)`; `None` for zero.
    pub fn order(&self) -> Option<i64> {
        self.max_exponent().map(|k| -k)
    }

    pub fn norm(&self) -> FiltrationNorm {
        self.max_exponent().map_or(FiltrationNorm::Zero, FiltrationNorm::Pow2)
    }

    /// Point-count realization `L -> q`.
    pub fn specialize(&self, q: u64) -> Result<Scalar> {
        if q < 2 {
            return Err(Error::Invalid(format!("specialization needs q >= 2, got {q}")));
        }
        let q = Scalar::from_integer(BigInt::from(q));
        let mut s = Scalar::zero();
        for (k, c) in &self.terms {
            let p = if *k >= 0 { num_traits::pow(q.clone(), *k as usize) } else { num_traits::pow(q.recip(), (-*k) as usize) };
            s += Scalar::from_integer(c.clone()) * p;
        }
        Ok(s)
    }

    /// Parses sums like `3*L^2 - L + 1 - L^-1`.
    pub fn parse(text: &str) -> Result<Self> {
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Syntax { pos: 0, msg: "empty class".into() });
        }
        let mut out = Self::zero();
        let mut i = 0;
        let int = |i: &mut usize| -> Option<BigInt> {
            let st = *i;
            while *i < s.len() && s[*i].is_ascii_digit() {
                *i += 1;
            }
            (st < *i).then(|| s[st..*i].iter().collect::<String>().parse().unwrap())
        };
        while i < s.len() {
            let mut sign = BigInt::one();
            if s[i] == '+' || s[i] == '-' {
                if s[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            } else if i > 0 {
                return Err(Error::Syntax { pos: i, msg: "expected '+' or '-'".into() });
            }
            let coeff = int(&mut i);
            let mut exp = 0i64;
            let has_star = i < s.len() && s[i] == '*';
            if has_star {
                i += 1;
            }
            if i < s.len() && s[i] == 'L' {
                i += 1;
                exp = 1;
                if i < s.len() && s[i] == '^' {
                    i += 1;
                    let paren = i < s.len() && s[i] == '(';
                    if paren {
                        i += 1;
                    }
                    let neg = i < s.len() && s[i] == '-';
                    if neg {
                        i += 1;
                    }
                    let e = int(&mut i).ok_or(Error::Syntax { pos: i, msg: "expected exponent".into() })?;
                    if paren {
                        if i >= s.len() || s[i] != ')' {
                            return Err(Error::Syntax { pos: i, msg: "expected ')'".into() });
                        }
                        i += 1;
                    }
                    let e: i64 = e.try_into().map_err(|_| Error::Syntax { pos: i, msg: "exponent too large".into() })?;
                    exp = if neg { -e } else { e };
                }
            } else if has_star || coeff.is_none() {
                return Err(Error::Syntax { pos: i, msg: "expected 'L' or an integer".into() });
            }
            out.add_term(exp, &(sign * coeff.unwrap_or_else(BigInt::one)));
        }
        Ok(out)
    }
}

impl fmt::Display for MotivicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let power = match *k {
                0 => String::new(),
                1 => "L".to_string(),
                k => format!("L^{k}"),
            };
            match (power.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{power}")?,
                (false, false) => write!(f, "{mag}*{power}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for MotivicClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            m.serialize_entry(&k.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for MotivicClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut terms = Vec::new();
        for (k, c) in raw {
            let k: i64 = k.parse().map_err(D::Error::custom)?;
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            terms.push((k, c));
        }
        Ok(Self::from_terms(terms))
    }
}
