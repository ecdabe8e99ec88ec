use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ringcore::binomial;

/// Bounds `rho0 <= e1 <= rho1` for embedding dimension `b` and multiplicity `e0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleRange {
    pub b: u64,
    pub e0: u64,
    pub r: u64,
    pub rho0: i64,
    pub rho1: i64,
}

impl AdmissibleRange {
    pub fn contains(&self, e1: i64) -> bool {
        self.rho0 <= e1 && e1 <= self.rho1
    }
}

/// `r` with `C(b+r-1, r) <= e0 < C(b+r, r+1)`, then
/// `rho0 = (r+1) e0 - C(r+b, r)` and `rho1 = e0(e0-1)/2 - (b-1)(b-2)/2`.
pub fn admissible_range(b: u64, e0: u64) -> Result<AdmissibleRange> {
    if b == 0 || e0 == 0 || b > e0 || (b == 1 && e0 != 1) {
        return Err(Error::EmbeddingDimension { b, e0 });
    }
    if b == 1 {
        return Ok(AdmissibleRange { b, e0, r: 0, rho0: 0, rho1: 0 });
    }
    let mut r = 0;
    while !(binomial(b + r - 1, r) <= e0 && e0 < binomial(b + r, r + 1)) {
        r += 1;
    }
    let rho0 = ((r + 1) * e0) as i64 - binomial(r + b, r) as i64;
    let rho1 = (e0 * (e0 - 1) / 2) as i64 - ((b - 1) * (b - 2) / 2) as i64;
    Ok(AdmissibleRange { b, e0, r, rho0, rho1 })
}

pub fn admissible(b: u64, e0: u64, e1: i64) -> Result<bool> {
    Ok(admissible_range(b, e0)?.contains(e1))
}

/// All admissible `(b, e1)` with `b <= min(N, e0)`.
pub fn admissible_polys(nvars: usize, e0: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    for b in 1..=(nvars as u64).min(e0) {
        if let Ok(r) = admissible_range(b, e0) {
            for e1 in r.rho0..=r.rho1 {
                out.push((b, e1));
            }
        }
    }
    out
}
