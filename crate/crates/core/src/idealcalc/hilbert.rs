use serde::{Deserialize, Serialize};

use super::{ideal_spans, DegreeSpans, IdealPresentation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HilbertStatus {
    Ok,
    NotStabilized,
    #[serde(rename = "dim_ge_2")]
    DimGe2,
}

/// Hilbert-Samuel values `H^1(t) = dim R/(I+M^{t+1})` for `t < n`, their graded
/// differences `H^0`, and `(e0, e1)` with `H^1(t) = e0 (t+1) - e1` on the stable tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub values: Vec<u64>,
    pub graded: Vec<i64>,
    pub e0: Option<i64>,
    pub e1: Option<i64>,
    pub stab_index: Option<usize>,
    pub status: HilbertStatus,
}

impl HilbertData {
    pub fn level(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn is_stable(&self) -> bool {
        self.status == HilbertStatus::Ok
    }

    /// `(e0, e1)` or the corresponding soft error.
    pub fn require_stable(&self) -> Result<(i64, i64)> {
        match self.status {
            HilbertStatus::Ok => Ok((self.e0.unwrap(), self.e1.unwrap())),
            HilbertStatus::NotStabilized => Err(Error::NotStabilized { level: self.level() }),
            HilbertStatus::DimGe2 => Err(Error::DimensionAtLeastTwo { level: self.level() }),
        }
    }

    /// Constant term in the form `p(T) = e0*T - e1'`, i.e. `e1' = e1 - e0`.
    pub fn shifted_e1(&self) -> Option<i64> {
        Some(self.e1? - self.e0?)
    }

    /// Both display forms of the Hilbert polynomial.
    pub fn polynomial_forms(&self) -> Option<(String, String)> {
        let (e0, e1) = (self.e0?, self.e1?);
        let signed = |c: i64| match c {
            0 => String::new(),
            c if c > 0 => format!(" - {c}"),
            c => format!(" + {}", -c),
        };
        Some((format!("{e0}*(T+1){}", signed(e1)), format!("{e0}*T{}", signed(e1 - e0))))
    }
}

/// Builds Hilbert data from cumulative values `H^1(0..n-1)`.
pub fn hilbert_from_values(values: Vec<u64>) -> HilbertData {
    let n = values.len();
    let graded: Vec<i64> = (0..n)
        .map(|t| if t == 0 { values[0] as i64 } else { values[t] as i64 - values[t - 1] as i64 })
        .collect();
    let mut out = HilbertData { values, graded, e0: None, e1: None, stab_index: None, status: HilbertStatus::NotStabilized };
    if n < 2 {
        return out;
    }
    let last = out.graded[n - 1];
    let mut start = n - 1;
    while start > 0 && out.graded[start - 1] == last {
        start -= 1;
    }
    if n - start >= 2 {
        out.e0 = Some(last);
        out.e1 = Some(last * n as i64 - out.values[n - 1] as i64);
        out.stab_index = Some(start);
        out.status = HilbertStatus::Ok;
    } else if n >= 3 && out.graded[n - 1] > out.graded[n - 2] && out.graded[n - 2] > out.graded[n - 3] {
        out.status = HilbertStatus::DimGe2;
    }
    out
}

pub(crate) fn hilbert_from_spans(spans: &DegreeSpans) -> HilbertData {
    hilbert_from_values((0..spans.level()).map(|t| spans.colength_upto(t)).collect())
}

/// Hilbert-Samuel data of `I` at level `n >= 3`.
pub fn hilbert_data(ideal: &IdealPresentation, n: u32) -> Result<HilbertData> {
    if n < 3 {
        return Err(Error::Invalid(format!("hilbert_data needs level >= 3, got {n}")));
    }
    Ok(hilbert_from_spans(&ideal_spans(ideal, n)?))
}
