use serde::{Deserialize, Serialize};

use super::{ideal_spans, IdealPresentation};
use crate::error::{Error, Result};

/// `dim R/(I+X)` or divergence below the searched level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionNumber {
    Finite(u64),
    /// No stabilization below `n_max`; read as an infinite intersection number.
    Divergent { n_max: u32 },
}

/// Length of `R/(I+X)`, certified by a vanishing graded piece: once
/// `dim (I+X+M^t)/(I+X+M^{t+1}) = 0`, Nakayama gives `M^t ⊆ I+X`.
pub fn intersection_number(i: &IdealPresentation, x: &IdealPresentation, n_max: u32) -> Result<IntersectionNumber> {
    if i.nvars() != x.nvars() || i.field() != x.field() {
        return Err(Error::Mismatch("intersection over different rings".into()));
    }
    let lvl = i.level().min(x.level());
    if n_max > lvl {
        return Err(Error::LevelTooLow { have: lvl, want: n_max });
    }
    let sum = i.truncate(n_max)?.sum(&x.truncate(n_max)?)?;
    let spans = ideal_spans(&sum, n_max)?;
    let mut prev = 0;
    for t in 0..n_max {
        let h = spans.colength_upto(t);
        if t > 0 && h == prev {
            return Ok(IntersectionNumber::Finite(h));
        }
        if t == 0 && h == 0 {
            return Ok(IntersectionNumber::Finite(0));
        }
        prev = h;
    }
    Ok(IntersectionNumber::Divergent { n_max })
}
