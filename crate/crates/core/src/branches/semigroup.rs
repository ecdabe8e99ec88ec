use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical semigroup data computed up to `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupData {
    pub generators: Vec<u64>,
    pub bound: u64,
    pub elements: Vec<u64>,
    pub gaps: Vec<u64>,
    pub delta: u64,
    pub conductor: u64,
    pub multiplicity: u64,
}

/// Semigroup generated by `gens`. The bound defaults to `2 * max * |gens|` and
/// is doubled until a run of `min(gens)` consecutive elements appears.
pub fn semigroup(gens: &[u64], bound: Option<u64>) -> Result<SemigroupData> {
    if gens.is_empty() || gens.contains(&0) {
        return Err(Error::Invalid("generators must be positive integers".into()));
    }
    let g = gens.iter().fold(0u64, |a, &b| a.gcd(&b));
    if g != 1 {
        return Err(Error::NotCoprime(g));
    }
    let min = *gens.iter().min().unwrap();
    let max = *gens.iter().max().unwrap();
    let mut bound = bound.unwrap_or(2 * max * gens.len() as u64).max(min);
    loop {
        let mut member = vec![false; bound as usize + 1];
        member[0] = true;
        for k in 1..=bound as usize {
            member[k] = gens.iter().any(|&a| a as usize <= k && member[k - a as usize]);
        }
        let mut run = 0u64;
        let mut conductor = None;
        for k in 0..=bound {
            if member[k as usize] {
                run += 1;
                if run == min {
                    conductor = Some(k + 1 - min);
                    break;
                }
            } else {
                run = 0;
            }
        }
        if let Some(c) = conductor {
            let elements: Vec<u64> = (0..=bound).filter(|&k| member[k as usize]).collect();
            let gaps: Vec<u64> = (0..c).filter(|&k| !member[k as usize]).collect();
            return Ok(SemigroupData {
                generators: gens.to_vec(),
                bound,
                elements,
                delta: gaps.len() as u64,
                gaps,
                conductor: c,
                multiplicity: min,
            });
        }
        bound *= 2;
    }
}

/// `mu = 2 delta - r + 1`.
pub fn milnor(delta: u64, r: u64) -> Result<i64> {
    if r == 0 {
        return Err(Error::Invalid("a curve has at least one branch".into()));
    }
    Ok(2 * delta as i64 - r as i64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_generators() {
        let s = semigroup(&[6, 7, 10, 15], None).unwrap();
        assert_eq!(s.gaps, vec![1, 2, 3, 4, 5, 8, 9, 11]);
        assert_eq!((s.delta, s.conductor), (8, 12));
        assert_eq!(milnor(s.delta, 1).unwrap(), 16);
    }

    #[test]
    fn small_cases() {
        let s = semigroup(&[2, 3], None).unwrap();
        assert_eq!((s.gaps.clone(), s.delta, s.conductor), (vec![1], 1, 2));
        let s = semigroup(&[1], None).unwrap();
        assert_eq!((s.delta, s.conductor), (0, 0));
        assert_eq!(milnor(0, 1).unwrap(), 0);
        assert_eq!(milnor(1, 1).unwrap(), 2);
    }

    #[test]
    fn bound_extends() {
        let s = semigroup(&[7, 8, 9], Some(3)).unwrap();
        assert!(s.bound >= s.conductor + 7);
    }

    #[test]
    fn not_coprime() {
        assert_eq!(semigroup(&[4, 6], None), Err(Error::NotCoprime(2)));
    }
}
