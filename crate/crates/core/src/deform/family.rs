use serde::{Deserialize, Serialize};

use super::fiber_invariants;
use crate::branches::{hilbert_from_param, parse_with_parameter, Branch, Parametrization};
use crate::error::{Error, Result};
use crate::idealcalc::{HilbertData, IdealPresentation};
use crate::ringcore::field::format_scalar;
use crate::ringcore::{FieldSpec, Scalar};

/// A family over `k[u]`, either by ideal generators or by branches, each written
/// in the DSL with the extra symbol `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySource {
    Ideal { nvars: usize, generators: Vec<String> },
    Param { branches: Vec<Vec<String>>, precision: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub level: u32,
    pub samples: Vec<String>,
    pub hilbert: Vec<HilbertData>,
    /// All fibers share `(e0, e1)`.
    pub polynomial_constant: bool,
    pub hilbert_function_constant: bool,
    /// Index of the first sample whose `(e0, e1)` differs from the first one.
    pub first_mismatch: Option<usize>,
    /// Initial-ideal generators per fiber (ideal families only).
    pub tangent_cones: Option<Vec<Vec<String>>>,
    pub tangent_cone_constant: Option<bool>,
    pub verdict: String,
}

fn ideal_fiber(nvars: usize, gens: &[String], u: &Scalar, field: FieldSpec, n: u32) -> Result<IdealPresentation> {
    let names: Vec<String> = (1..=nvars).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let polys = gens
        .iter()
        .map(|g| parse_with_parameter(g, &refs, "u", u, field, n))
        .collect::<Result<Vec<_>>>()?;
    IdealPresentation::new(nvars, field, n, polys)
}

fn param_fiber(branches: &[Vec<String>], precision: u32, u: &Scalar, field: FieldSpec) -> Result<Parametrization> {
    let bs = branches
        .iter()
        .map(|b| {
            let comps = b
                .iter()
                .map(|c| parse_with_parameter(c, &["t"], "u", u, field, precision))
                .collect::<Result<Vec<_>>>()?;
            Branch::new(comps)
        })
        .collect::<Result<Vec<_>>>()?;
    Parametrization::new(bs)
}

/// Specializes `u` at each sample and compares the fibers' Hilbert data.
pub fn fiberwise_family_check(src: &FamilySource, field: FieldSpec, samples: &[Scalar], n: u32) -> Result<FamilyReport> {
    if samples.is_empty() {
        return Err(Error::Invalid("no sample values".into()));
    }
    let mut hilbert = Vec::new();
    let mut cones = Vec::new();
    for u in samples {
        match src {
            FamilySource::Ideal { nvars, generators } => {
                let i = ideal_fiber(*nvars, generators, u, field, n)?;
                let (h, c) = fiber_invariants(&i, n)?;
                hilbert.push(h);
                cones.push(c);
            }
            FamilySource::Param { branches, precision } => {
                hilbert.push(hilbert_from_param(&param_fiber(branches, *precision, u, field)?, n)?);
            }
        }
    }
    let key = |h: &HilbertData| (h.e0, h.e1);
    let first_mismatch = hilbert.iter().position(|h| key(h) != key(&hilbert[0]) || !h.is_stable());
    let hilbert_function_constant = hilbert.iter().all(|h| h.values == hilbert[0].values);
    let (tangent_cones, tangent_cone_constant) = match src {
        FamilySource::Ideal { .. } => {
            let same = cones.iter().all(|c| *c == cones[0]);
            (Some(cones), Some(same))
        }
        FamilySource::Param { .. } => (None, None),
    };
    let verdict = match first_mismatch {
        None => "all fibers share (e0, e1)".to_string(),
        Some(k) => format!("fiber {k} differs"),
    };
    Ok(FamilyReport {
        level: n,
        samples: samples.iter().map(format_scalar).collect(),
        hilbert,
        polynomial_constant: first_mismatch.is_none(),
        hilbert_function_constant,
        first_mismatch,
        tangent_cones,
        tangent_cone_constant,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&k| Scalar::from_integer(k.into())).collect()
    }

    #[test]
    fn plane_family_has_constant_polynomial() {
        let src = FamilySource::Ideal { nvars: 2, generators: vec!["x1^3 + x2^4 + u*x1^2*x2^2 + u*x2^5".into()] };
        let r = fiberwise_family_check(&src, FieldSpec::Q, &ints(&[0, 1, 2, -3]), 8).unwrap();
        assert!(r.polynomial_constant);
        assert_eq!((r.hilbert[0].e0, r.hilbert[0].e1), (Some(3), Some(3)));
    }

    #[test]
    fn constant_family() {
        let src = FamilySource::Param { branches: vec![vec!["t^2".into(), "t^3".into()]], precision: 24 };
        let r = fiberwise_family_check(&src, FieldSpec::Q, &ints(&[0, 5]), 8).unwrap();
        assert!(r.polynomial_constant && r.hilbert_function_constant);
    }

    #[test]
    fn jump_is_reported() {
        let src = FamilySource::Ideal { nvars: 2, generators: vec!["u*x1 + x1^2 + x2^3".into()] };
        let r = fiberwise_family_check(&src, FieldSpec::Q, &ints(&[1, 0]), 6).unwrap();
        assert_eq!(r.first_mismatch, Some(1));
    }
}
