//! Batch front end: a [`Job`] goes in, a deterministic JSON report comes out.

mod job;
mod table;

use std::collections::BTreeMap;

use curvemoduli_core::branches::{
    delta_param, ideal_from_param, is_rigid_known, milnor, normally_flat_fiber_compare, semigroup, Branch, Fiber,
    Parametrization,
};
use curvemoduli_core::deform::{
    colon, determinantal_deformation, fiberwise_family_check, flatness_direct, is_family_first_order, maximal_minors,
    random_perturbations, DualPoly, FamilySource, FirstOrderDeformation,
};
use curvemoduli_core::idealcalc::{
    hilbert_data, initial_ideal, intersection_number, min_generators, standard_basis_check, HilbertData,
    IdealPresentation,
};
use curvemoduli_core::motivic::{mps, volume_partial, MeasureContext, MotivicClass};
use curvemoduli_core::trunctower::{
    admissible_range, cell_membership, cm_superficial_test, enumerate_xi_with, hilbert_stratum_check, jtilde,
    shape_check, tn_membership, CellIndex, CutoffPolicy, EnumerateOptions,
};
use curvemoduli_core::{FieldSpec, Scalar, TruncatedPoly};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

pub use job::*;
pub use table::render_table;

/// Environment variable holding the default cutoff policy `n_default:n_max:window`.
pub const CUTOFF_ENV: &str = "CURVEMODULI_CUTOFF";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] curvemoduli_core::Error),
    #[error("cannot read job file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed job: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_soft() => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// A finished job. `soft` marks a completed computation whose answer is
/// "not yet decided at this level".
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
    pub soft: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.soft {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.value).expect("reports serialize")
    }

    pub fn result(&self) -> &Value {
        &self.value["result"]
    }
}

fn field(text: &str) -> Result<FieldSpec> {
    Ok(FieldSpec::parse(text)?)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}

fn strings(v: &[TruncatedPoly]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

struct Ctx {
    policy: CutoffPolicy,
}

impl Ctx {
    fn level(&self, ring: &Ring) -> u32 {
        ring.level.unwrap_or(self.policy.n_default)
    }

    fn ideal(&self, gens: &str, ring: &Ring) -> Result<IdealPresentation> {
        Ok(IdealPresentation::parse_list(gens, ring.nvars, field(&ring.field)?, self.level(ring))?)
    }

    fn ideal_at(&self, gens: &str, ring: &Ring, level: u32) -> Result<IdealPresentation> {
        Ok(IdealPresentation::parse_list(gens, ring.nvars, field(&ring.field)?, level)?)
    }
}

fn hilbert_value(h: &HilbertData) -> Value {
    let mut v = to_value(h);
    if let Some((a, b)) = h.polynomial_forms() {
        v["polynomial"] = json!(a);
        v["polynomial_shifted"] = json!(b);
    }
    v
}

fn dual_row(text: &str, ring: &Ring, level: u32) -> Result<Vec<DualPoly>> {
    let f = field(&ring.field)?;
    split_list(text).iter().map(|e| Ok(DualPoly::parse(e, ring.nvars, f, level)?)).collect()
}

fn branch(text: &str, precision: u32, f: FieldSpec) -> Result<Branch> {
    Ok(Branch::parse(&split_list(text), precision, f)?)
}

fn branches(texts: &[String], precision: Option<u32>, n: u32, f: FieldSpec) -> Result<Parametrization> {
    // parse once at a generous precision to read orders, then fix the precision
    let probe: Vec<Branch> = texts.iter().map(|t| branch(t, 1024, f)).collect::<Result<_>>()?;
    let p = Parametrization::new(probe)?;
    let m = precision.unwrap_or_else(|| p.required_precision(n));
    Ok(p.with_precision(m))
}

fn class(text: &str) -> Result<MotivicClass> {
    Ok(MotivicClass::parse(text)?)
}

/// Runs one job under the given cutoff policy.
pub fn run(job: &Job, policy: CutoffPolicy) -> Result<Report> {
    let ctx = Ctx { policy };
    let mut soft = false;
    let result = match job {
        Job::Hilbert(j) => {
            let i = ctx.ideal(&j.ideal, &j.ring)?;
            let h = hilbert_data(&i, i.level())?;
            soft = !h.is_stable();
            hilbert_value(&h)
        }
        Job::Initial(j) => {
            let i = ctx.ideal(&j.ideal, &j.ring)?;
            let d = initial_ideal(&i, i.level())?;
            json!({ "generators": strings(&d.generators), "v_star": d.v_star, "nu": d.nu, "dims": d.dims() })
        }
        Job::Stdbasis(j) => {
            let i = ctx.ideal(&j.ideal, &j.ring)?;
            let r = standard_basis_check(&i, i.level())?;
            json!({
                "is_standard": r.is_standard,
                "failing_degree": r.failing_degree,
                "missing_form": r.missing_form.map(|p| p.to_string()),
            })
        }
        Job::Nu(j) => {
            let i = ctx.ideal(&j.ideal, &j.ring)?;
            json!({ "nu": min_generators(&i, i.level())? })
        }
        Job::Gamma(j) => {
            let i = ctx.ideal(&j.ideal, &j.ring)?;
            let x = ctx.ideal(&j.other, &j.ring)?;
            let r = intersection_number(&i, &x, i.level())?;
            soft = matches!(r, curvemoduli_core::idealcalc::IntersectionNumber::Divergent { .. });
            to_value(&r)
        }
        Job::Tn(j) => {
            let n = j.ring.level.unwrap_or_else(|| ctx.policy.level_for(j.e0 as u32));
            let i = ctx.ideal_at(&j.ideal, &j.ring, n)?;
            to_value(&tn_membership(&i, n, j.e0)?)
        }
        Job::Shape(j) => {
            let n = j.ring.level.unwrap_or_else(|| ctx.policy.level_for(j.e0 as u32));
            let i = ctx.ideal_at(&j.ideal, &j.ring, n)?;
            to_value(&shape_check(&i, n, j.e0)?)
        }
        Job::Jtilde(j) => {
            let n = j.ring.level.unwrap_or_else(|| ctx.policy.level_for(j.e0 as u32));
            let i = ctx.ideal_at(&j.ideal, &j.ring, n)?;
            json!({ "generators": jtilde(&i, n, j.e0)?.to_strings() })
        }
        Job::Admissible(j) => {
            let r = admissible_range(j.b, j.e0)?;
            let mut v = to_value(&r);
            if let Some(e1) = j.e1 {
                v["admissible"] = json!(r.contains(e1));
            }
            v
        }
        Job::Stratum(j) => {
            let i = ctx.ideal(&j.ideal, &j.ring)?;
            json!({ "in_stratum": hilbert_stratum_check(&i, &j.f, j.r)? })
        }
        Job::Superficial(j) => {
            let i = ctx.ideal(&j.ideal, &j.ring)?;
            let f = TruncatedPoly::parse(&j.form, j.ring.nvars, i.field(), i.level())?;
            let (ok, cert) = cm_superficial_test(&i, &f, j.e0, i.level())?;
            json!({ "superficial": ok, "certificate": cert })
        }
        Job::Cells(j) => {
            let i = ctx.ideal(&j.ideal, &j.ring)?;
            let cell = CellIndex { i: j.i.clone(), j: j.j.clone(), q: j.q };
            json!({ "member": cell_membership(&i, i.level(), &cell, j.e0)? })
        }
        Job::Enumerate(j) => {
            let mut opts = EnumerateOptions { e1: j.e1, ..EnumerateOptions::default() };
            if let Some(b) = j.budget {
                opts.budget = b;
            }
            let e = enumerate_xi_with(j.nvars, j.e0, j.n, FieldSpec::prime(j.q)?, &opts)?;
            to_value(&e)
        }
        Job::Param(j) => {
            let f = field(&j.field)?;
            let p = branches(&j.branches, j.precision, j.n, f)?;
            let pi = ideal_from_param(&p, j.n)?;
            let h = hilbert_data(&pi.ideal, j.n)?;
            soft = !h.is_stable();
            let rigidity = match (h.e0, h.e1) {
                (Some(e0), Some(e1)) => is_rigid_known(e0 as u64, e1).ok(),
                _ => None,
            };
            json!({
                "precision": pi.precision,
                "generators": pi.ideal.to_strings(),
                "hilbert": hilbert_value(&h),
                "delta": delta_param(&p)?,
                "rigidity": rigidity,
            })
        }
        Job::Semigroup(j) => {
            let s = semigroup(&j.gens, j.bound)?;
            let mut v = to_value(&s);
            v["mu"] = json!(milnor(s.delta, 1)?);
            v
        }
        Job::Normflat(j) => normflat(j, &mut soft)?,
        Job::Deform(j) => deform(&ctx, j)?,
        Job::Colon(j) => {
            let i = ctx.ideal_at(&j.ideal, &j.ring, j.a)?;
            let k = ctx.ideal_at(&j.by, &j.ring, j.a)?;
            let c = colon(&i, &k, j.a)?;
            json!({
                "level": c.level(),
                "dimension": c.dimension(),
                "codimension": c.codimension(),
                "basis": strings(&c.basis_polys()),
            })
        }
        Job::Determinantal(j) => {
            let level = ctx.level(&j.ring);
            let m: Vec<Vec<DualPoly>> = j.rows.iter().map(|r| dual_row(r, &j.ring, level)).collect::<Result<_>>()?;
            let minors = maximal_minors(&m)?;
            let mut v = json!({ "minors": minors.iter().map(ToString::to_string).collect::<Vec<_>>() });
            if minors.iter().any(|d| !d.is_eps_free()) {
                let d = determinantal_deformation(&m)?;
                v["base"] = json!(d.base().to_strings());
                v["perturbations"] = json!(strings(d.perturbations()));
            }
            v
        }
        Job::Mps(j) => {
            let mctx = MeasureContext::new(j.nvars, j.e0)?;
            let s = mps(&class(&j.class0)?, j.n0, &mctx)?;
            let coeffs: Vec<String> = s.expand(j.terms).iter().map(ToString::to_string).collect();
            json!({ "c": mctx.c, "series": s.to_string(), "closed_form": s, "expansion": coeffs })
        }
        Job::Volume(j) => {
            let mut terms = BTreeMap::new();
            for t in &j.terms {
                let (s, c) = t
                    .split_once(':')
                    .ok_or_else(|| CliError::Usage(format!("volume term '{t}' is not s:class")))?;
                let s: u64 = s.trim().parse().map_err(|_| CliError::Usage(format!("bad index in '{t}'")))?;
                terms.insert(s, class(c)?);
            }
            let v = volume_partial(&terms);
            json!({
                "upto": v.upto,
                "sum": v.sum.to_string(),
                "sum_norm": v.sum_norm.to_string(),
                "tail_bound": v.tail_bound.to_string(),
            })
        }
        Job::Specialize(j) => {
            let v: Scalar = class(&j.class)?.specialize(j.q)?;
            json!({ "value": v.to_string() })
        }
    };
    let value = json!({ "job": job, "cutoff": policy, "result": result });
    Ok(Report { value, soft })
}

fn normflat(j: &NormflatJob, soft: &mut bool) -> Result<Value> {
    let f = field(&j.field)?;
    let samples: Vec<Scalar> = j.samples.iter().map(|&s| Scalar::from_integer(s.into())).collect();
    if let Some(fam) = &j.family {
        let nvars = j.nvars.ok_or_else(|| CliError::Usage("--family needs --N".into()))?;
        let src = FamilySource::Ideal { nvars, generators: split_list(fam) };
        return Ok(to_value(&fiberwise_family_check(&src, f, &samples, j.n)?));
    }
    if let Some(fam) = &j.branch_family {
        let comps = split_list(fam);
        let precision = match j.precision {
            Some(m) => m,
            None => {
                let b = branch(&fam.replace('u', "0"), 1024, f)?;
                j.n * b.max_order()
            }
        };
        let src = FamilySource::Param { branches: vec![comps], precision };
        return Ok(to_value(&fiberwise_family_check(&src, f, &samples, j.n)?));
    }
    let mut fibers = Vec::new();
    for g in &j.fibers {
        let nvars = j.nvars.ok_or_else(|| CliError::Usage("ideal fibers need --N".into()))?;
        fibers.push(Fiber::Ideal(IdealPresentation::parse_list(g, nvars, f, j.n)?));
    }
    for b in &j.branch_fibers {
        fibers.push(Fiber::Param(branches(std::slice::from_ref(b), j.precision, j.n, f)?));
    }
    let cmp = normally_flat_fiber_compare(&fibers, j.n)?;
    *soft = cmp.polynomials_agree.is_none();
    Ok(to_value(&cmp))
}

fn deform(ctx: &Ctx, j: &DeformJob) -> Result<Value> {
    let level = j.ring.level.unwrap_or(j.e0 as u32 + 3).max(j.e0 as u32 + 2);
    let base = ctx.ideal_at(&j.base, &j.ring, level)?;
    let flat_level = j.e0 as u32 + 1;
    if let Some(count) = j.random {
        let mut rows = Vec::new();
        let mut agree = 0;
        for d in random_perturbations(&base, j.e0 as u32 + 1, count, j.seed)? {
            let fam = is_family_first_order(&d, j.e0)?.is_family;
            let flat = flatness_direct(&d, flat_level)?.flat;
            agree += (fam == flat) as usize;
            rows.push(json!({ "perturbations": strings(d.perturbations()), "family": fam, "flat": flat }));
        }
        return Ok(json!({ "count": count, "agreements": agree, "samples": rows }));
    }
    let pert = j.pert.as_deref().ok_or_else(|| CliError::Usage("deform needs --pert or --random".into()))?;
    let d = FirstOrderDeformation::parse(&split_list(&j.base), &split_list(pert), j.ring.nvars, base.field(), level)?;
    let verdict = is_family_first_order(&d, j.e0)?;
    let flat = flatness_direct(&d, flat_level)?;
    Ok(json!({
        "verdict": if verdict.is_family { "family" } else { "not a family" },
        "colon": verdict,
        "flatness": flat,
        "routes_agree": verdict.is_family == flat.flat,
    }))
}

/// Reads a job from JSON text.
pub fn parse_job(text: &str) -> Result<Job> {
    Ok(serde_json::from_str(text)?)
}

/// Cutoff policy from an optional `n_default:n_max:window` string.
pub fn cutoff_policy(text: Option<&str>) -> Result<CutoffPolicy> {
    match text {
        Some(t) => Ok(CutoffPolicy::parse(t)?),
        None => Ok(CutoffPolicy::default()),
    }
}
