//! Job descriptions. Every subcommand's arguments double as the JSON job payload.

use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};

/// Ambient ring `k[[x1..xN]]` and working level.
#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct Ring {
    /// Number of variables.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub nvars: usize,
    /// Coefficient field: Q or F<p>.
    #[arg(long, default_value = "Q")]
    #[serde(default = "default_field")]
    pub field: String,
    /// Truncation level n (computations modulo M^n); defaults to the cutoff policy.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
}

fn default_field() -> String {
    "Q".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct IdealJob {
    /// Comma-separated generators, e.g. "x1^3, x2^2 - x1*x3".
    #[arg(long)]
    pub ideal: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub ring: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct GammaJob {
    #[arg(long)]
    pub ideal: String,
    /// Second ideal X in `dim R/(I+X)`.
    #[arg(long)]
    pub other: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub ring: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct TowerJob {
    #[arg(long)]
    pub ideal: String,
    /// Multiplicity e0.
    #[arg(long)]
    pub e0: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub ring: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct AdmissibleJob {
    /// Embedding dimension.
    #[arg(long)]
    pub b: u64,
    #[arg(long)]
    pub e0: u64,
    /// Optional e1 to test against the range.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e1: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct StratumJob {
    #[arg(long)]
    pub ideal: String,
    /// Hilbert function table H^1(0), H^1(1), ...
    #[arg(long, value_delimiter = ',')]
    pub f: Vec<u64>,
    /// Stratum index r.
    #[arg(long)]
    pub r: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub ring: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SuperficialJob {
    #[arg(long)]
    pub ideal: String,
    /// Linear form L, e.g. "x1 + x2".
    #[arg(long)]
    pub form: String,
    #[arg(long)]
    pub e0: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub ring: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct CellsJob {
    #[arg(long)]
    pub ideal: String,
    #[arg(long)]
    pub e0: u64,
    /// 1-based indices of monomials of degree < e0.
    #[arg(long, value_delimiter = ',')]
    pub i: Vec<usize>,
    /// 1-based indices of monomials of degree e0.
    #[arg(long, value_delimiter = ',')]
    pub j: Vec<usize>,
    /// Index of the candidate linear form.
    #[arg(long)]
    pub q: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub ring: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct EnumerateJob {
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub nvars: usize,
    #[arg(long)]
    pub e0: u64,
    /// Level n.
    #[arg(long)]
    pub n: u32,
    /// Prime field size.
    #[arg(long)]
    pub q: u64,
    /// Restrict to one value of e1.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e1: Option<i64>,
    /// Work budget (elementary steps).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ParamJob {
    /// One branch per occurrence: comma-separated components in t, e.g. "t^2, t^3".
    #[arg(long = "branch", required = true)]
    pub branches: Vec<String>,
    /// Precision m (series in t modulo t^m); defaults to n * max order.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    /// Level n for the kernel ideal.
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value = "Q")]
    #[serde(default = "default_field")]
    pub field: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SemigroupJob {
    #[arg(long, value_delimiter = ',', required = true)]
    pub gens: Vec<u64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct NormflatJob {
    /// Fiber given by ideal generators (repeat per fiber).
    #[arg(long = "fiber")]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fibers: Vec<String>,
    /// Fiber given by a single-branch parametrization "t^.., t^.." (repeat per fiber).
    #[arg(long = "branch-fiber")]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branch_fibers: Vec<String>,
    /// Ideal family with parameter u, checked at the given samples.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Single-branch family with parameter u, checked at the given samples.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_family: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<i64>,
    /// Ambient dimension for ideal fibers.
    #[arg(long = "N")]
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    /// Precision for branch fibers.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    /// Level n.
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value = "Q")]
    #[serde(default = "default_field")]
    pub field: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct DeformJob {
    /// Base ideal generators.
    #[arg(long)]
    pub base: String,
    /// Perturbations g_i, one per base generator.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pert: Option<String>,
    #[arg(long)]
    pub e0: u64,
    /// Check this many seeded random perturbations instead of `--pert`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub ring: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ColonJob {
    #[arg(long)]
    pub ideal: String,
    /// Divisor ideal K.
    #[arg(long)]
    pub by: String,
    /// Colon level a (work modulo M^a).
    #[arg(long)]
    pub a: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub ring: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct DeterminantalJob {
    /// Matrix row, comma-separated entries (may contain eps); repeat per row.
    #[arg(long = "row", required = true)]
    pub rows: Vec<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ring: Ring,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct MpsJob {
    /// Class of the first nonempty level, e.g. "L^2 - 1".
    #[arg(long, allow_hyphen_values = true)]
    pub class0: String,
    #[arg(long)]
    pub n0: u32,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub nvars: u32,
    #[arg(long)]
    pub e0: u32,
    /// Number of expanded terms.
    #[arg(long, default_value_t = 10)]
    #[serde(default = "default_terms")]
    pub terms: usize,
}

fn default_terms() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct VolumeJob {
    /// Term "s:class" contributing class * L^-s; repeat per term.
    #[arg(long = "term", required = true, allow_hyphen_values = true)]
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SpecializeJob {
    #[arg(long, allow_hyphen_values = true)]
    pub class: String,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Job {
    /// Hilbert-Samuel function and (e0, e1).
    Hilbert(IdealJob),
    /// Initial ideal generators and the degree multiset v*.
    Initial(IdealJob),
    /// Whether the generators form a standard basis.
    Stdbasis(IdealJob),
    /// Minimal number of generators.
    Nu(IdealJob),
    /// Intersection number dim R/(I+X).
    Gamma(GammaJob),
    /// Truncation-set membership with a superficial certificate.
    Tn(TowerJob),
    /// Generator-degree shape of J* at level n.
    Shape(TowerJob),
    /// Low-degree initial generators J~.
    Jtilde(TowerJob),
    /// Admissible range [rho0, rho1] of e1.
    Admissible(AdmissibleJob),
    /// Hilbert-function stratum check.
    Stratum(StratumJob),
    /// Superficial / Cohen-Macaulay test for a given linear form.
    Superficial(SuperficialJob),
    /// Cell membership.
    Cells(CellsJob),
    /// Enumerate the truncation set over F_q.
    Enumerate(EnumerateJob),
    /// Kernel ideal, Hilbert data and delta of a parametrization.
    Param(ParamJob),
    /// Semigroup gaps, delta, conductor and Milnor number.
    Semigroup(SemigroupJob),
    /// Fiberwise Hilbert-function comparison.
    Normflat(NormflatJob),
    /// First-order deformation: colon criterion and direct flatness.
    Deform(DeformJob),
    /// Colon space (I + M^a : K) modulo M^a.
    Colon(ColonJob),
    /// Maximal minors of an a x (a-1) matrix.
    Determinantal(DeterminantalJob),
    /// Closed-form motivic series and its expansion.
    Mps(MpsJob),
    /// Partial volume sum with tail bound.
    Volume(VolumeJob),
    /// Point-count realization L -> q.
    Specialize(SpecializeJob),
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Hilbert(_) => "hilbert",
            Job::Initial(_) => "initial",
            Job::Stdbasis(_) => "stdbasis",
            Job::Nu(_) => "nu",
            Job::Gamma(_) => "gamma",
            Job::Tn(_) => "tn",
            Job::Shape(_) => "shape",
            Job::Jtilde(_) => "jtilde",
            Job::Admissible(_) => "admissible",
            Job::Stratum(_) => "stratum",
            Job::Superficial(_) => "superficial",
            Job::Cells(_) => "cells",
            Job::Enumerate(_) => "enumerate",
            Job::Param(_) => "param",
            Job::Semigroup(_) => "semigroup",
            Job::Normflat(_) => "normflat",
            Job::Deform(_) => "deform",
            Job::Colon(_) => "colon",
            Job::Determinantal(_) => "determinantal",
            Job::Mps(_) => "mps",
            Job::Volume(_) => "volume",
            Job::Specialize(_) => "specialize",
        }
    }
}
