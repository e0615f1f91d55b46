//! Serde model of the JSON manifest. Polynomials and exact constants are
//! strings in the polynomial grammar; everything numerical is plain JSON.

use std::collections::BTreeMap;

use crlab_core::fbi::{SampleInput, Thresholds};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Variables>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default)]
    pub manifolds: BTreeMap<String, ManifoldSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub points: BTreeMap<String, PointSpec>,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

/// Declared ambient dimensions; every `z` manifold must live in
/// `C^source_dim` and every `w` manifold in `C^target_dim`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variables {
    pub source_dim: Option<u16>,
    pub target_dim: Option<u16>,
}

/// Overrides of the normalization tolerances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitarity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_block: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invertibility: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transformation_law: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinates {
    #[default]
    Z,
    W,
}

/// Either an embedded manifold (`dim` and `defining`) or an abstract
/// structure (`abstract`); exactly one form must be given.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    #[serde(default)]
    pub coordinates: Coordinates,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u16>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defining: Option<Vec<String>>,
    #[serde(default, rename = "abstract", skip_serializing_if = "Option::is_none")]
    pub abstract_structure: Option<AbstractSpec>,
}

/// Fields `L_i = ∂/∂z̄_i + Σ a_ij ∂/∂z_j + Σ b_il ∂/∂s_l` on `C^n × R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractSpec {
    pub n: usize,
    pub d: usize,
    pub a: Vec<Vec<String>>,
    pub b: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub source: String,
    pub target: String,
    pub components: Vec<String>,
}

/// A named point; exactly one of `coordinates`, `graph`, `random`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub manifold: String,
    /// Variable name to exact constant, e.g. `{"z1": "1/2", "z2": "i/4"}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomPoint>,
}

/// Free coordinates and real parts of the dependent coordinates of a
/// graph-form manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphPoint {
    pub free: Vec<String>,
    pub u: Vec<String>,
}

/// Seeded random rational graph point with `|numerator| ≤ num`, denominators ≤ `den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomPoint {
    #[serde(default = "RandomPoint::default_num")]
    pub num: i64,
    #[serde(default = "RandomPoint::default_den")]
    pub den: i64,
}

impl RandomPoint {
    fn default_num() -> i64 {
        5
    }
    fn default_den() -> i64 {
        4
    }
}

impl Default for RandomPoint {
    fn default() -> Self {
        Self { num: Self::default_num(), den: Self::default_den() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
#[allow(clippy::large_enum_variant)] // a handful per manifest
pub enum TaskSpec {
    VerifyMap {
        map: String,
    },
    Rank {
        map: String,
        point: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_l: Option<u32>,
    },
    K0Order {
        map: String,
        point: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_l: Option<u32>,
    },
    GenericRank {
        map: String,
        l: u32,
    },
    DegenerateDegree {
        map: String,
        point: String,
        k: u32,
        #[serde(default)]
        search_budget: usize,
    },
    Levi {
        manifold: String,
        point: String,
        /// Explicit covector coefficients by holomorphic (or real) variable.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<BTreeMap<String, String>>,
    },
    Involutivity {
        manifold: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        point: Option<String>,
    },
    Hypotheses {
        map: String,
        points: Vec<String>,
    },
    Reflection {
        map: String,
        point: String,
        l: u32,
    },
    Normalize {
        map: String,
        point: String,
        l: u32,
    },
    Obstruction {
        n: usize,
        n_target: usize,
        lambda: String,
        a: Vec<Vec<String>>,
    },
    VerifyIdentities {
        dims: DimRange,
        trials: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Fbi(FbiTask),
}

impl TaskSpec {
    pub fn op(&self) -> &'static str {
        match self {
            TaskSpec::VerifyMap { .. } => "verify_map",
            TaskSpec::Rank { .. } => "rank",
            TaskSpec::K0Order { .. } => "k0_order",
            TaskSpec::GenericRank { .. } => "generic_rank",
            TaskSpec::DegenerateDegree { .. } => "degenerate_degree",
            TaskSpec::Levi { .. } => "levi",
            TaskSpec::Involutivity { .. } => "involutivity",
            TaskSpec::Hypotheses { .. } => "hypotheses",
            TaskSpec::Reflection { .. } => "reflection",
            TaskSpec::Normalize { .. } => "normalize",
            TaskSpec::Obstruction { .. } => "obstruction",
            TaskSpec::VerifyIdentities { .. } => "verify_identities",
            TaskSpec::Fbi(_) => "fbi",
        }
    }
}

/// `"3..6"` or `[3, 6]`, both inclusive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DimRange {
    Pair([usize; 2]),
    Text(String),
}

impl DimRange {
    pub fn bounds(&self) -> Result<(usize, usize), String> {
        let (lo, hi) = match self {
            DimRange::Pair([a, b]) => (*a, *b),
            DimRange::Text(s) => {
                let (a, b) = s.split_once("..").ok_or_else(|| format!("dimension range `{s}` is not of the form a..b"))?;
                let b = b.strip_prefix('=').unwrap_or(b);
                let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad dimension `{x}` in `{s}`"));
                (parse(a)?, parse(b)?)
            }
        };
        if lo > hi {
            return Err(format!("empty dimension range {lo}..{hi}"));
        }
        Ok((lo, hi))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FbiTask {
    /// Inline sample document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<SampleInput>,
    /// Sample document on disk, relative to the manifest's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_file: Option<String>,
    pub probe: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<CutoffSpec>,
    pub directions: DirectionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<ScaleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Thresholds>,
    /// Manifold and point for the Levi-form cross-check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levi: Option<LeviRef>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeviRef {
    pub manifold: String,
    pub point: String,
}

/// Evenly spaced unit circle directions (two-dimensional samples only),
/// an explicit list, or `"axes"` / `"characteristic"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectionSpec {
    Count(usize),
    List(Vec<Vec<f64>>),
    Named(String),
}

/// An explicit list, or `"a:b"` for the doubling sequence `a, 2a, …, b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScaleSpec {
    List(Vec<f64>),
    Text(String),
}

impl ScaleSpec {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            ScaleSpec::List(v) => Ok(v.clone()),
            ScaleSpec::Text(s) => parse_scale_range(s),
        }
    }
}

pub fn parse_scale_range(s: &str) -> Result<Vec<f64>, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("scale range `{s}` is not of the form a:b"))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad scale `{x}` in `{s}`"));
    let (a, b) = (parse(a)?, parse(b)?);
    if !(a > 0.0 && b >= a && b.is_finite()) {
        return Err(format!("scale range `{s}` must satisfy 0 < a <= b"));
    }
    let mut out = Vec::new();
    let mut x = a;
    while x <= b * (1.0 + 1e-12) {
        out.push(x);
        x *= 2.0;
    }
    Ok(out)
}
