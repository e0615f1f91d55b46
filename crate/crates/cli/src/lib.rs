//! Manifest runner behind the `crlab` binary: parses a JSON manifest,
//! resolves its objects, runs its tasks and assembles a deterministic report.
//!
//! Exit statuses: 0 every task ran and passed; 1 some task failed or hit a
//! precondition error; 2 the manifest violates the schema; 3 internal error.

pub mod exact;
pub mod locate;
pub mod manifest;
pub mod resolve;
pub mod tasks;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use crlab_core::normalize::Tolerances;
use serde_json::{json, Map, Value};
use thiserror::Error;

use locate::Locator;
use manifest::Manifest;
use resolve::{ManifoldObj, Workspace};
use tasks::{run_task, RunContext};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("{message} at line {line} column {column}")]
    Located { message: String, line: usize, column: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("schema violation: {0}")]
    Schema(#[from] ManifestError),
    #[error("{0}")]
    Internal(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Schema(_) => ExitStatus::Schema.code(),
            RunError::Internal(_) => ExitStatus::Internal.code(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok,
    TaskFailed,
    Schema,
    Internal,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::TaskFailed => 1,
            ExitStatus::Schema => 2,
            ExitStatus::Internal => 3,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the manifest seed.
    pub seed: Option<u64>,
    /// Directory that relative sample paths resolve against.
    pub base_dir: PathBuf,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: Value,
    pub status: ExitStatus,
}

impl RunOutcome {
    /// Pretty-printed report with a trailing newline; byte-identical across
    /// runs of the same manifest and seed.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports are plain JSON values");
        s.push('\n');
        s
    }
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        // serde_json appends its own position; keep only the message.
        let message = message.split(" at line ").next().unwrap_or(&message).to_string();
        ManifestError::Located { message, line: e.line(), column: e.column() }
    })
}

pub fn run_manifest_text(text: &str, opts: &RunOptions) -> Result<RunOutcome, ManifestError> {
    let manifest = parse_manifest(text)?;
    run_manifest(&manifest, &Locator::new(text), opts)
}

pub fn run_manifest_file(path: &Path, seed: Option<u64>) -> Result<RunOutcome, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Internal(format!("cannot read {}: {e}", path.display())))?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(run_manifest_text(&text, &RunOptions { seed, base_dir })?)
}

fn tolerances(m: &Manifest) -> Tolerances {
    let d = Tolerances::default();
    let t = m.tolerances;
    Tolerances {
        unitarity: t.unitarity.unwrap_or(d.unitarity),
        zero_block: t.zero_block.unwrap_or(d.zero_block),
        invertibility: t.invertibility.unwrap_or(d.invertibility),
        transformation_law: t.transformation_law.unwrap_or(d.transformation_law),
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Parse-normalized objects; every polynomial string re-parses to the same value.
fn echo_objects(m: &Manifest, ws: &Workspace) -> Value {
    let mut manifolds = Map::new();
    for (name, obj) in &ws.manifolds {
        let v = match obj {
            ManifoldObj::Embedded(e) => json!({
                "coordinates": m.manifolds[name].coordinates,
                "dim": e.dim(),
                "codim": e.codim(),
                "cr_dim": e.cr_dim(),
                "graph_form": e.graph().is_some(),
                "defining": exact::strings(e.defining()),
            }),
            ManifoldObj::Abstract(s) => json!({
                "n": s.cr_dim(),
                "d": s.codim(),
                "fields": exact::strings(s.fields()),
            }),
        };
        manifolds.insert(name.clone(), v);
    }
    let maps: Map<String, Value> = ws
        .maps
        .iter()
        .map(|(name, (f, _))| {
            let spec = &m.maps[name];
            (
                name.clone(),
                json!({ "source": spec.source, "target": spec.target, "components": exact::strings(f.components()) }),
            )
        })
        .collect();
    let points: Map<String, Value> = ws
        .points
        .iter()
        .map(|(name, p)| (name.clone(), json!({ "manifold": p.manifold, "coordinates": exact::point(&p.point) })))
        .collect();
    json!({ "manifolds": manifolds, "maps": maps, "points": points })
}

pub fn run_manifest(m: &Manifest, locator: &Locator, opts: &RunOptions) -> Result<RunOutcome, ManifestError> {
    let seed = opts.seed.or(m.seed).unwrap_or(0);
    let ws = resolve::resolve(m, locator, seed)?;
    let ctx = RunContext { seed, tolerances: tolerances(m), base_dir: &opts.base_dir };
    let indexed: Vec<(usize, &manifest::TaskSpec)> = m.tasks.iter().enumerate().collect();
    // Tasks run concurrently; collection keeps manifest order.
    let outcomes = crlab_core::par::map_slice(&indexed, |(i, t)| {
        catch_unwind(AssertUnwindSafe(|| run_task(&ws, t, *i, &ctx))).map_err(panic_message)
    });
    let (mut ok, mut failed, mut internal) = (0usize, 0usize, 0usize);
    let mut entries = Vec::with_capacity(outcomes.len());
    for ((i, t), outcome) in indexed.iter().zip(outcomes) {
        let mut e = Map::new();
        e.insert("index".into(), json!(i));
        e.insert("op".into(), json!(t.op()));
        e.insert("inputs".into(), serde_json::to_value(t).unwrap_or(Value::Null));
        match outcome {
            Ok(Ok(out)) => {
                let status = if out.passed == Some(false) { "failed" } else { "ok" };
                if out.passed == Some(false) {
                    failed += 1;
                } else {
                    ok += 1;
                }
                e.insert("status".into(), json!(status));
                e.insert("passed".into(), json!(out.passed));
                e.insert("result".into(), out.result);
            }
            Ok(Err(msg)) => {
                failed += 1;
                e.insert("status".into(), json!("error"));
                e.insert("error".into(), json!(msg));
            }
            Err(msg) => {
                internal += 1;
                e.insert("status".into(), json!("internal_error"));
                e.insert("error".into(), json!(msg));
            }
        }
        entries.push(Value::Object(e));
    }
    let status = if internal > 0 {
        ExitStatus::Internal
    } else if failed > 0 {
        ExitStatus::TaskFailed
    } else {
        ExitStatus::Ok
    };
    let report = json!({
        "provenance": {
            "tool": "crlab",
            "version": env!("CARGO_PKG_VERSION"),
            "modules": { "crlab-core": crlab_core::VERSION },
            "seed": seed,
        },
        "objects": echo_objects(m, &ws),
        "tasks": entries,
        "summary": { "tasks": m.tasks.len(), "ok": ok, "failed": failed, "internal_errors": internal },
    });
    Ok(RunOutcome { report, status })
}
