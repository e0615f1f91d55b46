//! One function per manifest operation. Each returns a JSON result and,
//! for operations that verify something, whether the verification passed.

use std::collections::BTreeMap;
use std::path::Path;

use crlab_core::algebra::{parse_constant, rat_string, ExactMatrix, GR};
use crlab_core::cr::{
    abstract_characteristic_space, basis_for_pivots, characteristic_space, cr_basis, generic_pivot_columns,
    involutivity_check, levi_matrix, Covector, InvolutivityReport, LeviMatrix, Signature,
};
use crlab_core::det::run_trials;
use crlab_core::fbi::{
    axis_directions, circle_directions, cone_report, CrossCheck, Cutoff, DecayOptions, LeviContext, SampleInput,
};
use crlab_core::jet::{
    default_max_l, degenerate_degree, generic_ranks, hypotheses_at, quadric_linear_obstruction, rank_report,
    reflection_quotients, CrMap, HypothesisReport,
};
use crlab_core::normalize::{normalize_frame_with, ComplexMatrix, Tolerances};
use serde_json::{json, Value};

use crate::exact;
use crate::manifest::{DirectionSpec, FbiTask, TaskSpec};
use crate::resolve::{parse_var, ManifoldObj, Workspace};

pub struct TaskOutput {
    pub result: Value,
    /// `None` for operations that only compute.
    pub passed: Option<bool>,
}

fn computed(result: Value) -> TaskOutput {
    TaskOutput { result, passed: None }
}

/// Shared run parameters.
pub struct RunContext<'a> {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub base_dir: &'a Path,
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn run_task(ws: &Workspace, task: &TaskSpec, index: usize, ctx: &RunContext) -> Result<TaskOutput, String> {
    match task {
        TaskSpec::VerifyMap { map } => {
            let chk = ws.map(map)?.verify_into_target().map_err(err)?;
            Ok(TaskOutput { result: json!({ "residuals": exact::strings(&chk.residuals) }), passed: Some(chk.passed) })
        }
        TaskSpec::Rank { map, point, max_l } | TaskSpec::K0Order { map, point, max_l } => {
            let f = ws.map(map)?;
            let p = ws.map_point(map, point)?;
            let max_l = max_l.unwrap_or_else(|| default_max_l(f));
            let rep = rank_report(f, p, max_l).map_err(err)?;
            let levels: Vec<Value> =
                rep.levels.iter().map(|l| json!({ "l": l.l, "rank": l.rank, "grew": l.grew })).collect();
            Ok(computed(json!({
                "max_l": max_l,
                "target_dim": rep.target_dim,
                "ranks": rep.ranks(),
                "levels": levels,
                "order": rep.order,
            })))
        }
        TaskSpec::GenericRank { map, l } => {
            let ranks = generic_ranks(ws.map(map)?, *l).map_err(err)?;
            Ok(computed(json!({ "l": l, "ranks": ranks })))
        }
        TaskSpec::DegenerateDegree { map, point, k, search_budget } => {
            let f = ws.map(map)?;
            let p = ws.map_point(map, point)?;
            let seed = ctx.seed.wrapping_add(index as u64);
            let rep = degenerate_degree(f, p, *k, *search_budget, seed).map_err(err)?;
            let sequence = rep.sequence.as_ref().map(|s| {
                json!({
                    "tried": s.tried,
                    "found": s.found.iter().map(exact::point).collect::<Vec<_>>(),
                    "message": s.message(),
                })
            });
            Ok(computed(json!({
                "k": rep.k,
                "n": f.n(),
                "generic_ranks": rep.generic_ranks,
                "pointwise_ranks": rep.pointwise_ranks,
                "in_omega1": rep.in_omega1,
                "in_omega2": rep.in_omega2,
                "degree": rep.degree,
                "exceptional": rep.exceptional,
                "warning": rep.warning,
                "sequence": sequence,
            })))
        }
        TaskSpec::Levi { manifold, point, sigma } => levi(ws, manifold, point, sigma.as_ref()),
        TaskSpec::Involutivity { manifold, point } => involutivity(ws, manifold, point.as_deref()),
        TaskSpec::Hypotheses { map, points } => {
            let f = ws.map(map)?;
            let mut out = Vec::new();
            let mut all = true;
            for name in points {
                let h = hypotheses_at(f, ws.map_point(map, name)?).map_err(err)?;
                all &= h.all_pass();
                out.push(hypotheses_json(name, &h));
            }
            Ok(TaskOutput { result: json!({ "points": out }), passed: Some(all) })
        }
        TaskSpec::Reflection { map, point, l } => {
            let f = ws.map(map)?;
            let rep = reflection_quotients(f, ws.map_point(map, point)?, *l).map_err(err)?;
            let quotients: Vec<Value> = rep
                .quotients
                .iter()
                .map(|q| json!({ "j": q.j, "i": q.i, "numerator": q.numerator.to_string(), "value": q.value.to_string() }))
                .collect();
            Ok(TaskOutput {
                result: json!({
                    "l": l,
                    "frame": rep.frame,
                    "columns": rep.columns,
                    "denominator": rep.denominator.to_string(),
                    "quotients": quotients,
                    "cr_verified": rep.cr_verified,
                    "reconstruction_verified": rep.reconstruction_verified,
                    "rank_l": rep.rank_l,
                    "generic_rank_next": rep.generic_rank_next,
                }),
                passed: Some(rep.cr_verified && rep.reconstruction_verified),
            })
        }
        TaskSpec::Normalize { map, point, l } => normalize(ws, map, point, *l, ctx.tolerances),
        TaskSpec::Obstruction { n, n_target, lambda, a } => {
            let lam = parse_constant(lambda).map_err(err)?;
            if !lam.is_real() {
                return Err(format!("lambda `{lambda}` is not real"));
            }
            let rows = a
                .iter()
                .map(|row| row.iter().map(|t| parse_constant(t).map_err(err)).collect::<Result<Vec<GR>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let m = if rows.is_empty() { ExactMatrix::zeros(0, 0) } else { ExactMatrix::from_rows(rows).map_err(err)? };
            let rep = quadric_linear_obstruction(*n, *n_target, &lam.re, &m).map_err(err)?;
            Ok(computed(json!({
                "lambda": rat_string(&lam.re),
                "feasible": rep.feasible,
                "rank_obstructed": rep.rank_obstructed,
                "residual": exact::matrix(&rep.residual),
            })))
        }
        TaskSpec::VerifyIdentities { dims, trials, seed } => {
            let (lo, hi) = dims.bounds()?;
            if lo < 3 {
                return Err(format!("identity trials need dimension at least 3, got {lo}"));
            }
            let seed = seed.unwrap_or(ctx.seed);
            let tallies = run_trials(lo..=hi, *trials, seed);
            let all_equal = tallies.iter().all(|t| t.failures() == 0);
            let per_dim: Vec<Value> = tallies
                .iter()
                .map(|t| {
                    json!({
                        "dim": t.dim,
                        "trials": t.trials,
                        "lemma44_checks": t.lemma44_checks,
                        "lemma44_failures": t.lemma44_failures,
                        "lemma45_failures": t.lemma45_failures,
                        "lemma45_zero_corner": t.lemma45_zero_corner,
                        "lemma46_failures": t.lemma46_failures,
                        "lemma47_failures": t.lemma47_failures,
                        "singular_cases": t.singular_cases,
                        "all_equal": t.failures() == 0,
                    })
                })
                .collect();
            Ok(TaskOutput {
                result: json!({ "dims": [lo, hi], "trials": trials, "seed": seed, "tallies": per_dim, "all_equal": all_equal }),
                passed: Some(all_equal),
            })
        }
        TaskSpec::Fbi(f) => fbi(ws, f, ctx),
    }
}

fn signature_json(s: Signature) -> Value {
    json!({ "pos": s.pos, "neg": s.neg, "zero": s.zero })
}

fn levi_json(sigma: &Covector, h: &LeviMatrix) -> Value {
    let s = h.signature();
    json!({
        "sigma": sigma.to_string(),
        "matrix": exact::matrix(&h.matrix),
        "hermitian": h.is_hermitian(),
        "signature": signature_json(s),
        "negated_signature": signature_json(s.swapped()),
    })
}

fn covector_from(spec: &BTreeMap<String, String>) -> Result<Covector, String> {
    let mut pairs = Vec::new();
    for (name, value) in spec {
        let v = parse_var(name).ok_or_else(|| format!("`{name}` is not a coordinate name"))?;
        pairs.push((v, parse_constant(value).map_err(err)?));
    }
    Covector::new(pairs).map_err(err)
}

fn levi(ws: &Workspace, manifold: &str, point: &str, sigma: Option<&BTreeMap<String, String>>) -> Result<TaskOutput, String> {
    let p = ws.point_on(manifold, point)?;
    let (fields, basis) = match ws.manifolds.get(manifold).ok_or_else(|| format!("unknown manifold `{manifold}`"))? {
        ManifoldObj::Embedded(m) => (cr_basis(m, p).map_err(err)?, characteristic_space(m, p).map_err(err)?),
        ManifoldObj::Abstract(s) => (s.fields().to_vec(), abstract_characteristic_space(s, p).map_err(err)?),
    };
    let sigmas = match sigma {
        Some(spec) => vec![covector_from(spec)?],
        None => basis,
    };
    let forms = sigmas
        .iter()
        .map(|s| levi_matrix(&fields, p, s).map(|h| levi_json(s, &h)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    Ok(computed(json!({ "basis": exact::strings(&fields), "forms": forms })))
}

fn involutivity(ws: &Workspace, manifold: &str, point: Option<&str>) -> Result<TaskOutput, String> {
    let fields = match ws.manifolds.get(manifold).ok_or_else(|| format!("unknown manifold `{manifold}`"))? {
        ManifoldObj::Embedded(m) => match point {
            Some(name) => cr_basis(m, ws.point_on(manifold, name)?).map_err(err)?,
            None => basis_for_pivots(m, &generic_pivot_columns(m).map_err(err)?).map_err(err)?,
        },
        ManifoldObj::Abstract(s) => s.fields().to_vec(),
    };
    let InvolutivityReport { involutive, witness } = involutivity_check(&fields);
    let witness = witness.map(|(i, j, c)| json!({ "i": i, "j": j, "commutator": c.to_string() }));
    Ok(computed(json!({ "basis": exact::strings(&fields), "involutive": involutive, "witness": witness })))
}

fn hypotheses_json(name: &str, h: &HypothesisReport) -> Value {
    let levi: Vec<Value> =
        h.source_levi.iter().map(|(a, b)| json!({ "plus": signature_json(*a), "minus": signature_json(*b) })).collect();
    json!({
        "point": name,
        "source_levi": levi,
        "source_levi_nonzero": h.source_levi_nonzero,
        "target_signature": h.target_signature.map(signature_json),
        "target_strongly_pseudoconvex": h.target_strongly_pseudoconvex,
        "df_rank": h.df_rank,
        "df_injective": h.df_injective,
        "rank0": h.rank0,
        "rank1": h.rank1,
        "lemma41": h.lemma41,
        "all_pass": h.all_pass(),
    })
}

fn normalize(ws: &Workspace, map: &str, point: &str, l: u32, tol: Tolerances) -> Result<TaskOutput, String> {
    let f: &CrMap = ws.map(map)?;
    let r = normalize_frame_with(f, ws.map_point(map, point)?, l, tol).map_err(err)?;
    let cm = |m: &ComplexMatrix| exact::complex_matrix(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    Ok(TaskOutput {
        result: json!({
            "l": l,
            "a": cm(&r.a),
            "a_exact": exact::matrix(&r.a_exact()),
            "frame": r.frame,
            "extension": r.extension,
            "jet": cm(&r.jet),
            "transformed": cm(&r.transformed),
            "unitarity_residual": r.unitarity_residual,
            "zero_block_residual": r.zero_block_residual,
            "base_residual": r.base_residual,
            "sigma_min_b": r.sigma_min_b,
            "cond_b": r.cond_b,
            "transformation_law_residual": r.transformation_law_residual,
            "exact_rank": r.exact_rank,
            "float_rank": r.float_rank,
            "tolerances": {
                "unitarity": r.tolerances.unitarity,
                "zero_block": r.tolerances.zero_block,
                "invertibility": r.tolerances.invertibility,
                "transformation_law": r.tolerances.transformation_law,
            },
            "violations": r.violations(),
        }),
        passed: Some(r.passed()),
    })
}

/// The largest cutoff radius whose support (radius `√2 r`) stays inside the grid, shrunk by 5%.
fn default_cutoff_radius(input: &SampleInput, center: &[f64]) -> f64 {
    let room = input
        .axes()
        .iter()
        .zip(center)
        .map(|(a, c)| (c - a.min).min(a.max - c))
        .fold(f64::INFINITY, f64::min);
    0.95 * room / std::f64::consts::SQRT_2
}

fn fbi(ws: &Workspace, f: &FbiTask, ctx: &RunContext) -> Result<TaskOutput, String> {
    let input = match (&f.input, &f.input_file) {
        (Some(i), None) => i.clone(),
        (None, Some(path)) => {
            let full = ctx.base_dir.join(path);
            let text = std::fs::read_to_string(&full).map_err(|e| format!("cannot read {}: {e}", full.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("sample file {}: {e}", full.display()))?
        }
        _ => return Err("give exactly one of `input` or `input_file`".into()),
    };
    let u = input.build().map_err(err)?;
    let center = f.cutoff.as_ref().and_then(|c| c.center.clone()).unwrap_or_else(|| f.probe.clone());
    let r = f.cutoff.as_ref().and_then(|c| c.r).unwrap_or_else(|| default_cutoff_radius(&input, &center));
    let eta = Cutoff::new(center, r).map_err(err)?;
    let mut opts = DecayOptions::default();
    if let Some(s) = &f.scales {
        opts.scales = s.values()?;
    }
    if let Some(k) = f.k {
        opts.k = k;
    }
    if let Some(t) = f.thresholds {
        opts.thresholds = t;
    }
    let levi = match &f.levi {
        Some(l) => Some((ws.embedded(&l.manifold)?, ws.point_on(&l.manifold, &l.point)?)),
        None => None,
    };
    let levi_ctx = levi.map(|(manifold, point)| LeviContext { manifold, point });
    let directions = match &f.directions {
        DirectionSpec::Count(n) if u.dim() == 2 => circle_directions(*n),
        DirectionSpec::Count(_) => {
            return Err(format!("a direction count needs two-dimensional samples, these have {} axes", u.dim()))
        }
        DirectionSpec::List(v) => v.clone(),
        DirectionSpec::Named(s) if s == "axes" => axis_directions(u.dim()),
        DirectionSpec::Named(s) if s == "characteristic" => levi_ctx
            .as_ref()
            .ok_or("characteristic directions need a `levi` manifold and point")?
            .characteristic_directions()
            .map_err(err)?,
        DirectionSpec::Named(s) => return Err(format!("unknown direction set `{s}`")),
    };
    let rep = cone_report(&u, &eta, &f.probe, &directions, &opts, levi_ctx.as_ref()).map_err(err)?;
    let passed = match rep.cross_check {
        CrossCheck::NotApplicable => None,
        CrossCheck::Consistent => Some(true),
        CrossCheck::Inconsistent { .. } => Some(false),
    };
    let mut result = serde_json::to_value(&rep).map_err(err)?;
    if let Value::Object(m) = &mut result {
        m.insert("function".into(), Value::String(u.label().to_string()));
        m.insert("cutoff".into(), json!({ "center": eta.center, "r": eta.r }));
        m.insert("options".into(), serde_json::to_value(&opts).map_err(err)?);
        m.insert("pointed".into(), Value::Bool(rep.gamma.is_pointed()));
    }
    Ok(TaskOutput { result, passed })
}

