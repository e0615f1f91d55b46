use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crlab::locate::Locator;
use crlab::manifest::{
    parse_scale_range, Coordinates, CutoffSpec, DimRange, DirectionSpec, FbiTask, Manifest, ManifoldSpec, MapSpec,
    PointSpec, RandomPoint, ScaleSpec, TaskSpec,
};
use crlab::{run_manifest, run_manifest_file, ExitStatus, RunError, RunOptions, RunOutcome};
use crlab_core::algebra::{parse_poly, Family, Var};

#[derive(Parser)]
#[command(name = "crlab", version, about = "Exact and numerical invariants of CR manifolds and CR maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a JSON manifest.
    Run {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Jet ranks rank_0..rank_L of a map at a point.
    Rank(MapArgs),
    /// Nondegeneracy order k0 of a map at a point.
    Nondegen(MapArgs),
    /// Unitary normalization of the jet frame at a point.
    Normalize {
        #[command(flatten)]
        map: MapArgs,
        /// Jet order of the frame.
        #[arg(long, default_value_t = 1)]
        l: u32,
    },
    /// Levi forms of a manifold at a point.
    Levi {
        /// Defining functions separated by `;`, in z or w variables.
        #[arg(long, allow_hyphen_values = true)]
        manifold: String,
        /// `z1=0,z2=1/2` or `random`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Covector coefficients, e.g. `z2=1/2`; defaults to a characteristic basis.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        #[arg(long)]
        dim: Option<u16>,
        #[command(flatten)]
        common: Common,
    },
    /// FBI decay classification of sampled data around a probe point.
    Fbi {
        /// Sample document: axes plus samples, or axes plus a generator.
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated probe coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        probe: Vec<f64>,
        /// A count of circle directions, or `axes`.
        #[arg(long, default_value = "64")]
        directions: String,
        /// Doubling range `a:b`.
        #[arg(long, default_value = "4:256")]
        scales: String,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        cutoff_radius: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized exact trials of the determinant identities.
    VerifyIdentities {
        /// Inclusive range `a..b`.
        #[arg(long, default_value = "3..6")]
        dims: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct MapArgs {
    /// Source defining functions in z, separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    source: String,
    /// Target defining functions in w, separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    target: String,
    /// Map components in z, separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    map: String,
    /// `z1=0,z2=1/2` or `random`.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long)]
    max_l: Option<u32>,
    #[arg(long)]
    source_dim: Option<u16>,
    #[arg(long)]
    target_dim: Option<u16>,
    #[command(flatten)]
    common: Common,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(';').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

/// Largest index of a `family` variable in the given texts; unparsable text is
/// left for the manifest runner to report.
fn infer_dim(texts: &[String], family: Family) -> u16 {
    texts
        .iter()
        .filter_map(|t| parse_poly(t).ok())
        .flat_map(|p| p.variables())
        .filter_map(|v| match v {
            Var::Holo(f, k) | Var::Anti(f, k) if f == family => Some(k),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

fn point_spec(manifold: &str, text: &str) -> Result<PointSpec, String> {
    if text.trim() == "random" {
        return Ok(PointSpec { manifold: manifold.into(), random: Some(RandomPoint::default()), ..Default::default() });
    }
    let mut coords = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("`{part}` is not of the form var=value"))?;
        coords.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(PointSpec { manifold: manifold.into(), coordinates: Some(coords), ..Default::default() })
}

fn map_manifest(a: &MapArgs, task: impl FnOnce(String, String) -> TaskSpec) -> Result<Manifest, String> {
    let source = split_list(&a.source);
    let target = split_list(&a.target);
    let comps = split_list(&a.map);
    let mut all_z = source.clone();
    all_z.extend(comps.iter().cloned());
    let n = a.source_dim.unwrap_or_else(|| infer_dim(&all_z, Family::Z));
    let nt = a.target_dim.unwrap_or_else(|| infer_dim(&target, Family::W).max(comps.len() as u16));
    let mut m = Manifest { seed: a.common.seed, ..Default::default() };
    let emb = |coordinates, dim, defining| ManifoldSpec { coordinates, dim: Some(dim), defining: Some(defining), abstract_structure: None };
    m.manifolds.insert("source".into(), emb(Coordinates::Z, n, source));
    m.manifolds.insert("target".into(), emb(Coordinates::W, nt, target));
    m.maps.insert("F".into(), MapSpec { source: "source".into(), target: "target".into(), components: comps });
    m.points.insert("p".into(), point_spec("source", &a.point)?);
    m.tasks.push(task("F".into(), "p".into()));
    Ok(m)
}

fn synthesize(cmd: &Command) -> Result<(Manifest, Option<PathBuf>), String> {
    Ok(match cmd {
        Command::Run { .. } => unreachable!("handled separately"),
        Command::Rank(a) => (map_manifest(a, |map, point| TaskSpec::Rank { map, point, max_l: a.max_l })?, a.common.out.clone()),
        Command::Nondegen(a) => {
            (map_manifest(a, |map, point| TaskSpec::K0Order { map, point, max_l: a.max_l })?, a.common.out.clone())
        }
        Command::Normalize { map: a, l } => {
            (map_manifest(a, |map, point| TaskSpec::Normalize { map, point, l: *l })?, a.common.out.clone())
        }
        Command::Levi { manifold, point, sigma, dim, common } => {
            let defining = split_list(manifold);
            let (coordinates, family) =
                if infer_dim(&defining, Family::W) > 0 { (Coordinates::W, Family::W) } else { (Coordinates::Z, Family::Z) };
            let dim = dim.unwrap_or_else(|| infer_dim(&defining, family));
            let mut m = Manifest { seed: common.seed, ..Default::default() };
            m.manifolds.insert(
                "M".into(),
                ManifoldSpec { coordinates, dim: Some(dim), defining: Some(defining), abstract_structure: None },
            );
            m.points.insert("p".into(), point_spec("M", point)?);
            let sigma = match sigma {
                Some(s) => Some(point_spec("M", s)?.coordinates.unwrap_or_default()),
                None => None,
            };
            m.tasks.push(TaskSpec::Levi { manifold: "M".into(), point: "p".into(), sigma });
            (m, common.out.clone())
        }
        Command::Fbi { input, probe, directions, scales, k, cutoff_radius, common } => {
            let directions = match directions.parse::<usize>() {
                Ok(n) => DirectionSpec::Count(n),
                Err(_) => DirectionSpec::Named(directions.clone()),
            };
            parse_scale_range(scales)?;
            let task = FbiTask {
                input: None,
                input_file: Some(input.to_string_lossy().into_owned()),
                probe: probe.clone(),
                cutoff: cutoff_radius.map(|r| CutoffSpec { center: None, r: Some(r) }),
                directions,
                scales: Some(ScaleSpec::Text(scales.clone())),
                k: *k,
                thresholds: None,
                levi: None,
            };
            let m = Manifest { seed: common.seed, tasks: vec![TaskSpec::Fbi(task)], ..Default::default() };
            (m, common.out.clone())
        }
        Command::VerifyIdentities { dims, trials, common } => {
            let task = TaskSpec::VerifyIdentities { dims: DimRange::Text(dims.clone()), trials: *trials, seed: common.seed };
            let m = Manifest { seed: common.seed, tasks: vec![task], ..Default::default() };
            (m, common.out.clone())
        }
    })
}

fn emit(outcome: &RunOutcome, out: Option<&PathBuf>) -> Result<(), String> {
    let text = outcome.to_json();
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| format!("cannot write report: {e}")),
    }
}

fn exit(status: ExitStatus) -> ExitCode {
    ExitCode::from(status.code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = match &cli.command {
        Command::Run { manifest, out, seed } => (run_manifest_file(manifest, *seed), out.clone()),
        cmd => match synthesize(cmd) {
            Ok((m, out)) => (run_manifest(&m, &Locator::default(), &RunOptions::default()).map_err(RunError::from), out),
            Err(msg) => {
                eprintln!("crlab: {msg}");
                return exit(ExitStatus::Schema);
            }
        },
    };
    match result {
        Ok(outcome) => match emit(&outcome, out.as_ref()) {
            Ok(()) => exit(outcome.status),
            Err(msg) => {
                eprintln!("crlab: {msg}");
                exit(ExitStatus::Internal)
            }
        },
        Err(e) => {
            eprintln!("crlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
