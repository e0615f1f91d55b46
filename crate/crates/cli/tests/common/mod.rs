#![allow(dead_code)]

use crlab::{run_manifest_text, RunOptions, RunOutcome};
use serde_json::{json, Value};

/// `-Im(l_N) + Σ sign_k |l_k|^{2m}` in the variable letter `l`.
pub fn hypersurface(l: char, signs: &[i64], m: u32) -> String {
    let dim = signs.len() + 1;
    let mut s = format!("-({l}{dim} - conj({l}{dim}))/(2*i)");
    for (k, sg) in signs.iter().enumerate() {
        s += &format!(" + {sg}*({l}{k}*conj({l}{k}))^{m}", k = k + 1);
    }
    s
}

pub fn embedded(l: char, dim: usize, defining: &[String]) -> Value {
    json!({ "coordinates": l.to_string(), "dim": dim, "defining": defining })
}

/// Runs a manifest value through its pretty-printed text, as a file would be.
pub fn run(manifest: &Value) -> RunOutcome {
    run_manifest_text(&serde_json::to_string_pretty(manifest).unwrap(), &RunOptions::default()).expect("manifest is valid")
}

pub fn task(outcome: &RunOutcome, i: usize) -> &Value {
    &outcome.report["tasks"][i]
}

pub fn result(outcome: &RunOutcome, i: usize) -> &Value {
    let t = task(outcome, i);
    assert!(t.get("result").is_some(), "task {i} has no result: {t}");
    &t["result"]
}

/// Example manifest: `H = (z1^m, z2)` into the Heisenberg hypersurface for
/// m = 1, 2, 3 with k0 tasks at the origin and at z1 = 1/2.
pub fn power_maps_manifest() -> Value {
    let mut manifolds = serde_json::Map::new();
    let mut maps = serde_json::Map::new();
    let mut points = serde_json::Map::new();
    let mut tasks = Vec::new();
    manifolds.insert("heis".into(), embedded('w', 2, &[hypersurface('w', &[1], 1)]));
    for m in 1..=3u32 {
        manifolds.insert(format!("m{m}"), embedded('z', 2, &[hypersurface('z', &[1], m)]));
        maps.insert(format!("H{m}"), json!({ "source": format!("m{m}"), "target": "heis", "components": [format!("z1^{m}"), "z2"] }));
        points.insert(format!("o{m}"), json!({ "manifold": format!("m{m}"), "coordinates": { "z1": "0", "z2": "0" } }));
        points.insert(format!("h{m}"), json!({ "manifold": format!("m{m}"), "graph": { "free": ["1/2"], "u": ["0"] } }));
        tasks.push(json!({ "op": "k0_order", "map": format!("H{m}"), "point": format!("o{m}"), "max_l": 4 }));
        tasks.push(json!({ "op": "k0_order", "map": format!("H{m}"), "point": format!("h{m}"), "max_l": 4 }));
    }
    json!({ "seed": 1, "manifolds": manifolds, "maps": maps, "points": points, "tasks": tasks })
}
