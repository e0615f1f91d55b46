//! WebAssembly entry points for the static page in `www/`. Each export takes
//! plain strings or numbers and returns a JSON document; the `*_json`
//! functions are the same computations without the wasm boundary.

use crlab_core::algebra::{parse_constant, parse_poly, Family, PointAssignment, Poly, Var};
use crlab_core::cr::{characteristic_space, cr_basis, levi_matrix, EmbeddedManifold};
use crlab_core::fbi::{decay_profile, Axis, Cutoff, DecayOptions, GeneratorSpec};
use crlab_core::jet::{k0_order, rank_report, CrMap};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn split(s: &str) -> Vec<&str> {
    s.split(';').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn polys(s: &str) -> Result<Vec<Poly>, String> {
    split(s).into_iter().map(|t| parse_poly(t).map_err(|e| format!("`{t}`: {e}"))).collect()
}

/// Largest index of a `family` variable occurring in `ps`.
fn dim_of(ps: &[Poly], family: Family) -> u16 {
    ps.iter()
        .flat_map(Poly::variables)
        .filter_map(|v| match v {
            Var::Holo(f, k) | Var::Anti(f, k) if f == family => Some(k),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// `z1=0, z2=1/2`: every name must be a single holomorphic coordinate.
fn point(s: &str) -> Result<PointAssignment, String> {
    let mut p = PointAssignment::new();
    for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| format!("`{part}` is not of the form var=value"))?;
        let vars = parse_poly(name.trim()).map_err(|e| e.to_string())?.variables();
        let var = match vars.into_iter().collect::<Vec<_>>()[..] {
            [v @ Var::Holo(..)] => v,
            _ => return Err(format!("`{}` is not a coordinate name", name.trim())),
        };
        let x = parse_constant(value.trim()).map_err(|e| format!("`{}`: {e}", value.trim()))?;
        p.set(var, x).map_err(|e| e.to_string())?;
    }
    Ok(p)
}

fn manifold(defining: Vec<Poly>, family: Family, dim: u16) -> Result<EmbeddedManifold, String> {
    EmbeddedManifold::new(family, dim, defining).map_err(|e| e.to_string())
}

pub fn jet_ranks_json(source: &str, target: &str, map: &str, at: &str, max_l: u32) -> Result<Value, String> {
    let (src, tgt, comps) = (polys(source)?, polys(target)?, polys(map)?);
    let n = dim_of(&src, Family::Z).max(dim_of(&comps, Family::Z));
    let nt = dim_of(&tgt, Family::W).max(comps.len() as u16);
    let f = CrMap::new(manifold(src, Family::Z, n)?, manifold(tgt, Family::W, nt)?, comps).map_err(|e| e.to_string())?;
    let p = point(at)?;
    let ranks = rank_report(&f, &p, max_l).map_err(|e| e.to_string())?.ranks();
    let k0 = k0_order(&f, &p, max_l).map_err(|e| e.to_string())?;
    Ok(json!({ "ranks": ranks, "k0": k0, "target_dim": nt }))
}

pub fn levi_signature_json(defining: &str, at: &str) -> Result<Value, String> {
    let ps = polys(defining)?;
    let family = if dim_of(&ps, Family::W) > 0 { Family::W } else { Family::Z };
    let m = manifold(ps.clone(), family, dim_of(&ps, family))?;
    let p = point(at)?;
    let fields = cr_basis(&m, &p).map_err(|e| e.to_string())?;
    let forms = characteristic_space(&m, &p)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|sigma| {
            let h = levi_matrix(&fields, &p, sigma).map_err(|e| e.to_string())?;
            let s = h.signature();
            let rows: Vec<Vec<String>> = h.matrix.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            Ok(json!({ "covector": sigma.to_string(), "matrix": rows, "pos": s.pos, "neg": s.neg, "zero": s.zero }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(json!({ "basis": fields.iter().map(|f| f.to_string()).collect::<Vec<_>>(), "forms": forms }))
}

/// Decay profile at the origin of a planar test function along the unit
/// direction at `angle` radians, on a 201×201 grid over `[-1, 1]²`.
pub fn fbi_profile_json(function: &str, angle: f64) -> Result<Value, String> {
    let spec = match function {
        "bump" => GeneratorSpec::Bump { center: vec![0.1, -0.05], radius: 0.5 },
        "gaussian" => GeneratorSpec::Gaussian { center: vec![0.0, 0.0], width: 0.3 },
        "heaviside" => GeneratorSpec::Heaviside { axis: 1, offset: 0.0 },
        other => return Err(format!("unknown function `{other}`; expected bump, gaussian or heaviside")),
    };
    let axes = vec![Axis::symmetric(1.0, 0.01).map_err(|e| e.to_string())?; 2];
    let u = spec.sample(axes).map_err(|e| e.to_string())?;
    let eta = Cutoff::new(vec![0.0, 0.0], 0.6).map_err(|e| e.to_string())?;
    let opts = DecayOptions { scales: vec![4.0, 8.0, 16.0, 32.0, 64.0, 128.0], ..DecayOptions::default() };
    let d = [angle.cos(), angle.sin()];
    let prof = decay_profile(&u, &eta, &[0.0, 0.0], &d, &opts).map_err(|e| e.to_string())?;
    Ok(json!({
        "direction": prof.direction,
        "scales": prof.scales,
        "magnitudes": prof.magnitudes,
        "normalized": prof.normalized,
        "classification": prof.classification.to_string(),
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// `rank_0..rank_maxL` and the nondegeneracy order of a map at a point.
#[wasm_bindgen]
pub fn jet_ranks(source: &str, target: &str, map: &str, point: &str, max_l: u32) -> Result<String, JsError> {
    to_js(jet_ranks_json(source, target, map, point, max_l))
}

/// Levi matrices and inertia for each characteristic covector.
#[wasm_bindgen]
pub fn levi_signature(defining: &str, point: &str) -> Result<String, JsError> {
    to_js(levi_signature_json(defining, point))
}

#[wasm_bindgen]
pub fn fbi_profile(function: &str, angle: f64) -> Result<String, JsError> {
    to_js(fbi_profile_json(function, angle))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEIS_Z: &str = "-(z2 - conj(z2))/(2*i) + z1*conj(z1)";
    const HEIS_W: &str = "-(w2 - conj(w2))/(2*i) + w1*conj(w1)";

    #[test]
    fn ranks_of_the_squared_map() {
        let src = "-(z2 - conj(z2))/(2*i) + (z1*conj(z1))^2";
        let r = jet_ranks_json(src, HEIS_W, "z1^2; z2", "z1=0, z2=0", 3).unwrap();
        assert_eq!(r["ranks"], json!([1, 1, 2, 2]));
        assert_eq!(r["k0"], json!(2));
    }

    #[test]
    fn heisenberg_levi_form() {
        let r = levi_signature_json(HEIS_Z, "z1=0,z2=0").unwrap();
        assert_eq!(r["forms"][0]["matrix"], json!([["1/4"]]));
        assert_eq!((r["forms"][0]["pos"].clone(), r["forms"][0]["neg"].clone()), (json!(1), json!(0)));
    }

    #[test]
    fn heaviside_is_slow_across_the_jump() {
        let across = fbi_profile_json("heaviside", std::f64::consts::FRAC_PI_2).unwrap();
        let along = fbi_profile_json("heaviside", 0.0).unwrap();
        assert_eq!(across["classification"], json!("slow/no-decay"));
        assert_eq!(along["classification"], json!("rapid-decay"));
        assert_eq!(fbi_profile_json("bump", 1.0).unwrap()["classification"], json!("rapid-decay"));
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(point("z1").is_err());
        assert!(point("q=1").is_err());
        assert!(fbi_profile_json("cosine", 0.0).is_err());
        assert!(levi_signature_json("z1 +", "z1=0").is_err());
    }
}
