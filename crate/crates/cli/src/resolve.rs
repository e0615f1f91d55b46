//! Turns a deserialized manifest into core objects. Every failure here is a
//! schema violation: malformed text, dangling references, ill-formed objects.

use std::collections::BTreeMap;

use crlab_core::algebra::{parse_constant, parse_poly_in, Family, ParseContext, ParseError, PointAssignment, Poly, RealFamily, Var, GR};
use crlab_core::cr::{AbstractCRStructure, EmbeddedManifold};
use crlab_core::jet::CrMap;
use crlab_core::sample::graph_point;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::locate::Locator;
use crate::manifest::{Coordinates, Manifest, ManifoldSpec, PointSpec, TaskSpec};
use crate::ManifestError;

#[derive(Clone, Debug)]
pub enum ManifoldObj {
    Embedded(EmbeddedManifold),
    Abstract(AbstractCRStructure),
}

#[derive(Clone, Debug)]
pub struct NamedPoint {
    pub manifold: String,
    pub point: PointAssignment,
}

/// Resolved objects, keyed by their manifest names.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub manifolds: BTreeMap<String, ManifoldObj>,
    pub maps: BTreeMap<String, (CrMap, String)>,
    pub points: BTreeMap<String, NamedPoint>,
}

impl Workspace {
    pub fn embedded(&self, name: &str) -> Result<&EmbeddedManifold, String> {
        match self.manifolds.get(name) {
            Some(ManifoldObj::Embedded(m)) => Ok(m),
            Some(ManifoldObj::Abstract(_)) => Err(format!("manifold `{name}` is abstract; an embedded manifold is required")),
            None => Err(format!("unknown manifold `{name}`")),
        }
    }

    pub fn map(&self, name: &str) -> Result<&CrMap, String> {
        self.maps.get(name).map(|(m, _)| m).ok_or_else(|| format!("unknown map `{name}`"))
    }

    /// A point declared on the source manifold of map `map`.
    pub fn map_point(&self, map: &str, point: &str) -> Result<&PointAssignment, String> {
        let (_, source) = self.maps.get(map).ok_or_else(|| format!("unknown map `{map}`"))?;
        self.point_on(source, point)
    }

    pub fn point_on(&self, manifold: &str, point: &str) -> Result<&PointAssignment, String> {
        let p = self.points.get(point).ok_or_else(|| format!("unknown point `{point}`"))?;
        if p.manifold != manifold {
            return Err(format!("point `{point}` is declared on `{}`, not on `{manifold}`", p.manifold));
        }
        Ok(&p.point)
    }
}

struct Resolver<'a> {
    locator: &'a Locator,
}

impl Resolver<'_> {
    fn parse_error(&self, what: &str, text: &str, e: ParseError) -> ManifestError {
        match self.locator.locate(text, e.position) {
            Some((line, column)) => ManifestError::Located { message: format!("{what}: {}", e.kind), line, column },
            None => ManifestError::Invalid(format!("{what}: {e} in `{text}`")),
        }
    }

    fn poly(&self, what: &str, text: &str, ctx: &ParseContext) -> Result<Poly, ManifestError> {
        parse_poly_in(text, ctx).map_err(|e| self.parse_error(what, text, e))
    }

    fn constant(&self, what: &str, text: &str) -> Result<GR, ManifestError> {
        parse_constant(text).map_err(|e| self.parse_error(what, text, e))
    }
}

fn invalid(msg: impl Into<String>) -> ManifestError {
    ManifestError::Invalid(msg.into())
}

/// A coordinate name such as `z2`, `w1` or `s1`.
pub fn parse_var(name: &str) -> Option<Var> {
    let p = crlab_core::algebra::parse_poly(name).ok()?;
    let (m, c) = p.leading()?;
    match (p.len(), m.pairs(), c == &GR::from(1)) {
        (1, [(v, 1)], true) if !matches!(v, Var::Anti(..)) => Some(*v),
        _ => None,
    }
}

fn family_of(c: Coordinates) -> Family {
    match c {
        Coordinates::Z => Family::Z,
        Coordinates::W => Family::W,
    }
}

fn manifold(r: &Resolver, name: &str, spec: &ManifoldSpec, m: &Manifest) -> Result<ManifoldObj, ManifestError> {
    match (&spec.defining, &spec.abstract_structure) {
        (Some(defining), None) => {
            let dim = spec.dim.ok_or_else(|| invalid(format!("manifold `{name}` needs `dim`")))?;
            let declared = m.variables.and_then(|v| match spec.coordinates {
                Coordinates::Z => v.source_dim,
                Coordinates::W => v.target_dim,
            });
            if let Some(d) = declared.filter(|&d| d != dim) {
                return Err(invalid(format!("manifold `{name}` has dim {dim} but the declared variables give {d}")));
            }
            let ctx = match spec.coordinates {
                Coordinates::Z => ParseContext { z_dim: Some(dim), w_dim: Some(0), s_dim: Some(0), real: Some(vec![]) },
                Coordinates::W => ParseContext { z_dim: Some(0), w_dim: Some(dim), s_dim: Some(0), real: Some(vec![]) },
            };
            let polys = defining
                .iter()
                .map(|t| r.poly(&format!("manifold `{name}`"), t, &ctx))
                .collect::<Result<Vec<_>, _>>()?;
            EmbeddedManifold::new(family_of(spec.coordinates), dim, polys)
                .map(ManifoldObj::Embedded)
                .map_err(|e| invalid(format!("manifold `{name}`: {e}")))
        }
        (None, Some(a)) => {
            if spec.dim.is_some() || spec.coordinates != Coordinates::Z {
                return Err(invalid(format!("abstract manifold `{name}` takes no `dim` or `coordinates`")));
            }
            let ctx = ParseContext {
                z_dim: Some(a.n as u16),
                w_dim: Some(0),
                s_dim: Some(a.d as u16),
                real: Some(vec![RealFamily::S]),
            };
            let grid = |rows: &[Vec<String>]| -> Result<Vec<Vec<Poly>>, ManifestError> {
                rows.iter()
                    .map(|row| row.iter().map(|t| r.poly(&format!("manifold `{name}`"), t, &ctx)).collect())
                    .collect()
            };
            AbstractCRStructure::new(a.n, a.d, grid(&a.a)?, grid(&a.b)?)
                .map(ManifoldObj::Abstract)
                .map_err(|e| invalid(format!("manifold `{name}`: {e}")))
        }
        _ => Err(invalid(format!("manifold `{name}` needs exactly one of `defining` or `abstract`"))),
    }
}

/// Seed of a random point: the run seed mixed with an FNV-1a hash of its name.
fn point_seed(seed: u64, name: &str) -> u64 {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
    seed ^ h
}

fn point(r: &Resolver, name: &str, spec: &PointSpec, ws: &Workspace, seed: u64) -> Result<PointAssignment, ManifestError> {
    let what = format!("point `{name}`");
    let obj = ws.manifolds.get(&spec.manifold).ok_or_else(|| invalid(format!("{what} names unknown manifold `{}`", spec.manifold)))?;
    let forms = [spec.coordinates.is_some(), spec.graph.is_some(), spec.random.is_some()];
    if forms.iter().filter(|&&b| b).count() != 1 {
        return Err(invalid(format!("{what} needs exactly one of `coordinates`, `graph` or `random`")));
    }
    let embedded = match obj {
        ManifoldObj::Embedded(m) => Some(m),
        ManifoldObj::Abstract(_) => None,
    };
    if let Some(coords) = &spec.coordinates {
        let mut p = PointAssignment::new();
        for (var, value) in coords {
            let v = parse_var(var).ok_or_else(|| invalid(format!("{what}: `{var}` is not a coordinate name")))?;
            let admissible = match (obj, v) {
                (ManifoldObj::Embedded(m), Var::Holo(f, k)) => f == m.family() && usize::from(k) <= m.dim(),
                (ManifoldObj::Abstract(s), Var::Holo(Family::Z, k)) => usize::from(k) <= s.cr_dim(),
                (ManifoldObj::Abstract(s), Var::Real(RealFamily::S, k)) => usize::from(k) <= s.codim(),
                _ => false,
            };
            if !admissible {
                return Err(invalid(format!("{what}: `{var}` is not a coordinate of manifold `{}`", spec.manifold)));
            }
            let x = r.constant(&what, value)?;
            p.set(v, x).map_err(|e| invalid(format!("{what}: {e}")))?;
        }
        return Ok(p);
    }
    let m = embedded.ok_or_else(|| invalid(format!("{what}: graph and random points need an embedded manifold")))?;
    if let Some(g) = &spec.graph {
        let free = g.free.iter().map(|t| r.constant(&what, t)).collect::<Result<Vec<_>, _>>()?;
        let mut u = Vec::new();
        for t in &g.u {
            let x = r.constant(&what, t)?;
            if !x.is_real() {
                return Err(invalid(format!("{what}: real part `{t}` is not real")));
            }
            u.push(x.re);
        }
        return m.point_from_graph(&free, &u).map_err(|e| invalid(format!("{what}: {e}")));
    }
    let rp = spec.random.unwrap_or_default();
    if rp.num < 0 || rp.den < 1 {
        return Err(invalid(format!("{what}: random bounds need num >= 0 and den >= 1")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(seed, name));
    graph_point(m, &mut rng, rp.num, rp.den).map_err(|e| invalid(format!("{what}: {e}")))
}

fn check_references(m: &Manifest, ws: &Workspace) -> Result<(), ManifestError> {
    for (i, t) in m.tasks.iter().enumerate() {
        let at = |msg: String| invalid(format!("task {i} ({}): {msg}", t.op()));
        let map_point = |map: &str, point: &str| ws.map_point(map, point).map(|_| ()).map_err(at);
        match t {
            TaskSpec::VerifyMap { map } | TaskSpec::GenericRank { map, .. } => ws.map(map).map(|_| ()).map_err(at)?,
            TaskSpec::Rank { map, point, .. }
            | TaskSpec::K0Order { map, point, .. }
            | TaskSpec::DegenerateDegree { map, point, .. }
            | TaskSpec::Reflection { map, point, .. }
            | TaskSpec::Normalize { map, point, .. } => map_point(map, point)?,
            TaskSpec::Hypotheses { map, points } => {
                for p in points {
                    map_point(map, p)?;
                }
            }
            TaskSpec::Levi { manifold, point, .. } => {
                if !ws.manifolds.contains_key(manifold) {
                    return Err(at(format!("unknown manifold `{manifold}`")));
                }
                ws.point_on(manifold, point).map_err(at)?;
            }
            TaskSpec::Involutivity { manifold, point } => {
                if !ws.manifolds.contains_key(manifold) {
                    return Err(at(format!("unknown manifold `{manifold}`")));
                }
                if let Some(p) = point {
                    ws.point_on(manifold, p).map_err(at)?;
                }
            }
            TaskSpec::Fbi(f) => {
                if let Some(l) = &f.levi {
                    ws.embedded(&l.manifold).map_err(at)?;
                    ws.point_on(&l.manifold, &l.point).map_err(at)?;
                }
                if f.input.is_some() == f.input_file.is_some() {
                    return Err(at("give exactly one of `input` or `input_file`".into()));
                }
            }
            TaskSpec::Obstruction { .. } | TaskSpec::VerifyIdentities { .. } => {}
        }
    }
    Ok(())
}

pub fn resolve(m: &Manifest, locator: &Locator, seed: u64) -> Result<Workspace, ManifestError> {
    let r = Resolver { locator };
    let mut ws = Workspace::default();
    for (name, spec) in &m.manifolds {
        let obj = manifold(&r, name, spec, m)?;
        ws.manifolds.insert(name.clone(), obj);
    }
    for (name, spec) in &m.maps {
        let what = format!("map `{name}`");
        let src = ws.embedded(&spec.source).map_err(|e| invalid(format!("{what}: {e}")))?;
        let tgt = ws.embedded(&spec.target).map_err(|e| invalid(format!("{what}: {e}")))?;
        let ctx = ParseContext { z_dim: Some(src.dim() as u16), w_dim: Some(0), s_dim: Some(0), real: Some(vec![]) };
        let comps = spec.components.iter().map(|t| r.poly(&what, t, &ctx)).collect::<Result<Vec<_>, _>>()?;
        let map = CrMap::new(src.clone(), tgt.clone(), comps).map_err(|e| invalid(format!("{what}: {e}")))?;
        ws.maps.insert(name.clone(), (map, spec.source.clone()));
    }
    for (name, spec) in &m.points {
        let p = point(&r, name, spec, &ws, seed)?;
        ws.points.insert(name.clone(), NamedPoint { manifold: spec.manifold.clone(), point: p });
    }
    check_references(m, &ws)?;
    Ok(ws)
}
