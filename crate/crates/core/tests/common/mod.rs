#![allow(dead_code)]

use crlab_core::algebra::{parse_poly, ExactMatrix, Family, PointAssignment, GR};
use crlab_core::cr::EmbeddedManifold;
use crlab_core::jet::CrMap;
use crlab_core::sample::graph_point;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

/// `{Im z_{n+1} = Σ ε_k |z_k|^{2m}}` written as `-Im z_{n+1} + …`.
pub fn hypersurface(fam: Family, signs: &[i64], m: u32) -> EmbeddedManifold {
    let l = if fam == Family::Z { 'z' } else { 'w' };
    let dim = signs.len() + 1;
    let mut s = format!("-({l}{dim}-conj({l}{dim}))/(2*i)");
    for (k, sg) in signs.iter().enumerate() {
        s += &format!(" + {sg}*({l}{}*conj({l}{}))^{m}", k + 1, k + 1);
    }
    EmbeddedManifold::new(fam, dim as u16, vec![parse_poly(&s).unwrap()]).unwrap()
}

pub fn sphere(fam: Family, n: usize) -> EmbeddedManifold {
    hypersurface(fam, &vec![1; n], 1)
}

pub fn map(src: EmbeddedManifold, tgt: EmbeddedManifold, comps: &[&str]) -> CrMap {
    CrMap::new(src, tgt, comps.iter().map(|c| parse_poly(c).unwrap()).collect()).unwrap()
}

pub fn power_map(m: u32) -> CrMap {
    map(hypersurface(Family::Z, &[1], m), sphere(Family::W, 1), &[&format!("z1^{m}"), "z2"])
}

pub fn reflection_example() -> CrMap {
    map(sphere(Family::Z, 1), sphere(Family::W, 2), &["3/5*z1", "4/5*z1", "z2"])
}

pub fn rotation_example() -> CrMap {
    map(sphere(Family::Z, 1), sphere(Family::W, 2), &["4/5*z1", "3/5*z1", "z2"])
}

pub fn degenerate_stand_in() -> CrMap {
    map(sphere(Family::Z, 1), hypersurface(Family::W, &[1, -1], 1), &["z1", "z1", "0"])
}

pub fn identity(n: usize) -> CrMap {
    let comps: Vec<String> = (1..=n + 1).map(|k| format!("z{k}")).collect();
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    map(sphere(Family::Z, n), sphere(Family::W, n), &refs)
}

pub fn origin(m: &EmbeddedManifold) -> PointAssignment {
    m.point_from_graph(&vec![GR::zero(); m.cr_dim()], &vec![BigRational::zero(); m.codim()]).unwrap()
}

pub fn random_point<R: Rng>(m: &EmbeddedManifold, rng: &mut R) -> PointAssignment {
    graph_point(m, rng, 5, 4).unwrap()
}

#[allow(unused_imports)]
pub use crlab_core::sample::{cayley_unitary, isometric_linear_map as random_isometric_map};

/// Block matrix `[[U, 0], [0, 1]]`.
pub fn with_unit_corner(u: &ExactMatrix) -> ExactMatrix {
    let n = u.rows() + 1;
    ExactMatrix::from_fn(n, n, |i, j| match (i < n - 1, j < n - 1) {
        (true, true) => u[(i, j)].clone(),
        (false, false) => GR::from(1),
        _ => GR::zero(),
    })
}
