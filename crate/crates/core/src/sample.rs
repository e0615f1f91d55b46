//! Seeded random exact values and on-manifold points.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::algebra::{ExactMatrix, Family, PointAssignment, Poly, Var, GR};
use crate::cr::{CrError, EmbeddedManifold};
use crate::jet::CrMap;

/// Uniform rational `a/b` with `|a| ≤ num` and `1 ≤ b ≤ den`.
pub fn rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-num..=num)), BigInt::from(rng.gen_range(1..=den)))
}

pub fn gaussian<R: Rng>(rng: &mut R, num: i64, den: i64) -> GR {
    GR::new(rational(rng, num, den), rational(rng, num, den))
}

/// Small random integer matrix entries in `[-bound, bound]`, optionally complex.
pub fn int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64, complex: bool) -> ExactMatrix {
    ExactMatrix::from_fn(rows, cols, |_, _| {
        let im = if complex { rng.gen_range(-bound..=bound) } else { 0 };
        GR::from_ints(rng.gen_range(-bound..=bound), im)
    })
}

/// A random rational point of a graph-form manifold: free coordinates and
/// real parts uniform with `|numerator| ≤ num`, denominators ≤ `den`.
pub fn graph_point<R: Rng>(m: &EmbeddedManifold, rng: &mut R, num: i64, den: i64) -> Result<PointAssignment, CrError> {
    let free: Vec<GR> = (0..m.cr_dim()).map(|_| gaussian(rng, num, den)).collect();
    let u: Vec<BigRational> = (0..m.codim()).map(|_| rational(rng, num, den)).collect();
    m.point_from_graph(&free, &u)
}

/// A rational point of a graph-form manifold within `radius` (per real
/// coordinate) of the free coordinates of `center`.
pub fn graph_point_near<R: Rng>(
    m: &EmbeddedManifold,
    center: &PointAssignment,
    radius: &BigRational,
    rng: &mut R,
) -> Result<PointAssignment, CrError> {
    let g = m.require_graph()?;
    let jitter = |rng: &mut R| radius * &BigRational::new(BigInt::from(rng.gen_range(-64..=64)), BigInt::from(64));
    let mut free = Vec::new();
    for k in 1..=m.cr_dim() {
        let c = center.get(m.holo(k)).cloned().ok_or(CrError::Invalid("center misses a coordinate".into()))?;
        free.push(GR::new(&c.re + &jitter(rng), &c.im + &jitter(rng)));
    }
    let mut u = Vec::new();
    for dep in g.dependent() {
        let c = center.get(*dep).cloned().ok_or(CrError::Invalid("center misses a coordinate".into()))?;
        u.push(&c.re + &jitter(rng));
    }
    m.point_from_graph(&free, &u)
}

/// Exact unitary `(I - S)(I + S)^{-1}` for a random skew-Hermitian `S`;
/// `I + S` is invertible because `S` has imaginary spectrum.
pub fn cayley_unitary<R: Rng>(rng: &mut R, n: usize) -> ExactMatrix {
    let k = ExactMatrix::from_fn(n, n, |_, _| gaussian(rng, 3, 2));
    let s = ExactMatrix::from_fn(n, n, |i, j| &k[(i, j)] - &k[(j, i)].conj());
    let id = ExactMatrix::identity(n);
    let minus = ExactMatrix::from_fn(n, n, |i, j| &id[(i, j)] - &s[(i, j)]);
    let plus = ExactMatrix::from_fn(n, n, |i, j| &id[(i, j)] + &s[(i, j)]);
    minus.mul(&plus.inverse().expect("I + S is invertible")).expect("square factors")
}

/// `H = (U z', z_{n+1})` with `U` the first `n` columns of a random unitary of
/// size `n + k`: a linear CR map with injective differential from the sphere
/// quadric in `C^{n+1}` into the one in `C^{n+k+1}`.
pub fn isometric_linear_map<R: Rng>(rng: &mut R, n: usize, k: usize) -> CrMap {
    let u = cayley_unitary(rng, n + k);
    let mut comps: Vec<Poly> = (0..n + k)
        .map(|r| (0..n).fold(Poly::zero(), |acc, c| &acc + &Poly::var(Var::z(c as u16 + 1)).scale(&u[(r, c)])))
        .collect();
    comps.push(Poly::var(Var::z(n as u16 + 1)));
    let src = EmbeddedManifold::quadric(Family::Z, &vec![1; n]);
    let tgt = EmbeddedManifold::quadric(Family::W, &vec![1; n + k]);
    CrMap::new(src, tgt, comps).expect("isometric maps send the sphere quadric into the larger one")
}
