use crlab_core::algebra::{parse_poly, ExactMatrix, Family, PointAssignment, GR};
use crlab_core::cr::{characteristic_space, conormals, cr_basis, levi_form, signature, Covector, EmbeddedManifold};
use crlab_core::sample::{graph_point, int_matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn manifold(dim: u16, rhos: &[&str]) -> EmbeddedManifold {
    EmbeddedManifold::new(Family::Z, dim, rhos.iter().map(|s| parse_poly(s).unwrap()).collect()).unwrap()
}

/// Hypersurfaces and a codimension-two quadric, all in graph form.
fn corpus() -> Vec<EmbeddedManifold> {
    vec![
        manifold(2, &["-(z2 - conj(z2))/(2*i) + z1*conj(z1)"]),
        manifold(2, &["-(z2 - conj(z2))/(2*i) + (z1*conj(z1))^2"]),
        manifold(2, &["-(z2 - conj(z2))/(2*i) + (z1*conj(z1))^3"]),
        manifold(4, &["-(z4 - conj(z4))/(2*i) + z1*conj(z1) + z2*conj(z2) - z3*conj(z3)"]),
        manifold(3, &["-(z3 - conj(z3))/(2*i) + z1*conj(z1) + z1^2*conj(z2) + z2*conj(z1)^2"]),
        manifold(4, &["-(z3 - conj(z3))/(2*i) + z1*conj(z1)", "-(z4 - conj(z4))/(2*i) + z2*conj(z2) + z1*conj(z2) + z2*conj(z1)"]),
    ]
}

fn points(m: &EmbeddedManifold, seed: u64, count: usize) -> Vec<PointAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![m.point_from_graph(&vec![GR::zero(); m.cr_dim()], &vec![BigRational::zero(); m.codim()]).unwrap()];
    pts.extend((0..count).map(|_| graph_point(m, &mut rng, 3, 4).unwrap()));
    pts
}

#[test]
fn basis_fields_annihilate_the_defining_functions() {
    for m in corpus() {
        let g = m.require_graph().unwrap();
        for p in points(&m, 1, 3) {
            for l in cr_basis(&m, &p).unwrap() {
                for rho in m.defining() {
                    assert!(g.reduce(&l.apply(rho)).is_zero(), "{l} on {rho}");
                }
            }
        }
    }
}

#[test]
fn commutators_are_tangent() {
    for m in corpus() {
        for p in points(&m, 2, 3) {
            let basis = cr_basis(&m, &p).unwrap();
            let vars: Vec<_> = (1..=m.dim()).flat_map(|k| [m.holo(k), m.anti(k)]).collect();
            for rho in m.defining() {
                let drho = Covector::differential(rho, &vars[..].iter().copied().filter(|v| matches!(v, crlab_core::algebra::Var::Holo(..))).collect::<Vec<_>>(), &p).unwrap();
                for a in &basis {
                    for b in &basis {
                        let c = a.commutator(&b.conj()).eval(&p).unwrap();
                        assert!(drho.pair(&c).is_zero());
                    }
                }
            }
        }
    }
}

fn random_invertible(seed: u64, n: usize) -> ExactMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = int_matrix(&mut rng, n, n, 3, true);
        if !g.det().unwrap().is_zero() {
            return g;
        }
    }
}

#[test]
fn levi_matrix_is_hermitian_and_congruence_invariant() {
    for (k, m) in corpus().into_iter().enumerate() {
        for p in points(&m, 3, 2) {
            for sigma in characteristic_space(&m, &p).unwrap() {
                let h = levi_form(&m, &p, &sigma).unwrap();
                assert!(h.is_hermitian());
                let sig = h.signature();
                for t in 0..5 {
                    let g = random_invertible(100 * k as u64 + t, m.cr_dim());
                    let c = g.adjoint().mul(&h.matrix).unwrap().mul(&g).unwrap();
                    assert_eq!(signature(&c), sig);
                }
            }
        }
    }
}

#[test]
fn conormal_shift_leaves_the_levi_form_unchanged() {
    for m in corpus() {
        for p in points(&m, 4, 2) {
            let nu = conormals(&m, &p).unwrap();
            for sigma in characteristic_space(&m, &p).unwrap() {
                let h = levi_form(&m, &p, &sigma).unwrap();
                for (j, c) in nu.iter().enumerate() {
                    let shift = c.scale(&BigRational::new(BigInt::from(3 * j as i64 - 5), BigInt::from(7)));
                    assert_eq!(levi_form(&m, &p, &sigma.add(&shift)).unwrap().matrix, h.matrix);
                }
            }
        }
    }
}

#[test]
fn scaling_the_covector() {
    for m in corpus() {
        for p in points(&m, 5, 2) {
            for sigma in characteristic_space(&m, &p).unwrap() {
                let h = levi_form(&m, &p, &sigma).unwrap();
                let lam = BigRational::new(BigInt::from(7), BigInt::from(3));
                let scaled = levi_form(&m, &p, &sigma.scale(&lam)).unwrap();
                let expect = ExactMatrix::from_fn(h.matrix.rows(), h.matrix.cols(), |i, j| &h.matrix[(i, j)] * &GR::from_real(lam.clone()));
                assert_eq!(scaled.matrix, expect);
                assert_eq!(scaled.signature(), h.signature());
                assert_eq!(levi_form(&m, &p, &sigma.neg()).unwrap().signature(), h.signature().swapped());
            }
        }
    }
}

#[test]
fn model_signatures() {
    let c = corpus();
    let origin = |m: &EmbeddedManifold| points(m, 0, 0).remove(0);
    let heis = &c[0];
    let sigma = &characteristic_space(heis, &origin(heis)).unwrap()[0];
    let h = levi_form(heis, &origin(heis), sigma).unwrap();
    assert_eq!(h.matrix[(0, 0)].clone(), GR::ratio(1, 4));
    assert_eq!(h.signature().to_string(), "(1,0,0)");
    let q = &c[3];
    let sq = levi_form(q, &origin(q), &characteristic_space(q, &origin(q)).unwrap()[0]).unwrap().signature();
    assert_eq!((sq.pos, sq.neg, sq.zero), (2, 1, 0));
    let quartic = &c[1];
    let s4 = levi_form(quartic, &origin(quartic), &characteristic_space(quartic, &origin(quartic)).unwrap()[0]).unwrap().signature();
    assert_eq!((s4.pos, s4.neg, s4.zero), (0, 0, 1));
}
