mod common;

use common::*;
use crlab_core::jet::{rank_l, CrMap};
use crlab_core::normalize::{normalize_frame, NormalizeError};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus() -> Vec<CrMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut maps = vec![identity(1), identity(2), power_map(1), reflection_example(), rotation_example()];
    maps.extend((0..4).map(|t| random_isometric_map(&mut rng, 1 + t % 2, 1 + t / 2)));
    maps
}

#[test]
fn normalization_meets_every_tolerance() {
    for f in corpus() {
        let p = origin(f.source());
        let r = normalize_frame(&f, &p, 1).unwrap();
        assert!(r.passed(), "{:?}", r.violations());
        assert!(r.unitarity_residual <= 1e-12);
        assert!(r.zero_block_residual <= 1e-10);
        assert!(r.sigma_min_b >= 1e-8);
        assert!(r.transformation_law_residual <= 1e-10);
        assert_eq!(r.exact_rank, r.float_rank);
        assert_eq!(r.exact_rank, rank_l(&f, &p, 1).unwrap());
    }
}

#[test]
fn normalizing_twice_gives_a_block_phase() {
    for f in corpus() {
        let p = origin(f.source());
        let first = normalize_frame(&f, &p, 1).unwrap();
        let again = f.change_target_coordinates(&first.a_exact()).unwrap();
        let second = normalize_frame(&again, &p, 1).unwrap();
        let a = &second.a;
        let k = second.n0 - 1;
        let nt = a.nrows();
        for i in 0..nt {
            for j in 0..nt {
                let same_block = (i < k) == (j < k);
                if !same_block {
                    assert!(a[(i, j)].norm() <= 1e-10, "off-block entry ({i},{j})");
                }
                if i >= k && j >= k {
                    let expect = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                    assert!((a[(i, j)] - expect).norm() <= 1e-10);
                }
            }
        }
        // the leading block is unitary
        let b = a.view((0, 0), (k, k)).into_owned();
        let id = nalgebra::DMatrix::<Complex64>::identity(k, k);
        assert!((&b * b.adjoint() - id).iter().all(|x| x.norm() <= 1e-10));
    }
}

#[test]
fn degenerate_points_are_refused() {
    let f = power_map(2);
    assert!(matches!(normalize_frame(&f, &origin(f.source()), 1), Err(NormalizeError::Jet(_))));
}
