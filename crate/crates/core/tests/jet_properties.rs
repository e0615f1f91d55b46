mod common;

use common::*;
use crlab_core::algebra::{parse_poly, Poly, GR};
use crlab_core::cr::{cr_basis, VectorField};
use crlab_core::jet::{
    degenerate_degree, generic_rank_l, hypotheses_at, k0_order, rank_l, rank_report, reflection_quotients, MapJets,
};
use crlab_core::sample::{gaussian, int_matrix};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn power_map_orders() {
    for m in 1..=3u32 {
        let f = power_map(m);
        let o = origin(f.source());
        assert_eq!(k0_order(&f, &o, 4).unwrap(), Some(m), "m = {m} at the origin");
        let half = f.source().point_from_graph(&[GR::ratio(1, 2)], &[Zero::zero()]).unwrap();
        assert_eq!(k0_order(&f, &half, 4).unwrap(), Some(1), "m = {m} at z1 = 1/2");
    }
}

#[test]
fn stand_in_never_reaches_full_rank() {
    let f = degenerate_stand_in();
    assert!(f.verify_into_target().unwrap().passed);
    let mut rng = ChaCha8Rng::seed_from_u64(214);
    for _ in 0..20 {
        let p = random_point(f.source(), &mut rng);
        let rep = rank_report(&f, &p, 6).unwrap();
        assert_eq!(rep.ranks()[1..], [2; 6]);
        assert_eq!(k0_order(&f, &p, 6).unwrap(), None);
    }
}

#[test]
fn isometric_linear_maps_have_minimal_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for trial in 0..10 {
        let n = 1 + trial % 3;
        let k = 1 + (trial / 3) % 3;
        let f = random_isometric_map(&mut rng, n, k);
        assert!(f.verify_into_target().unwrap().passed, "trial {trial}");
        for _ in 0..10 {
            let p = random_point(f.source(), &mut rng);
            let h = hypotheses_at(&f, &p).unwrap();
            assert!(h.df_injective && h.target_strongly_pseudoconvex);
            assert_eq!((rank_l(&f, &p, 0).unwrap(), rank_l(&f, &p, 1).unwrap()), (1, n + 1));
        }
    }
}

fn corpus_maps() -> Vec<crlab_core::jet::CrMap> {
    vec![power_map(1), power_map(2), power_map(3), reflection_example(), rotation_example(), degenerate_stand_in(), identity(2)]
}

#[test]
fn ranks_filter_and_bound_the_generic_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in corpus_maps() {
        let max_l = 3;
        let generic: Vec<usize> = (0..=max_l).map(|l| generic_rank_l(&f, l).unwrap()).collect();
        let mut equal = 0;
        let total = 50;
        for _ in 0..total {
            let p = random_point(f.source(), &mut rng);
            let ranks = rank_report(&f, &p, max_l).unwrap().ranks();
            assert!(ranks.windows(2).all(|w| w[0] <= w[1]), "{ranks:?}");
            assert!(ranks.iter().zip(&generic).all(|(r, g)| r <= g));
            if ranks == generic {
                equal += 1;
            }
        }
        assert!(equal * 10 >= total * 9, "generic rank attained at only {equal} of {total} points");
    }
}

/// `c_i L_i` and `L_i + Σ_{j<i} b_ij L_j`.
fn recombined(basis: &[VectorField], rng: &mut ChaCha8Rng) -> Vec<VectorField> {
    let scaled: Vec<VectorField> = basis
        .iter()
        .map(|l| {
            let mut c = gaussian(rng, 4, 3);
            while c.is_zero() {
                c = gaussian(rng, 4, 3);
            }
            l.scale(&Poly::constant(c))
        })
        .collect();
    (0..scaled.len())
        .map(|i| (0..i).fold(scaled[i].clone(), |acc, j| acc.add(&scaled[j].scale(&Poly::constant(gaussian(rng, 2, 2))))))
        .collect()
}

#[test]
fn ranks_are_invariant_under_admissible_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let maps = corpus_maps();
    let mut isometric: Vec<_> = (0..4).map(|t| random_isometric_map(&mut rng, 1 + t % 2, 1)).collect();
    let mut all = maps;
    all.append(&mut isometric);
    for trial in 0..100 {
        let f = &all[trial % all.len()];
        let p = random_point(f.source(), &mut rng);
        let l = 2;
        let base = rank_report(f, &p, l).unwrap().ranks();
        // target unitary change, or a general invertible one
        let n1 = f.target_dim() - 1;
        let a = if trial % 2 == 0 {
            with_unit_corner(&cayley_unitary(&mut rng, n1))
        } else {
            loop {
                let a = int_matrix(&mut rng, n1 + 1, n1 + 1, 3, true);
                if !a.det().unwrap().is_zero() {
                    break a;
                }
            }
        };
        let changed = f.change_target_coordinates(&a).unwrap();
        assert_eq!(rank_report(&changed, &p, l).unwrap().ranks(), base, "coordinate change, trial {trial}");
        // defining function times a real unit
        let factor = match trial % 3 {
            0 => parse_poly("-3").unwrap(),
            1 => parse_poly("1 + w1*conj(w1)").unwrap(),
            _ => parse_poly(&format!("2 + w{0}*conj(w{0})", f.target_dim())).unwrap(),
        };
        let rescaled = f.rescale_target(&[factor]).unwrap();
        assert_eq!(rank_report(&rescaled, &p, l).unwrap().ranks(), base, "rescaling, trial {trial}");
        // basis rescaling and triangular recombination
        let basis = recombined(&cr_basis(f.source(), &p).unwrap(), &mut rng);
        let ranks = MapJets::with_basis(f, basis).report(&p, l).unwrap().ranks();
        assert_eq!(ranks, base, "basis change, trial {trial}");
    }
}

#[test]
fn reflection_quotients_for_the_tilted_embedding() {
    let f = reflection_example();
    let r = reflection_quotients(&f, &origin(f.source()), 1).unwrap();
    assert_eq!(r.get(1, 0).unwrap().as_poly(), Some(&Poly::constant(GR::ratio(4, 3))));
    assert!(r.get(1, 2).unwrap().is_zero());
    assert!(r.cr_verified && r.reconstruction_verified);
}

#[test]
fn degenerate_degree_examples() {
    let f = reflection_example();
    let rep = degenerate_degree(&f, &origin(f.source()), 2, 8, 1).unwrap();
    assert_eq!(rep.degree, Some(2));
    let id = identity(1);
    assert_eq!(degenerate_degree(&id, &origin(id.source()), 1, 8, 1).unwrap().degree, None);
    // ranks are capped by N' = n + 1, so the second level always drops
    assert_eq!(degenerate_degree(&id, &origin(id.source()), 2, 8, 1).unwrap().degree, Some(2));
}
