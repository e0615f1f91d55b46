use crlab_core::algebra::{ExactMatrix, GR};
use crlab_core::det::{bareiss_pivots, lemma44_check, lemma45_check, lemma46_check, lemma47_solve, minor_det, run_trials, DependenceOutcome};
use num_traits::Zero;
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec((-6i64..=6, -3i64..=3), n * n)
        .prop_map(move |v| ExactMatrix::from_fn(n, n, |i, j| GR::from_ints(v[i * n + j].0, v[i * n + j].1)))
}

fn block_diag(p: &ExactMatrix, q: &ExactMatrix) -> ExactMatrix {
    let (a, b) = (p.rows(), q.rows());
    ExactMatrix::from_fn(a + b, a + b, |i, j| match (i < a, j < a) {
        (true, true) => p[(i, j)].clone(),
        (false, false) => q[(i - a, j - a)].clone(),
        _ => GR::zero(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinant_is_multiplicative_on_blocks(p in matrix(3), q in matrix(2)) {
        let all: Vec<usize> = (0..5).collect();
        let d = minor_det(&block_diag(&p, &q), &all, &all).unwrap();
        prop_assert_eq!(d, &p.det().unwrap() * &q.det().unwrap());
    }

    #[test]
    fn bordered_minor_identity(b in matrix(5), skip_i in 0usize..4, skip_j in 0usize..4) {
        let i: Vec<usize> = (0..4).filter(|&k| k != skip_i).collect();
        let j: Vec<usize> = (0..4).filter(|&k| k != skip_j).collect();
        prop_assert!(lemma44_check(&b, &i, &j).unwrap().equal);
    }

    #[test]
    fn condensation_identity(mut c in matrix(4), zero_corner in any::<bool>()) {
        if zero_corner {
            c[(0, 0)] = GR::zero();
        }
        prop_assert!(lemma45_check(&c).unwrap().equal);
    }

    #[test]
    fn four_displays(a in matrix(3)) {
        prop_assert!(lemma46_check(&a).unwrap().iter().all(|c| c.equal));
    }

    #[test]
    fn zero_verdict_matches_componentwise_test(b in matrix(4), a in prop::collection::vec(-2i64..=2, 4), force_zero in any::<bool>()) {
        prop_assume!(!b.det().unwrap().is_zero());
        let a: Vec<GR> = if force_zero { vec![GR::zero(); 4] } else { a.into_iter().map(GR::from).collect() };
        let cols: Vec<Vec<GR>> = (0..4).map(|j| (0..4).map(|i| b[(i, j)].clone()).collect()).collect();
        let out = lemma47_solve(&cols, &a).unwrap();
        prop_assert_eq!(out == DependenceOutcome::Zero, a.iter().all(Zero::is_zero));
    }

    #[test]
    fn leading_pivots_are_leading_minors(c in matrix(4)) {
        let piv = bareiss_pivots(&c);
        for (k, p) in piv.iter().enumerate() {
            let idx: Vec<usize> = (0..=k).collect();
            prop_assert_eq!(p, &minor_det(&c, &idx, &idx).unwrap());
        }
    }
}

#[test]
fn seeded_trials_have_no_failures() {
    for t in run_trials(3..=6, 60, 42) {
        assert_eq!(t.failures(), 0, "{t:?}");
        assert!(t.lemma45_zero_corner > 0);
    }
}
