use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sympolar::convex::distance::{hausdorff_distance, sample_directions};
use sympolar::convex::volume::{monte_carlo_volume, volume, VolumeMethod};
use sympolar::convex::{lp_sum, lp_sum_volume};
use sympolar::harness::random_symmetric_polytope;
use sympolar::{ConvexBody, Scalar};

/// Random integer polytope with the origin inside; asymmetric in general.
fn random_polytope(dim: usize, extra: usize, seed: u64) -> ConvexBody {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Vec<i64>> = Vec::new();
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = rng.gen_range(1..=2);
        pts.push(e.clone());
        e[i] = -rng.gen_range(1..=2);
        pts.push(e);
    }
    for _ in 0..extra {
        pts.push((0..dim).map(|_| rng.gen_range(-3..=3)).collect());
    }
    ConvexBody::from_int_points(dim, &pts).unwrap()
}

fn exact_volume(x: &ConvexBody) -> Scalar {
    volume(x, VolumeMethod::Exact, 0, 0).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bipolar_is_the_identity_on_exact_polytopes(dim in 2usize..=3, extra in 0usize..6, seed in any::<u64>()) {
        let x = random_polytope(dim, extra, seed);
        let back = x.polar_dual().unwrap().polar_dual().unwrap();
        prop_assert!(back.as_exact().unwrap().same_vertices(x.as_exact().unwrap()));
    }

    #[test]
    fn l1_sum_volume_matches_the_closed_form(n in 1usize..=2, m in 1usize..=2, seed in any::<u64>()) {
        let k = random_polytope(n, 2, seed);
        let l = random_polytope(m, 2, seed.wrapping_add(1));
        let sum = lp_sum(&k, &l, 1.0).unwrap();
        prop_assert!(sum.is_exact());
        let closed = lp_sum_volume(&exact_volume(&k), &exact_volume(&l), n, m, 1.0).unwrap();
        prop_assert_eq!(exact_volume(&sum), closed);
    }

    #[test]
    fn support_is_the_gauge_of_the_polar(dim in 2usize..=4, seed in any::<u64>()) {
        let x = random_symmetric_polytope(dim, 2 * dim + 4, seed).unwrap();
        let polar = x.polar_dual().unwrap();
        for y in sample_directions(dim, 200, seed) {
            let (h, g) = (x.support(&y), polar.gauge(&y));
            prop_assert!((h - g).abs() <= 1e-9 * (1.0 + h.abs()), "{} vs {}", h, g);
        }
    }
}

#[test]
fn support_gauge_duality_on_oracles() {
    let ball = ConvexBody::ball(3, 1.7);
    let polar = ball.polar_dual().unwrap();
    for y in sample_directions(3, 1000, 3) {
        assert!((ball.support(&y) - polar.gauge(&y)).abs() < 1e-9);
    }
    let k = random_symmetric_polytope(2, 6, 4).unwrap();
    let sum = lp_sum(&k, &ConvexBody::ball(2, 1.0), 2.0).unwrap();
    let polar = sum.polar_dual().unwrap();
    for y in sample_directions(4, 1000, 5) {
        let (h, g) = (sum.support(&y), polar.gauge(&y));
        assert!((h - g).abs() <= 1e-7 * (1.0 + h), "{h} vs {g}");
    }
}

#[test]
fn l2_sum_monte_carlo_within_three_sigma() {
    let k = random_symmetric_polytope(2, 6, 11).unwrap();
    let l = random_symmetric_polytope(2, 8, 12).unwrap();
    let sum = lp_sum(&k, &l, 2.0).unwrap();
    let mc = monte_carlo_volume(&sum, 1_000_000, 7, 0).unwrap();
    let closed = lp_sum_volume(&exact_volume(&k), &exact_volume(&l), 2, 2, 2.0).unwrap().to_f64();
    let est = mc.value.to_f64();
    assert!((est - closed).abs() <= 3.0 * mc.std_error, "{est} ± {} vs {closed}", mc.std_error);
}

#[test]
fn zero_hausdorff_distance_means_same_membership() {
    // the same body in two representations: a polytope and its double polar
    let x = random_polytope(3, 5, 21);
    let y = x.polar_dual().unwrap().polar_dual().unwrap();
    assert_eq!(hausdorff_distance(&x, &y, 500, 1).unwrap().to_f64(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.5..3.5)).collect();
        assert_eq!(x.contains(&p, 0.0), y.contains(&p, 0.0));
    }
}

#[test]
fn origin_on_the_boundary_is_rejected() {
    let x = ConvexBody::from_int_points(2, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
    assert!(x.polar_dual().is_err());
}
