use proptest::prelude::*;

use sympolar::capacities::{
    area_bounds_2d, cza_upper, ehz_bracket, ehz_exact_2d, ehz_lower_cj, ehz_upper_pi_omega, ehz_upper_reduction,
    BracketOptions,
};
use sympolar::harness::{cube, hexagon, hexagon_cylinder, random_symmetric_polytope};
use sympolar::scalar::parse_rational;
use sympolar::symplectic::symplectic_projection;
use sympolar::{ConvexBody, Rational, Scalar};

fn f(s: &Scalar) -> f64 {
    s.to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn brackets_are_ordered(dim in prop::sample::select(vec![2usize, 4]), seed in any::<u64>()) {
        let x = random_symmetric_polytope(dim, 2 * dim + 4, seed).unwrap();
        let b = ehz_bracket(&x, &BracketOptions { chains: 4, seed, ..BracketOptions::default() }).unwrap();
        prop_assert!(f(&b.lower) <= f(&b.upper) * (1.0 + 1e-9));
        let lower = f(&ehz_lower_cj(&x).unwrap());
        prop_assert!(f(&ehz_upper_pi_omega(&x).unwrap()) >= lower);
        // c_J-based bound never beats the 2 + 1/n floor by more than the bracket allows
        prop_assert!(f(&b.lower) >= lower * (1.0 - 1e-12));
    }

    #[test]
    fn lower_and_pi_bounds_are_two_homogeneous(seed in any::<u64>(), a in prop::sample::select(vec!["1/2", "2"])) {
        let x = random_symmetric_polytope(4, 10, seed).unwrap();
        let a = parse_rational(a).unwrap();
        let y = x.scaled_exact(&a).unwrap();
        let a2 = Scalar::Exact(a.clone() * a.clone());
        prop_assert_eq!(ehz_lower_cj(&y).unwrap(), ehz_lower_cj(&x).unwrap().mul(&a2));
        prop_assert_eq!(ehz_upper_pi_omega(&y).unwrap(), ehz_upper_pi_omega(&x).unwrap().mul(&a2));
    }
}

#[test]
fn reduction_bound_scales_quadratically() {
    let x = random_symmetric_polytope(4, 10, 3).unwrap();
    let base = f(&ehz_upper_reduction(&x, 4, 9).unwrap().value);
    for (a, a2) in [("1/2", 0.25), ("2", 4.0)] {
        let y = x.scaled_exact(&parse_rational(a).unwrap()).unwrap();
        let v = f(&ehz_upper_reduction(&y, 4, 9).unwrap().value);
        assert!((v - a2 * base).abs() <= 1e-6 * v, "{v} vs {}", a2 * base);
    }
}

#[test]
fn planar_capacity_is_the_area() {
    assert_eq!(ehz_exact_2d(&hexagon()).unwrap(), Scalar::from_int(3));
    assert_eq!(ehz_exact_2d(&cube(2).unwrap()).unwrap(), Scalar::from_int(4));
    let (lo, hi) = area_bounds_2d(&ConvexBody::ball(2, 1.0)).unwrap();
    assert!(f(&lo) <= std::f64::consts::PI && std::f64::consts::PI <= f(&hi));
    assert!(f(&hi) - f(&lo) < 1e-3);
}

#[test]
fn cza_witness_area_is_reproducible() {
    for x in [hexagon_cylinder(4, &parse_rational("1/10").unwrap()).unwrap(), random_symmetric_polytope(4, 10, 5).unwrap()] {
        let est = cza_upper(&x, 8, 1).unwrap();
        let proj = symplectic_projection(&x, &est.plane).unwrap();
        let (lo, hi) = area_bounds_2d(&proj).unwrap();
        let v = f(&est.value);
        assert!((f(&lo) - v).abs() <= 1e-9 * v && (f(&hi) - v).abs() <= 1e-9 * v, "{v} vs [{lo:?}, {hi:?}]");
        assert!(v >= est.search_value * (1.0 - 1e-9));
    }
}

#[test]
fn self_polar_bodies_meet_the_capacity_thresholds() {
    let eps: Rational = parse_rational("1/10").unwrap();
    for x in [hexagon(), hexagon_cylinder(4, &eps).unwrap()] {
        let n = x.dim() / 2;
        let b = ehz_bracket(&x, &BracketOptions { chains: 8, seed: 2, ..BracketOptions::default() }).unwrap();
        assert!(f(&b.lower) >= 2.0 + 1.0 / n as f64 - 1e-9, "{n}: {:?}", b.lower);
        assert!(f(&b.upper) >= f(&b.lower));
        let cza = cza_upper(&x, 16, 3).unwrap();
        assert!(f(&cza.value) >= 3.0 - 1e-6, "{n}: {:?}", cza.value);
    }
}
