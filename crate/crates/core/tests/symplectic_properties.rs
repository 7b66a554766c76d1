use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sympolar::convex::distance::hausdorff_distance;
use sympolar::convex::planar::{circumscribed_area, inscribed_area};
use sympolar::harness::{generate, hexagon_cylinder, random_symmetric_polytope, trial_seed, GeneratorKind, GeneratorSpec};
use sympolar::scalar::parse_rational;
use sympolar::symplectic::maps::random_symplectic_exact;
use sympolar::symplectic::polar::polar_routes_agree;
use sympolar::symplectic::reduction::symplectic_reduction_exact;
use sympolar::symplectic::{
    c_j, self_polarity_certificate, squeeze_to_self_polar, symplectic_polar, symplectic_projection,
    symplectic_reduction, SymplecticPlane,
};
use sympolar::{ConvexBody, Rational, Scalar};

fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn random_asymmetric(dim: usize, seed: u64) -> ConvexBody {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Vec<i64>> = Vec::new();
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = rng.gen_range(1..=3);
        pts.push(e.clone());
        e[i] = -1;
        pts.push(e);
    }
    pts.push((0..dim).map(|_| rng.gen_range(0..=3)).collect());
    ConvexBody::from_int_points(dim, &pts).unwrap()
}

/// `X^ω ⊆ X` decided exactly through vertices.
fn polar_inside(x: &ConvexBody) -> bool {
    let polar = symplectic_polar(x).unwrap();
    let body = x.as_exact().unwrap();
    polar.as_exact().unwrap().vertices().iter().all(|v| body.contains(v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn polar_routes_agree_exactly(dim in prop::sample::select(vec![2usize, 4]), seed in any::<u64>()) {
        let x = random_symmetric_polytope(dim, 2 * dim + 4, seed).unwrap();
        prop_assert!(polar_routes_agree(&x).unwrap());
        prop_assert!(polar_routes_agree(&random_asymmetric(dim, seed)).unwrap());
    }

    #[test]
    fn double_omega_polar(dim in prop::sample::select(vec![2usize, 4]), seed in any::<u64>()) {
        let x = random_symmetric_polytope(dim, 2 * dim + 2, seed).unwrap();
        let back = symplectic_polar(&symplectic_polar(&x).unwrap()).unwrap();
        prop_assert!(back.as_exact().unwrap().same_vertices(x.as_exact().unwrap()));
        let y = random_asymmetric(dim, seed);
        let back = symplectic_polar(&symplectic_polar(&y).unwrap()).unwrap();
        let minus = y.negated().unwrap();
        prop_assert!(back.as_exact().unwrap().same_vertices(minus.as_exact().unwrap()));
    }

    #[test]
    fn cj_at_least_one_iff_polar_inside(dim in prop::sample::select(vec![2usize, 4]), seed in any::<u64>(), k in 1i64..=3) {
        // scaling by k moves bodies across the threshold
        let x = random_symmetric_polytope(dim, 2 * dim + 2, seed).unwrap();
        let x = x.scaled_exact(&Rational::new(k.into(), 2.into())).unwrap();
        let cj = c_j(&x).unwrap();
        prop_assert!(cj.certified);
        prop_assert_eq!(cj.value.as_exact().unwrap() >= &int(1), polar_inside(&x));
    }

    #[test]
    fn cj_is_two_homogeneous(seed in any::<u64>(), a in prop::sample::select(vec!["1/2", "2", "3"])) {
        let x = random_symmetric_polytope(4, 10, seed).unwrap();
        let a = q(a);
        let lhs = c_j(&x.scaled_exact(&a).unwrap()).unwrap().value;
        let rhs = c_j(&x).unwrap().value.mul(&Scalar::Exact(a.clone() * a));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cj_is_symplectically_invariant(seed in any::<u64>()) {
        let x = random_symmetric_polytope(4, 10, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = random_symplectic_exact(2, &mut rng);
        let y = x.linear_image_exact(&rows).unwrap();
        prop_assert_eq!(c_j(&y).unwrap().value, c_j(&x).unwrap().value);
    }

    #[test]
    fn reduction_commutes_with_omega_polarity(seed in any::<u64>()) {
        let x = random_symmetric_polytope(4, 10, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let v: Vec<Rational> = loop {
            let v: Vec<Rational> = (0..4).map(|_| int(rng.gen_range(-2..=2))).collect();
            if v.iter().any(|t| *t != int(0)) {
                break v;
            }
        };
        let a = symplectic_polar(&symplectic_reduction_exact(&x, &v).unwrap()).unwrap();
        let b = symplectic_reduction_exact(&symplectic_polar(&x).unwrap(), &v).unwrap();
        prop_assert!(a.as_exact().unwrap().same_vertices(b.as_exact().unwrap()));
    }
}

#[test]
fn float_routes_agree_within_hausdorff_tolerance() {
    for seed in 0..5 {
        let x = random_symmetric_polytope(4, 10, seed).unwrap();
        let pts: Vec<Vec<f64>> = x.as_exact().unwrap().vertices().iter().map(|v| v.iter().map(|t| sympolar::scalar::Field::to_f64(t)).collect()).collect();
        let xf = ConvexBody::float_hull(4, &pts).unwrap();
        assert!(polar_routes_agree(&xf).unwrap());
        let d = hausdorff_distance(&symplectic_polar(&xf).unwrap(), &symplectic_polar(&x).unwrap(), 500, seed).unwrap();
        assert!(d.to_f64() <= 1e-10, "{d:?}");
    }
}

#[test]
fn projections_of_self_polar_bodies_contain_their_polar() {
    let x = hexagon_cylinder(4, &q("1/10")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = x.linear_image_exact(&random_symplectic_exact(2, &mut rng)).unwrap();
    assert_eq!(self_polarity_certificate(&x, 0.0).unwrap().residual, Scalar::from_int(0));
    let mut tested = 0;
    while tested < 10 {
        let u: Vec<Rational> = (0..4).map(|_| int(rng.gen_range(-2..=2))).collect();
        let v: Vec<Rational> = (0..4).map(|_| int(rng.gen_range(-2..=2))).collect();
        let Ok(plane) = SymplecticPlane::exact(u, v) else { continue };
        let y = symplectic_projection(&x, &plane).unwrap();
        assert!(polar_inside(&y));
        tested += 1;
    }
}

#[test]
fn squeeze_iterates_are_monotone() {
    for seed in 0..4 {
        let x = random_symmetric_polytope(2, 8, seed).unwrap();
        // enlarge until X^ω ⊆ X, i.e. c_J >= 1
        let mut k = 1;
        while !polar_inside(&x.scaled_exact(&int(k)).unwrap()) {
            k += 1;
        }
        let y = x.scaled_exact(&int(k)).unwrap();
        let out = squeeze_to_self_polar(&y, 0.0, 50).unwrap();
        assert!(out.volumes.windows(2).all(|w| w[1] <= w[0]));
        assert!(out.polar_in_body.iter().all(|&t| t <= 1.0));
        assert_eq!(out.converged, out.certificate.residual == Scalar::from_int(0));
    }
}

/// Support points of twice-reduced oracle bodies lie on the boundary and
/// attain the support function, so inscribed areas never exceed
/// circumscribed ones.
#[test]
fn nested_quotient_support_points_are_consistent() {
    let spec = GeneratorSpec::new(GeneratorKind::SelfPolarFromK, 6, 1007);
    let x = generate(&spec.with_seed(trial_seed(spec.seed, 1))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let v1: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v2: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y = symplectic_reduction(&symplectic_reduction(&x, &v1).unwrap(), &v2).unwrap();
        for k in 0..64 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let e = [t.cos(), t.sin()];
            let sp = y.support_point(&e);
            assert!((sp[0] * e[0] + sp[1] * e[1] - y.support(&e)).abs() < 1e-8);
            assert!(y.gauge(&sp) <= 1.0 + 1e-9);
        }
        let lo = inscribed_area(|e| { let p = y.support_point(&e); [p[0], p[1]] }, 128);
        let hi = circumscribed_area(|e| y.support(&e), 128);
        assert!(lo <= hi, "{lo} > {hi}");
    }
}
