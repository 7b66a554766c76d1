use std::f64::consts::PI;

use approx::assert_relative_eq;

use sympolar::capacities::ehz_lower_cj;
use sympolar::characteristics::{
    characteristic_residual, clarke_minimize, h_omega_length, liouville_integral, symmetrize, ClarkeConfig, ClosedCurve,
};
use sympolar::harness::{cube, hexagon};
use sympolar::ConvexBody;

fn quick() -> ClarkeConfig {
    ClarkeConfig { points: 64, restarts: 3, max_iters: 1500, ..ClarkeConfig::default() }
}

fn ellipse(a: f64, b: f64, m: usize) -> ClosedCurve {
    // counter-clockwise in (q, p): positive action
    let pts = (0..m)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / m as f64;
            vec![a * t.cos(), b * t.sin()]
        })
        .collect();
    ClosedCurve::new(pts).unwrap()
}

#[test]
fn action_and_length_scaling() {
    let x = hexagon();
    let c = ellipse(1.0, 0.5, 40);
    let a = liouville_integral(&c).unwrap().to_f64();
    let l = h_omega_length(&c, &x).unwrap().to_f64();
    assert!(a > 0.0);
    for s in [0.5, 2.0, 3.0] {
        let cs = c.scaled(s);
        assert_relative_eq!(liouville_integral(&cs).unwrap().to_f64(), s * s * a, max_relative = 1e-12);
        assert_relative_eq!(h_omega_length(&cs, &x).unwrap().to_f64(), s * l, max_relative = 1e-12);
        // the action ignores translations
        let ct = cs.translated(&[0.3, -1.1]);
        assert_relative_eq!(liouville_integral(&ct).unwrap().to_f64(), s * s * a, epsilon = 1e-10);
    }
    assert_relative_eq!(liouville_integral(&c.reversed()).unwrap().to_f64(), -a, epsilon = 1e-12);
}

#[test]
fn clarke_returns_feasible_curves_and_scales_quadratically() {
    let x = cube(2).unwrap();
    let cfg = quick();
    let e = clarke_minimize(&x, &cfg).unwrap();
    assert!((e.liouville_integral.to_f64() - 1.0).abs() <= cfg.constraint_tol);
    assert!((e.capacity_estimate.to_f64() - 4.0).abs() < 0.04, "{:?}", e.capacity_estimate);
    let e2 = clarke_minimize(&x.scaled(2.0).unwrap(), &cfg).unwrap();
    let ratio = e2.capacity_estimate.to_f64() / e.capacity_estimate.to_f64();
    assert!((ratio - 4.0).abs() < 0.08, "{ratio}");
}

/// Capacities grow with the body.
#[test]
fn clarke_is_monotone_under_inclusion() {
    let cfg = quick();
    let small = clarke_minimize(&ConvexBody::ball(2, 1.0), &cfg).unwrap().capacity_estimate.to_f64();
    let big = clarke_minimize(&ConvexBody::ball(2, 2.0), &cfg).unwrap().capacity_estimate.to_f64();
    assert!(small <= big * 1.02, "{small} vs {big}");
    assert!((small - PI).abs() < 0.03 * PI);
}

#[test]
fn clarke_stays_above_the_cj_lower_bound() {
    for x in [hexagon(), cube(2).unwrap()] {
        let est = clarke_minimize(&x, &quick()).unwrap().capacity_estimate.to_f64();
        let lower = ehz_lower_cj(&x).unwrap().to_f64();
        assert!(est >= lower * 0.98, "{est} vs {lower}");
    }
}

#[test]
fn symmetrize_keeps_action_and_does_not_lengthen() {
    let x = hexagon();
    let c = ellipse(1.3, 0.4, 32).translated(&[0.2, 0.1]);
    let a = liouville_integral(&c).unwrap().to_f64();
    let s = symmetrize(&c, &x).unwrap();
    assert!(s.antipodal_defect() <= 1e-9);
    assert!((liouville_integral(&s).unwrap().to_f64() - 1.0).abs() <= 1e-9);
    let gain = h_omega_length(&s, &x).unwrap().to_f64() - h_omega_length(&c, &x).unwrap().to_f64() / a.sqrt();
    assert!(gain <= 1e-9, "{gain}");
}

#[test]
fn closed_characteristic_of_the_square_has_small_residual() {
    let x = cube(2).unwrap();
    let e = clarke_minimize(&x, &quick()).unwrap();
    let r = characteristic_residual(&e.curve, &x).unwrap().to_f64();
    assert!(r.is_finite() && r >= 0.0);
    assert!(e.characteristic_residual.to_f64() == r);
}

#[test]
fn malformed_curves_are_rejected() {
    assert!(ClosedCurve::new(vec![vec![0.0, 0.0]; 3]).is_err());
    assert!(ClosedCurve::new(vec![vec![1.0, 0.0]; 10]).is_err());
    let mut pts: Vec<Vec<f64>> = (0..10).map(|k| vec![k as f64, 0.0]).collect();
    pts[4] = vec![f64::NAN, 0.0];
    assert!(ClosedCurve::new(pts).is_err());
    let cfg = ClarkeConfig { points: 9, ..ClarkeConfig::default() };
    assert!(cfg.validate().is_err());
}
