//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned
//! below. Runs without the libtest harness so the lines always print.
//!
//! `cargo test -p sympolar --test acceptance`

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sympolar::capacities::{cza_upper, ehz_bracket, ehz_l2_sum_bracket, ehz_upper_pi_omega, BracketOptions};
use sympolar::characteristics::{
    clarke_minimize, h_omega_length, liouville_integral, schaffer_min_length, symmetrize, ClarkeConfig, ClosedCurve,
    SchafferConfig,
};
use sympolar::convex::volume::{volume, VolumeMethod};
use sympolar::harness::{
    cube, hexagon, hexagon_cylinder, random_symmetric_polytope, verify_capacity_claims, verify_lp_volume,
    verify_reduction_claims, verify_tensor_power_identity, CapacityClaimsOptions, ExperimentReport, GeneratorKind,
    GeneratorSpec,
};
use sympolar::symplectic::{c_j, self_polarity_certificate, symplectic_sum};
use sympolar::{ConvexBody, Rational, Scalar};

// pinned tolerances
const HEXAGON_BUDGET_S: f64 = 1.0;
const CLARKE_DISK_REL: f64 = 0.01;
const LP_BUDGET_S: f64 = 120.0;
const LOWER_SLACK: f64 = 1e-6;
const CZA_SLACK: f64 = 1e-6;
const CZA_CEILING: f64 = 3.05;
const REDUCTION_FLOOR: f64 = 1e-8;
const DISK_SUM_CLARKE_REL: f64 = 0.05;
const SYMMETRIZE_REL: f64 = 1e-6;
const SCHAFFER_SLACK: f64 = 1e-3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn failures(report: &ExperimentReport) -> String {
    let f: Vec<String> = report
        .failures()
        .iter()
        .take(5)
        .map(|a| format!("{} ({} vs {})", a.name, a.observed.to_f64(), a.expected.to_f64()))
        .collect();
    if f.is_empty() {
        String::new()
    } else {
        format!("; failed: {}", f.join(", "))
    }
}

fn count_named(report: &ExperimentReport, suffix: &str) -> (usize, usize) {
    let hits: Vec<_> = report.assertions.iter().filter(|a| a.name.ends_with(suffix)).collect();
    (hits.iter().filter(|a| a.pass).count(), hits.len())
}

fn c1_hexagon() -> Outcome {
    let start = Instant::now();
    let h = hexagon();
    let vol = volume(&h, VolumeMethod::Exact, 0, 0).unwrap().value;
    let residual = self_polarity_certificate(&h, 0.0).unwrap().residual;
    let cj = c_j(&h).unwrap().value;
    let b = ehz_bracket(&h, &BracketOptions::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let three = Scalar::from_int(3);
    let pass = vol == three
        && residual == Scalar::from_int(0)
        && cj == Scalar::from_int(1)
        && b.lower == three
        && b.upper == three
        && secs < HEXAGON_BUDGET_S;
    outcome(
        pass,
        format!("volume={vol} residual={residual} c_J={cj} bracket=[{}, {}] in {secs:.3} s (exact; < 1 s)", b.lower, b.upper),
    )
}

fn c2_balls() -> Outcome {
    let est = clarke_minimize(&ConvexBody::ball(2, 1.0), &ClarkeConfig::default()).unwrap();
    let c = est.capacity_estimate.to_f64();
    let rel = (c - PI).abs() / PI;
    let mut pass = rel <= CLARKE_DISK_REL;
    let mut pis = Vec::new();
    for n in 1..=3 {
        let v = ehz_upper_pi_omega(&ConvexBody::ball(2 * n, 1.0)).unwrap().to_f64();
        pass &= v == PI;
        pis.push(format!("{v}"));
    }
    outcome(pass, format!("clarke(B²)={c:.6} (rel err {rel:.2e} <= 1%); pi_omega(B^2n), n=1..3: {}", pis.join(", ")))
}

fn c3_lp_volume() -> Outcome {
    let start = Instant::now();
    let r = verify_lp_volume(20, 0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let (ok, total) = r.count(sympolar::harness::CheckKind::Asserted);
    outcome(r.passed() && secs < LP_BUDGET_S, format!("{ok}/{total} checks in {secs:.1} s (p=1 exact, p=2 within 3σ; < 120 s){}", failures(&r)))
}

fn c4_tensor_power() -> Outcome {
    let interval = ConvexBody::from_int_points(1, &[vec![-1], vec![1]]).unwrap();
    let square = cube(2).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, n, m) in [(&interval, 1, 2), (&interval, 1, 3), (&square, 2, 2)] {
        let r = verify_tensor_power_identity(k, m).unwrap();
        pass &= r.passed();
        parts.push(format!("(n={n}, m={m}) {}{}", r.values["closed_form"], failures(&r)));
    }
    outcome(pass, format!("exact: {}", parts.join("; ")))
}

/// `(kind, dim, trials, chains, symplectic_image)` per dimension: 50 bodies each.
fn capacity_mix() -> Vec<(GeneratorKind, usize, usize, usize, bool)> {
    use GeneratorKind::*;
    vec![
        (RandomSymmetricPolytope, 2, 30, 20, false),
        (SelfPolarFromK, 2, 10, 20, false),
        (SqueezeOutput, 2, 10, 20, false),
        (RandomSymmetricPolytope, 4, 30, 20, false),
        (SelfPolarFromK, 4, 10, 8, false),
        (HexagonCylinder, 4, 10, 20, true),
        (RandomSymmetricPolytope, 6, 40, 20, false),
        (SelfPolarFromK, 6, 10, 4, false),
    ]
}

fn capacity_reports() -> Vec<(usize, ExperimentReport)> {
    capacity_mix()
        .into_iter()
        .enumerate()
        .map(|(i, (kind, dim, trials, chains, image))| {
            let spec = GeneratorSpec { symplectic_image: image, ..GeneratorSpec::new(kind, dim, 1000 + i as u64) };
            let opts = CapacityClaimsOptions {
                chains,
                cj_restarts: 200,
                cza_restarts: 8,
                golden: false,
                clarke: false,
                seed: spec.seed,
            };
            (dim, verify_capacity_claims(&spec, trials, &opts).unwrap())
        })
        .collect()
}

fn c5_capacity_suite(reports: &[(usize, ExperimentReport)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for dim in [2, 4, 6] {
        let (mut ord, mut ord_total, mut low, mut low_total, mut pi, mut pi_total) = (0, 0, 0, 0, 0, 0);
        let mut extra = String::new();
        for (_, r) in reports.iter().filter(|(d, _)| *d == dim) {
            let (a, b) = count_named(r, ".bracket_ordering");
            let (c, d) = count_named(r, ".lower_at_least_2_plus_1_over_n");
            let (e, f) = count_named(r, ".pi_upper_at_least_lower");
            (ord, ord_total, low, low_total, pi, pi_total) = (ord + a, ord_total + b, low + c, low_total + d, pi + e, pi_total + f);
            pass &= r.passed();
            extra.push_str(&failures(r));
        }
        pass &= ord_total == 50 && ord == ord_total && low == low_total && pi == pi_total && low_total > 0;
        parts.push(format!("2n={dim}: ordering {ord}/{ord_total}, lower>=2+1/n {low}/{low_total}, pi>=lower {pi}/{pi_total}{extra}"));
    }
    outcome(pass, format!("{} (slack {LOWER_SLACK:e})", parts.join("; ")))
}

fn c6_cza(reports: &[(usize, ExperimentReport)]) -> Outcome {
    let x = hexagon_cylinder(4, &Rational::new(1.into(), 10.into())).unwrap();
    let residual = self_polarity_certificate(&x, 0.0).unwrap().residual;
    let cza = cza_upper(&x, 50, 0).unwrap().value.to_f64();
    let hex = cza_upper(&hexagon(), 50, 0).unwrap().value.to_f64();
    let mut pass = residual == Scalar::from_int(0) && cza >= 3.0 - CZA_SLACK && cza <= CZA_CEILING && hex >= 3.0 - CZA_SLACK;
    let (mut ok, mut total) = (1, 1);
    for (_, r) in reports {
        let (a, b) = count_named(r, ".cza_at_least_3");
        ok += a;
        total += b;
    }
    pass &= ok == total;
    outcome(pass, format!("hexagon-cylinder (residual {residual}) cza={cza:.9} in [3-1e-6, 3.05]; self-polar bodies cza>=3-1e-6: {ok}/{total}"))
}

fn c7_reductions() -> Outcome {
    let runs = [
        (GeneratorSpec { symplectic_image: true, ..GeneratorSpec::new(GeneratorKind::HexagonCylinder, 4, 71) }, 5),
        (GeneratorSpec::new(GeneratorKind::SelfPolarFromK, 4, 72), 5),
        (GeneratorSpec::new(GeneratorKind::SelfPolarFromK, 6, 73), 10),
    ];
    let mut pass = true;
    let (mut ok, mut total, mut worst) = (0, 0, 0.0f64);
    let mut extra = String::new();
    for (spec, trials) in runs {
        let r = verify_reduction_claims(&spec, trials).unwrap();
        pass &= r.passed();
        extra.push_str(&failures(&r));
        let (a, b) = count_named(&r, ".reduced_residual_bounded");
        ok += a;
        total += b;
        for (k, v) in &r.values {
            if k.ends_with(".reduced_residual") {
                worst = worst.max(v.to_f64());
            }
        }
    }
    pass &= total == 20 && ok == total;
    outcome(pass, format!("{ok}/{total} reduced residual <= 10*input + {REDUCTION_FLOOR:e} (worst {worst:.2e}){extra}"))
}

fn c8_disk_sum() -> Outcome {
    let (d1, d2) = (ConvexBody::ball(2, 1.0), ConvexBody::ball(2, 2.0));
    let b1 = ehz_bracket(&d1, &BracketOptions::default()).unwrap();
    let b2 = ehz_bracket(&d2, &BracketOptions::default()).unwrap();
    let rule = ehz_l2_sum_bracket(&b1, &b2).unwrap();
    let (lo, hi) = (rule.lower.to_f64(), rule.upper.to_f64());
    let sum = symplectic_sum(&d1, &d2, 2.0).unwrap();
    let est = clarke_minimize(&sum, &ClarkeConfig::default()).unwrap().capacity_estimate.to_f64();
    let rel = (est - PI).abs() / PI;
    let pass = lo == PI && hi == PI && rel <= DISK_SUM_CLARKE_REL;
    outcome(pass, format!("min rule [{lo}, {hi}]; clarke 4D {est:.5} (rel err {rel:.2e} <= 5%)"))
}

fn random_curve(d: usize, m: usize, rng: &mut ChaCha8Rng) -> ClosedCurve {
    loop {
        let mut pts: Vec<Vec<f64>> = (0..m).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        // bias towards a loop in the first symplectic plane so most draws have nonzero action
        for (i, p) in pts.iter_mut().enumerate() {
            let t = 2.0 * PI * i as f64 / m as f64;
            p[0] += 1.5 * t.cos();
            p[d / 2] += 1.5 * t.sin();
        }
        let c = ClosedCurve::new(pts).unwrap();
        let a = liouville_integral(&c).unwrap().to_f64();
        if a.abs() > 1e-3 {
            return if a > 0.0 { c } else { c.reversed() };
        }
    }
}

fn c9_symmetrize() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let bodies = [
        hexagon(),
        ConvexBody::ball(2, 1.0),
        cube(4).unwrap(),
        ConvexBody::ball(4, 1.5),
        random_symmetric_polytope(4, 12, 3).unwrap(),
    ];
    let (mut ok, mut worst_gain, mut worst_sym, mut worst_action) = (0, f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for t in 0..100 {
        let x = &bodies[t % bodies.len()];
        let m = 2 * rng.gen_range(4..=24);
        let c = random_curve(x.dim(), m, &mut rng);
        let a = liouville_integral(&c).unwrap().to_f64();
        let len_in = h_omega_length(&c, x).unwrap().to_f64() / a.sqrt();
        let s = symmetrize(&c, x).unwrap();
        let len_out = h_omega_length(&s, x).unwrap().to_f64();
        let action = liouville_integral(&s).unwrap().to_f64();
        let sym = s.antipodal_defect();
        let gain = (len_out - len_in) / len_in;
        worst_gain = worst_gain.max(gain);
        worst_sym = worst_sym.max(sym);
        worst_action = worst_action.max((action - 1.0).abs());
        if sym <= 1e-9 && (action - 1.0).abs() <= 1e-9 && gain <= SYMMETRIZE_REL {
            ok += 1;
        }
    }
    outcome(
        ok == 100,
        format!("{ok}/100 symmetric (defect {worst_sym:.1e}), unit action (|A-1| {worst_action:.1e}), length gain {worst_gain:.2e} <= 1e-6"),
    )
}

fn c10_schaffer() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, x) in [("Q²", cube(2).unwrap()), ("B²", ConvexBody::ball(2, 1.0)), ("B⁴", ConvexBody::ball(4, 1.0))] {
        let r = schaffer_min_length(&x, &SchafferConfig::default()).unwrap();
        pass &= r.length >= r.bound - SCHAFFER_SLACK;
        parts.push(format!("{name} {:.6} >= {:.4}", r.length, r.bound));
    }
    outcome(pass, format!("{} (slack 1e-3)", parts.join("; ")))
}

fn main() {
    let mut failed = Vec::new();
    let mut line = |id: usize, title: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id:>2} {title}: {} [{:.1} s]", o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failed.push(id);
        }
    };
    line(1, "hexagon golden values", &c1_hexagon);
    line(2, "ball calibration", &c2_balls);
    line(3, "l_p-sum volumes", &c3_lp_volume);
    line(4, "tensor-power volumes", &c4_tensor_power);
    let start = Instant::now();
    let reports = capacity_reports();
    println!("       (capacity runs for 5 and 6: {:.1} s)", start.elapsed().as_secs_f64());
    line(5, "capacity inequalities", &|| c5_capacity_suite(&reports));
    line(6, "cylindrical capacity", &|| c6_cza(&reports));
    line(7, "reductions stay self-polar", &c7_reductions);
    line(8, "l_2-sum min rule", &c8_disk_sum);
    line(9, "symmetrization", &c9_symmetrize);
    line(10, "boundary curve lengths", &c10_schaffer);
    if failed.is_empty() {
        println!("acceptance: 10/10 passed");
    } else {
        println!("acceptance: {} failed: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
