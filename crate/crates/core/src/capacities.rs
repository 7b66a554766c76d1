//! Brackets for the Ekeland–Hofer–Zehnder capacity `c_EHZ` and upper
//! estimates of the cylindrical affine capacity `c_ZA`.
//!
//! Lower bounds come from `(2 + 1/n) c_J(X)` and, in the plane, from the
//! area. Upper bounds come from `π max{|ω(x, y)| : x, y ∈ X}`, from areas of
//! iterated linear symplectic reductions down to the plane, and optionally
//! from the discrete Clarke-dual minimizer.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::characteristics::{clarke_minimize, CharacteristicEstimate, ClarkeConfig};
use crate::convex::oracle::Oracle;
use crate::convex::planar::{circumscribed_area, hull_area, inscribed_area};
use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{dotf, norm};
use crate::optim::nelder_mead;
use crate::scalar::{Field, Scalar};
use crate::symplectic::certificate::max_omega_over_vertices;
use crate::symplectic::cj::{c_j_with, multistart_max};
use crate::symplectic::{apply_j_raw, omega_raw, symplectic_projection, symplectic_reduction, SymplecticPlane, SymplecticSpace};

/// Support directions used for areas of planar oracle bodies.
pub const AREA_DIRECTIONS: usize = 1024;
/// Support directions used inside the `c_ZA` search for oracle bodies.
const SEARCH_DIRECTIONS: usize = 128;
/// Support directions for the final quotient of an oracle reduction chain;
/// each support value there is a nested one-dimensional minimization.
const REDUCTION_DIRECTIONS: usize = 128;
pub const DEFAULT_CHAINS: usize = 100;
pub const DEFAULT_CZA_RESTARTS: usize = 50;

/// Where a bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    CjLower,
    TwoDExact,
    PiOmegaUpper,
    ReductionUpper,
    ClarkeUpper,
    L2MinRule,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::CjLower => "cj_lower",
            Provenance::TwoDExact => "two_d_exact",
            Provenance::PiOmegaUpper => "pi_omega_upper",
            Provenance::ReductionUpper => "reduction_upper",
            Provenance::ClarkeUpper => "clarke_upper",
            Provenance::L2MinRule => "l2_min_rule",
        }
    }
}

/// One bound with its source. `certified` is false for values obtained by
/// sampling an oracle in a direction that can overshoot.
#[derive(Clone, Debug, Serialize)]
pub struct Bound {
    pub provenance: Provenance,
    pub value: Scalar,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CapacityBracket {
    pub lower: Scalar,
    pub upper: Scalar,
    pub lower_provenance: Provenance,
    pub upper_provenance: Provenance,
    /// Both chosen bounds are certified.
    pub certified: bool,
    /// Every bound that was computed, in evaluation order.
    pub lower_bounds: Vec<Bound>,
    pub upper_bounds: Vec<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionUpper>,
    /// Why the Clarke bound was not used, when it was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clarke_note: Option<String>,
}

impl CapacityBracket {
    pub fn width(&self) -> f64 {
        self.upper.to_f64() - self.lower.to_f64()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionUpper {
    /// Smallest final area over the chains.
    pub value: Scalar,
    pub chains: usize,
    pub best_chain: usize,
    pub best_vectors: Vec<Vec<f64>>,
    /// Largest `area(Y) · area(Y^ω)` over the chains, from inscribed
    /// (lower) area estimates; never above `π²` for symmetric `Y`.
    pub max_area_product: f64,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CzaEstimate {
    /// Area of the projection onto the witness plane, recomputed through
    /// [`symplectic_projection`] after the search.
    pub value: Scalar,
    /// The value the search itself reported for the witness.
    pub search_value: f64,
    /// `ω(u, v) = 1`.
    pub witness_u: Vec<f64>,
    pub witness_v: Vec<f64>,
    /// The witness is a coordinate plane `(q_i, p_i)` and `value` is exact.
    pub exact_witness: bool,
    pub restarts: usize,
    pub evaluations: usize,
    #[serde(skip)]
    pub plane: SymplecticPlane,
}

fn require_symmetric_even(x: &ConvexBody) -> Result<SymplecticSpace> {
    let space = SymplecticSpace::new(x.dim())?;
    if !x.is_symmetric() {
        return Err(Error::Asymmetric("capacity bounds here need centrally symmetric bodies".into()));
    }
    Ok(space)
}

/// Lower and upper estimates of the area of a planar body; equal for
/// polytopes, disks and linear images or projections of balls, otherwise
/// from inscribed and circumscribed polygons on [`AREA_DIRECTIONS`]
/// directions.
pub fn area_bounds_2d(y: &ConvexBody) -> Result<(Scalar, Scalar)> {
    area_bounds_with(y, AREA_DIRECTIONS)
}

fn area_bounds_with(y: &ConvexBody, directions: usize) -> Result<(Scalar, Scalar)> {
    if y.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: y.dim() });
    }
    if let Some(e) = y.as_exact() {
        let v = Scalar::Exact(e.volume());
        return Ok((v.clone(), v));
    }
    if let Some(p) = y.as_float_polytope() {
        let v = Scalar::Float(p.volume());
        return Ok((v.clone(), v));
    }
    match y.as_oracle().expect("non-polytope") {
        Oracle::Ball { radius, .. } => {
            let v = Scalar::Float(PI * radius * radius);
            Ok((v.clone(), v))
        }
        Oracle::PlaneProjection(p) => match p.body.as_oracle() {
            Some(Oracle::Ball { radius, .. }) => {
                let v = Scalar::Float(ball_projection_area(*radius, &p.rows));
                Ok((v.clone(), v))
            }
            _ => Ok(sampled_area_bounds(y, directions)),
        },
        Oracle::Linear(l) if l.body.dim() == 2 => {
            let (lo, hi) = area_bounds_with(&l.body, directions)?;
            let det = l.map.determinant().abs();
            Ok((Scalar::Float(lo.to_f64() * det), Scalar::Float(hi.to_f64() * det)))
        }
        _ => Ok(sampled_area_bounds(y, directions)),
    }
}

fn sampled_area_bounds(y: &ConvexBody, directions: usize) -> (Scalar, Scalar) {
    let lo = inscribed_area(
        |eta| {
            let p = y.support_point(&eta);
            [p[0], p[1]]
        },
        directions,
    );
    let hi = circumscribed_area(|eta| y.support(&eta), directions);
    (Scalar::Float(lo), Scalar::Float(hi))
}

/// Area of `R(rB)` for a `2 × d` matrix `R`: `πr² √det(RRᵀ)`.
fn ball_projection_area(radius: f64, rows: &[Vec<f64>; 2]) -> f64 {
    let (a, b, c) = (dotf(&rows[0], &rows[0]), dotf(&rows[0], &rows[1]), dotf(&rows[1], &rows[1]));
    PI * radius * radius * (a * c - b * b).max(0.0).sqrt()
}

/// `c_EHZ` of a planar body, which is its area.
pub fn ehz_exact_2d(y: &ConvexBody) -> Result<Scalar> {
    let (lo, hi) = area_bounds_2d(y)?;
    if lo == hi {
        Ok(lo)
    } else {
        Ok(Scalar::Float(0.5 * (lo.to_f64() + hi.to_f64())))
    }
}

fn cj_bound(x: &ConvexBody, restarts: usize, seed: u64) -> Result<Bound> {
    let space = require_symmetric_even(x)?;
    let cj = c_j_with(x, restarts, seed)?;
    let n = space.n() as i64;
    let factor = Scalar::ratio(2 * n + 1, n);
    Ok(Bound { provenance: Provenance::CjLower, value: factor.mul(&cj.value), certified: cj.certified })
}

/// `(2 + 1/n) c_J(X)`.
pub fn ehz_lower_cj(x: &ConvexBody) -> Result<Scalar> {
    Ok(cj_bound(x, crate::symplectic::cj::DEFAULT_RESTARTS, 0xc1)?.value)
}

fn pi_omega_bound(x: &ConvexBody, restarts: usize, seed: u64) -> Result<Bound> {
    require_symmetric_even(x)?;
    let (value, certified) = match x {
        ConvexBody::Polytope(p) => {
            // ω is bilinear, so the maximum over X × X sits on vertex pairs
            let m = match p.exact() {
                Some(e) => max_omega_over_vertices(e).to_f64(),
                None => max_omega_over_vertices(p.float()),
            };
            (PI * m, true)
        }
        ConvexBody::Oracle(Oracle::Ball { radius, .. }) => (PI * radius * radius, true),
        ConvexBody::Oracle(_) => {
            // max_{x,y ∈ X} ω(x, y) = max_y h_X(-Jy) / g_X(y)
            let ratio = |y: &[f64]| {
                let mjy: Vec<f64> = apply_j_raw(y).into_iter().map(|v| -v).collect();
                let g = x.gauge(y);
                if g > 0.0 {
                    x.support(&mjy) / g
                } else {
                    0.0
                }
            };
            (PI * multistart_max(x.dim(), ratio, restarts, seed), false)
        }
    };
    Ok(Bound { provenance: Provenance::PiOmegaUpper, value: Scalar::Float(value), certified })
}

/// `π max{|ω(x, y)| : x, y ∈ X} = π / c_J(X^ω)`.
pub fn ehz_upper_pi_omega(x: &ConvexBody) -> Result<Scalar> {
    Ok(pi_omega_bound(x, 50, 0x0e)?.value)
}

fn random_unit(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-9 {
            return v.into_iter().map(|t| t / n).collect();
        }
    }
}

/// Minimum over `chains` random reduction chains (each `n - 1` reductions
/// along uniformly random unit vectors) of the final planar area. Oracle
/// quotients are measured by circumscribed polygons, so the value stays an
/// upper bound. Chains run in parallel; chain `i` draws from stream `i` of
/// the seeded generator.
pub fn ehz_upper_reduction(x: &ConvexBody, chains: usize, seed: u64) -> Result<ReductionUpper> {
    let space = require_symmetric_even(x)?;
    if space.n() < 2 {
        return Err(Error::Precondition("reduction chains need dimension at least 4".into()));
    }
    if chains == 0 {
        return Err(Error::Config("at least one reduction chain is needed".into()));
    }
    let runs: Vec<Result<(f64, f64, Vec<Vec<f64>>, bool)>> = (0..chains)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut body = x.clone();
            let mut vectors = Vec::new();
            while body.dim() > 2 {
                let v = random_unit(body.dim(), &mut rng);
                body = symplectic_reduction(&body, &v)?;
                vectors.push(v);
            }
            let (lo, hi) = area_bounds_with(&body, REDUCTION_DIRECTIONS)?;
            let (polar_lo, _) = area_bounds_with(&body.polar_dual()?, REDUCTION_DIRECTIONS)?;
            Ok((hi.to_f64(), lo.to_f64() * polar_lo.to_f64(), vectors, body.is_polytope()))
        })
        .collect();
    let mut best: Option<(usize, f64, Vec<Vec<f64>>, bool)> = None;
    let mut product: f64 = 0.0;
    for (i, run) in runs.into_iter().enumerate() {
        let (area, prod, vectors, polytope) = run?;
        product = product.max(prod);
        if best.as_ref().map_or(true, |b| area < b.1) {
            best = Some((i, area, vectors, polytope));
        }
    }
    let (best_chain, value, best_vectors, _) = best.expect("at least one chain");
    Ok(ReductionUpper {
        value: Scalar::Float(value),
        chains,
        best_chain,
        best_vectors,
        max_area_product: product,
        certified: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketOptions {
    pub chains: usize,
    pub cj_restarts: usize,
    pub seed: u64,
    /// Also run the Clarke-dual solver; its bound is used only if the solver
    /// passes the disk calibration with the same configuration.
    pub clarke: Option<ClarkeConfig>,
    /// Relative slack for the ordering check on float bounds.
    pub tol: f64,
}

impl Default for BracketOptions {
    fn default() -> Self {
        Self { chains: DEFAULT_CHAINS, cj_restarts: crate::symplectic::cj::DEFAULT_RESTARTS, seed: 0, clarke: None, tol: 1e-9 }
    }
}

/// Disk calibration of the Clarke solver: the unit disk must come out
/// within 1% of `π`. Cached per `(M, restarts, max_iters, seed)`.
pub fn clarke_calibrated(config: &ClarkeConfig) -> Result<(bool, f64)> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize, u64), f64>>> = OnceLock::new();
    let key = (config.points, config.restarts, config.max_iters, config.seed);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = cache.lock().expect("calibration cache").get(&key) {
        return Ok(((v - PI).abs() <= 0.01 * PI, v));
    }
    let v = clarke_minimize(&ConvexBody::ball(2, 1.0), config)?.capacity_estimate.to_f64();
    cache.lock().expect("calibration cache").insert(key, v);
    Ok(((v - PI).abs() <= 0.01 * PI, v))
}

fn pick(bounds: &[Bound], lower: bool) -> &Bound {
    let mut best = &bounds[0];
    for b in &bounds[1..] {
        let ord = b.value.compare(&best.value);
        if (lower && ord == std::cmp::Ordering::Greater) || (!lower && ord == std::cmp::Ordering::Less) {
            best = b;
        }
    }
    best
}

fn check_order(lower: &Scalar, upper: &Scalar, tol: f64, detail: impl Fn() -> String) -> Result<()> {
    let inverted = match (lower.as_exact(), upper.as_exact()) {
        (Some(l), Some(u)) => l > u,
        _ => {
            let (l, u) = (lower.to_f64(), upper.to_f64());
            l > u + tol * (1.0 + u.abs())
        }
    };
    if inverted {
        return Err(Error::BracketInversion { lower: lower.to_f64(), upper: upper.to_f64(), detail: detail() });
    }
    Ok(())
}

/// All available bounds and the tightest bracket they give.
pub fn ehz_bracket(x: &ConvexBody, opts: &BracketOptions) -> Result<CapacityBracket> {
    let space = require_symmetric_even(x)?;
    let mut lower_bounds = Vec::new();
    let mut upper_bounds = Vec::new();
    if space.n() == 1 {
        // inscribed and circumscribed polygons bound oracle areas both ways
        let (lo, hi) = area_bounds_2d(x)?;
        lower_bounds.push(Bound { provenance: Provenance::TwoDExact, value: lo, certified: true });
        upper_bounds.push(Bound { provenance: Provenance::TwoDExact, value: hi, certified: true });
    }
    lower_bounds.push(cj_bound(x, opts.cj_restarts, opts.seed ^ 0xc1)?);
    upper_bounds.push(pi_omega_bound(x, 50, opts.seed ^ 0x0e)?);
    let mut reduction = None;
    if space.n() >= 2 {
        let r = ehz_upper_reduction(x, opts.chains, opts.seed)?;
        upper_bounds.push(Bound { provenance: Provenance::ReductionUpper, value: r.value.clone(), certified: r.certified });
        reduction = Some(r);
    }
    let mut clarke_note = None;
    if let Some(cfg) = &opts.clarke {
        let (ok, disk) = clarke_calibrated(cfg)?;
        if ok {
            let est: CharacteristicEstimate = clarke_minimize(x, cfg)?;
            upper_bounds.push(Bound { provenance: Provenance::ClarkeUpper, value: est.capacity_estimate, certified: true });
        } else {
            clarke_note = Some(format!("disk calibration gave {disk}, outside π ± 1%; clarke_upper disabled"));
        }
    }
    let lo = pick(&lower_bounds, true).clone();
    let hi = pick(&upper_bounds, false).clone();
    check_order(&lo.value, &hi.value, opts.tol, || {
        let fmt = |bs: &[Bound]| bs.iter().map(|b| format!("{}={}", b.provenance.tag(), b.value)).collect::<Vec<_>>().join(", ");
        format!("lower bounds [{}], upper bounds [{}]", fmt(&lower_bounds), fmt(&upper_bounds))
    })?;
    Ok(CapacityBracket {
        certified: lo.certified && hi.certified,
        lower: lo.value,
        upper: hi.value,
        lower_provenance: lo.provenance,
        upper_provenance: hi.provenance,
        lower_bounds,
        upper_bounds,
        reduction,
        clarke_note,
    })
}

/// Bracket for the symplectic ℓ₂-sum of two bodies from the min rule
/// `c(X ⊕₂ Y) = min{c(X), c(Y)}`.
pub fn ehz_l2_sum_bracket(bx: &CapacityBracket, by: &CapacityBracket) -> Result<CapacityBracket> {
    for b in [bx, by] {
        check_order(&b.lower, &b.upper, 1e-9, || "input bracket is inverted".into())
            .map_err(|e| Error::Precondition(e.to_string()))?;
    }
    let lower = bx.lower.clone().min(by.lower.clone());
    let upper = bx.upper.clone().min(by.upper.clone());
    let certified = bx.certified && by.certified;
    Ok(CapacityBracket {
        lower_bounds: vec![Bound { provenance: Provenance::L2MinRule, value: lower.clone(), certified }],
        upper_bounds: vec![Bound { provenance: Provenance::L2MinRule, value: upper.clone(), certified }],
        lower,
        upper,
        lower_provenance: Provenance::L2MinRule,
        upper_provenance: Provenance::L2MinRule,
        certified,
        reduction: None,
        clarke_note: None,
    })
}

/// Area of the ω-orthogonal projection onto `span{u, v}` (plane
/// coordinates `(ω(x, v)/ω(u, v), ω(u, x))`); `+∞` for near-Lagrangian
/// pairs.
fn projected_area(x: &ConvexBody, u: &[f64], v: &[f64], directions: usize) -> f64 {
    let w = omega_raw(u, v);
    if !(w.abs() > 1e-9 * norm(u) * norm(v)) {
        return f64::INFINITY;
    }
    let r0: Vec<f64> = apply_j_raw(v).into_iter().map(|t| -t / w).collect();
    let r1: Vec<f64> = apply_j_raw(u);
    match x {
        ConvexBody::Polytope(p) => {
            let pts: Vec<[f64; 2]> = p.float().vertices().iter().map(|z| [dotf(&r0, z), dotf(&r1, z)]).collect();
            hull_area(&pts)
        }
        ConvexBody::Oracle(Oracle::Ball { radius, .. }) => ball_projection_area(*radius, &[r0, r1]),
        ConvexBody::Oracle(_) => circumscribed_area(
            |eta| {
                let y: Vec<f64> = r0.iter().zip(&r1).map(|(a, b)| eta[0] * a + eta[1] * b).collect();
                x.support(&y)
            },
            directions,
        ),
    }
}

/// Upper estimate of `c_ZA(X) = inf_L area(π_L X)` over symplectic planes.
///
/// Nelder–Mead over pairs `(u, v) ∈ R^{4n}` (the redundant parametrization;
/// the area depends only on the plane), started from the `n` coordinate
/// planes and then from Gaussian pairs, `max(restarts, n)` runs in total.
pub fn cza_upper(x: &ConvexBody, restarts: usize, seed: u64) -> Result<CzaEstimate> {
    let space = require_symmetric_even(x)?;
    let (n, d) = (space.n(), space.dim());
    let total = restarts.max(n).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..total)
        .map(|i| {
            if i < n {
                let mut s = vec![0.0; 2 * d];
                s[i] = 1.0;
                s[d + n + i] = 1.0;
                s
            } else {
                (0..2 * d).map(|_| rng.sample(StandardNormal)).collect()
            }
        })
        .collect();
    let f = |z: &[f64]| projected_area(x, &z[..d], &z[d..], SEARCH_DIRECTIONS);
    let runs: Vec<(f64, Vec<f64>, usize)> = starts
        .par_iter()
        .map(|s| {
            let r = nelder_mead(f, s, 0.2, 400 * d, 1e-12);
            (r.value, r.x, r.evaluations)
        })
        .collect();
    let evaluations = runs.iter().map(|r| r.2).sum();
    let (best_idx, (search_value, z, _)) = runs
        .iter()
        .enumerate()
        .fold(None::<(usize, &(f64, Vec<f64>, usize))>, |acc, (i, r)| match acc {
            Some((_, b)) if !(r.0 < b.0) => acc,
            _ if r.0.is_finite() => Some((i, r)),
            _ => acc,
        })
        .map(|(i, r)| (i, r.clone()))
        .ok_or_else(|| Error::Optimizer(format!("all {total} projection searches failed")))?;
    // prefer an exact coordinate plane when the search cannot beat it
    let coordinate_best = (0..n)
        .map(|i| (i, f(&starts[i])))
        .fold(None::<(usize, f64)>, |acc, (i, v)| match acc {
            Some((_, b)) if !(v < b) => acc,
            _ => Some((i, v)),
        })
        .filter(|&(_, v)| v <= search_value * (1.0 + 1e-12));
    let (coordinate, best_idx, z) = match coordinate_best {
        Some((i, _)) => (true, i, starts[i].clone()),
        None => (false, best_idx, z),
    };
    let search_value = f(&z);
    let plane = if coordinate {
        SymplecticPlane::coordinate(n, best_idx)
    } else {
        SymplecticPlane::new(z[..d].to_vec(), z[d..].to_vec())?
    };
    let (_, area) = area_bounds_2d(&symplectic_projection(x, &plane)?)?;
    Ok(CzaEstimate {
        exact_witness: coordinate && area.is_exact(),
        value: area,
        search_value,
        witness_u: plane.u().to_vec(),
        witness_v: plane.v().to_vec(),
        restarts: total,
        evaluations,
        plane,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> ConvexBody {
        ConvexBody::from_int_points(2, &[vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]])
            .unwrap()
    }

    fn square() -> ConvexBody {
        ConvexBody::from_int_points(2, &[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap()
    }

    #[test]
    fn planar_values() {
        assert_eq!(ehz_exact_2d(&hexagon()).unwrap(), Scalar::from_int(3));
        assert_eq!(ehz_exact_2d(&square()).unwrap(), Scalar::from_int(4));
        assert_eq!(ehz_exact_2d(&ConvexBody::ball(2, 1.0)).unwrap().to_f64(), PI);
        assert!(ehz_exact_2d(&ConvexBody::ball(4, 1.0)).is_err());
    }

    #[test]
    fn hexagon_bracket_is_tight() {
        let b = ehz_bracket(&hexagon(), &BracketOptions::default()).unwrap();
        assert_eq!(b.lower, Scalar::from_int(3));
        assert_eq!(b.upper, Scalar::from_int(3));
        assert!(b.certified);
        assert_eq!(ehz_lower_cj(&hexagon()).unwrap(), Scalar::from_int(3));
        assert!((ehz_upper_pi_omega(&hexagon()).unwrap().to_f64() - PI).abs() < 1e-12);
    }

    #[test]
    fn ball_bounds() {
        let b4 = ConvexBody::ball(4, 1.0);
        assert_eq!(ehz_lower_cj(&b4).unwrap().to_f64(), 2.5);
        assert_eq!(ehz_upper_pi_omega(&b4).unwrap().to_f64(), PI);
        assert_eq!(ehz_upper_pi_omega(&ConvexBody::ball(2, 2.0)).unwrap().to_f64(), 4.0 * PI);
        let r = ehz_upper_reduction(&b4, 4, 1).unwrap();
        // the reduced disk is measured by a circumscribed regular polygon
        let n = REDUCTION_DIRECTIONS as f64;
        assert!(r.value.to_f64() >= PI);
        assert!((r.value.to_f64() - n * (PI / n).tan()).abs() < 1e-5, "{}", r.value);
        assert!(r.max_area_product <= PI * PI + 1e-9);
        let br = ehz_bracket(&b4, &BracketOptions { chains: 4, ..Default::default() }).unwrap();
        assert_eq!(br.lower.to_f64(), 2.5);
        assert_eq!(br.upper.to_f64(), PI);
    }

    #[test]
    fn l2_rule() {
        let d1 = ehz_bracket(&ConvexBody::ball(2, 1.0), &BracketOptions::default()).unwrap();
        let d2 = ehz_bracket(&ConvexBody::ball(2, 2.0), &BracketOptions::default()).unwrap();
        let s = ehz_l2_sum_bracket(&d1, &d2).unwrap();
        assert_eq!(s.lower.to_f64(), PI);
        assert_eq!(s.upper.to_f64(), PI);
        let h = ehz_bracket(&hexagon(), &BracketOptions::default()).unwrap();
        let hh = ehz_l2_sum_bracket(&h, &h).unwrap();
        assert_eq!((hh.lower, hh.upper), (h.lower, h.upper));
    }

    #[test]
    fn cza_of_ball_and_hexagon() {
        let c = cza_upper(&ConvexBody::ball(4, 1.0), 4, 0).unwrap();
        assert!((c.value.to_f64() - PI).abs() < 1e-9);
        let h = cza_upper(&hexagon(), 2, 0).unwrap();
        assert_eq!(h.value, Scalar::from_int(3));
        assert!(h.exact_witness);
    }
}
