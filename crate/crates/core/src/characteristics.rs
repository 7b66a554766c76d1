//! Closed characteristics through a discrete Clarke-dual problem: minimize
//! the `h^ω`-length of a closed polygon subject to unit action.
//!
//! Conventions: `ω(x, y) = ⟨Jx, y⟩`, `h^ω_X(y) = max_{x ∈ X} ω(x, y) = h_X(-Jy)`
//! and the action of a closed curve is `∮ -Σ p_i dq_i`, which is `+area` for a
//! counter-clockwise curve in the `(q, p)` plane.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{dotf, norm};
use crate::optim::lbfgs;
use crate::scalar::Scalar;
use crate::symplectic::{apply_j_raw, omega_raw, SymplecticSpace};

/// A closed polygon; the successor of the last point is the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct ClosedCurve {
    points: Vec<Vec<f64>>,
}

impl TryFrom<Vec<Vec<f64>>> for ClosedCurve {
    type Error = Error;
    fn try_from(points: Vec<Vec<f64>>) -> Result<Self> {
        ClosedCurve::new(points)
    }
}

impl From<ClosedCurve> for Vec<Vec<f64>> {
    fn from(c: ClosedCurve) -> Self {
        c.points
    }
}

impl ClosedCurve {
    pub const MIN_POINTS: usize = 8;

    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() < Self::MIN_POINTS {
            return Err(Error::Precondition(format!(
                "a closed curve needs at least {} points, got {}",
                Self::MIN_POINTS,
                points.len()
            )));
        }
        let d = points[0].len();
        if let Some(bad) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: bad.len() });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("curve points must be finite".into()));
        }
        if points.iter().all(|p| p == &points[0]) {
            return Err(Error::Degenerate("all curve points coincide".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// Edge vectors `γ_{i+1} - γ_i`, cyclically.
    pub fn edges(&self) -> Vec<Vec<f64>> {
        let m = self.len();
        (0..m)
            .map(|i| self.points[(i + 1) % m].iter().zip(&self.points[i]).map(|(a, b)| a - b).collect())
            .collect()
    }

    pub fn scaled(&self, s: f64) -> ClosedCurve {
        ClosedCurve { points: self.points.iter().map(|p| p.iter().map(|v| v * s).collect()).collect() }
    }

    pub fn translated(&self, t: &[f64]) -> ClosedCurve {
        ClosedCurve { points: self.points.iter().map(|p| p.iter().zip(t).map(|(a, b)| a + b).collect()).collect() }
    }

    pub fn reversed(&self) -> ClosedCurve {
        let mut points = self.points.clone();
        points.reverse();
        ClosedCurve { points }
    }

    pub fn centroid(&self) -> Vec<f64> {
        let m = self.len() as f64;
        let mut c = vec![0.0; self.dim()];
        for p in &self.points {
            for (ci, pi) in c.iter_mut().zip(p) {
                *ci += pi / m;
            }
        }
        c
    }

    /// `max_i |γ_i + γ_{i+M/2}|`; zero for a centrally symmetric curve.
    pub fn antipodal_defect(&self) -> f64 {
        let m = self.len();
        if m % 2 == 1 {
            return f64::INFINITY;
        }
        (0..m / 2)
            .map(|i| {
                let s: Vec<f64> = self.points[i].iter().zip(&self.points[i + m / 2]).map(|(a, b)| a + b).collect();
                norm(&s)
            })
            .fold(0.0, f64::max)
    }
}

fn action_raw(points: &[Vec<f64>]) -> f64 {
    let m = points.len();
    let n = points[0].len() / 2;
    let mut total = 0.0;
    for i in 0..m {
        let (a, b) = (&points[i], &points[(i + 1) % m]);
        for k in 0..n {
            // trapezoidal increment of -p dq
            total -= 0.5 * (a[n + k] + b[n + k]) * (b[k] - a[k]);
        }
    }
    total
}

/// `∮ -Σ p_i dq_i` by trapezoidal increments (exact for polygons); the
/// signed enclosed area for planar curves.
pub fn liouville_integral(curve: &ClosedCurve) -> Result<Scalar> {
    SymplecticSpace::new(curve.dim())?;
    Ok(Scalar::Float(action_raw(curve.points())))
}

fn omega_support(x: &ConvexBody, y: &[f64]) -> f64 {
    let mjy: Vec<f64> = apply_j_raw(y).into_iter().map(|v| -v).collect();
    x.support(&mjy)
}

/// `Σ_i h^ω_X(γ_{i+1} - γ_i)`.
pub fn h_omega_length(curve: &ClosedCurve, x: &ConvexBody) -> Result<Scalar> {
    SymplecticSpace::new(curve.dim())?;
    if curve.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: curve.dim() });
    }
    Ok(Scalar::Float(curve.edges().iter().map(|e| omega_support(x, e)).sum()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClarkeConfig {
    /// Number of curve points `M` (even, at least 8).
    pub points: usize,
    pub restarts: usize,
    /// Allowed `|action - 1|` at return.
    pub constraint_tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for ClarkeConfig {
    fn default() -> Self {
        Self { points: 256, restarts: 20, constraint_tol: 1e-9, max_iters: 3000, seed: 0 }
    }
}

impl ClarkeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points < ClosedCurve::MIN_POINTS || self.points % 2 == 1 {
            return Err(Error::Config(format!("M = {} must be even and at least 8", self.points)));
        }
        if self.restarts == 0 {
            return Err(Error::Config("at least one restart is needed".into()));
        }
        if !(self.constraint_tol > 0.0) {
            return Err(Error::Config("constraint tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacteristicEstimate {
    pub curve: ClosedCurve,
    pub h_omega_length: Scalar,
    pub liouville_integral: Scalar,
    /// `h_omega_length² / 4`.
    pub capacity_estimate: Scalar,
    pub characteristic_residual: Scalar,
    /// The body is a polytope, so subgradients were selected at kinks.
    pub nonsmooth: bool,
    pub restarts: usize,
    /// Index of the winning restart.
    pub best_restart: usize,
    /// Objective `length² / (4 action)` per iteration of the winning restart.
    pub trace: Vec<f64>,
}

/// Value and gradient of `L² / A` in the flattened curve coordinates.
fn ratio_and_grad(x: &ConvexBody, flat: &[f64], m: usize, d: usize) -> (f64, Vec<f64>) {
    let pts: Vec<&[f64]> = flat.chunks(d).collect();
    let mut length = 0.0;
    let mut action = 0.0;
    let mut grad_l = vec![0.0; m * d];
    let mut grad_a = vec![0.0; m * d];
    for i in 0..m {
        let j = (i + 1) % m;
        let e: Vec<f64> = pts[j].iter().zip(pts[i]).map(|(a, b)| a - b).collect();
        let mje: Vec<f64> = apply_j_raw(&e).into_iter().map(|v| -v).collect();
        let xs = x.support_point(&mje);
        length += dotf(&xs, &mje);
        // d/de h_X(-Je) = J x*
        let jx = apply_j_raw(&xs);
        for k in 0..d {
            grad_l[j * d + k] += jx[k];
            grad_l[i * d + k] -= jx[k];
        }
        action += 0.5 * omega_raw(pts[i], pts[j]);
        // ∂/∂a ω(a, b) = -Jb, ∂/∂b ω(a, b) = Ja
        let jb = apply_j_raw(pts[j]);
        let ja = apply_j_raw(pts[i]);
        for k in 0..d {
            grad_a[i * d + k] -= 0.5 * jb[k];
            grad_a[j * d + k] += 0.5 * ja[k];
        }
    }
    if !(action > 0.0) {
        return (f64::INFINITY, vec![0.0; m * d]);
    }
    let value = length * length / (4.0 * action);
    let grad = grad_l
        .iter()
        .zip(&grad_a)
        .map(|(gl, ga)| 2.0 * length * gl / (4.0 * action) - length * length * ga / (4.0 * action * action))
        .collect();
    (value, grad)
}

/// A random ellipse in a random symplectic plane, positively oriented.
fn initial_curve(d: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let (a, mut b) = loop {
        let a: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let b: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        if omega_raw(&a, &b).abs() > 0.1 * norm(&a) * norm(&b) {
            break (a, b);
        }
    };
    if omega_raw(&a, &b) < 0.0 {
        b.iter_mut().for_each(|v| *v = -*v);
    }
    (0..m)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            a.iter().zip(&b).map(|(x, y)| t.cos() * x + t.sin() * y).collect()
        })
        .collect()
}

fn normalize_action(points: &mut [Vec<f64>]) -> Result<()> {
    let a = action_raw(points);
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Degenerate(format!("curve action {a} is not positive")));
    }
    let s = 1.0 / a.sqrt();
    points.iter_mut().flatten().for_each(|v| *v *= s);
    Ok(())
}

/// Minimizes `h_omega_length` over closed `M`-gons of unit action, from
/// `restarts` random ellipses (run in parallel, best kept; ties go to the
/// lowest restart index). The returned curve is rescaled to action exactly 1
/// up to rounding; `capacity_estimate = length² / 4`.
pub fn clarke_minimize(x: &ConvexBody, config: &ClarkeConfig) -> Result<CharacteristicEstimate> {
    config.validate()?;
    SymplecticSpace::new(x.dim())?;
    let (d, m) = (x.dim(), config.points);
    let runs: Vec<Result<(f64, Vec<Vec<f64>>, Vec<f64>)>> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            let mut start = initial_curve(d, m, &mut rng);
            normalize_action(&mut start)?;
            let flat: Vec<f64> = start.concat();
            let mut trace = Vec::new();
            let res = lbfgs(|z| ratio_and_grad(x, z, m, d), &flat, config.max_iters, 1e-12, Some(&mut trace));
            let mut pts: Vec<Vec<f64>> = res.x.chunks(d).map(|c| c.to_vec()).collect();
            normalize_action(&mut pts)?;
            let length: f64 = (0..m)
                .map(|i| {
                    let e: Vec<f64> = pts[(i + 1) % m].iter().zip(&pts[i]).map(|(a, b)| a - b).collect();
                    omega_support(x, &e)
                })
                .sum();
            Ok((length, pts, trace))
        })
        .collect();
    let mut best: Option<(usize, f64, Vec<Vec<f64>>, Vec<f64>)> = None;
    let mut failures = Vec::new();
    for (i, run) in runs.into_iter().enumerate() {
        match run {
            Ok((len, pts, trace)) if len.is_finite() => {
                if best.as_ref().map_or(true, |b| len < b.1) {
                    best = Some((i, len, pts, trace));
                }
            }
            Ok((len, ..)) => failures.push(format!("restart {i}: length {len}")),
            Err(e) => failures.push(format!("restart {i}: {e}")),
        }
    }
    let (best_restart, length, pts, trace) =
        best.ok_or_else(|| Error::Optimizer(format!("every restart diverged: {}", failures.join("; "))))?;
    let curve = ClosedCurve::new(pts)?;
    let action = action_raw(curve.points());
    if (action - 1.0).abs() > config.constraint_tol {
        return Err(Error::Optimizer(format!("action {action} violates the unit constraint")));
    }
    let residual = characteristic_residual(&curve, x)?;
    Ok(CharacteristicEstimate {
        h_omega_length: Scalar::Float(length),
        liouville_integral: Scalar::Float(action),
        capacity_estimate: Scalar::Float(length * length / 4.0),
        characteristic_residual: residual,
        nonsmooth: x.is_polytope(),
        restarts: config.restarts,
        best_restart,
        trace,
        curve,
    })
}

/// Relative RMS of `c·Δγ_i/Δt - J∇g_X(m_i)` over edges, with `m_i` the edge
/// midpoint and the speed factor `c >= 0` chosen by least squares (the
/// curve carries no intrinsic time). `0` for an exact characteristic; about
/// `1` for a characteristic traversed backwards.
pub fn characteristic_residual(curve: &ClosedCurve, x: &ConvexBody) -> Result<Scalar> {
    SymplecticSpace::new(curve.dim())?;
    if curve.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: curve.dim() });
    }
    let m = curve.len();
    let pts = curve.points();
    let mut velocities = Vec::with_capacity(m);
    let mut fields = Vec::with_capacity(m);
    for i in 0..m {
        let (a, b) = (&pts[i], &pts[(i + 1) % m]);
        velocities.push(b.iter().zip(a).map(|(p, q)| (p - q) * m as f64).collect::<Vec<f64>>());
        let mid: Vec<f64> = a.iter().zip(b).map(|(p, q)| 0.5 * (p + q)).collect();
        fields.push(apply_j_raw(&x.gauge_grad(&mid)));
    }
    let vf: f64 = velocities.iter().zip(&fields).map(|(v, f)| dotf(v, f)).sum();
    let vv: f64 = velocities.iter().map(|v| dotf(v, v)).sum();
    let ff: f64 = fields.iter().map(|f| dotf(f, f)).sum();
    if ff == 0.0 {
        return Err(Error::Degenerate("gauge gradient vanishes along the curve".into()));
    }
    let c = if vv > 0.0 { (vf / vv).max(0.0) } else { 0.0 };
    let sq: f64 = velocities
        .iter()
        .zip(&fields)
        .map(|(v, f)| v.iter().zip(f).map(|(a, b)| (c * a - b).powi(2)).sum::<f64>())
        .sum();
    Ok(Scalar::Float((sq / ff).sqrt()))
}

/// Central symmetrization of a closed curve with positive action.
///
/// The curve is split at the point of half `h^ω`-length; each half `γ_k` is
/// translated so that it runs from `-x` to `x` and completed to
/// `γ_k ∪ (-γ_k)`; the completion with the larger action is kept and
/// rescaled to unit action. For symmetric `X` both completions have the
/// input's length and one of them has at least the input's action, so the
/// rescaled length never grows. Straight edges are subdivided (which changes
/// neither length nor action) until the output has at least as many points
/// as the input; points `i` and `i + M'/2` of the output are antipodal.
pub fn symmetrize(curve: &ClosedCurve, x: &ConvexBody) -> Result<ClosedCurve> {
    SymplecticSpace::new(curve.dim())?;
    if curve.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: curve.dim() });
    }
    if !x.is_symmetric() {
        return Err(Error::Asymmetric("symmetrization measures length with a symmetric body".into()));
    }
    let m = curve.len();
    if m % 2 == 1 {
        return Err(Error::Precondition("symmetrization needs an even number of points".into()));
    }
    if !(action_raw(curve.points()) > 0.0) {
        return Err(Error::Precondition("curve action must be positive".into()));
    }
    let pts = curve.points();
    let lengths: Vec<f64> = curve.edges().iter().map(|e| omega_support(x, e)).collect();
    let total: f64 = lengths.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Refinement(format!("curve length {total} cannot be halved")));
    }
    // locate the half-length point on edge j at fraction t
    let half = 0.5 * total;
    let mut acc = 0.0;
    let mut split = None;
    for (j, &l) in lengths.iter().enumerate() {
        if acc + l >= half && l > 0.0 {
            split = Some((j, ((half - acc) / l).clamp(0.0, 1.0)));
            break;
        }
        acc += l;
    }
    let (j, t) = split.ok_or_else(|| Error::Refinement("no edge carries the half-length point".into()))?;
    let a = &pts[j];
    let b = &pts[(j + 1) % m];
    let mid: Vec<f64> = a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect();
    // first half: γ_0 .. γ_j, mid; second half: mid, γ_{j+1} .. γ_{M-1}, γ_0
    let mut first: Vec<Vec<f64>> = pts[..=j].to_vec();
    first.push(mid.clone());
    let mut second = vec![mid];
    second.extend_from_slice(&pts[j + 1..]);
    second.push(pts[0].clone());
    let candidates: Vec<Vec<Vec<f64>>> = [first, second]
        .into_iter()
        .map(|half_curve| complete_symmetric(&half_curve, m))
        .collect();
    let actions: Vec<f64> = candidates.iter().map(|c| action_raw(c)).collect();
    let pick = if actions[1] > actions[0] { 1 } else { 0 };
    let mut out = candidates[pick].clone();
    normalize_action(&mut out).map_err(|e| Error::Refinement(format!("symmetrized curve is degenerate: {e}")))?;
    ClosedCurve::new(out)
}

/// `γ ∪ (-γ)` for a polyline `γ` after centring its endpoints, with edge
/// subdivision up to `target` points.
fn complete_symmetric(half: &[Vec<f64>], target: usize) -> Vec<Vec<f64>> {
    let (start, end) = (&half[0], &half[half.len() - 1]);
    let centre: Vec<f64> = start.iter().zip(end).map(|(a, b)| 0.5 * (a + b)).collect();
    let mut nodes: Vec<Vec<f64>> = half.iter().map(|p| p.iter().zip(&centre).map(|(a, c)| a - c).collect()).collect();
    // drop the end point: it is minus the start point
    nodes.pop();
    // drop repeated nodes (a split exactly at a vertex)
    nodes.dedup();
    while 2 * nodes.len() < target {
        // subdivide the longest Euclidean edge of the half, including the
        // closing edge to -start
        let k = nodes.len();
        let edge = |i: usize| -> Vec<f64> {
            let next: Vec<f64> = if i + 1 < k { nodes[i + 1].clone() } else { nodes[0].iter().map(|v| -v).collect() };
            next.iter().zip(&nodes[i]).map(|(a, b)| a - b).collect()
        };
        let i = (0..k).max_by(|&p, &q| norm(&edge(p)).total_cmp(&norm(&edge(q))).then(q.cmp(&p))).unwrap_or(0);
        let e = edge(i);
        let midpoint: Vec<f64> = nodes[i].iter().zip(&e).map(|(a, b)| a + 0.5 * b).collect();
        nodes.insert(i + 1, midpoint);
    }
    let mut out = nodes.clone();
    out.extend(nodes.iter().map(|p| p.iter().map(|v| -v).collect::<Vec<f64>>()));
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchafferConfig {
    /// Free nodes on half of the curve; the other half is their negation.
    pub half_points: usize,
    /// Radially projected sub-steps per edge used to measure length.
    pub substeps: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SchafferConfig {
    fn default() -> Self {
        Self { half_points: 16, substeps: 8, restarts: 4, max_iters: 200, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchafferResult {
    /// Smallest gauge length found.
    pub length: f64,
    /// `4 + 4/d`.
    pub bound: f64,
    pub dim: usize,
    pub curve: Vec<Vec<f64>>,
}

fn radial(x: &ConvexBody, z: &[f64]) -> Option<Vec<f64>> {
    let g = x.gauge(z);
    if !(g > 1e-12) || !g.is_finite() {
        return None;
    }
    Some(z.iter().map(|v| v / g).collect())
}

/// Largest Euclidean sub-step, relative to the body's outer radius, used
/// when following an edge along the boundary.
const MAX_SUBSTEP: f64 = 0.01;
const MAX_SUBDIVISION: usize = 1 << 12;

/// Gauge length of the radial projection of the segment `[a, b]` onto `∂X`,
/// subdivided until every sub-step is short.
fn projected_edge_length(x: &ConvexBody, a: &[f64], b: &[f64], substeps: usize, cap: f64) -> f64 {
    let mut s = substeps;
    loop {
        let Some(mut prev) = radial(x, a) else {
            return f64::INFINITY;
        };
        let mut total = 0.0;
        let mut longest: f64 = 0.0;
        for i in 1..=s {
            let t = i as f64 / s as f64;
            let z: Vec<f64> = a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect();
            let Some(cur) = radial(x, &z) else {
                return f64::INFINITY;
            };
            let step: Vec<f64> = cur.iter().zip(&prev).map(|(p, q)| p - q).collect();
            longest = longest.max(norm(&step));
            total += x.gauge(&step);
            prev = cur;
        }
        if longest <= cap || s >= MAX_SUBDIVISION {
            return total;
        }
        s *= 2;
    }
}

/// Gauge length of the symmetric boundary curve through the radial
/// projections of `nodes` and their negatives.
fn boundary_length(x: &ConvexBody, nodes: &[f64], d: usize, substeps: usize, cap: f64) -> f64 {
    let k = nodes.len() / d;
    let node = |i: usize| -> Vec<f64> {
        if i < k {
            nodes[i * d..(i + 1) * d].to_vec()
        } else {
            nodes[..d].iter().map(|v| -v).collect()
        }
    };
    2.0 * (0..k).map(|i| projected_edge_length(x, &node(i), &node(i + 1), substeps, cap)).sum::<f64>()
}

/// Minimal gauge length of centrally symmetric closed curves on `∂X`.
///
/// Curves pass through `2k` boundary nodes in antipodal pairs; each edge is
/// followed along `∂X` by radially projecting interpolation points (at least
/// `substeps`, refined until sub-steps are shorter than 1% of the outer
/// radius), so the measured length undercuts the boundary curve only by the
/// chord error of the sub-steps. Optimized by L-BFGS with
/// central-difference gradients from great-circle-like starts.
pub fn schaffer_min_length(x: &ConvexBody, config: &SchafferConfig) -> Result<SchafferResult> {
    if !x.is_symmetric() {
        return Err(Error::Asymmetric("the girth bound concerns symmetric bodies".into()));
    }
    if config.half_points < 2 || config.substeps == 0 || config.restarts == 0 {
        return Err(Error::Config("need at least 2 half points, 1 sub-step and 1 restart".into()));
    }
    let d = x.dim();
    if d < 2 {
        return Err(Error::Precondition("curves need ambient dimension at least 2".into()));
    }
    let k = config.half_points;
    let cap = MAX_SUBSTEP * x.radius_bounds().1;
    let runs: Vec<(f64, Vec<f64>)> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            let a: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let mut b: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let na = norm(&a);
            let a: Vec<f64> = a.iter().map(|v| v / na).collect();
            let ab = dotf(&a, &b);
            b.iter_mut().zip(&a).for_each(|(bv, av)| *bv -= ab * av);
            let nb = norm(&b);
            b.iter_mut().for_each(|v| *v /= nb);
            let mut start = Vec::with_capacity(k * d);
            for i in 0..k {
                let t = std::f64::consts::PI * i as f64 / k as f64;
                for c in 0..d {
                    let noise: f64 = if r == 0 { 0.0 } else { 0.05 * rng.sample::<f64, _>(StandardNormal) };
                    start.push(t.cos() * a[c] + t.sin() * b[c] + noise);
                }
            }
            let f = |z: &[f64]| boundary_length(x, z, d, config.substeps, cap);
            let fg = |z: &[f64]| {
                let v = f(z);
                let mut g = vec![0.0; z.len()];
                let mut w = z.to_vec();
                for i in 0..z.len() {
                    let h = 1e-6 * (1.0 + z[i].abs());
                    w[i] = z[i] + h;
                    let up = f(&w);
                    w[i] = z[i] - h;
                    let down = f(&w);
                    w[i] = z[i];
                    g[i] = if up.is_finite() && down.is_finite() { (up - down) / (2.0 * h) } else { 0.0 };
                }
                (v, g)
            };
            let res = lbfgs(fg, &start, config.max_iters, 1e-10, None);
            let v = f(&res.x);
            (v, res.x)
        })
        .collect();
    let (best, nodes) = runs
        .into_iter()
        .fold((f64::INFINITY, Vec::new()), |acc, run| if run.0 < acc.0 { run } else { acc });
    if !best.is_finite() {
        return Err(Error::Degenerate("boundary projection failed on every restart".into()));
    }
    let mut curve: Vec<Vec<f64>> = nodes.chunks(d).filter_map(|z| radial(x, z)).collect();
    let negated: Vec<Vec<f64>> = curve.iter().map(|p| p.iter().map(|v| -v).collect()).collect();
    curve.extend(negated);
    Ok(SchafferResult { length: best, bound: 4.0 + 4.0 / d as f64, dim: d, curve })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(m: usize, r: f64) -> ClosedCurve {
        ClosedCurve::new(
            (0..m)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / m as f64;
                    vec![r * t.cos(), r * t.sin()]
                })
                .collect(),
        )
        .unwrap()
    }

    fn unit_action(c: ClosedCurve) -> ClosedCurve {
        let a = liouville_integral(&c).unwrap().to_f64();
        c.scaled(1.0 / a.sqrt())
    }

    fn hexagon() -> ConvexBody {
        ConvexBody::from_int_points(2, &[vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]])
            .unwrap()
    }

    #[test]
    fn action_of_circle() {
        let c = circle(256, 1.0);
        let a = liouville_integral(&c).unwrap().to_f64();
        assert!((a - PI).abs() < 1e-3);
        assert!((liouville_integral(&c.reversed()).unwrap().to_f64() + a).abs() < 1e-12);
        assert!((liouville_integral(&c.scaled(3.0)).unwrap().to_f64() - 9.0 * a).abs() < 1e-9);
    }

    #[test]
    fn length_on_disk() {
        let b = ConvexBody::ball(2, 1.0);
        let c = circle(4096, 1.0 / PI.sqrt());
        let l = h_omega_length(&c, &b).unwrap().to_f64();
        assert!((l - 2.0 * PI.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn residual_distinguishes_orientation() {
        let b = ConvexBody::ball(2, 1.0);
        let c = circle(512, 1.0);
        assert!(characteristic_residual(&c, &b).unwrap().to_f64() < 1e-4);
        assert!(characteristic_residual(&c.reversed(), &b).unwrap().to_f64() > 0.9);
    }

    #[test]
    fn short_curves_rejected() {
        assert!(ClosedCurve::new(vec![vec![0.0, 1.0]; 4]).is_err());
        assert!(ClosedCurve::new(vec![vec![0.0, 1.0]; 8]).is_err());
    }

    #[test]
    fn clarke_on_hexagon_is_close_to_area() {
        let cfg = ClarkeConfig { points: 64, restarts: 4, ..Default::default() };
        let est = clarke_minimize(&hexagon(), &cfg).unwrap();
        let c = est.capacity_estimate.to_f64();
        assert!(c >= 3.0 - 1e-9 && c < 3.0 * 1.02, "{c}");
    }

    #[test]
    fn symmetrize_keeps_symmetric_circle() {
        let b = ConvexBody::ball(2, 1.0);
        let c = unit_action(circle(64, 1.0));
        let s = symmetrize(&c, &b).unwrap();
        assert!(s.antipodal_defect() < 1e-12);
        let l0 = h_omega_length(&c, &b).unwrap().to_f64();
        let l1 = h_omega_length(&s, &b).unwrap().to_f64();
        assert!(l1 <= l0 * (1.0 + 1e-9));
    }

    #[test]
    fn symmetrize_off_centre_circle() {
        let b = ConvexBody::ball(2, 1.0);
        let c = unit_action(circle(64, 1.0)).translated(&[0.7, -0.2]);
        let s = symmetrize(&c, &b).unwrap();
        assert!(s.antipodal_defect() < 1e-12);
        assert!((liouville_integral(&s).unwrap().to_f64() - 1.0).abs() < 1e-12);
        let l0 = h_omega_length(&c, &b).unwrap().to_f64();
        assert!(h_omega_length(&s, &b).unwrap().to_f64() <= l0 * (1.0 + 1e-9));
    }

    #[test]
    fn schaffer_disk() {
        let r = schaffer_min_length(&ConvexBody::ball(2, 1.0), &SchafferConfig::default()).unwrap();
        assert!(r.length >= 6.0 && (r.length - 2.0 * PI).abs() < 1e-3, "{}", r.length);
    }
}
