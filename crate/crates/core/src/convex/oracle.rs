//! Bodies known only through gauge and support evaluators.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::convex::lp_sum::LpSumBody;
use crate::convex::ConvexBody;
use crate::linalg::{dotf, norm};
use crate::optim::minimize_convex_1d;

/// Image of a body under an invertible linear map.
#[derive(Clone, Debug)]
pub struct LinearImage {
    pub body: ConvexBody,
    pub map: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
}

/// Section of `body` by the hyperplane `normal · x = 0`, projected along
/// `dir` (which lies in that hyperplane) onto coordinates `coords`.
///
/// `lift` holds vectors `w_i` in the hyperplane with `coords_j · w_i = δ_ij`
/// and `coords_j · dir = 0`, so that each fibre of the projection inside the
/// hyperplane is the line `Σ s_i w_i + t dir`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub body: ConvexBody,
    pub dir: Vec<f64>,
    pub normal: Vec<f64>,
    pub lift: Vec<Vec<f64>>,
    pub coords: Vec<Vec<f64>>,
}

/// Linear projection of `body` to the plane, `x ↦ (r_0 · x, r_1 · x)`.
#[derive(Clone, Debug)]
pub struct PlaneProjection {
    pub body: ConvexBody,
    pub rows: [Vec<f64>; 2],
}

#[derive(Clone, Debug)]
pub enum Oracle {
    Ball { dim: usize, radius: f64 },
    LpSum(Arc<LpSumBody>),
    Linear(Arc<LinearImage>),
    /// Euclidean polar of the wrapped body.
    Polar(Arc<ConvexBody>),
    Quotient(Arc<Quotient>),
    PlaneProjection(Arc<PlaneProjection>),
}

fn mat_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(x)).as_slice().to_vec()
}

fn mat_t_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (m.transpose() * DVector::from_column_slice(x)).as_slice().to_vec()
}

fn combine(vectors: &[Vec<f64>], coeffs: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (v, c) in vectors.iter().zip(coeffs) {
        for (o, a) in out.iter_mut().zip(v) {
            *o += c * a;
        }
    }
    out
}

impl Quotient {
    fn ambient(&self) -> usize {
        self.dir.len()
    }

    fn fibre_point(&self, s: &[f64], t: f64) -> Vec<f64> {
        let mut x = combine(&self.lift, s, self.ambient());
        for (xi, di) in x.iter_mut().zip(&self.dir) {
            *xi += t * di;
        }
        x
    }

    fn best_fibre_t(&self, s: &[f64]) -> f64 {
        let scale = norm(s).max(1e-300);
        minimize_convex_1d(|t| self.body.gauge(&self.fibre_point(s, t)), 0.0, scale).0
    }

    fn dual_point(&self, base: &[f64], t: f64) -> Vec<f64> {
        base.iter().zip(&self.normal).map(|(b, n)| b + t * n).collect()
    }

    fn dual_t(&self, base: &[f64], scale: f64) -> f64 {
        minimize_convex_1d(|t| self.body.support(&self.dual_point(base, t)), 0.0, scale).0
    }

    pub fn gauge(&self, s: &[f64]) -> f64 {
        self.body.gauge(&self.fibre_point(s, self.best_fibre_t(s)))
    }

    pub fn support(&self, eta: &[f64]) -> f64 {
        let base = combine(&self.coords, eta, self.ambient());
        let t = self.dual_t(&base, norm(eta).max(1e-300));
        self.body.support(&self.dual_point(&base, t))
    }

    /// A maximizer inside the section `normal · x = 0`: where the support
    /// function is not smooth the maximizer at the optimal `t` can leave the
    /// section, so the one-sided maximizers just left and right of `t` are
    /// combined to cancel their `normal` components.
    pub fn support_point(&self, eta: &[f64]) -> Vec<f64> {
        let base = combine(&self.coords, eta, self.ambient());
        let scale = norm(eta).max(1e-300);
        let t = self.dual_t(&base, scale);
        let x = balanced(|t| self.body.support_point(&self.dual_point(&base, t)), &self.normal, t, scale);
        self.coords.iter().map(|c| dotf(c, &x)).collect()
    }

    /// A subgradient orthogonal to `dir`, combined as in [`Self::support_point`].
    pub fn gauge_grad(&self, s: &[f64]) -> Vec<f64> {
        let scale = norm(s).max(1e-300);
        let t = self.best_fibre_t(s);
        let g = balanced(|t| self.body.gauge_grad(&self.fibre_point(s, t)), &self.dir, t, scale);
        self.lift.iter().map(|w| dotf(w, &g)).collect()
    }
}

/// Convex combination of `at(t - δ)` and `at(t + δ)` whose component along
/// `axis` vanishes, so the result stays in the section (or fibre).
///
/// `δ` starts at `1e-7 · scale` and grows tenfold until the two components
/// straddle zero; nested quotients perturb their own directions, which can
/// put both one-sided points on the same side for small `δ`. If they never
/// straddle, the point with the smaller component is returned.
fn balanced(at: impl Fn(f64) -> Vec<f64>, axis: &[f64], t: f64, scale: f64) -> Vec<f64> {
    let mut delta = 1e-7 * scale.max(t.abs());
    let mut nearest: Option<(f64, Vec<f64>)> = None;
    for _ in 0..6 {
        let (lo, hi) = (at(t - delta), at(t + delta));
        let (a, b) = (dotf(axis, &lo), dotf(axis, &hi));
        if a <= 0.0 && b >= 0.0 && b - a > 0.0 {
            let w = b / (b - a);
            return lo.iter().zip(&hi).map(|(x, y)| w * x + (1.0 - w) * y).collect();
        }
        if a == 0.0 && b == 0.0 {
            return lo;
        }
        for (c, p) in [(a.abs(), lo), (b.abs(), hi)] {
            if nearest.as_ref().map_or(true, |(m, _)| c < *m) {
                nearest = Some((c, p));
            }
        }
        delta *= 10.0;
    }
    nearest.expect("at least one probe").1
}

impl PlaneProjection {
    fn lift(&self, eta: &[f64]) -> Vec<f64> {
        combine(&self.rows, eta, self.rows[0].len())
    }

    pub fn support(&self, eta: &[f64]) -> f64 {
        self.body.support(&self.lift(eta))
    }

    pub fn support_point(&self, eta: &[f64]) -> Vec<f64> {
        let x = self.body.support_point(&self.lift(eta));
        vec![dotf(&self.rows[0], &x), dotf(&self.rows[1], &x)]
    }

    /// Gauge via `g(y) = max_η (η · y) / h(η)` over unit directions.
    fn gauge_and_direction(&self, y: &[f64]) -> (f64, [f64; 2]) {
        let ratio = |theta: f64| {
            let eta = [theta.cos(), theta.sin()];
            (eta[0] * y[0] + eta[1] * y[1]) / self.support(&eta)
        };
        const SAMPLES: usize = 256;
        let mut best = (0usize, f64::NEG_INFINITY);
        for k in 0..SAMPLES {
            let r = ratio(2.0 * PI * k as f64 / SAMPLES as f64);
            if r > best.1 {
                best = (k, r);
            }
        }
        let h = 2.0 * PI / SAMPLES as f64;
        let centre = 2.0 * PI * best.0 as f64 / SAMPLES as f64;
        let (mut a, mut b) = (centre - h, centre + h);
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        for _ in 0..80 {
            let x1 = b - INV_PHI * (b - a);
            let x2 = a + INV_PHI * (b - a);
            if ratio(x1) >= ratio(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        let theta = 0.5 * (a + b);
        let val = ratio(theta).max(best.1);
        (val.max(0.0), [theta.cos(), theta.sin()])
    }

    pub fn gauge(&self, y: &[f64]) -> f64 {
        self.gauge_and_direction(y).0
    }

    pub fn gauge_grad(&self, y: &[f64]) -> Vec<f64> {
        let (_, eta) = self.gauge_and_direction(y);
        let h = self.support(&eta);
        vec![eta[0] / h, eta[1] / h]
    }
}

impl Oracle {
    pub fn dim(&self) -> usize {
        match self {
            Oracle::Ball { dim, .. } => *dim,
            Oracle::LpSum(s) => s.dim(),
            Oracle::Linear(l) => l.map.nrows(),
            Oracle::Polar(b) => b.dim(),
            Oracle::Quotient(q) => q.coords.len(),
            Oracle::PlaneProjection(_) => 2,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            Oracle::Ball { .. } => true,
            Oracle::LpSum(s) => s.left.is_symmetric() && s.right.is_symmetric(),
            Oracle::Linear(l) => l.body.is_symmetric(),
            Oracle::Polar(b) => b.is_symmetric(),
            Oracle::Quotient(q) => q.body.is_symmetric(),
            Oracle::PlaneProjection(p) => p.body.is_symmetric(),
        }
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        match self {
            Oracle::Ball { radius, .. } => norm(x) / radius,
            Oracle::LpSum(s) => s.gauge(x),
            Oracle::Linear(l) => l.body.gauge(&mat_vec(&l.inverse, x)),
            Oracle::Polar(b) => b.support(x),
            Oracle::Quotient(q) => q.gauge(x),
            Oracle::PlaneProjection(p) => p.gauge(x),
        }
    }

    pub fn support(&self, y: &[f64]) -> f64 {
        match self {
            Oracle::Ball { radius, .. } => norm(y) * radius,
            Oracle::LpSum(s) => s.support(y),
            Oracle::Linear(l) => l.body.support(&mat_t_vec(&l.map, y)),
            Oracle::Polar(b) => b.gauge(y),
            Oracle::Quotient(q) => q.support(y),
            Oracle::PlaneProjection(p) => p.support(y),
        }
    }

    pub fn support_point(&self, y: &[f64]) -> Vec<f64> {
        match self {
            Oracle::Ball { radius, .. } => {
                let n = norm(y);
                if n == 0.0 {
                    let mut e = vec![0.0; y.len()];
                    e[0] = *radius;
                    return e;
                }
                y.iter().map(|v| v * radius / n).collect()
            }
            Oracle::LpSum(s) => s.support_point(y),
            Oracle::Linear(l) => mat_vec(&l.map, &l.body.support_point(&mat_t_vec(&l.map, y))),
            // argmax of y·w over the polar is the gradient of the gauge of the body
            Oracle::Polar(b) => b.gauge_grad(y),
            Oracle::Quotient(q) => q.support_point(y),
            Oracle::PlaneProjection(p) => p.support_point(y),
        }
    }

    pub fn gauge_grad(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Oracle::Ball { radius, .. } => {
                let n = norm(x);
                if n == 0.0 {
                    return vec![0.0; x.len()];
                }
                x.iter().map(|v| v / (n * radius)).collect()
            }
            Oracle::LpSum(s) => s.gauge_grad(x),
            Oracle::Linear(l) => mat_t_vec(&l.inverse, &l.body.gauge_grad(&mat_vec(&l.inverse, x))),
            Oracle::Polar(b) => b.support_point(x),
            Oracle::Quotient(q) => q.gauge_grad(x),
            Oracle::PlaneProjection(p) => p.gauge_grad(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_gauge_support_duality() {
        let b = Oracle::Ball { dim: 3, radius: 2.0 };
        let y = [1.0, 2.0, 2.0];
        assert!((b.support(&y) - 6.0).abs() < 1e-12);
        assert!((b.gauge(&b.support_point(&y)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quotient_of_ball_is_ball() {
        // section x_0 = 0, project along e_1, keep coordinates 2 and 3
        let q = Quotient {
            body: ConvexBody::ball(4, 1.0),
            dir: vec![0.0, 1.0, 0.0, 0.0],
            normal: vec![1.0, 0.0, 0.0, 0.0],
            lift: vec![vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]],
            coords: vec![vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]],
        };
        let o = Oracle::Quotient(Arc::new(q));
        assert!((o.gauge(&[0.6, 0.8]) - 1.0).abs() < 1e-9);
        assert!((o.support(&[0.0, 3.0]) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn plane_projection_of_square_gauge() {
        let sq = ConvexBody::from_int_points(2, &[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        let p = PlaneProjection { body: sq, rows: [vec![1.0, 0.0], vec![0.0, 1.0]] };
        assert!((p.gauge(&[2.0, 1.0]) - 2.0).abs() < 1e-9);
        assert!((p.gauge(&[0.5, -0.25]) - 0.5).abs() < 1e-9);
    }
}
