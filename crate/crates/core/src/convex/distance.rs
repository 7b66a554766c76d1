//! Hausdorff distance between convex bodies.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{dotf, norm};
use crate::scalar::{Rational, Scalar};

/// Default number of sampled directions for oracle bodies.
pub const DEFAULT_DIRECTIONS: usize = 10_000;

/// Minimum-norm point of the convex hull of `points` (Wolfe's algorithm).
pub fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    let scale = points.iter().map(|p| dotf(p, p)).fold(0.0, f64::max).max(1e-300);
    let eps = 1e-12;
    let start = (0..points.len())
        .min_by(|&i, &j| dotf(&points[i], &points[i]).total_cmp(&dotf(&points[j], &points[j])))
        .expect("nonempty point set");
    let mut active = vec![start];
    let mut weights = vec![1.0];
    let mut x = points[start].clone();
    for _ in 0..1000 {
        let (j, best) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dotf(&x, p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if best >= dotf(&x, &x) - eps * scale || active.contains(&j) {
            break;
        }
        active.push(j);
        weights.push(0.0);
        loop {
            let k = active.len();
            let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
            for a in 0..k {
                for b in 0..k {
                    m[(a, b)] = dotf(&points[active[a]], &points[active[b]]);
                }
                m[(a, k)] = 1.0;
                m[(k, a)] = 1.0;
            }
            let mut rhs = DVector::<f64>::zeros(k + 1);
            rhs[k] = 1.0;
            let Some(sol) = m.lu().solve(&rhs) else {
                // affinely dependent active set: drop the newest point
                active.pop();
                weights.pop();
                return x;
            };
            let mu: Vec<f64> = (0..k).map(|i| sol[i]).collect();
            if mu.iter().all(|&v| v > eps) {
                weights = mu;
                x = combine(points, &active, &weights);
                break;
            }
            let mut theta = 1.0f64;
            for i in 0..k {
                if mu[i] <= eps {
                    let denom = weights[i] - mu[i];
                    if denom > 0.0 {
                        theta = theta.min(weights[i] / denom);
                    }
                }
            }
            for i in 0..k {
                weights[i] += theta * (mu[i] - weights[i]);
            }
            let mut keep = 0;
            for i in 0..k {
                if weights[i] > eps {
                    active[keep] = active[i];
                    weights[keep] = weights[i];
                    keep += 1;
                }
            }
            active.truncate(keep.max(1));
            weights.truncate(keep.max(1));
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            x = combine(points, &active, &weights);
        }
    }
    x
}

fn combine(points: &[Vec<f64>], idx: &[usize], w: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[0].len()];
    for (&i, &wi) in idx.iter().zip(w) {
        for (xj, pj) in x.iter_mut().zip(&points[i]) {
            *xj += wi * pj;
        }
    }
    x
}

/// Euclidean distance from `a` to `conv(vertices)`.
pub fn point_to_hull_distance(a: &[f64], vertices: &[Vec<f64>]) -> f64 {
    let shifted: Vec<Vec<f64>> = vertices.iter().map(|v| v.iter().zip(a).map(|(x, y)| x - y).collect()).collect();
    norm(&min_norm_point(&shifted))
}

/// Deterministic unit directions (Gaussian samples normalized).
pub fn sample_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count + 2 * dim);
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[i] = s;
            out.push(e);
        }
    }
    while out.len() < count + 2 * dim {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            out.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    out
}

/// Like [`sample_directions`] but closed under `u ↦ -u`.
pub fn symmetric_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let half = sample_directions(dim, count.div_ceil(2), seed);
    let mut out = Vec::with_capacity(2 * half.len());
    for u in half {
        out.push(u.iter().map(|x| -x).collect());
        out.push(u);
    }
    out
}

/// `sup_{|u| = 1} |h_A(u) - h_B(u)|` over sampled directions (a lower
/// estimate of the Hausdorff distance).
pub fn support_distance(a: &ConvexBody, b: &ConvexBody, directions: &[Vec<f64>]) -> f64 {
    directions.iter().map(|u| (a.support(u) - b.support(u)).abs()).fold(0.0, f64::max)
}

/// Hausdorff distance.
///
/// Two polytopes: maximum over vertices of the distance to the other body,
/// which is exact up to the min-norm solver (and exactly zero for equal exact
/// vertex sets). Otherwise: maximum support-function gap over `directions`
/// seeded directions.
pub fn hausdorff_distance(a: &ConvexBody, b: &ConvexBody, directions: usize, seed: u64) -> Result<Scalar> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    if let (Some(ea), Some(eb)) = (a.as_exact(), b.as_exact()) {
        if ea.same_vertices(eb) {
            return Ok(Scalar::Exact(Rational::from_integer(0.into())));
        }
    }
    if let (Some(pa), Some(pb)) = (a.as_float_polytope(), b.as_float_polytope()) {
        let one = pa.vertices().iter().map(|v| point_to_hull_distance(v, pb.vertices())).fold(0.0, f64::max);
        let two = pb.vertices().iter().map(|v| point_to_hull_distance(v, pa.vertices())).fold(0.0, f64::max);
        return Ok(Scalar::Float(one.max(two)));
    }
    let dirs = sample_directions(a.dim(), directions, seed);
    Ok(Scalar::Float(support_distance(a, b, &dirs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(r: i64) -> ConvexBody {
        ConvexBody::from_int_points(2, &[vec![r, r], vec![r, -r], vec![-r, r], vec![-r, -r]]).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(hausdorff_distance(&square(1), &square(1), 100, 0).unwrap(), Scalar::from_int(0));
        let d = hausdorff_distance(&square(1), &square(2), 100, 0).unwrap().to_f64();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
        let d = hausdorff_distance(&ConvexBody::ball(2, 1.0), &ConvexBody::ball(2, 1.5), 1000, 0).unwrap().to_f64();
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn min_norm_on_segment_interior() {
        let x = min_norm_point(&[vec![-1.0, 1.0], vec![1.0, 1.0], vec![3.0, 2.0]]);
        assert!(x[0].abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(hausdorff_distance(&square(1), &ConvexBody::ball(3, 1.0), 10, 0).is_err());
    }
}
