//! Self-polarity certificates: how far `X` is from `X^ω`, and in which
//! direction the containments hold.

use serde::Serialize;

use crate::convex::distance::{hausdorff_distance, sample_directions, DEFAULT_DIRECTIONS};
use crate::convex::{ConvexBody, Polytope};
use crate::error::Result;
use crate::linalg::dot;
use crate::scalar::{Field, Rational, Scalar};
use crate::symplectic::polar::symplectic_polar_polytope;
use crate::symplectic::{apply_j_raw, SymplecticSpace};

/// Distance between `X` and `X^ω` plus containment slacks.
///
/// `polar_in_body_slack = 1 - min{t : X^ω ⊆ tX}` and
/// `body_in_polar_slack = 1 - min{t : X ⊆ tX^ω}`; a slack is nonnegative
/// exactly when the containment holds, and both vanish exactly when
/// `X = X^ω`.
#[derive(Clone, Debug, Serialize)]
pub struct SelfPolarityCertificate {
    pub residual: Scalar,
    pub polar_in_body: bool,
    pub polar_in_body_slack: Scalar,
    pub body_in_polar: bool,
    pub body_in_polar_slack: Scalar,
    pub symmetric: bool,
    /// Residual within tolerance but the body is not centrally symmetric,
    /// which would contradict the fact that self-polar bodies are symmetric.
    pub symmetry_violation: bool,
    pub exact: bool,
    /// Number of sampled directions (zero for polytopes).
    pub directions: usize,
}

impl SelfPolarityCertificate {
    pub fn is_self_polar(&self, tol: f64) -> bool {
        self.residual.to_f64() <= tol
    }
}

/// `max_{w ∈ vert Q} g_P(w)`, i.e. the least `t` with `Q ⊆ tP`.
pub fn containment_factor<F: Field>(q: &Polytope<F>, p: &Polytope<F>) -> F {
    q.vertices()
        .iter()
        .map(|w| p.gauge(w))
        .reduce(|a, b| if b > a { b } else { a })
        .unwrap_or_else(F::zero)
}

fn polytope_slacks<F: Field>(p: &Polytope<F>) -> Result<(Polytope<F>, F, F)> {
    let polar = symplectic_polar_polytope(p)?;
    let a = F::one() - containment_factor(&polar, p);
    let b = F::one() - containment_factor(p, &polar);
    Ok((polar, a, b))
}

/// Sampled factors `(max_u h_{X^ω}(u)/h_X(u), max_u h_X(u)/h_{X^ω}(u))` and
/// `max_u |h_X(u) - h_{X^ω}(u)|`, with `h_{X^ω}(u) = g_X(-Ju)`.
pub fn sampled_polar_comparison(x: &ConvexBody, directions: &[Vec<f64>]) -> (f64, f64, f64) {
    let mut out = (0.0f64, 0.0f64, 0.0f64);
    for u in directions {
        let h = x.support(u);
        let ju: Vec<f64> = apply_j_raw(u).into_iter().map(|v| -v).collect();
        let hp = x.gauge(&ju);
        out.0 = out.0.max(hp / h);
        out.1 = out.1.max(h / hp);
        out.2 = out.2.max((h - hp).abs());
    }
    out
}

pub fn self_polarity_certificate(x: &ConvexBody, tol: f64) -> Result<SelfPolarityCertificate> {
    certificate_with_directions(x, tol, DEFAULT_DIRECTIONS, 0x5e1f)
}

pub fn certificate_with_directions(
    x: &ConvexBody,
    tol: f64,
    directions: usize,
    seed: u64,
) -> Result<SelfPolarityCertificate> {
    SymplecticSpace::new(x.dim())?;
    let symmetric = x.is_symmetric();
    let zero = Rational::from_i64(0);
    let finish = |residual: Scalar, a: Scalar, b: Scalar, exact: bool, directions: usize| {
        let within = residual.to_f64() <= tol;
        SelfPolarityCertificate {
            polar_in_body: if exact { a.to_f64() >= 0.0 } else { a.to_f64() >= -tol },
            body_in_polar: if exact { b.to_f64() >= 0.0 } else { b.to_f64() >= -tol },
            residual,
            polar_in_body_slack: a,
            body_in_polar_slack: b,
            symmetric,
            symmetry_violation: within && !symmetric,
            exact,
            directions,
        }
    };
    match x {
        ConvexBody::Polytope(p) => match p.exact() {
            Some(e) => {
                let (polar, a, b) = polytope_slacks(e)?;
                let residual = if polar.same_vertices(e) {
                    Scalar::Exact(zero)
                } else {
                    hausdorff_distance(x, &polar.into(), 0, seed)?
                };
                Ok(finish(residual, Scalar::Exact(a), Scalar::Exact(b), true, 0))
            }
            None => {
                let (polar, a, b) = polytope_slacks(p.float())?;
                let residual = hausdorff_distance(x, &polar.into(), 0, seed)?;
                Ok(finish(residual, Scalar::Float(a), Scalar::Float(b), false, 0))
            }
        },
        ConvexBody::Oracle(_) => {
            let dirs = sample_directions(x.dim(), directions, seed);
            let (ta, tb, gap) = sampled_polar_comparison(x, &dirs);
            Ok(finish(Scalar::Float(gap), Scalar::Float(1.0 - ta), Scalar::Float(1.0 - tb), false, dirs.len()))
        }
    }
}

/// `max{|ω(x, y)| : x, y ∈ vert P}`, exact.
pub fn max_omega_over_vertices<F: Field>(p: &Polytope<F>) -> F {
    let v = p.vertices();
    let mut best = F::zero();
    for i in 0..v.len() {
        let jv = apply_j_raw(&v[i]);
        for w in &v[i + 1..] {
            let s = dot(&jv, w).abs_val();
            if s > best {
                best = s;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon_square_ball() {
        let h = ConvexBody::from_int_points(2, &[vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]])
            .unwrap();
        let c = self_polarity_certificate(&h, 0.0).unwrap();
        assert_eq!(c.residual, Scalar::from_int(0));
        assert!(c.polar_in_body && c.body_in_polar && c.symmetric && !c.symmetry_violation);

        let sq = ConvexBody::from_int_points(2, &[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        let c = self_polarity_certificate(&sq, 1e-9).unwrap();
        assert!(c.residual.to_f64() > 0.0);
        assert!(c.polar_in_body && !c.body_in_polar);
        // C² ⊂ Q²: vertices (±1, 0) have Q²-gauge 1, so the slack is 0
        assert_eq!(c.polar_in_body_slack, Scalar::from_int(0));

        let c = self_polarity_certificate(&ConvexBody::ball(4, 1.0), 1e-12).unwrap();
        assert!(c.residual.to_f64() < 1e-12);
    }
}
