//! The linear symplectic invariant `c_J(X)`, with
//! `c_J(X)^{-1} = max{|ω(x, y)| : x, y ∈ X^ω}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::convex::distance::sample_directions;
use crate::convex::oracle::Oracle;
use crate::convex::{ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::optim::nelder_mead;
use crate::scalar::{Field, Rational, Scalar};
use crate::symplectic::certificate::max_omega_over_vertices;
use crate::symplectic::polar::symplectic_polar_polytope;
use crate::symplectic::{apply_j_raw, SymplecticSpace};

/// Default number of local searches for oracle bodies.
pub const DEFAULT_RESTARTS: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct CjEstimate {
    pub value: Scalar,
    /// `max |ω|` over pairs of points of `X^ω`.
    pub max_omega: Scalar,
    /// `false` for sampled oracle estimates: the sampled maximum of `|ω|` is
    /// a lower bound, so `value` may overestimate `c_J`.
    pub certified: bool,
    pub method: String,
}

fn require_symmetric(x: &ConvexBody) -> Result<SymplecticSpace> {
    let space = SymplecticSpace::new(x.dim())?;
    if !x.is_symmetric() {
        return Err(Error::Asymmetric("c_J is defined here for centrally symmetric bodies".into()));
    }
    Ok(space)
}

fn polytope_cj<F: Field>(p: &Polytope<F>) -> Result<(F, F)> {
    // bilinearity puts the maximum at a pair of vertices of X^ω
    let m = max_omega_over_vertices(&symplectic_polar_polytope(p)?);
    Ok((F::one() / m.clone(), m))
}

/// `g_X(w) / g_{X^ω}(w)` with `g_{X^ω}(w) = h_X(-Jw)`; its maximum over
/// `w` equals `max |ω|` over `X^ω` for symmetric `X`.
fn polar_ratio(x: &ConvexBody, w: &[f64]) -> f64 {
    let jw: Vec<f64> = apply_j_raw(w).into_iter().map(|v| -v).collect();
    let den = x.support(&jw);
    if den <= 0.0 {
        return 0.0;
    }
    x.gauge(w) / den
}

pub fn c_j(x: &ConvexBody) -> Result<CjEstimate> {
    c_j_with(x, DEFAULT_RESTARTS, 0xc1)
}

pub fn c_j_with(x: &ConvexBody, restarts: usize, seed: u64) -> Result<CjEstimate> {
    require_symmetric(x)?;
    match x {
        ConvexBody::Polytope(p) => Ok(match p.exact() {
            Some(e) => {
                let (v, m) = polytope_cj::<Rational>(e)?;
                CjEstimate { value: Scalar::Exact(v), max_omega: Scalar::Exact(m), certified: true, method: "vertex-pairs".into() }
            }
            None => {
                let (v, m) = polytope_cj::<f64>(p.float())?;
                CjEstimate { value: Scalar::Float(v), max_omega: Scalar::Float(m), certified: true, method: "vertex-pairs".into() }
            }
        }),
        ConvexBody::Oracle(Oracle::Ball { radius, .. }) => Ok(CjEstimate {
            value: Scalar::Float(radius * radius),
            max_omega: Scalar::Float(1.0 / (radius * radius)),
            certified: true,
            method: "closed-form".into(),
        }),
        ConvexBody::Oracle(_) => {
            let m = sampled_max_ratio(x, restarts.max(1), seed);
            Ok(CjEstimate {
                value: Scalar::Float(1.0 / m),
                max_omega: Scalar::Float(m),
                certified: false,
                method: "sampled".into(),
            })
        }
    }
}

/// Multistart maximization of `polar_ratio`.
fn sampled_max_ratio(x: &ConvexBody, restarts: usize, seed: u64) -> f64 {
    multistart_max(x.dim(), |w| polar_ratio(x, w), restarts, seed)
}

/// Maximizes a 0-homogeneous function over directions: a coarse sample of
/// `max(10 restarts, 1000)` directions, then Nelder–Mead from the best
/// `restarts` of them. Deterministic in `seed`.
pub(crate) fn multistart_max(d: usize, f: impl Fn(&[f64]) -> f64 + Sync, restarts: usize, seed: u64) -> f64 {
    let dirs = sample_directions(d, (restarts * 10).max(1000), seed);
    let mut scored: Vec<(f64, usize)> = dirs.iter().enumerate().map(|(i, w)| (f(w), i)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let coarse = scored[0].0;
    let refined = scored
        .par_iter()
        .take(restarts)
        .map(|&(_, i)| {
            let r = nelder_mead(|w| -f(w), &dirs[i], 0.05, 400 * d, 1e-13);
            -r.value
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    coarse.max(refined)
}

/// `c_J(X) = max{a^{-2} : (aX)^ω ⊆ aX}` by bisection on `a`.
///
/// `(aX)^ω = X^ω / a`, so the test is whether `X^ω ⊆ a² X`; it is done on
/// vertices for polytopes and on sampled support values for oracles.
pub fn c_j_scaling(x: &ConvexBody) -> Result<Scalar> {
    require_symmetric(x)?;
    let test: Box<dyn Fn(f64) -> bool + Sync> = match x {
        ConvexBody::Polytope(p) => {
            let polar = symplectic_polar_polytope(p.float())?;
            let body = p.float().clone();
            Box::new(move |a: f64| polar.vertices().iter().all(|w| body.gauge(w) / (a * a) <= 1.0))
        }
        ConvexBody::Oracle(_) => {
            let dirs = sample_directions(x.dim(), 4000, 0x5ca1e);
            let pairs: Vec<(f64, f64)> = dirs
                .iter()
                .map(|u| {
                    let ju: Vec<f64> = apply_j_raw(u).into_iter().map(|v| -v).collect();
                    (x.gauge(&ju), x.support(u))
                })
                .collect();
            Box::new(move |a: f64| pairs.iter().all(|(hp, h)| hp / a <= a * h))
        }
    };
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    let mut probes = Vec::new();
    if test(1.0) {
        while test(lo) {
            probes.push(lo);
            lo *= 0.5;
            if lo < 1e-12 {
                return Err(Error::NoBracket(format!("containment holds at every probe scale {probes:?}")));
            }
        }
    } else {
        while !test(hi) {
            probes.push(hi);
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::NoBracket(format!("containment fails at every probe scale {probes:?}")));
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if test(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Scalar::Float(1.0 / (hi * hi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> ConvexBody {
        ConvexBody::from_int_points(2, &[vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]])
            .unwrap()
    }

    #[test]
    fn hexagon_values() {
        let h = hexagon();
        assert_eq!(c_j(&h).unwrap().value, Scalar::from_int(1));
        assert_eq!(c_j(&h.scaled(2.0).unwrap()).unwrap().value, Scalar::from_int(4));
        assert!((c_j_scaling(&h).unwrap().to_f64() - 1.0).abs() < 1e-12);
        assert!((c_j_scaling(&h.scaled(2.0).unwrap()).unwrap().to_f64() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn ball_values() {
        assert_eq!(c_j(&ConvexBody::ball(4, 1.0)).unwrap().value, Scalar::Float(1.0));
        assert!((c_j_scaling(&ConvexBody::ball(4, 1.0)).unwrap().to_f64() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn asymmetric_rejected() {
        let t = ConvexBody::from_int_points(2, &[vec![1, 0], vec![-1, 1], vec![-1, -1]]).unwrap();
        assert!(matches!(c_j(&t), Err(Error::Asymmetric(_))));
    }

    #[test]
    fn sampled_oracle_matches_polytope() {
        // an oracle wrapper around the hexagon: the sampled value must agree
        let h = hexagon();
        let wrapped = h.linear_image(&nalgebra::DMatrix::identity(2, 2)).unwrap();
        assert!(wrapped.is_polytope());
        let o = crate::convex::lp_sum(&h, &ConvexBody::ball(2, 0.01), f64::INFINITY).unwrap();
        // a symmetric oracle in R^4; the two routes must agree closely
        let cj = c_j_with(&o, 20, 1).unwrap().value.to_f64();
        let cs = c_j_scaling(&o).unwrap().to_f64();
        assert!(cj <= cs * (1.0 + 1e-9) && (cs - cj) / cs < 0.05, "{cj} vs {cs}");
    }
}
