//! Cutting a body `Y` with `Y^ω ⊆ Y` down towards a self-polar body.
//!
//! One step with `p ∈ Y \ Y^ω` replaces `Y` by `Z = Y ∩ {|ω(x, p)| <= 1}`,
//! whose polar is `conv(Y^ω ∪ {±p})`, so `Y^ω ⊆ Z^ω ⊆ Z ⊆ Y`.

use serde::Serialize;

use crate::convex::distance::symmetric_directions;
use crate::convex::hull::Facet;
use crate::convex::{ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};
use crate::symplectic::certificate::{containment_factor, self_polarity_certificate, SelfPolarityCertificate};
use crate::symplectic::polar::symplectic_polar_polytope;
use crate::symplectic::{apply_j_raw, SymplecticSpace};

/// Tolerance for the float containment precondition `Y^ω ⊆ Y`.
const FLOAT_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct SqueezeOutcome {
    #[serde(skip)]
    pub body: ConvexBody,
    pub certificate: SelfPolarityCertificate,
    pub iterations: usize,
    pub converged: bool,
    /// `min{t : Z ⊆ t Z^ω}` per iterate (1 means self-polar).
    pub violation: Vec<f64>,
    /// `min{t : Z^ω ⊆ t Z}` per iterate (at most 1 by construction).
    pub polar_in_body: Vec<f64>,
    pub volumes: Vec<f64>,
}

fn cut<F: Field>(y: &Polytope<F>, p: &[F]) -> Result<Polytope<F>> {
    let jp = apply_j_raw(p);
    let mut facets = y.facets().to_vec();
    facets.push(Facet { normal: jp.clone(), offset: F::one() });
    facets.push(Facet { normal: jp.into_iter().map(|x| -x).collect(), offset: F::one() });
    Polytope::from_facets(y.dim(), &facets)
}

fn check_precondition<F: Field>(y: &Polytope<F>) -> Result<Polytope<F>> {
    let polar = symplectic_polar_polytope(y)?;
    let t = containment_factor(&polar, y).to_f64();
    let limit = if F::EXACT { 1.0 } else { 1.0 + FLOAT_SLACK };
    if t > limit {
        return Err(Error::Precondition(format!("Y^ω is not inside Y (needs factor {t})")));
    }
    Ok(polar)
}

fn step_generic<F: Field>(y: &Polytope<F>, p: &[F]) -> Result<Polytope<F>> {
    let polar = check_precondition(y)?;
    let scale = crate::linalg::magnitude(p).max(1.0);
    if y.gauge(p).sign(scale) == std::cmp::Ordering::Greater {
        return Err(Error::Precondition("p must lie in Y".into()));
    }
    if polar.gauge(p).to_f64() <= 1.0 {
        return Err(Error::Precondition("p must lie outside Y^ω".into()));
    }
    cut(y, p)
}

/// One cut `Y ∩ {|ω(x, p)| <= 1}` (polytopes only).
pub fn squeeze_step(y: &ConvexBody, p: &[f64]) -> Result<ConvexBody> {
    SymplecticSpace::new(y.dim())?;
    match y {
        ConvexBody::Polytope(poly) => match poly.exact() {
            Some(e) => {
                let pe: Vec<Rational> = p.iter().map(|&t| <Rational as Field>::from_f64(t)).collect();
                Ok(step_generic(e, &pe)?.into())
            }
            None => Ok(step_generic(poly.float(), p)?.into()),
        },
        ConvexBody::Oracle(_) => Err(Error::Capability("squeeze steps operate on polytopes".into())),
    }
}

fn iterate<F: Field>(
    y: &Polytope<F>,
    tol: f64,
    max_iters: usize,
) -> Result<(Polytope<F>, usize, bool, Vec<f64>, Vec<f64>, Vec<f64>)> {
    check_precondition(y)?;
    let mut cur = y.clone();
    let (mut violation, mut inside, mut volumes) = (Vec::new(), Vec::new(), Vec::new());
    let mut iterations = 0;
    let mut converged = false;
    loop {
        let polar = symplectic_polar_polytope(&cur)?;
        // greedy: the vertex of Z with the largest gauge in Z^ω; vertices are
        // sorted lexicographically, so the first maximum breaks ties
        let mut best: Option<(usize, F)> = None;
        for (i, x) in cur.vertices().iter().enumerate() {
            let g = polar.gauge(x);
            if best.as_ref().map_or(true, |(_, b)| g > *b) {
                best = Some((i, g));
            }
        }
        let (idx, g) = best.expect("nonempty polytope");
        violation.push(g.to_f64());
        inside.push(containment_factor(&polar, &cur).to_f64());
        volumes.push(cur.volume().to_f64());
        if g.to_f64() <= 1.0 + tol {
            converged = true;
            break;
        }
        if iterations == max_iters {
            break;
        }
        let p = cur.vertices()[idx].clone();
        cur = cut(&cur, &p)?;
        iterations += 1;
    }
    Ok((cur, iterations, converged, violation, inside, volumes))
}

/// Greedy squeeze until `Z ⊆ (1 + tol) Z^ω` or `max_iters` cuts.
///
/// Oracle inputs are first replaced by an inscribed polytope (support points
/// in sampled directions); the containment precondition is then checked on
/// that polytope. The input must be centrally symmetric.
pub fn squeeze_to_self_polar(y: &ConvexBody, tol: f64, max_iters: usize) -> Result<SqueezeOutcome> {
    SymplecticSpace::new(y.dim())?;
    if !y.is_symmetric() {
        return Err(Error::Asymmetric("the squeeze keeps Z^ω ⊆ Z only for symmetric bodies".into()));
    }
    let start: ConvexBody = match y {
        ConvexBody::Polytope(_) => y.clone(),
        ConvexBody::Oracle(_) => {
            let dirs = symmetric_directions(y.dim(), 64 * y.dim(), 0x59ee);
            y.inscribed_polytope(&dirs)?.into()
        }
    };
    let (body, iterations, converged, violation, polar_in_body, volumes): (ConvexBody, _, _, _, _, _) =
        match start.as_exact() {
            Some(e) => {
                let (b, i, c, v, p, vol) = iterate(e, tol, max_iters)?;
                (b.into(), i, c, v, p, vol)
            }
            None => {
                let (b, i, c, v, p, vol) = iterate(start.as_float_polytope().expect("polytope"), tol, max_iters)?;
                (b.into(), i, c, v, p, vol)
            }
        };
    let certificate = self_polarity_certificate(&body, tol)?;
    Ok(SqueezeOutcome { body, certificate, iterations, converged, violation, polar_in_body, volumes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn hexagon_is_a_fixed_point() {
        let h = ConvexBody::from_int_points(2, &[vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]])
            .unwrap();
        let out = squeeze_to_self_polar(&h, 0.0, 10).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.converged);
        assert_eq!(out.certificate.residual, Scalar::from_int(0));
        assert!(squeeze_step(&h, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn square_is_cut_to_a_self_polar_body() {
        // Q² has Q²^ω = C² ⊆ Q²; one cut at a vertex gives the hexagon-like body
        let q = ConvexBody::from_int_points(2, &[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        let out = squeeze_to_self_polar(&q, 0.0, 10).unwrap();
        assert!(out.converged);
        assert_eq!(out.certificate.residual, Scalar::from_int(0));
        for w in out.volumes.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(out.polar_in_body.iter().all(|&t| t <= 1.0));
    }

    #[test]
    fn scaled_disk_iterates_keep_containment() {
        let y = ConvexBody::ball(2, 2f64.sqrt());
        let out = squeeze_to_self_polar(&y, 1e-6, 30).unwrap();
        for w in out.volumes.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(out.polar_in_body.iter().all(|&t| t <= 1.0 + 1e-9), "{:?}", out);
        assert!(out.violation.last().unwrap() < &out.violation[0]);
    }

    #[test]
    fn precondition_enforced() {
        let small = ConvexBody::from_int_points(2, &[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]])
            .unwrap()
            .scaled(0.5)
            .unwrap();
        assert!(matches!(squeeze_to_self_polar(&small, 0.0, 3), Err(Error::Precondition(_))));
    }
}
