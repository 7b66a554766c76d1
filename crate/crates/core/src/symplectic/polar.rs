//! Symplectic polars `X^ω = {y : ω(x, y) <= 1 for all x in X} = J X°`.

use std::sync::Arc;

use crate::convex::distance::hausdorff_distance;
use crate::convex::hull::Facet;
use crate::convex::oracle::{LinearImage, Oracle};
use crate::convex::{lp_sum, ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::symplectic::{apply_j_raw, SymplecticSpace};

/// `J · P°`: rotate the Euclidean polar (no hull computation).
pub fn symplectic_polar_polytope<F: Field>(p: &Polytope<F>) -> Result<Polytope<F>> {
    SymplecticSpace::new(p.dim())?;
    Ok(p.polar()?.map_orthogonal(|x| apply_j_raw(x)))
}

/// `X^ω` straight from the definition: one half-space `ω(x_i, y) <= 1`, i.e.
/// `<J x_i, y> <= 1`, per vertex `x_i`, then a facet-to-vertex conversion.
pub fn symplectic_polar_direct<F: Field>(p: &Polytope<F>) -> Result<Polytope<F>> {
    SymplecticSpace::new(p.dim())?;
    if !p.origin_interior() {
        return Err(Error::PolarityDomain("origin lies on the boundary or outside".into()));
    }
    let facets: Vec<Facet<F>> =
        p.vertices().iter().map(|x| Facet { normal: apply_j_raw(x), offset: F::one() }).collect();
    Polytope::from_facets(p.dim(), &facets)
}

/// The symplectic polar of any body.
///
/// Polytopes stay polytopes (exact when the input is); balls stay balls;
/// other oracles become `J` applied to their Euclidean polar.
pub fn symplectic_polar(x: &ConvexBody) -> Result<ConvexBody> {
    let space = SymplecticSpace::new(x.dim())?;
    match x {
        ConvexBody::Polytope(p) => match p.exact() {
            Some(e) => Ok(symplectic_polar_polytope(e)?.into()),
            None => Ok(symplectic_polar_polytope(p.float())?.into()),
        },
        ConvexBody::Oracle(Oracle::Ball { dim, radius }) => Ok(ConvexBody::ball(*dim, 1.0 / radius)),
        ConvexBody::Oracle(Oracle::Linear(l)) if is_polar_rotation(l, &space) => {
            // (Y^ω)^ω = -Y
            let ConvexBody::Oracle(Oracle::Polar(inner)) = &l.body else { unreachable!() };
            if inner.is_symmetric() {
                Ok((**inner).clone())
            } else {
                inner.negated()
            }
        }
        ConvexBody::Oracle(_) => {
            let j = space.j_matrix();
            Ok(ConvexBody::Oracle(Oracle::Linear(Arc::new(LinearImage {
                body: x.polar_dual()?,
                inverse: -&j,
                map: j,
            }))))
        }
    }
}

fn is_polar_rotation(l: &LinearImage, space: &SymplecticSpace) -> bool {
    matches!(l.body, ConvexBody::Oracle(Oracle::Polar(_))) && l.map == space.j_matrix()
}

/// Checks the two polytope routes against each other: exact vertex-set
/// equality for exact input, Hausdorff distance `<= 1e-10` for floats.
pub fn polar_routes_agree(x: &ConvexBody) -> Result<bool> {
    match x {
        ConvexBody::Polytope(p) => match p.exact() {
            Some(e) => Ok(symplectic_polar_direct(e)?.same_vertices(&symplectic_polar_polytope(e)?)),
            None => {
                let a: ConvexBody = symplectic_polar_direct(p.float())?.into();
                let b: ConvexBody = symplectic_polar_polytope(p.float())?.into();
                Ok(hausdorff_distance(&a, &b, 0, 0)?.to_f64() <= 1e-10)
            }
        },
        ConvexBody::Oracle(_) => Err(Error::Capability("two-route check needs a polytope".into())),
    }
}

/// `K ⊕₂ K°` in `R^{2n}`: `K` on the `q` coordinates and `K°` on the `p`
/// coordinates. Symplectically self-polar whenever `K` is symmetric.
pub fn self_polar_from_k(k: &ConvexBody) -> Result<ConvexBody> {
    if !k.is_symmetric() {
        return Err(Error::Asymmetric("K must be centrally symmetric".into()));
    }
    lp_sum(k, &k.polar_dual()?, 2.0)
}
