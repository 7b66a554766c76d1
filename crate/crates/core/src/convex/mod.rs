//! Convex bodies: polytopes (exact or float) and evaluation oracles, with
//! gauges, supports, duality, ℓ_p-sums, volumes and distances.

pub mod distance;
pub mod hull;
pub mod json;
pub mod lp_sum;
pub mod oracle;
pub mod planar;
pub mod polytope;
pub mod volume;

use std::sync::Arc;

use nalgebra::DMatrix;

pub use hull::{convex_hull, Facet, Hull};
pub use lp_sum::{lp_sum, lp_sum_volume, LpSumBody};
pub use oracle::{LinearImage, Oracle, PlaneProjection, Quotient};
pub use polytope::Polytope;

use crate::error::{Error, Result};
use crate::linalg::{dotf, norm};
use crate::scalar::{Field, Rational};

/// A polytope with a float view and, when available, an exact view.
#[derive(Clone, Debug)]
pub struct PolytopeBody {
    exact: Option<Arc<Polytope<Rational>>>,
    float: Arc<Polytope<f64>>,
    symmetric: bool,
}

impl PolytopeBody {
    pub fn exact(&self) -> Option<&Polytope<Rational>> {
        self.exact.as_deref()
    }

    pub fn float(&self) -> &Polytope<f64> {
        &self.float
    }
}

/// A convex body in `R^dim`.
#[derive(Clone, Debug)]
pub enum ConvexBody {
    Polytope(PolytopeBody),
    Oracle(Oracle),
}

impl From<Polytope<Rational>> for ConvexBody {
    fn from(p: Polytope<Rational>) -> Self {
        let symmetric = p.is_symmetric();
        let float = Arc::new(p.to_float());
        ConvexBody::Polytope(PolytopeBody { exact: Some(Arc::new(p)), float, symmetric })
    }
}

impl From<Polytope<f64>> for ConvexBody {
    fn from(p: Polytope<f64>) -> Self {
        let symmetric = p.is_symmetric();
        ConvexBody::Polytope(PolytopeBody { exact: None, float: Arc::new(p), symmetric })
    }
}

impl From<Oracle> for ConvexBody {
    fn from(o: Oracle) -> Self {
        ConvexBody::Oracle(o)
    }
}

impl ConvexBody {
    /// Euclidean ball of the given radius centred at the origin.
    pub fn ball(dim: usize, radius: f64) -> Self {
        ConvexBody::Oracle(Oracle::Ball { dim, radius })
    }

    /// Exact V-polytope from integer or rational points.
    pub fn exact_hull(dim: usize, points: &[Vec<Rational>]) -> Result<Self> {
        Ok(Polytope::from_points(dim, points)?.into())
    }

    /// Exact V-polytope from integer coordinates.
    pub fn from_int_points(dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        let pts: Vec<Vec<Rational>> =
            points.iter().map(|p| p.iter().map(|&v| Rational::from_i64(v)).collect()).collect();
        Self::exact_hull(dim, &pts)
    }

    pub fn float_hull(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        Ok(Polytope::from_points(dim, points)?.into())
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope(p) => p.float.dim(),
            ConvexBody::Oracle(o) => o.dim(),
        }
    }

    pub fn is_polytope(&self) -> bool {
        matches!(self, ConvexBody::Polytope(_))
    }

    /// `true` when an exact rational representation is carried.
    pub fn is_exact(&self) -> bool {
        matches!(self, ConvexBody::Polytope(PolytopeBody { exact: Some(_), .. }))
    }

    pub fn as_exact(&self) -> Option<&Polytope<Rational>> {
        match self {
            ConvexBody::Polytope(p) => p.exact(),
            ConvexBody::Oracle(_) => None,
        }
    }

    pub fn as_float_polytope(&self) -> Option<&Polytope<f64>> {
        match self {
            ConvexBody::Polytope(p) => Some(p.float()),
            ConvexBody::Oracle(_) => None,
        }
    }

    pub fn as_oracle(&self) -> Option<&Oracle> {
        match self {
            ConvexBody::Oracle(o) => Some(o),
            ConvexBody::Polytope(_) => None,
        }
    }

    /// Central symmetry flag (computed for polytopes, structural for oracles).
    pub fn is_symmetric(&self) -> bool {
        match self {
            ConvexBody::Polytope(p) => p.symmetric,
            ConvexBody::Oracle(o) => o.is_symmetric(),
        }
    }

    /// Gauge `g(x) = min{t >= 0 : x in tX}`.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p.float.gauge(x),
            ConvexBody::Oracle(o) => o.gauge(x),
        }
    }

    /// Support `h(y) = max{x · y : x in X}`.
    pub fn support(&self, y: &[f64]) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p.float.support(y),
            ConvexBody::Oracle(o) => o.support(y),
        }
    }

    /// A point of `X` attaining the support in direction `y`.
    pub fn support_point(&self, y: &[f64]) -> Vec<f64> {
        match self {
            ConvexBody::Polytope(p) => p.float.vertices()[p.float.support_vertex(y)].clone(),
            ConvexBody::Oracle(o) => o.support_point(y),
        }
    }

    /// A subgradient of the gauge at `x`; for polytopes the normal of the
    /// lowest-index facet attaining the maximum.
    pub fn gauge_grad(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ConvexBody::Polytope(p) => {
                let f = &p.float.facets()[p.float.gauge_facet(x)];
                f.normal.iter().map(|a| a / f.offset).collect()
            }
            ConvexBody::Oracle(o) => o.gauge_grad(x),
        }
    }

    /// `gauge(x) <= 1 + tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.gauge(x) <= 1.0 + tol
    }

    /// Euclidean polar `X° = {y : x · y <= 1 for all x in X}`.
    pub fn polar_dual(&self) -> Result<ConvexBody> {
        match self {
            ConvexBody::Polytope(p) => match &p.exact {
                Some(e) => Ok(e.polar()?.into()),
                None => Ok(p.float.polar()?.into()),
            },
            ConvexBody::Oracle(Oracle::Ball { dim, radius }) => Ok(ConvexBody::ball(*dim, 1.0 / radius)),
            ConvexBody::Oracle(Oracle::Polar(inner)) => Ok((**inner).clone()),
            ConvexBody::Oracle(o) => {
                if o.gauge(&vec![0.0; o.dim()]).is_nan() {
                    return Err(Error::PolarityDomain("oracle gauge undefined at the origin".into()));
                }
                Ok(ConvexBody::Oracle(Oracle::Polar(Arc::new(self.clone()))))
            }
        }
    }

    /// Dilation `aX`, exact on exact polytopes when `a` is a dyadic float.
    pub fn scaled(&self, a: f64) -> Result<ConvexBody> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Precondition(format!("scale factor {a} must be positive and finite")));
        }
        match self {
            ConvexBody::Polytope(p) => match &p.exact {
                Some(e) => Ok(e.scaled(&<Rational as Field>::from_f64(a))?.into()),
                None => Ok(p.float.scaled(&a)?.into()),
            },
            ConvexBody::Oracle(Oracle::Ball { dim, radius }) => Ok(ConvexBody::ball(*dim, radius * a)),
            ConvexBody::Oracle(_) => {
                let d = self.dim();
                let m = DMatrix::from_diagonal_element(d, d, a);
                self.linear_image(&m)
            }
        }
    }

    /// Exact dilation by a rational factor (exact polytopes only).
    pub fn scaled_exact(&self, a: &Rational) -> Result<ConvexBody> {
        match self.as_exact() {
            Some(e) => Ok(e.scaled(a)?.into()),
            None => Err(Error::Capability("exact scaling needs an exact polytope".into())),
        }
    }

    /// Image under an invertible linear map.
    pub fn linear_image(&self, m: &DMatrix<f64>) -> Result<ConvexBody> {
        let d = self.dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: m.nrows() });
        }
        let inverse = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("linear map is singular".into()))?;
        match self {
            ConvexBody::Polytope(p) => {
                let pts: Vec<Vec<f64>> =
                    p.float.vertices().iter().map(|v| (m * nalgebra::DVector::from_column_slice(v)).as_slice().to_vec()).collect();
                Ok(Polytope::from_points(d, &pts)?.into())
            }
            ConvexBody::Oracle(_) => Ok(ConvexBody::Oracle(Oracle::Linear(Arc::new(LinearImage {
                body: self.clone(),
                map: m.clone(),
                inverse,
            })))),
        }
    }

    /// Image under an exact rational linear map given by rows.
    pub fn linear_image_exact(&self, rows: &[Vec<Rational>]) -> Result<ConvexBody> {
        match self.as_exact() {
            Some(e) => Ok(e.map_linear(rows)?.into()),
            None => Err(Error::Capability("exact linear image needs an exact polytope".into())),
        }
    }

    /// `-X`.
    pub fn negated(&self) -> Result<ConvexBody> {
        match self.as_exact() {
            Some(e) => {
                let d = e.dim();
                let rows: Vec<Vec<Rational>> = (0..d)
                    .map(|i| (0..d).map(|j| if i == j { -Rational::from_i64(1) } else { Rational::from_i64(0) }).collect())
                    .collect();
                Ok(e.map_linear(&rows)?.into())
            }
            None => self.linear_image(&(-DMatrix::<f64>::identity(self.dim(), self.dim()))),
        }
    }

    /// Radii `(r, R)` with `rB ⊆ X ⊆ RB`, estimated from supports along
    /// coordinate directions (exact for polytopes via vertices and facets).
    pub fn radius_bounds(&self) -> (f64, f64) {
        match self {
            ConvexBody::Polytope(p) => {
                let outer = p.float.vertices().iter().map(|v| norm(v)).fold(0.0, f64::max);
                let inner = p
                    .float
                    .facets()
                    .iter()
                    .map(|f| f.offset / norm(&f.normal))
                    .fold(f64::INFINITY, f64::min);
                (inner, outer)
            }
            ConvexBody::Oracle(o) => {
                let d = o.dim();
                let mut outer: f64 = 0.0;
                let mut inner = f64::INFINITY;
                for i in 0..d {
                    for s in [1.0, -1.0] {
                        let mut e = vec![0.0; d];
                        e[i] = s;
                        outer = outer.max(o.support(&e));
                        inner = inner.min(1.0 / o.gauge(&e));
                    }
                }
                (inner, outer * (d as f64).sqrt())
            }
        }
    }

    /// Bounding box `[-h(-e_i), h(e_i)]`.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut e = vec![0.0; d];
                e[i] = 1.0;
                let hi = self.support(&e);
                e[i] = -1.0;
                let lo = -self.support(&e);
                (lo, hi)
            })
            .collect()
    }

    /// Inscribed polytope approximation from support points in `directions`.
    pub fn inscribed_polytope(&self, directions: &[Vec<f64>]) -> Result<Polytope<f64>> {
        let pts: Vec<Vec<f64>> = directions.iter().map(|u| self.support_point(u)).collect();
        Polytope::from_points(self.dim(), &pts)
    }

    /// Gauge–support consistency check `x·y <= g(x) h(y)` at one pair; used
    /// by tests and the certificate code.
    pub fn duality_gap(&self, x: &[f64], y: &[f64]) -> f64 {
        self.gauge(x) * self.support(y) - dotf(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> ConvexBody {
        ConvexBody::from_int_points(2, &[vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]])
            .unwrap()
    }

    #[test]
    fn hull_of_hexagon_with_interior_midpoint() {
        let pts: Vec<Vec<Rational>> = [[0, 2], [0, -2], [2, 0], [-2, 0], [2, 2], [-2, -2], [1, 1]]
            .iter()
            .map(|p| p.iter().map(|&v| Rational::new(v.into(), 2.into())).collect())
            .collect();
        let h = ConvexBody::exact_hull(2, &pts).unwrap();
        assert_eq!(h.as_exact().unwrap().vertices().len(), 6);
        assert!(h.as_exact().unwrap().same_vertices(hexagon().as_exact().unwrap()));
    }

    #[test]
    fn gauge_support_examples() {
        let q2 = ConvexBody::from_int_points(2, &[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        assert_eq!(q2.gauge(&[2.0, 1.0]), 2.0);
        assert_eq!(q2.support(&[1.0, 1.0]), 2.0);
        assert_eq!(hexagon().gauge(&[1.0, 1.0]), 1.0);
        assert!(hexagon().contains(&[0.5, 0.5], 0.0));
        assert!(!hexagon().contains(&[1.0, -0.5], 1e-9));
    }

    #[test]
    fn polar_of_cube_is_crosspolytope_and_disk_is_self_polar() {
        let q3 = ConvexBody::from_int_points(
            3,
            &(0..8).map(|k| (0..3).map(|i| if k >> i & 1 == 1 { 1 } else { -1 }).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        let c3 = q3.polar_dual().unwrap();
        assert_eq!(c3.as_exact().unwrap().vertices().len(), 6);
        let disk = ConvexBody::ball(2, 1.0).polar_dual().unwrap();
        assert!((disk.gauge(&[0.6, 0.8]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn oracle_polar_gauge_is_support() {
        let b = ConvexBody::ball(3, 2.0).scaled(1.5).unwrap();
        let l = b.linear_image(&DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0])).unwrap();
        let p = ConvexBody::Oracle(Oracle::Polar(Arc::new(l.clone())));
        let y = [0.3, -1.2, 0.7];
        assert!((p.gauge(&y) - l.support(&y)).abs() < 1e-12);
    }
}
