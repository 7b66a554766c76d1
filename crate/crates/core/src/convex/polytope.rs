//! Polytopes carried in both vertex and facet form.

use std::cmp::Ordering;

use crate::convex::hull::{convex_hull, lex_cmp, points_close, Facet};
use crate::error::{Error, Result};
use crate::linalg::{dot, magnitude};
use crate::scalar::{Field, Rational};

/// A full-dimensional polytope with both representations.
///
/// Vertices are exactly the extreme points, sorted lexicographically.
/// Facets are distinct supporting half-spaces `a · x <= b`, normalized to
/// `b = 1` whenever the origin is interior.
#[derive(Clone, Debug)]
pub struct Polytope<F> {
    dim: usize,
    vertices: Vec<Vec<F>>,
    facets: Vec<Facet<F>>,
}

impl<F: Field> Polytope<F> {
    /// Convex hull of `points` (the `convex_hull` / `vertices_to_facets` route).
    pub fn from_points(dim: usize, points: &[Vec<F>]) -> Result<Self> {
        let hull = convex_hull(dim, points)?;
        Ok(Self { dim, vertices: hull.vertices, facets: hull.facets })
    }

    /// Intersection of half-spaces `a · x <= b`, all with `b > 0` (the origin
    /// is then interior whenever the set is bounded).
    ///
    /// Works through the polar: the points `a / b` span a polytope containing
    /// the origin in its interior exactly when the input is bounded.
    pub fn from_facets(dim: usize, facets: &[Facet<F>]) -> Result<Self> {
        if let Some(f) = facets.iter().find(|f| f.normal.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: f.normal.len() });
        }
        let scale = facets.iter().map(|f| magnitude(&f.normal)).fold(1.0, f64::max);
        if let Some(f) = facets.iter().find(|f| !f.offset.is_pos_at(0.0)) {
            return Err(Error::PolarityDomain(format!(
                "facet offset {:?} is not positive; the origin must be interior",
                f.offset.to_f64()
            )));
        }
        let dual: Vec<Vec<F>> = facets
            .iter()
            .map(|f| f.normal.iter().map(|a| a.clone() / f.offset.clone()).collect())
            .collect();
        let hull = match convex_hull(dim, &dual) {
            Ok(h) => h,
            Err(Error::Degenerate(msg)) => {
                return Err(Error::Unbounded(format!("facet normals do not span: {msg}")))
            }
            Err(e) => return Err(e),
        };
        if hull.facets.iter().any(|g| !g.offset.is_pos_at(scale)) {
            return Err(Error::Unbounded("facet normals do not surround the origin".into()));
        }
        let mut vertices: Vec<Vec<F>> = hull.facets.iter().map(|g| g.normal.clone()).collect();
        vertices.sort_by(|a, b| lex_cmp(a, b));
        let mut facets: Vec<Facet<F>> = hull
            .vertices
            .iter()
            .map(|v| Facet { normal: v.clone(), offset: F::one() })
            .collect();
        facets.sort_by(|a, b| lex_cmp(&a.normal, &b.normal));
        Ok(Self { dim, vertices, facets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<F>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet<F>] {
        &self.facets
    }

    fn scale_hint(&self) -> f64 {
        self.vertices.iter().map(|v| magnitude(v)).fold(1.0, f64::max)
    }

    /// `true` when every facet offset is strictly positive.
    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_pos_at(self.scale_hint()))
    }

    fn require_origin_interior(&self) -> Result<()> {
        if self.origin_interior() {
            Ok(())
        } else {
            Err(Error::PolarityDomain("origin lies on the boundary or outside".into()))
        }
    }

    /// Euclidean polar `{y : x · y <= 1 for all x}`.
    ///
    /// Vertices of `self` become facets of the polar and vice versa; no hull
    /// computation is needed.
    pub fn polar(&self) -> Result<Self> {
        self.require_origin_interior()?;
        let mut vertices: Vec<Vec<F>> = self
            .facets
            .iter()
            .map(|f| f.normal.iter().map(|a| a.clone() / f.offset.clone()).collect())
            .collect();
        vertices.sort_by(|a, b| lex_cmp(a, b));
        let mut facets: Vec<Facet<F>> = self
            .vertices
            .iter()
            .map(|v| Facet { normal: v.clone(), offset: F::one() })
            .collect();
        facets.sort_by(|a, b| lex_cmp(&a.normal, &b.normal));
        Ok(Self { dim: self.dim, vertices, facets })
    }

    /// Gauge `min{t >= 0 : x in t P}`; requires the origin in the interior.
    pub fn gauge(&self, x: &[F]) -> F {
        let mut best = F::zero();
        for f in &self.facets {
            let v = dot(&f.normal, x) / f.offset.clone();
            if v > best {
                best = v;
            }
        }
        best
    }

    /// Index of the facet attaining the gauge (lowest index on ties).
    pub fn gauge_facet(&self, x: &[F]) -> usize {
        let mut best = 0;
        let mut val: Option<F> = None;
        for (i, f) in self.facets.iter().enumerate() {
            let v = dot(&f.normal, x) / f.offset.clone();
            if val.as_ref().map_or(true, |b| v > *b) {
                val = Some(v);
                best = i;
            }
        }
        best
    }

    /// Support function `max{x · y : x in P}`.
    pub fn support(&self, y: &[F]) -> F {
        self.vertices
            .iter()
            .map(|v| dot(v, y))
            .reduce(|a, b| if b > a { b } else { a })
            .expect("nonempty polytope")
    }

    /// Index of a vertex attaining the support (lowest index on ties).
    pub fn support_vertex(&self, y: &[F]) -> usize {
        let mut best = 0;
        let mut val: Option<F> = None;
        for (i, v) in self.vertices.iter().enumerate() {
            let s = dot(v, y);
            if val.as_ref().map_or(true, |b| s > *b) {
                val = Some(s);
                best = i;
            }
        }
        best
    }

    pub fn volume(&self) -> F {
        convex_hull(self.dim, &self.vertices).expect("polytope is full-dimensional").volume()
    }

    /// Image under a linear map given by its rows; the map must be invertible.
    pub fn map_linear(&self, rows: &[Vec<F>]) -> Result<Self> {
        let pts: Vec<Vec<F>> = self
            .vertices
            .iter()
            .map(|v| rows.iter().map(|r| dot(r, v)).collect())
            .collect();
        Self::from_points(rows.len(), &pts)
    }

    /// Image under an orthogonal map `M` (facet normals transform by `M`).
    pub fn map_orthogonal(&self, apply: impl Fn(&[F]) -> Vec<F>) -> Self {
        let mut vertices: Vec<Vec<F>> = self.vertices.iter().map(|v| apply(v)).collect();
        vertices.sort_by(|a, b| lex_cmp(a, b));
        let mut facets: Vec<Facet<F>> = self
            .facets
            .iter()
            .map(|f| Facet { normal: apply(&f.normal), offset: f.offset.clone() })
            .collect();
        facets.sort_by(|a, b| lex_cmp(&a.normal, &b.normal));
        Self { dim: self.dim, vertices, facets }
    }

    /// Dilation by a positive factor.
    pub fn scaled(&self, a: &F) -> Result<Self> {
        if !a.is_pos_at(0.0) {
            return Err(Error::Precondition("scale factor must be positive".into()));
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x.clone() * a.clone()).collect())
            .collect();
        let facets = self
            .facets
            .iter()
            .map(|f| {
                if f.offset == F::one() {
                    Facet { normal: f.normal.iter().map(|x| x.clone() / a.clone()).collect(), offset: F::one() }
                } else {
                    Facet { normal: f.normal.clone(), offset: f.offset.clone() * a.clone() }
                }
            })
            .collect();
        Ok(Self { dim: self.dim, vertices, facets })
    }

    /// `P == -P` as vertex sets.
    pub fn is_symmetric(&self) -> bool {
        let scale = self.scale_hint();
        self.vertices.iter().all(|v| {
            let m: Vec<F> = v.iter().map(|x| -x.clone()).collect();
            self.vertices.iter().any(|w| points_close(w, &m, scale))
        })
    }

    /// Vertex-set equality (exact in exact mode, tolerance based otherwise).
    pub fn same_vertices(&self, other: &Self) -> bool {
        if self.dim != other.dim || self.vertices.len() != other.vertices.len() {
            return false;
        }
        let scale = self.scale_hint().max(other.scale_hint());
        if F::EXACT {
            self.vertices == other.vertices
        } else {
            self.vertices
                .iter()
                .all(|v| other.vertices.iter().any(|w| points_close(v, w, scale * 100.0)))
        }
    }

    /// `true` when `x` satisfies every facet inequality (with float tolerance).
    pub fn contains(&self, x: &[F]) -> bool {
        let scale = self.scale_hint();
        self.facets.iter().all(|f| f.excess(x).sign(scale) != Ordering::Greater)
    }

    pub fn to_float(&self) -> Polytope<f64> {
        Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.iter().map(|x| x.to_f64()).collect()).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.iter().map(|x| x.to_f64()).collect(),
                    offset: f.offset.to_f64(),
                })
                .collect(),
        }
    }
}

impl Polytope<f64> {
    /// Exact copy of a float polytope (every double is a rational); the hull
    /// is recomputed exactly.
    pub fn to_exact(&self) -> Result<Polytope<Rational>> {
        let pts: Vec<Vec<Rational>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|&x| <Rational as Field>::from_f64(x)).collect())
            .collect();
        Polytope::from_points(self.dim, &pts)
    }
}
