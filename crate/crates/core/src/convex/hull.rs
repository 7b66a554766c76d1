//! Incremental convex hull in arbitrary (small) dimension.
//!
//! The boundary is kept as a list of oriented simplices. A new point removes
//! every simplex it sees strictly from outside and is coned over the horizon
//! ridges. Points lying on the hyperplane of a simplex do not see it, so
//! coplanar points never create inverted simplices. Distinct facet
//! hyperplanes and extreme vertices are recovered at the end.
//!
//! With [`Rational`](crate::scalar::Rational) coordinates every predicate is
//! exact; with `f64` predicates use [`FLOAT_EPS`](crate::scalar::FLOAT_EPS)
//! relative to the coordinate magnitude.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{dot, kernel_vector, magnitude, rank, sub};
use crate::scalar::Field;

/// Half-space `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet<F> {
    pub normal: Vec<F>,
    pub offset: F,
}

impl<F: Field> Facet<F> {
    /// Signed slack `normal · x - offset` (positive outside).
    pub fn excess(&self, x: &[F]) -> F {
        dot(&self.normal, x) - self.offset.clone()
    }
}

#[derive(Clone, Debug)]
struct Simplex<F> {
    verts: Vec<usize>,
    normal: Vec<F>,
    offset: F,
}

/// Output of [`convex_hull`].
#[derive(Clone, Debug)]
pub struct Hull<F> {
    pub dim: usize,
    /// Deduplicated input points; simplices index into this list.
    pub points: Vec<Vec<F>>,
    /// Oriented boundary simplices (`dim` point indices each).
    pub simplices: Vec<Vec<usize>>,
    /// A point strictly inside the hull.
    pub interior: Vec<F>,
    /// Extreme points, sorted lexicographically.
    pub vertices: Vec<Vec<F>>,
    /// Distinct facet hyperplanes. When the facet offset is positive the
    /// facet is scaled to offset one; otherwise (float mode) the normal is a
    /// unit vector and (exact mode) its largest-index nonzero entry is ±1.
    pub facets: Vec<Facet<F>>,
}

pub(crate) fn lex_cmp<F: Field>(a: &[F], b: &[F]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn points_close<F: Field>(a: &[F], b: &[F], scale: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x.clone() - y.clone()).is_zero_at(scale))
}

fn dedup_points<F: Field>(points: &[Vec<F>], scale: f64) -> Vec<Vec<F>> {
    let mut sorted: Vec<Vec<F>> = points.to_vec();
    sorted.sort_by(|a, b| lex_cmp(a, b));
    let mut out: Vec<Vec<F>> = Vec::with_capacity(sorted.len());
    for p in sorted {
        let dup = if F::EXACT {
            out.last().is_some_and(|q| *q == p)
        } else {
            out.iter().any(|q| points_close(q, &p, scale))
        };
        if !dup {
            out.push(p);
        }
    }
    out
}

fn make_simplex<F: Field>(points: &[Vec<F>], verts: Vec<usize>, interior: &[F], scale: f64) -> Option<Simplex<F>> {
    let d = interior.len();
    let p0 = &points[verts[0]];
    let rows: Vec<Vec<F>> = verts[1..].iter().map(|&i| sub(&points[i], p0)).collect();
    let mut normal = kernel_vector(&rows, d)?;
    if !F::EXACT {
        let len = normal.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
        let inv = F::from_f64(1.0 / len);
        normal = normal.into_iter().map(|x| x * inv.clone()).collect();
    }
    let mut offset = dot(&normal, p0);
    let side = dot(&normal, interior) - offset.clone();
    match side.sign(scale) {
        Ordering::Greater => {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        Ordering::Equal => return None,
        Ordering::Less => {}
    }
    Some(Simplex { verts, normal, offset })
}

/// Picks `dim + 1` affinely independent points, greedily maximizing the
/// distance to the span chosen so far.
fn initial_simplex<F: Field>(points: &[Vec<F>], dim: usize, scale: f64) -> Result<Vec<usize>> {
    let first = 0; // points are sorted; index 0 is lexicographically smallest
    let mut chosen = vec![first];
    let mut basis: Vec<(Vec<F>, F)> = Vec::new(); // orthogonal directions with squared norms
    let origin = &points[first];
    while chosen.len() <= dim {
        let mut best: Option<(usize, F)> = None;
        for (i, p) in points.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let mut r = sub(p, origin);
            for (b, bb) in &basis {
                let c = dot(&r, b) / bb.clone();
                r = r.iter().zip(b).map(|(x, y)| x.clone() - c.clone() * y.clone()).collect();
            }
            let n2 = dot(&r, &r);
            if n2.is_zero_at(scale * scale) {
                continue;
            }
            let better = match &best {
                None => true,
                Some((_, bn)) => n2 > *bn,
            };
            if better {
                best = Some((i, n2));
            }
        }
        let Some((i, _)) = best else {
            return Err(Error::Degenerate(format!(
                "points span an affine subspace of dimension {} < {dim}",
                chosen.len() - 1
            )));
        };
        let mut r = sub(&points[i], origin);
        for (b, bb) in &basis {
            let c = dot(&r, b) / bb.clone();
            r = r.iter().zip(b).map(|(x, y)| x.clone() - c.clone() * y.clone()).collect();
        }
        let n2 = dot(&r, &r);
        basis.push((r, n2));
        chosen.push(i);
    }
    Ok(chosen)
}

/// Convex hull of a finite point set in `R^dim`.
///
/// Fails with [`Error::Degenerate`] when the points are not full-dimensional.
pub fn convex_hull<F: Field>(dim: usize, points: &[Vec<F>]) -> Result<Hull<F>> {
    if dim == 0 {
        return Err(Error::Degenerate("zero-dimensional ambient space".into()));
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }
    let scale = points.iter().map(|p| magnitude(p)).fold(1.0, f64::max);
    let points = dedup_points(points, scale);
    if points.len() < dim + 1 {
        return Err(Error::Degenerate(format!(
            "need at least {} distinct points, got {}",
            dim + 1,
            points.len()
        )));
    }
    let init = initial_simplex(&points, dim, scale)?;

    let inv = F::from_i64(dim as i64 + 1);
    let mut interior = vec![F::zero(); dim];
    for &i in &init {
        for (c, x) in interior.iter_mut().zip(&points[i]) {
            *c = c.clone() + x.clone();
        }
    }
    let interior: Vec<F> = interior.into_iter().map(|c| c / inv.clone()).collect();

    let mut simplices: Vec<Option<Simplex<F>>> = Vec::new();
    for skip in 0..=dim {
        let verts: Vec<usize> = init.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &i)| i).collect();
        let s = make_simplex(&points, verts, &interior, scale)
            .ok_or_else(|| Error::Degenerate("initial simplex is flat".into()))?;
        simplices.push(Some(s));
    }

    for (pi, p) in points.iter().enumerate() {
        if init.contains(&pi) {
            continue;
        }
        let visible: Vec<usize> = simplices
            .iter()
            .enumerate()
            .filter_map(|(k, s)| {
                let s = s.as_ref()?;
                let ex = dot(&s.normal, p) - s.offset.clone();
                ex.is_pos_at(scale).then_some(k)
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut order: Vec<Vec<usize>> = Vec::new();
        for &k in &visible {
            let s = simplices[k].as_ref().expect("live simplex");
            for omit in 0..s.verts.len() {
                let mut ridge: Vec<usize> = s
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != omit)
                    .map(|(_, &v)| v)
                    .collect();
                ridge.sort_unstable();
                let c = counts.entry(ridge.clone()).or_insert(0);
                if *c == 0 {
                    order.push(ridge);
                }
                *c += 1;
            }
        }
        for &k in &visible {
            simplices[k] = None;
        }
        for ridge in order {
            if counts[&ridge] != 1 {
                continue;
            }
            let mut verts = ridge;
            verts.push(pi);
            if let Some(s) = make_simplex(&points, verts, &interior, scale) {
                simplices.push(Some(s));
            }
        }
    }

    let simplices: Vec<Simplex<F>> = simplices.into_iter().flatten().collect();
    let facets = distinct_facets(&simplices, scale);

    let mut candidates: Vec<usize> = simplices.iter().flat_map(|s| s.verts.iter().copied()).collect();
    candidates.sort_unstable();
    candidates.dedup();
    let mut vertices: Vec<Vec<F>> = Vec::new();
    for i in candidates {
        let p = &points[i];
        let normals: Vec<Vec<F>> = facets
            .iter()
            .filter(|f| on_facet(f, p, scale))
            .map(|f| f.normal.clone())
            .collect();
        if rank(&normals, dim) == dim {
            vertices.push(p.clone());
        }
    }
    vertices.sort_by(|a, b| lex_cmp(a, b));

    Ok(Hull {
        dim,
        simplices: simplices.into_iter().map(|s| s.verts).collect(),
        points,
        interior,
        vertices,
        facets,
    })
}

/// Float facets within this distance (relative to the coordinate scale),
/// and with unit normals this close, are merged.
const FLOAT_MERGE_TOL: f64 = 1e-9;

/// Incidence measured as a distance, with the tolerance used for merging:
/// canonical facets are scaled to offset one, which would otherwise amplify
/// the excess of facets passing close to the origin.
fn on_facet<F: Field>(f: &Facet<F>, p: &[F], scale: f64) -> bool {
    if F::EXACT {
        return f.excess(p).is_zero_at(scale);
    }
    let len = f.normal.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
    (f.excess(p).to_f64() / len).abs() <= FLOAT_MERGE_TOL * scale.max(1.0)
}

fn canonical_facet<F: Field>(normal: &[F], offset: &F, scale: f64) -> Facet<F> {
    if offset.is_pos_at(scale) {
        Facet {
            normal: normal.iter().map(|x| x.clone() / offset.clone()).collect(),
            offset: F::one(),
        }
    } else if F::EXACT {
        let piv = normal
            .iter()
            .rev()
            .find(|x| !x.is_zero_at(0.0))
            .expect("nonzero normal")
            .abs_val();
        Facet {
            normal: normal.iter().map(|x| x.clone() / piv.clone()).collect(),
            offset: offset.clone() / piv,
        }
    } else {
        Facet { normal: normal.to_vec(), offset: offset.clone() }
    }
}

fn distinct_facets<F: Field>(simplices: &[Simplex<F>], scale: f64) -> Vec<Facet<F>> {
    let mut out: Vec<Facet<F>> = Vec::new();
    let mut unit: Vec<(Vec<f64>, f64)> = Vec::new();
    for s in simplices {
        let f = canonical_facet(&s.normal, &s.offset, scale);
        if F::EXACT {
            if !out.iter().any(|g| *g == f) {
                out.push(f);
            }
        } else {
            // compare unit normals and offsets
            let len = s.normal.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
            let n: Vec<f64> = s.normal.iter().map(|x| x.to_f64() / len).collect();
            let o = s.offset.to_f64() / len;
            let tol = FLOAT_MERGE_TOL;
            let dup = unit.iter().any(|(m, p)| {
                (o - p).abs() <= tol * scale.max(1.0) && n.iter().zip(m).all(|(a, b)| (a - b).abs() <= tol)
            });
            if !dup {
                unit.push((n, o));
                out.push(f);
            }
        }
    }
    out.sort_by(|a, b| lex_cmp(&a.normal, &b.normal).then_with(|| a.offset.total_cmp(&b.offset)));
    out
}

impl<F: Field> Hull<F> {
    /// Volume as the sum of cones from the interior point over the boundary
    /// simplices.
    pub fn volume(&self) -> F {
        let mut total = F::zero();
        for s in &self.simplices {
            let rows: Vec<Vec<F>> = s.iter().map(|&i| sub(&self.points[i], &self.interior)).collect();
            total = total + crate::linalg::det(&rows).abs_val();
        }
        let mut fact = F::one();
        for k in 2..=self.dim {
            fact = fact * F::from_i64(k as i64);
        }
        total / fact
    }
}
