//! Linear symplectic reduction along a vector and ω-orthogonal projection
//! onto a symplectic plane.

use std::sync::Arc;

use crate::convex::hull::Facet;
use crate::convex::oracle::{Oracle, PlaneProjection, Quotient};
use crate::convex::{ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{dot, to_f64_vec};
use crate::scalar::{Field, Rational};
use crate::symplectic::{apply_j_raw, omega_raw, SymplecticPlane, SymplecticSpace};

/// A symplectic basis `(q'_k, p'_k)` of the ω-complement of `span{v, u}`,
/// where `u = Jv / |v|²` so that `ω(v, u) = 1`.
#[derive(Clone, Debug)]
pub struct ReductionBasis<F> {
    pub v: Vec<F>,
    pub u: Vec<F>,
    pub q: Vec<Vec<F>>,
    pub p: Vec<Vec<F>>,
}

impl<F: Field> ReductionBasis<F> {
    /// Basis vectors of the quotient, ordered `(q'_1..q'_{n-1}, p'_1..p'_{n-1})`.
    pub fn lift(&self) -> Vec<Vec<F>> {
        self.q.iter().chain(&self.p).cloned().collect()
    }

    /// Rows of the quotient coordinate map
    /// `x ↦ (ω(x, p'_k))_k, (ω(q'_k, x))_k`, i.e. `-Jp'_k` and `Jq'_k`.
    pub fn coordinate_rows(&self) -> Vec<Vec<F>> {
        let mut rows: Vec<Vec<F>> =
            self.p.iter().map(|p| apply_j_raw(p).into_iter().map(|x| -x).collect()).collect();
        rows.extend(self.q.iter().map(|q| apply_j_raw(q)));
        rows
    }

    /// Quotient coordinates of `x`.
    pub fn coordinates(&self, x: &[F]) -> Vec<F> {
        self.coordinate_rows().iter().map(|r| dot(r, x)).collect()
    }

    pub fn to_float(&self) -> ReductionBasis<f64> {
        ReductionBasis {
            v: to_f64_vec(&self.v),
            u: to_f64_vec(&self.u),
            q: self.q.iter().map(|x| to_f64_vec(x)).collect(),
            p: self.p.iter().map(|x| to_f64_vec(x)).collect(),
        }
    }
}

/// Deterministic symplectic Gram–Schmidt: project the standard basis onto
/// the ω-complement of `span{v, u}`, then repeatedly take the pair with the
/// largest `|ω|` (lowest indices on ties), normalize it, and project it out.
pub fn reduction_basis<F: Field>(v: &[F]) -> Result<ReductionBasis<F>> {
    let space = SymplecticSpace::new(v.len())?;
    if space.n() < 2 {
        return Err(Error::Precondition("reduction needs ambient dimension at least 4".into()));
    }
    let vv = dot(v, v);
    if vv.is_zero_at(0.0) || v.iter().all(|x| x.is_zero_at(0.0)) {
        return Err(Error::ZeroVector);
    }
    let u: Vec<F> = apply_j_raw(v).into_iter().map(|x| x / vv.clone()).collect();
    let d = v.len();
    // x ↦ x + ω(u, x) v - ω(v, x) u applied to e_i, with ω(u, e_i) = (Ju)_i
    let ju = apply_j_raw(&u);
    let jv = apply_j_raw(v);
    let mut cands: Vec<Vec<F>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|k| {
                    let e = if k == i { F::one() } else { F::zero() };
                    e + ju[i].clone() * v[k].clone() - jv[i].clone() * u[k].clone()
                })
                .collect()
        })
        .collect();
    let mut q = Vec::new();
    let mut p = Vec::new();
    for _ in 0..space.n() - 1 {
        let mut best: Option<(usize, usize, F)> = None;
        for i in 0..cands.len() {
            for j in i + 1..cands.len() {
                let w = omega_raw(&cands[i], &cands[j]);
                if best.as_ref().map_or(true, |(_, _, b)| w.abs_val() > b.abs_val()) {
                    best = Some((i, j, w));
                }
            }
        }
        let (i, j, w) = best.ok_or_else(|| Error::Degenerate("ran out of basis candidates".into()))?;
        if w.is_zero_at(1.0) {
            return Err(Error::Degenerate("no symplectic pair left in the complement".into()));
        }
        let a = cands[i].clone();
        let b: Vec<F> = cands[j].iter().map(|x| x.clone() / w.clone()).collect();
        cands.remove(j);
        cands.remove(i);
        for x in cands.iter_mut() {
            let xb = omega_raw(x, &b);
            let xa = omega_raw(x, &a);
            for k in 0..d {
                x[k] = x[k].clone() - xb.clone() * a[k].clone() + xa.clone() * b[k].clone();
            }
        }
        q.push(a);
        p.push(b);
    }
    Ok(ReductionBasis { v: v.to_vec(), u, q, p })
}

fn reduce_polytope<F: Field>(poly: &Polytope<F>, basis: &ReductionBasis<F>) -> Result<Polytope<F>> {
    let d = poly.dim();
    let lift = basis.lift();
    // section in coordinates (t, s) with x = t v + Σ s_k w_k
    let facets: Vec<Facet<F>> = poly
        .facets()
        .iter()
        .map(|f| {
            let mut normal = vec![dot(&f.normal, &basis.v)];
            normal.extend(lift.iter().map(|w| dot(&f.normal, w)));
            Facet { normal, offset: f.offset.clone() }
        })
        .collect();
    let section = Polytope::from_facets(d - 1, &facets)?;
    let projected: Vec<Vec<F>> = section.vertices().iter().map(|x| x[1..].to_vec()).collect();
    Polytope::from_points(d - 2, &projected)
}

/// Reduction of `X` along `v`: the section by `{x : ω(v, x) = 0}` projected
/// along `v`, in the quotient coordinates of [`reduction_basis`].
///
/// Exact polytopes stay exact when `v` has dyadic entries (multiples of
/// `2^-10`); otherwise the result is a float polytope or an oracle.
pub fn symplectic_reduction(x: &ConvexBody, v: &[f64]) -> Result<ConvexBody> {
    if v.len() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: v.len() });
    }
    // exact arithmetic for exact polytopes along short dyadic vectors; general
    // floats would carry 2^-52 denominators through the hull computation
    let dyadic = v.iter().all(|t| (t * 1024.0).fract() == 0.0 && t.abs() <= 1024.0);
    if let (Some(e), true) = (x.as_exact(), dyadic) {
        let exact_v: Vec<Rational> = v.iter().map(|&t| <Rational as Field>::from_f64(t)).collect();
        let basis = reduction_basis(&exact_v)?;
        return Ok(reduce_polytope(e, &basis)?.into());
    }
    let basis = reduction_basis(v)?;
    match x {
        ConvexBody::Polytope(p) => Ok(reduce_polytope(p.float(), &basis)?.into()),
        ConvexBody::Oracle(_) => Ok(ConvexBody::Oracle(Oracle::Quotient(Arc::new(Quotient {
            body: x.clone(),
            dir: basis.v.clone(),
            normal: apply_j_raw(&basis.v),
            lift: basis.lift(),
            coords: basis.coordinate_rows(),
        })))),
    }
}

/// Exact reduction of an exact polytope along a rational vector.
pub fn symplectic_reduction_exact(x: &ConvexBody, v: &[Rational]) -> Result<ConvexBody> {
    let e = x.as_exact().ok_or_else(|| Error::Capability("exact reduction needs an exact polytope".into()))?;
    let basis = reduction_basis(v)?;
    Ok(reduce_polytope(e, &basis)?.into())
}

/// ω-orthogonal projection of `X` onto `plane`, in the plane's coordinates.
pub fn symplectic_projection(x: &ConvexBody, plane: &SymplecticPlane) -> Result<ConvexBody> {
    if plane.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: plane.dim() });
    }
    if let (Some(e), Some(rows)) = (x.as_exact(), plane.coordinate_rows_exact()) {
        let pts: Vec<Vec<Rational>> = e.vertices().iter().map(|v| vec![dot(&rows[0], v), dot(&rows[1], v)]).collect();
        return Ok(Polytope::from_points(2, &pts)?.into());
    }
    let rows = plane.coordinate_rows();
    match x {
        ConvexBody::Polytope(p) => {
            let pts: Vec<Vec<f64>> =
                p.float().vertices().iter().map(|v| vec![dot(&rows[0], v), dot(&rows[1], v)]).collect();
            Ok(Polytope::from_points(2, &pts)?.into())
        }
        ConvexBody::Oracle(_) => {
            Ok(ConvexBody::Oracle(Oracle::PlaneProjection(Arc::new(PlaneProjection { body: x.clone(), rows }))))
        }
    }
}
