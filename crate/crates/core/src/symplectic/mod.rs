//! The standard symplectic structure on `R^{2n}` with coordinates
//! `(q_1..q_n, p_1..p_n)`, `J(q, p) = (-p, q)` and `ω(x, y) = <Jx, y>`.

pub mod certificate;
pub mod cj;
pub mod maps;
pub mod polar;
pub mod reduction;
pub mod squeeze;

use nalgebra::DMatrix;

use crate::convex::{lp_sum, ConvexBody};
use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::scalar::{Field, Rational};

pub use certificate::{self_polarity_certificate, SelfPolarityCertificate};
pub use cj::{c_j, c_j_scaling, CjEstimate};
pub use polar::{self_polar_from_k, symplectic_polar};
pub use reduction::{reduction_basis, symplectic_projection, symplectic_reduction, ReductionBasis};
pub use squeeze::{squeeze_step, squeeze_to_self_polar, SqueezeOutcome};

/// `R^{2n}` with its standard symplectic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    n: usize,
}

impl SymplecticSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim % 2 == 1 {
            return Err(Error::OddDimension(dim));
        }
        Ok(Self { n: dim / 2 })
    }

    /// Half-dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// `ω(x, y) = Σ_i (x_{q_i} y_{p_i} - x_{p_i} y_{q_i})`.
    pub fn omega<F: Field>(&self, x: &[F], y: &[F]) -> F {
        omega_raw(x, y)
    }

    /// `J(q, p) = (-p, q)`.
    pub fn apply_j<F: Field>(&self, x: &[F]) -> Vec<F> {
        apply_j_raw(x)
    }

    pub fn j_matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..self.n {
            m[(i, self.n + i)] = -1.0;
            m[(self.n + i, i)] = 1.0;
        }
        m
    }

    pub fn j_rows_exact(&self) -> Vec<Vec<Rational>> {
        let d = self.dim();
        let mut rows = vec![vec![Rational::from_i64(0); d]; d];
        for i in 0..self.n {
            rows[i][self.n + i] = Rational::from_i64(-1);
            rows[self.n + i][i] = Rational::from_i64(1);
        }
        rows
    }
}

pub(crate) fn omega_raw<F: Field>(x: &[F], y: &[F]) -> F {
    let n = x.len() / 2;
    let mut acc = F::zero();
    for i in 0..n {
        acc = acc + x[i].clone() * y[n + i].clone() - x[n + i].clone() * y[i].clone();
    }
    acc
}

pub(crate) fn apply_j_raw<F: Field>(x: &[F]) -> Vec<F> {
    let n = x.len() / 2;
    let mut out = Vec::with_capacity(x.len());
    out.extend(x[n..].iter().map(|v| -v.clone()));
    out.extend(x[..n].iter().cloned());
    out
}

/// `ω(x, y)`; errors on odd or mismatched dimensions.
pub fn omega<F: Field>(x: &[F], y: &[F]) -> Result<F> {
    let s = SymplecticSpace::new(x.len())?;
    if y.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    Ok(s.omega(x, y))
}

/// `Jx`; errors on odd dimension.
pub fn apply_j<F: Field>(x: &[F]) -> Result<Vec<F>> {
    Ok(SymplecticSpace::new(x.len())?.apply_j(x))
}

/// Symplectic direct ℓ_p-sum of `X ⊂ R^{2n}` and `Y ⊂ R^{2m}` in
/// `R^{2(n+m)}`: the ℓ_p-sum on the product with coordinates reordered to
/// `(q_X, q_Y, p_X, p_Y)`, so that both factors are symplectic subspaces.
pub fn symplectic_sum(x: &ConvexBody, y: &ConvexBody, p: f64) -> Result<ConvexBody> {
    let (n, m) = (SymplecticSpace::new(x.dim())?.n(), SymplecticSpace::new(y.dim())?.n());
    let joined = lp_sum(x, y, p)?;
    let d = 2 * (n + m);
    // product coordinates (q_X, p_X, q_Y, p_Y) -> target slot
    let target = |i: usize| -> usize {
        if i < n {
            i
        } else if i < 2 * n {
            n + m + (i - n)
        } else if i < 2 * n + m {
            n + (i - 2 * n)
        } else {
            2 * n + m + (i - 2 * n - m)
        }
    };
    if joined.is_exact() {
        let mut rows = vec![vec![Rational::from_i64(0); d]; d];
        for i in 0..d {
            rows[target(i)][i] = Rational::from_i64(1);
        }
        return joined.linear_image_exact(&rows);
    }
    let mut perm = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        perm[(target(i), i)] = 1.0;
    }
    joined.linear_image(&perm)
}

/// A symplectic plane `span{u, v}` with `ω(u, v) = 1`, carrying the
/// ω-orthogonal projection onto it.
///
/// Plane coordinates of `x` are `(ω(x, v), ω(u, x))`, so that
/// `π(x) = ω(x, v) u + ω(u, x) v` and the induced area form is standard.
#[derive(Clone, Debug)]
pub struct SymplecticPlane {
    u: Vec<f64>,
    v: Vec<f64>,
    exact: Option<(Vec<Rational>, Vec<Rational>)>,
}

impl SymplecticPlane {
    /// Builds the plane, rescaling `v` so that `ω(u, v) = 1`.
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        SymplecticSpace::new(u.len())?;
        if v.len() != u.len() {
            return Err(Error::DimensionMismatch { expected: u.len(), got: v.len() });
        }
        let w = omega_raw(&u, &v);
        if w.abs() <= 1e-9 * norm(&u) * norm(&v) || !w.is_finite() {
            return Err(Error::NotSymplectic(w));
        }
        let v = v.into_iter().map(|x| x / w).collect();
        Ok(Self { u, v, exact: None })
    }

    /// Exact plane; `v` is rescaled exactly.
    pub fn exact(u: Vec<Rational>, v: Vec<Rational>) -> Result<Self> {
        SymplecticSpace::new(u.len())?;
        let w = omega_raw(&u, &v);
        if w == Rational::from_i64(0) {
            return Err(Error::NotSymplectic(0.0));
        }
        let v: Vec<Rational> = v.into_iter().map(|x| x / w.clone()).collect();
        Ok(Self {
            u: u.iter().map(|x| x.to_f64()).collect(),
            v: v.iter().map(|x| x.to_f64()).collect(),
            exact: Some((u, v)),
        })
    }

    /// The coordinate plane `(q_i, p_i)` in dimension `2n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut u = vec![Rational::from_i64(0); 2 * n];
        let mut v = u.clone();
        u[i] = Rational::from_i64(1);
        v[n + i] = Rational::from_i64(1);
        Self::exact(u, v).expect("coordinate planes are symplectic")
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn exact_vectors(&self) -> Option<&(Vec<Rational>, Vec<Rational>)> {
        self.exact.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// Rows of the coordinate map `x ↦ (ω(x, v), ω(u, x))`: `(-Jv, Ju)`.
    pub fn coordinate_rows(&self) -> [Vec<f64>; 2] {
        let jv: Vec<f64> = apply_j_raw(&self.v).into_iter().map(|x| -x).collect();
        [jv, apply_j_raw(&self.u)]
    }

    pub fn coordinate_rows_exact(&self) -> Option<[Vec<Rational>; 2]> {
        let (u, v) = self.exact.as_ref()?;
        let jv: Vec<Rational> = apply_j_raw(v).into_iter().map(|x| -x).collect();
        Some([jv, apply_j_raw(u)])
    }

    pub fn coordinates(&self, x: &[f64]) -> [f64; 2] {
        [omega_raw(x, &self.v), omega_raw(&self.u, x)]
    }

    /// `π(x) = ω(x, v) u + ω(u, x) v`.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let [a, b] = self.coordinates(x);
        self.u.iter().zip(&self.v).map(|(ui, vi)| a * ui + b * vi).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_sum_keeps_factors_symplectic() {
        let hex = ConvexBody::from_int_points(2, &[vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]])
            .unwrap();
        let s = symplectic_sum(&hex, &ConvexBody::ball(2, 2.0), 2.0).unwrap();
        assert_eq!(s.dim(), 4);
        // the hexagon lives in the (q1, p1) plane, the disk in (q2, p2)
        assert!((s.gauge(&[1.0, 0.0, 1.0, 0.0]) - 1.0).abs() < 1e-12);
        assert!((s.gauge(&[0.0, 2.0, 0.0, 0.0]) - 1.0).abs() < 1e-12);
        let l1 = symplectic_sum(&hex, &hex, 1.0).unwrap();
        assert!(l1.is_exact());
        assert_eq!(l1.gauge(&[1.0, 0.0, 1.0, 0.0]), 1.0);
    }

    #[test]
    fn normalization_and_pairing() {
        assert_eq!(omega(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        let e = |i: usize| {
            let mut v = vec![0.0; 4];
            v[i] = 1.0;
            v
        };
        assert_eq!(omega(&e(0), &e(3)).unwrap(), 0.0);
        assert_eq!(omega(&e(0), &e(2)).unwrap(), 1.0);
        assert!(matches!(omega(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), Err(Error::OddDimension(3))));
    }

    #[test]
    fn j_is_orthogonal_complex_structure() {
        for n in 1..=3 {
            let s = SymplecticSpace::new(2 * n).unwrap();
            let j = s.j_matrix();
            let id = DMatrix::<f64>::identity(2 * n, 2 * n);
            assert_eq!(&j * &j, -&id);
            assert_eq!(j.transpose() * &j, id);
            // ω(x, y) = <Jx, y>
            let x: Vec<f64> = (0..2 * n).map(|i| i as f64 + 0.5).collect();
            let y: Vec<f64> = (0..2 * n).map(|i| (i * i) as f64 - 1.0).collect();
            let jx = s.apply_j(&x);
            let inner: f64 = jx.iter().zip(&y).map(|(a, b)| a * b).sum();
            assert_eq!(inner, s.omega(&x, &y));
        }
    }

    #[test]
    fn plane_projector_is_idempotent() {
        let p = SymplecticPlane::new(vec![1.0, 0.5, 0.2, -1.0], vec![0.3, 0.0, 2.0, 1.0]).unwrap();
        assert!((omega_raw(p.u(), p.v()) - 1.0).abs() < 1e-12);
        let x = [0.7, -1.3, 0.4, 2.2];
        let px = p.project(&x);
        let ppx = p.project(&px);
        for (a, b) in px.iter().zip(&ppx) {
            assert!((a - b).abs() < 1e-12);
        }
        let k: Vec<f64> = x.iter().zip(&px).map(|(a, b)| a - b).collect();
        assert!(omega_raw(p.u(), &k).abs() < 1e-12 && omega_raw(p.v(), &k).abs() < 1e-12);
        assert!(matches!(
            SymplecticPlane::new(vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]),
            Err(Error::NotSymplectic(_))
        ));
    }
}
