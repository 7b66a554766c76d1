//! ℓ_p-sums `K ⊕_p L`: the unit ball of `(g_K(x)^p + g_L(y)^p)^{1/p}` on
//! `R^n × R^m`, and the closed-form volume.

use std::sync::Arc;

use statrs::function::gamma::gamma;

use crate::convex::oracle::Oracle;
use crate::convex::{ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::scalar::{factorial, Field, Rational, Scalar};

/// Oracle for `K ⊕_p L`, `p ∈ [1, ∞]` (`f64::INFINITY` for the product).
#[derive(Clone, Debug)]
pub struct LpSumBody {
    pub left: ConvexBody,
    pub right: ConvexBody,
    pub p: f64,
}

/// Norm of `(a, b)` in ℓ_p, with the limit forms at `p = 1` and `p = ∞`.
fn pair_norm(a: f64, b: f64, p: f64) -> f64 {
    if p.is_infinite() {
        a.max(b)
    } else if p == 1.0 {
        a + b
    } else {
        let m = a.max(b);
        if m == 0.0 {
            return 0.0;
        }
        m * ((a / m).powf(p) + (b / m).powf(p)).powf(1.0 / p)
    }
}

/// Hölder conjugate exponent.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Weights `(α, β)` with `α^p + β^p = 1` (in the conjugate sense) that
/// combine the parts' extremal points or gradients. `a`, `b` are the parts'
/// values and `r` the exponent of the norm being differentiated.
fn split_weights(a: f64, b: f64, r: f64) -> (f64, f64) {
    let total = pair_norm(a, b, r);
    if total == 0.0 {
        return (0.0, 0.0);
    }
    if r.is_infinite() {
        return if a >= b { (1.0, 0.0) } else { (0.0, 1.0) };
    }
    if r == 1.0 {
        return (1.0, 1.0);
    }
    ((a / total).powf(r - 1.0), (b / total).powf(r - 1.0))
}

impl LpSumBody {
    pub fn new(left: ConvexBody, right: ConvexBody, p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        for b in [&left, &right] {
            if let Some(poly) = b.as_float_polytope() {
                if !poly.origin_interior() {
                    return Err(Error::PolarityDomain("ℓ_p-sum parts need the origin inside".into()));
                }
            }
        }
        Ok(Self { left, right, p })
    }

    pub fn dim(&self) -> usize {
        self.left.dim() + self.right.dim()
    }

    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        x.split_at(self.left.dim())
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        let (a, b) = self.split(x);
        pair_norm(self.left.gauge(a), self.right.gauge(b), self.p)
    }

    pub fn support(&self, y: &[f64]) -> f64 {
        let (a, b) = self.split(y);
        pair_norm(self.left.support(a), self.right.support(b), conjugate_exponent(self.p))
    }

    pub fn support_point(&self, y: &[f64]) -> Vec<f64> {
        let (a, b) = self.split(y);
        let (ha, hb) = (self.left.support(a), self.right.support(b));
        let (wa, wb) = split_weights(ha, hb, conjugate_exponent(self.p));
        let mut out: Vec<f64> = self.left.support_point(a).into_iter().map(|v| v * wa).collect();
        out.extend(self.right.support_point(b).into_iter().map(|v| v * wb));
        out
    }

    pub fn gauge_grad(&self, x: &[f64]) -> Vec<f64> {
        let (a, b) = self.split(x);
        let (ga, gb) = (self.left.gauge(a), self.right.gauge(b));
        let (wa, wb) = split_weights(ga, gb, self.p);
        let mut out: Vec<f64> = self.left.gauge_grad(a).into_iter().map(|v| v * wa).collect();
        out.extend(self.right.gauge_grad(b).into_iter().map(|v| v * wb));
        out
    }

    /// Exact polytope realization for `p ∈ {1, ∞}` when both parts are
    /// polytopes: `conv(K×0 ∪ 0×L)` and `K×L` respectively.
    pub fn realize(&self) -> Option<Result<ConvexBody>> {
        if self.p != 1.0 && !self.p.is_infinite() {
            return None;
        }
        let (n, m) = (self.left.dim(), self.right.dim());
        if let (Some(k), Some(l)) = (self.left.as_exact(), self.right.as_exact()) {
            let pts = realize_points(k.vertices(), l.vertices(), n, m, self.p == 1.0);
            return Some(Polytope::from_points(n + m, &pts).map(Into::into));
        }
        let (k, l) = (self.left.as_float_polytope()?, self.right.as_float_polytope()?);
        let pts = realize_points(k.vertices(), l.vertices(), n, m, self.p == 1.0);
        Some(Polytope::from_points(n + m, &pts).map(Into::into))
    }
}

fn realize_points<F: Field>(k: &[Vec<F>], l: &[Vec<F>], n: usize, m: usize, one: bool) -> Vec<Vec<F>> {
    let mut pts = Vec::new();
    if one {
        for v in k {
            let mut x = v.clone();
            x.extend(std::iter::repeat(F::zero()).take(m));
            pts.push(x);
        }
        for w in l {
            let mut x = vec![F::zero(); n];
            x.extend(w.iter().cloned());
            pts.push(x);
        }
    } else {
        for v in k {
            for w in l {
                let mut x = v.clone();
                x.extend(w.iter().cloned());
                pts.push(x);
            }
        }
    }
    pts
}

/// `K ⊕_p L`: a polytope when `p ∈ {1, ∞}` and both parts are polytopes,
/// an oracle otherwise.
pub fn lp_sum(k: &ConvexBody, l: &ConvexBody, p: f64) -> Result<ConvexBody> {
    let body = LpSumBody::new(k.clone(), l.clone(), p)?;
    match body.realize() {
        Some(r) => r,
        None => Ok(ConvexBody::Oracle(Oracle::LpSum(Arc::new(body)))),
    }
}

/// `Γ(k/2)` for `k >= 1` as `(r, has_sqrt_pi)`, meaning `r` or `r·√π`.
pub fn gamma_half_integer(k: u64) -> (Rational, bool) {
    assert!(k >= 1, "Γ has a pole at 0");
    if k % 2 == 0 {
        (factorial(k / 2 - 1), false)
    } else {
        // Γ(j + 1/2) = (2j)! / (4^j j!) √π
        let j = (k - 1) / 2;
        let num = factorial(2 * j);
        let den = Rational::from_integer(num_bigint::BigInt::from(4u32).pow(j as u32)) * factorial(j);
        (num / den, true)
    }
}

/// If `a / p` is a nonnegative integer, return it.
fn integer_ratio(a: usize, p: f64) -> Option<u64> {
    let r = a as f64 / p;
    (r.fract() == 0.0 && r >= 0.0).then_some(r as u64)
}

/// Closed-form volume of `K ⊕_p L`:
/// `Γ(n/p + 1) Γ(m/p + 1) / Γ((n+m)/p + 1) · vol K · vol L`.
///
/// Exact when both volumes are exact and all three Gamma arguments are
/// integers (always the case at `p = 1` and `p = ∞`).
pub fn lp_sum_volume(vol_k: &Scalar, vol_l: &Scalar, n: usize, m: usize, p: f64) -> Result<Scalar> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    if n == 0 || m == 0 {
        return Err(Error::Precondition("dimensions must be positive".into()));
    }
    if vol_k.to_f64() <= 0.0 || vol_l.to_f64() <= 0.0 {
        return Err(Error::Precondition("volumes must be positive".into()));
    }
    let vols = vol_k.mul(vol_l);
    if p.is_infinite() {
        return Ok(vols);
    }
    if let (Some(a), Some(b), Some(c), true) =
        (integer_ratio(n, p), integer_ratio(m, p), integer_ratio(n + m, p), vols.is_exact())
    {
        let coeff = factorial(a) * factorial(b) / factorial(c);
        return Ok(vols.mul(&Scalar::Exact(coeff)));
    }
    let coeff = gamma(n as f64 / p + 1.0) * gamma(m as f64 / p + 1.0) / gamma((n + m) as f64 / p + 1.0);
    Ok(Scalar::Float(coeff * vols.to_f64()))
}
