//! Small dense linear algebra over a [`Field`], plus `f64` vector helpers.

use crate::scalar::Field;

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

pub fn sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn neg<F: Field>(a: &[F]) -> Vec<F> {
    a.iter().map(|x| -x.clone()).collect()
}

/// Largest absolute coordinate as `f64`, used to scale float tolerances.
pub fn magnitude<F: Field>(a: &[F]) -> f64 {
    a.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
}

/// Gaussian elimination to row echelon form in place. Returns pivot columns.
///
/// Float mode uses partial pivoting by magnitude; exact mode takes the first
/// nonzero entry.
fn echelon<F: Field>(m: &mut [Vec<F>], cols: usize, scale: f64) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut best: Option<usize> = None;
        for i in r..rows {
            if m[i][c].is_zero_at(scale) {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) if !F::EXACT && m[i][c].to_f64().abs() > m[b][c].to_f64().abs() => best = Some(i),
                _ => {}
            }
            if F::EXACT && best.is_some() {
                break;
            }
        }
        let Some(p) = best else { continue };
        m.swap(r, p);
        let piv = m[r][c].clone();
        let width = m[r].len();
        for j in c..width {
            m[r][j] = m[r][j].clone() / piv.clone();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero_at(0.0) && F::EXACT {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..width {
                m[i][j] = m[i][j].clone() - f.clone() * m[r][j].clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>], cols: usize) -> usize {
    let scale = rows.iter().map(|r| magnitude(r)).fold(1.0, f64::max);
    let mut m = rows.to_vec();
    echelon(&mut m, cols, scale).len()
}

/// A nonzero vector spanning the kernel of `rows` when the kernel is
/// one-dimensional; `None` otherwise.
pub fn kernel_vector<F: Field>(rows: &[Vec<F>], cols: usize) -> Option<Vec<F>> {
    let scale = rows.iter().map(|r| magnitude(r)).fold(1.0, f64::max);
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m, cols, scale);
    if pivots.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![F::zero(); cols];
    x[free] = F::one();
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = -m[r][free].clone();
    }
    Some(x)
}

/// Determinant of a square matrix.
pub fn det<F: Field>(rows: &[Vec<F>]) -> F {
    let n = rows.len();
    let scale = rows.iter().map(|r| magnitude(r)).fold(1.0, f64::max);
    let mut m = rows.to_vec();
    let mut d = F::one();
    for c in 0..n {
        let mut best: Option<usize> = None;
        for i in c..n {
            if m[i][c].is_zero_at(if F::EXACT { 0.0 } else { scale * 1e-6 }) {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) if !F::EXACT && m[i][c].to_f64().abs() > m[b][c].to_f64().abs() => best = Some(i),
                _ => {}
            }
            if F::EXACT && best.is_some() {
                break;
            }
        }
        let Some(p) = best else { return F::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d = d * piv.clone();
        for i in c + 1..n {
            let f = m[i][c].clone() / piv.clone();
            if f.is_zero_at(0.0) && F::EXACT {
                continue;
            }
            for j in c..n {
                m[i][j] = m[i][j].clone() - f.clone() * m[c][j].clone();
            }
        }
    }
    d
}

/// Solves the square system `a x = b`; `None` when singular.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let n = a.len();
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let scale = a.iter().map(|r| magnitude(r)).fold(1.0, f64::max);
    let pivots = echelon(&mut m, n, scale);
    if pivots.len() != n {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

pub fn factorial_f64(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

// ---- f64 helpers ----

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_f64_vec<F: Field>(a: &[F]) -> Vec<f64> {
    a.iter().map(|x| x.to_f64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn exact_determinant_and_kernel() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(det(&m), q(5));
        let k = kernel_vector(&[vec![q(1), q(-1), q(0)], vec![q(0), q(1), q(-1)]], 3).unwrap();
        assert_eq!(dot(&k, &[q(1), q(-1), q(0)]), q(0));
        assert_eq!(dot(&k, &[q(0), q(1), q(-1)]), q(0));
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]], 2), 1);
    }

    #[test]
    fn float_solve() {
        let a = vec![vec![0.0, 2.0], vec![1.0, 1.0]];
        let x = solve(&a, &[4.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
        assert!((det(&a) + 2.0).abs() < 1e-12);
    }
}
