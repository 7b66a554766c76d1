//! Random linear symplectic maps, exact and float.
//!
//! Maps are products of shears `[[I, A], [0, I]]`, `[[I, 0], [A, I]]` with
//! `A` symmetric, and block maps `[[B, 0], [0, B^{-T}]]`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::linalg::solve;
use crate::scalar::{Field, Rational};

fn identity<F: Field>(d: usize) -> Vec<Vec<F>> {
    (0..d).map(|i| (0..d).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
}

fn matmul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r)
        .map(|i| {
            (0..c)
                .map(|j| {
                    let mut acc = F::zero();
                    for t in 0..k {
                        acc = acc + a[i][t].clone() * b[t][j].clone();
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn upper_shear<F: Field>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = a.len();
    let mut m = identity(2 * n);
    for i in 0..n {
        for j in 0..n {
            m[i][n + j] = a[i][j].clone();
        }
    }
    m
}

fn lower_shear<F: Field>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = a.len();
    let mut m = identity(2 * n);
    for i in 0..n {
        for j in 0..n {
            m[n + i][j] = a[i][j].clone();
        }
    }
    m
}

/// `[[B, 0], [0, B^{-T}]]`; `None` if `B` is singular.
fn block<F: Field>(b: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = b.len();
    let bt: Vec<Vec<F>> = (0..n).map(|i| (0..n).map(|j| b[j][i].clone()).collect()).collect();
    // columns of B^{-T} solve B^T x = e_j
    let mut inv_t = vec![vec![F::zero(); n]; n];
    for j in 0..n {
        let mut e = vec![F::zero(); n];
        e[j] = F::one();
        let x = solve(&bt, &e)?;
        for i in 0..n {
            inv_t[i][j] = x[i].clone();
        }
    }
    let mut m = vec![vec![F::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = b[i][j].clone();
            m[n + i][n + j] = inv_t[i][j].clone();
        }
    }
    Some(m)
}

fn symmetric_with<F: Field>(n: usize, mut entry: impl FnMut() -> F) -> Vec<Vec<F>> {
    let mut a = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = entry();
            a[i][j] = v.clone();
            a[j][i] = v;
        }
    }
    a
}

/// A random exact symplectic map of `R^{2n}` with small rational entries.
pub fn random_symplectic_exact<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<Rational>> {
    let mut small = || Rational::new(rng.gen_range(-2i64..=2).into(), rng.gen_range(1i64..=2).into());
    let a1 = symmetric_with(n, &mut small);
    let a2 = symmetric_with(n, &mut small);
    let mut b: Vec<Vec<Rational>> = identity(n);
    for i in 0..n {
        for j in 0..i {
            b[i][j] = small();
        }
    }
    let blk = block(&b).expect("unit lower-triangular B is invertible");
    matmul(&matmul(&blk, &upper_shear(&a1)), &lower_shear(&a2))
}

/// A random float symplectic map with moderate conditioning (`scale`
/// controls the size of the shear and block perturbations).
pub fn random_symplectic<R: Rng>(n: usize, scale: f64, rng: &mut R) -> DMatrix<f64> {
    let normal = Normal::new(0.0, scale).expect("positive scale");
    let mut draw = || normal.sample(rng);
    let a1 = symmetric_with(n, &mut draw);
    let a2 = symmetric_with(n, &mut draw);
    let mut b: Vec<Vec<f64>> = identity(n);
    for row in b.iter_mut() {
        for x in row.iter_mut() {
            *x += draw();
        }
    }
    let blk = block(&b).unwrap_or_else(|| identity(2 * n));
    let m = matmul(&matmul(&blk, &upper_shear(&a1)), &lower_shear(&a2));
    DMatrix::from_fn(2 * n, 2 * n, |i, j| m[i][j])
}

pub fn rows_to_matrix(rows: &[Vec<Rational>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j].to_f64())
}

/// `max |MᵀJM - J|` entrywise.
pub fn symplectic_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows() / 2;
    let j = crate::symplectic::SymplecticSpace::new(2 * n).expect("even").j_matrix();
    (m.transpose() * &j * m - &j).abs().max()
}

/// `MᵀJM == J` exactly.
pub fn is_symplectic_exact(m: &[Vec<Rational>]) -> bool {
    let d = m.len();
    let j = crate::symplectic::SymplecticSpace::new(d).expect("even").j_rows_exact();
    let mt: Vec<Vec<Rational>> = (0..d).map(|i| (0..d).map(|k| m[k][i].clone()).collect()).collect();
    matmul(&matmul(&mt, &j), m) == j
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_maps_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            for _ in 0..5 {
                assert!(is_symplectic_exact(&random_symplectic_exact(n, &mut rng)));
                assert!(symplectic_defect(&random_symplectic(n, 0.3, &mut rng)) < 1e-12);
            }
        }
    }
}
