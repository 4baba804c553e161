//! Small dense complex linear algebra on the 12-dimensional phase space.

use nalgebra::{DMatrix, DVector, SMatrix, SVector};

use crate::error::{Error, Result};
use crate::{C64, DIM};

pub type Mat12 = SMatrix<C64, DIM, DIM>;
pub type Vec12 = SVector<C64, DIM>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn max_abs(m: &Mat12) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn inverse(m: &Mat12) -> Result<Mat12> {
    m.lu()
        .try_inverse()
        .ok_or_else(|| Error::Numeric("singular matrix in resolvent".into()))
}

/// All eigenvalues of a general complex matrix, via the complex Schur form.
pub fn eigenvalues(m: &Mat12) -> Result<Vec<C64>> {
    m.eigenvalues()
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))
}

/// Solves `A X + X Aᵀ + Q = 0` through its Kronecker form
/// `(I ⊗ A + A ⊗ I) vec X = −vec Q`. At 144 unknowns a dense LU is instant.
pub fn solve_lyapunov(a: &Mat12, q: &Mat12) -> Result<Mat12> {
    let n = DIM;
    let mut k = DMatrix::<C64>::zeros(n * n, n * n);
    // column-major vec: X[i, j] -> i + n j
    for j in 0..n {
        for i in 0..n {
            let row = i + n * j;
            for l in 0..n {
                // (A X)[i, j] = Σ_l A[i, l] X[l, j]
                k[(row, l + n * j)] += a[(i, l)];
                // (X Aᵀ)[i, j] = Σ_l X[i, l] A[j, l]
                k[(row, i + n * l)] += a[(j, l)];
            }
        }
    }
    let rhs = DVector::<C64>::from_iterator(n * n, q.iter().map(|z| -z));
    let sol = k
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numeric("Lyapunov operator is singular".into()))?;
    Ok(Mat12::from_iterator(sol.iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_matrix(seed: u64) -> Mat12 {
        // deterministic, diagonally dominated toward stability
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = Mat12::zeros();
        for i in 0..DIM {
            for j in 0..DIM {
                m[(i, j)] = c(next(), next());
            }
            m[(i, i)] -= c(4.0, 0.0);
        }
        m
    }

    #[test]
    fn lyapunov_residual() {
        let a = test_matrix(7);
        let b = test_matrix(11);
        let q = b * b.transpose();
        let x = solve_lyapunov(&a, &q).unwrap();
        let r = a * x + x * a.transpose() + q;
        assert!(max_abs(&r) < 1e-12 * max_abs(&q));
        // symmetric Q gives symmetric X
        assert!(max_abs(&(x - x.transpose())) < 1e-12 * max_abs(&x));
    }

    #[test]
    fn lyapunov_of_diagonal_is_elementwise() {
        let mut a = Mat12::zeros();
        for i in 0..DIM {
            a[(i, i)] = c(-(i as f64) - 1.0, 0.5);
        }
        let q = Mat12::from_fn(|i, j| c((i + j) as f64, 1.0));
        let x = solve_lyapunov(&a, &q).unwrap();
        for i in 0..DIM {
            for j in 0..DIM {
                let expect = -q[(i, j)] / (a[(i, i)] + a[(j, j)]);
                assert!((x[(i, j)] - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let mut m = Mat12::zeros();
        for i in 0..DIM {
            m[(i, i)] = c(i as f64, -(i as f64));
            for j in i + 1..DIM {
                m[(i, j)] = c(0.3, 0.1);
            }
        }
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (i, e) in ev.iter().enumerate() {
            assert!((e - c(i as f64, -(i as f64))).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = test_matrix(3);
        let inv = inverse(&m).unwrap();
        assert!(max_abs(&(m * inv - Mat12::identity())) < 1e-12);
        assert!(inverse(&Mat12::zeros()).is_err());
    }
}
