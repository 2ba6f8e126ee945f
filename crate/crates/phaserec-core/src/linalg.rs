//! Dense complex linear algebra: LU factorization with partial pivoting and
//! a one-norm condition estimate.
//!
//! The discretized scattering systems are dense, non-symmetric-Hermitian
//! complex matrices of a few thousand unknowns; a direct factorization keeps
//! the solves deterministic and lets every solution be residual-checked.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Square complex matrix in row-major storage.
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    /// y = A x.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0f64; self.n];
        for i in 0..self.n {
            for (s, a) in sums.iter_mut().zip(self.row(i)) {
                *s += a.norm();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// LU factorization with partial pivoting; fails on an exactly singular
    /// pivot.
    pub fn factor(self) -> Result<LuFactorization> {
        let n = self.n;
        let mut a = self.data;
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            // pivot search on column k
            let mut p = k;
            let mut best = a[k * n + k].norm_sqr();
            for i in (k + 1)..n {
                let mag = a[i * n + k].norm_sqr();
                if mag > best {
                    best = mag;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularMatrix);
            }
            pivots.push(p as u32);
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
            }
            let pivot = a[k * n + k];
            let inv = Complex64::new(1.0, 0.0) / pivot;
            let (head, tail) = a.split_at_mut((k + 1) * n);
            let row_k = &head[k * n + k + 1..];
            for (chunk_i, row_i) in tail.chunks_exact_mut(n).enumerate() {
                let i = k + 1 + chunk_i;
                let _ = i;
                let m = row_i[k] * inv;
                row_i[k] = m;
                if m.norm_sqr() != 0.0 {
                    for (aij, akj) in row_i[k + 1..].iter_mut().zip(row_k) {
                        *aij -= m * *akj;
                    }
                }
            }
        }
        Ok(LuFactorization { n, data: a, pivots })
    }
}

/// Packed LU factors of a row-pivoted matrix: PA = LU.
#[derive(Clone, Debug)]
pub struct LuFactorization {
    n: usize,
    data: Vec<Complex64>,
    pivots: Vec<u32>,
}

impl LuFactorization {
    pub fn size(&self) -> usize {
        self.n
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x = b.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            x.swap(k, p as usize);
        }
        // forward substitution, unit lower triangle
        for i in 1..n {
            let row = &self.data[i * n..i * n + i];
            let mut s = x[i];
            for (a, xj) in row.iter().zip(&x) {
                s -= a * xj;
            }
            x[i] = s;
        }
        // back substitution
        for i in (0..n).rev() {
            let row = &self.data[i * n + i..(i + 1) * n];
            let mut s = x[i];
            for (a, xj) in row[1..].iter().zip(&x[i + 1..]) {
                s -= a * xj;
            }
            x[i] = s / row[0];
        }
        x
    }

    /// Solves A^H x = b (conjugate transpose), used by the condition
    /// estimator.
    pub fn solve_conj_transpose(&self, b: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x = b.to_vec();
        // A^H = U^H L^H P, so first U^H y = b (U^H is lower triangular)
        for i in 0..n {
            let mut s = x[i];
            for (j, xj) in x[..i].iter().enumerate() {
                s -= self.data[j * n + i].conj() * xj;
            }
            x[i] = s / self.data[i * n + i].conj();
        }
        // then L^H z = y (L^H is unit upper triangular)
        for i in (0..n).rev() {
            let mut s = x[i];
            for (dj, xj) in x[i + 1..].iter().enumerate() {
                let j = i + 1 + dj;
                s -= self.data[j * n + i].conj() * xj;
            }
            x[i] = s;
        }
        // finally x = P^T z: undo the row swaps in reverse order
        for (k, &p) in self.pivots.iter().enumerate().rev() {
            x.swap(k, p as usize);
        }
        x
    }

    /// One-norm condition estimate ||A||_1 * est(||A^-1||_1) with the inverse
    /// norm estimated by Hager-style power iteration on A^-1 and A^-H.
    pub fn condition_estimate(&self, matrix_norm_one: f64) -> f64 {
        let n = self.n;
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut estimate = 0.0f64;
        for _ in 0..5 {
            let y = self.solve(&x);
            let norm: f64 = y.iter().map(|v| v.norm()).sum();
            if norm <= estimate {
                break;
            }
            estimate = norm;
            let xi: Vec<Complex64> = y
                .iter()
                .map(|v| {
                    let m = v.norm();
                    if m == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        v / m
                    }
                })
                .collect();
            let z = self.solve_conj_transpose(&xi);
            let (mut jmax, mut zmax) = (0usize, 0.0f64);
            for (j, v) in z.iter().enumerate() {
                if v.norm() > zmax {
                    zmax = v.norm();
                    jmax = j;
                }
            }
            let inner: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= inner {
                break;
            }
            x = vec![Complex64::new(0.0, 0.0); n];
            x[jmax] = Complex64::new(1.0, 0.0);
        }
        matrix_norm_one * estimate
    }
}
