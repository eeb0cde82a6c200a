use crate::C64;

use super::LinalgError;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.data[r * dim + c] = f(r, c);
            }
        }
        m
    }

    /// Build from a row-major slice; `data.len()` must equal `dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), dim * dim, "entry count must equal dim^2");
        assert!(dim >= 1);
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.dim + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [C64] {
        &mut self.data[r * self.dim..(r + 1) * self.dim]
    }

    /// Flat row-major view of all entries.
    #[inline]
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c];
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn maxnorm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix product; parallelized over output rows when the `parallel`
    /// feature is active. The inner summation order over `k` is fixed, so
    /// the result is bit-identical to [`ComplexMatrix::mul_seq`].
    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch(self.dim, other.dim));
        }
        let d = self.dim;
        let bt = other.transpose();
        let mut out = Self::zeros(d);

        #[cfg(feature = "parallel")]
        {
            out.data
                .par_chunks_mut(d)
                .enumerate()
                .for_each(|(r, out_row)| {
                    let a_row = &self.data[r * d..(r + 1) * d];
                    for (c, slot) in out_row.iter_mut().enumerate() {
                        *slot = dot_unconj(a_row, &bt.data[c * d..(c + 1) * d]);
                    }
                });
        }
        #[cfg(not(feature = "parallel"))]
        {
            for r in 0..d {
                let a_row = &self.data[r * d..(r + 1) * d];
                for c in 0..d {
                    out.data[r * d + c] = dot_unconj(a_row, &bt.data[c * d..(c + 1) * d]);
                }
            }
        }
        Ok(out)
    }

    /// Single-threaded matrix product, the reference path for benches.
    pub fn mul_seq(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch(self.dim, other.dim));
        }
        let d = self.dim;
        let bt = other.transpose();
        let mut out = Self::zeros(d);
        for r in 0..d {
            let a_row = &self.data[r * d..(r + 1) * d];
            for c in 0..d {
                out.data[r * d + c] = dot_unconj(a_row, &bt.data[c * d..(c + 1) * d]);
            }
        }
        Ok(out)
    }

    /// Hilbert-Schmidt inner product tr(other† · self) = Σ_ij self_ij · conj(other_ij).
    pub fn hs_inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = C64::new(0.0, 0.0);
        for (a, b) in self.data.iter().zip(&other.data) {
            acc += a * b.conj();
        }
        acc
    }

    /// max |M_ij - conj(M_ji)|, the absolute Hermiticity violation.
    pub fn hermiticity_violation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                let v = (self.data[r * d + c] - self.data[c * d + r].conj()).norm();
                worst = worst.max(v);
            }
        }
        worst
    }

    /// Checks max |H_ij - conj(H_ji)| <= tol · maxnorm(H).
    pub fn check_hermitian(&self, rel_tol: f64) -> Result<(), LinalgError> {
        let violation = self.hermiticity_violation();
        let threshold = rel_tol * self.maxnorm();
        if violation > threshold {
            Err(LinalgError::NotHermitian {
                violation,
                threshold,
            })
        } else {
            Ok(())
        }
    }

    /// maxnorm(M†M - I), the deviation from unitarity.
    pub fn unitarity_error(&self) -> f64 {
        let gram = self
            .adjoint()
            .mul(self)
            .expect("square matrices always conform");
        let d = self.dim;
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let expect = if r == c {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                worst = worst.max((gram.data[r * d + c] - expect).norm());
            }
        }
        worst
    }
}

#[inline]
fn dot_unconj(a: &[C64], b: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Kronecker product of two square matrices.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    let mut out = ComplexMatrix::zeros(d);
    for ra in 0..da {
        for ca in 0..da {
            let f = a.get(ra, ca);
            for rb in 0..db {
                for cb in 0..db {
                    out.set(ra * db + rb, ca * db + cb, f * b.get(rb, cb));
                }
            }
        }
    }
    out
}
