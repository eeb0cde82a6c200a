//! Hermitian eigensolver: Householder tridiagonalization followed by
//! implicit-shift QL on the real tridiagonal form, with the unitary
//! accumulated so eigenvectors come out orthonormal to machine precision.
//!
//! Deterministic: identical input bits give identical output bits. The
//! reduction is O(D^3) and targets dense matrices up to D ~ 4096.

use crate::C64;

use super::matrix::ComplexMatrix;
use super::{LinalgError, HERMITICITY_TOL, UNITARITY_TOL};

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
///
/// Column `i` of `eigenvectors` is the eigenvector of `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Frobenius norm of H·V - V·diag(E), the reconstruction residual.
    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        let d = self.dim();
        let hv = h.mul(&self.eigenvectors).expect("dims agree");
        let mut acc = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let expect = self.eigenvectors.get(r, c) * self.eigenvalues[c];
                acc += (hv.get(r, c) - expect).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Rebuild V·diag(E)·V†, which must reproduce the input matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.dim();
        let scaled = ComplexMatrix::from_fn(d, |r, c| self.eigenvectors.get(r, c) * self.eigenvalues[c]);
        scaled.mul(&self.eigenvectors.adjoint()).expect("dims agree")
    }
}

const MAX_QL_ITER: usize = 60;

/// Diagonalize a Hermitian matrix.
///
/// `tol` bounds the relative Frobenius reconstruction residual
/// ‖H·V - V·diag(E)‖_F ≤ tol·‖H‖_F; the decomposition is re-verified
/// against it before being returned.
pub fn hermitian_eigendecompose(
    h: &ComplexMatrix,
    tol: f64,
) -> Result<SpectralDecomposition, LinalgError> {
    if !(tol > 0.0) {
        return Err(LinalgError::InvalidTolerance(tol));
    }
    h.check_hermitian(HERMITICITY_TOL)?;

    let d = h.dim();
    if d == 1 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![h.get(0, 0).re],
            eigenvectors: ComplexMatrix::identity(1),
        });
    }

    let mut a = h.clone();
    let mut q = ComplexMatrix::identity(d);
    let mut diag = vec![0.0f64; d];
    let mut offdiag = vec![0.0f64; d]; // offdiag[i] couples i and i+1; last unused

    tridiagonalize(&mut a, &mut q, &mut diag, &mut offdiag);
    ql_implicit_shift(&mut diag, &mut offdiag, &mut q)?;
    sort_ascending(&mut diag, &mut q);

    let decomp = SpectralDecomposition {
        eigenvalues: diag,
        eigenvectors: q,
    };

    let h_norm = h.frobenius_norm();
    let res = decomp.residual(h);
    if res > tol * h_norm {
        return Err(LinalgError::Convergence { worst_offdiag: res });
    }
    debug_assert!(decomp.eigenvectors.unitarity_error() <= UNITARITY_TOL);
    Ok(decomp)
}

/// Reduce `a` to real symmetric tridiagonal form by complex Householder
/// reflections, accumulating the unitary into `q` and absorbing the
/// subdiagonal phases so `offdiag` comes out real nonnegative.
fn tridiagonalize(a: &mut ComplexMatrix, q: &mut ComplexMatrix, diag: &mut [f64], offdiag: &mut [f64]) {
    let d = a.dim();
    let mut v = vec![C64::new(0.0, 0.0); d];
    let mut w = vec![C64::new(0.0, 0.0); d];

    for k in 0..d.saturating_sub(2) {
        let m = d - k - 1; // length of the column below the diagonal
        let mut xnorm_sq = 0.0f64;
        for r in 0..m {
            v[r] = a.get(k + 1 + r, k);
            xnorm_sq += v[r].norm_sqr();
        }
        let xnorm = xnorm_sq.sqrt();
        if xnorm == 0.0 {
            a.set(k + 1, k, C64::new(0.0, 0.0));
            a.set(k, k + 1, C64::new(0.0, 0.0));
            continue;
        }

        // alpha = -e^{i arg(x0)} * |x|; reflection maps x onto alpha*e_1.
        let x0 = v[0];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let sigma: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if sigma == 0.0 {
            continue;
        }
        let beta = 2.0 / sigma;

        // Rank-2 update of the trailing Hermitian block:
        //   A' = A - v q† - q v†  with  w = beta·A·v, q = w - (beta/2)(v†w)·v
        for r in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..m {
                acc += a.get(k + 1 + r, k + 1 + c) * v[c];
            }
            w[r] = acc * beta;
        }
        let vw: C64 = v[..m]
            .iter()
            .zip(&w[..m])
            .map(|(vi, wi)| vi.conj() * wi)
            .sum();
        let corr = vw * (beta / 2.0);
        for r in 0..m {
            w[r] -= corr * v[r];
        }
        for r in 0..m {
            for c in 0..m {
                let upd = v[r] * w[c].conj() + w[r] * v[c].conj();
                let cur = a.get(k + 1 + r, k + 1 + c);
                a.set(k + 1 + r, k + 1 + c, cur - upd);
            }
        }

        // Eliminated column/row.
        a.set(k + 1, k, alpha);
        a.set(k, k + 1, alpha.conj());
        for r in 2..=m {
            if k + r < d {
                a.set(k + r, k, C64::new(0.0, 0.0));
                a.set(k, k + r, C64::new(0.0, 0.0));
            }
        }

        // Q <- Q (I - beta v v†), acting on columns k+1..d.
        for row in 0..d {
            let mut t = C64::new(0.0, 0.0);
            for c in 0..m {
                t += q.get(row, k + 1 + c) * v[c];
            }
            t *= beta;
            for c in 0..m {
                let cur = q.get(row, k + 1 + c);
                q.set(row, k + 1 + c, cur - t * v[c].conj());
            }
        }
    }

    // Absorb subdiagonal phases: T_real = S† T S with cumulative unit phases.
    let mut s = C64::new(1.0, 0.0);
    for i in 0..d {
        diag[i] = a.get(i, i).re;
    }
    offdiag[d - 1] = 0.0;
    for i in 1..d {
        let e = a.get(i, i - 1);
        let mag = e.norm();
        let ph = if mag > 0.0 { e / mag } else { C64::new(1.0, 0.0) };
        s *= ph;
        offdiag[i - 1] = mag;
        if s != C64::new(1.0, 0.0) {
            for row in 0..d {
                let cur = q.get(row, i);
                q.set(row, i, cur * s);
            }
        }
    }
}

/// Implicit-shift QL on the real symmetric tridiagonal (diag, offdiag),
/// applying the plane rotations to the complex columns of `q`.
fn ql_implicit_shift(
    diag: &mut [f64],
    offdiag: &mut [f64],
    q: &mut ComplexMatrix,
) -> Result<(), LinalgError> {
    let d = diag.len();
    let n_rows = q.dim();

    for l in 0..d {
        let mut iter = 0usize;
        loop {
            // Find the first negligible off-diagonal at or after l.
            let mut m = l;
            while m + 1 < d {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if offdiag[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                let worst = offdiag[l..m].iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
                return Err(LinalgError::Convergence {
                    worst_offdiag: worst,
                });
            }

            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * offdiag[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + offdiag[l] / (g + copysign(r, g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;

            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * offdiag[i];
                let b = c * offdiag[i];
                r = f.hypot(g);
                offdiag[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    offdiag[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;

                // Rotate eigenvector columns i and i+1 (real c, s on complex Q).
                for row in 0..n_rows {
                    let qa = q.get(row, i);
                    let qb = q.get(row, i + 1);
                    q.set(row, i + 1, qa * s + qb * c);
                    q.set(row, i, qa * c - qb * s);
                }
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            offdiag[l] = g;
            offdiag[m] = 0.0;
        }
    }
    Ok(())
}

fn copysign(mag: f64, sign: f64) -> f64 {
    if sign >= 0.0 {
        mag.abs()
    } else {
        -mag.abs()
    }
}

/// Sort eigenvalues ascending, permuting eigenvector columns to match.
/// Ties keep their pre-sort order so the output is deterministic.
fn sort_ascending(diag: &mut [f64], q: &mut ComplexMatrix) {
    let d = diag.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| diag[a].partial_cmp(&diag[b]).unwrap().then(a.cmp(&b)));

    let sorted_vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    diag.copy_from_slice(&sorted_vals);

    let old = q.clone();
    for (new_c, &old_c) in order.iter().enumerate() {
        for row in 0..d {
            q.set(row, new_c, old.get(row, old_c));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::EIGEN_TOL;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut h = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            h.set(i, i, C64::new(rng.gen::<f64>() - 0.5, 0.0));
            for j in (i + 1)..dim {
                let z = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                h.set(i, j, z);
                h.set(j, i, z.conj());
            }
        }
        h
    }

    #[test]
    fn diagonal_matrix_sorts_eigenvalues() {
        let mut h = ComplexMatrix::zeros(2);
        h.set(0, 0, C64::new(3.0, 0.0));
        h.set(1, 1, C64::new(-1.0, 0.0));
        let d = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        assert_eq!(d.eigenvalues, vec![-1.0, 3.0]);
        // Column-swapped identity.
        assert_eq!(d.eigenvectors.get(0, 1), C64::new(1.0, 0.0));
        assert_eq!(d.eigenvectors.get(1, 0), C64::new(1.0, 0.0));
        assert_eq!(d.eigenvectors.get(0, 0), C64::new(0.0, 0.0));
        assert_eq!(d.eigenvectors.get(1, 1), C64::new(0.0, 0.0));
    }

    #[test]
    fn pauli_x_spectrum() {
        let mut h = ComplexMatrix::zeros(2);
        h.set(0, 1, C64::new(1.0, 0.0));
        h.set(1, 0, C64::new(1.0, 0.0));
        let d = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let h = random_hermitian(16, 42);
        let d = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        // Oracle: explicit re-multiplication V·diag(E)·V† compared entrywise.
        let rebuilt = d.reconstruct();
        let err = rebuilt.sub(&h).frobenius_norm();
        assert!(
            err <= 1e-10 * h.frobenius_norm(),
            "reconstruction error {err:.3e}"
        );
        assert!(d.eigenvectors.unitarity_error() <= UNITARITY_TOL);
        for w in d.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn larger_random_hermitian_reconstructs() {
        let h = random_hermitian(96, 7);
        let d = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        assert!(d.residual(&h) <= EIGEN_TOL * h.frobenius_norm());
        assert!(d.eigenvectors.unitarity_error() <= UNITARITY_TOL);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut h = ComplexMatrix::zeros(3);
        h.set(0, 1, C64::new(1.0, 0.0));
        h.set(1, 0, C64::new(0.5, 0.0));
        assert!(matches!(
            hermitian_eigendecompose(&h, EIGEN_TOL),
            Err(LinalgError::NotHermitian { .. })
        ));
    }

    #[test]
    fn invalid_tolerance_is_rejected() {
        let h = ComplexMatrix::identity(2);
        assert!(matches!(
            hermitian_eigendecompose(&h, 0.0),
            Err(LinalgError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn deterministic_for_identical_input() {
        let h = random_hermitian(24, 9);
        let a = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        let b = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn degenerate_spectrum_is_handled() {
        // diag(1, 1, 2) with a 2x2 coupling in the degenerate block.
        let mut h = ComplexMatrix::zeros(3);
        h.set(0, 0, C64::new(1.0, 0.0));
        h.set(1, 1, C64::new(1.0, 0.0));
        h.set(2, 2, C64::new(2.0, 0.0));
        h.set(0, 1, C64::new(0.0, 0.25));
        h.set(1, 0, C64::new(0.0, -0.25));
        let d = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        assert!(d.residual(&h) <= EIGEN_TOL * h.frobenius_norm());
    }
}
