//! Haar-distributed unitaries via QR of a complex Ginibre matrix.

use crate::C64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;

/// Draw a Haar-random unitary of dimension `dim`.
///
/// QR-of-Ginibre with the phase-fixing convention: the diagonal of R is
/// rescaled to be real positive, which makes the factorization unique and
/// the resulting Q exactly Haar-distributed.
pub fn sample_haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(dim >= 1);
    let mut g = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g.set(r, c, C64::new(re, im));
        }
    }
    let (q, r_diag) = qr_householder(&g);
    // Q <- Q·diag(R_ii/|R_ii|) fixes the phase gauge.
    let mut out = q;
    for c in 0..dim {
        let d = r_diag[c];
        let mag = d.norm();
        let ph = if mag > 0.0 { d / mag } else { C64::new(1.0, 0.0) };
        for rix in 0..dim {
            let cur = out.get(rix, c);
            out.set(rix, c, cur * ph);
        }
    }
    out
}

/// Householder QR returning the full Q and the diagonal of R.
fn qr_householder(a: &ComplexMatrix) -> (ComplexMatrix, Vec<C64>) {
    let d = a.dim();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(d);
    let mut v = vec![C64::new(0.0, 0.0); d];

    for k in 0..d {
        let m = d - k;
        let mut xnorm_sq = 0.0f64;
        for i in 0..m {
            v[i] = r.get(k + i, k);
            xnorm_sq += v[i].norm_sqr();
        }
        let xnorm = xnorm_sq.sqrt();
        if xnorm == 0.0 {
            continue;
        }
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

        // R <- (I - beta v v†) R on rows k..d, columns k..d.
        for c in k..d {
            let mut t = C64::new(0.0, 0.0);
            for i in 0..m {
                t += v[i].conj() * r.get(k + i, c);
            }
            t *= beta;
            for i in 0..m {
                let cur = r.get(k + i, c);
                r.set(k + i, c, cur - t * v[i]);
            }
        }
        // Q <- Q (I - beta v v†) on columns k..d.
        for row in 0..d {
            let mut t = C64::new(0.0, 0.0);
            for i in 0..m {
                t += q.get(row, k + i) * v[i];
            }
            t *= beta;
            for i in 0..m {
                let cur = q.get(row, k + i);
                q.set(row, k + i, cur - t * v[i].conj());
            }
        }
    }

    let r_diag = (0..d).map(|i| r.get(i, i)).collect();
    (q, r_diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::UNITARITY_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn one_dimensional_draw_is_a_pure_phase() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..16 {
            let u = sample_haar_unitary(1, &mut rng);
            assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn output_is_unitary_at_dim_64() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let u = sample_haar_unitary(64, &mut rng);
        assert!(u.unitarity_error() <= UNITARITY_TOL);
    }

    #[test]
    fn mean_abs_trace_squared_matches_haar_identity() {
        // E |tr U|^2 = 1 for Haar; Monte Carlo over 2000 draws at D = 32.
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let n = 2000;
        let mut acc = 0.0;
        for _ in 0..n {
            let u = sample_haar_unitary(32, &mut rng);
            acc += u.trace().norm_sqr();
        }
        let mean = acc / n as f64;
        assert!(
            (mean - 1.0).abs() < 0.1,
            "E|tr U|^2 = {mean:.4}, expected 1.0 +- 0.1"
        );
    }
}
