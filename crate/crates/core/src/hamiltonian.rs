//! Samplers for the two chaotic-Hamiltonian families — GUE matrices and
//! random all-to-all spin models — plus spectral diagnostics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, SpectralDecomposition};
use crate::pauli::{PauliString, SinglePauli};
use crate::C64;

/// Which chaotic family a Hamiltonian is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Gue,
    RandomSpin,
}

/// A reproducible Hamiltonian draw: the seed fully determines the matrix.
#[derive(Debug, Clone, Copy)]
pub struct HamiltonianModel {
    pub kind: ModelKind,
    pub n_qubits: u32,
    pub seed: u64,
}

impl HamiltonianModel {
    pub fn sample(&self) -> ComplexMatrix {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        match self.kind {
            ModelKind::Gue => sample_gue(self.n_qubits, &mut rng),
            ModelKind::RandomSpin => build_random_spin(self.n_qubits, &mut rng),
        }
    }
}

/// Draw a GUE Hamiltonian on `n_qubits` qubits (D = 2^N).
///
/// Off-diagonal entries are complex Gaussian with E|H_ij|^2 = 1/(2D)
/// (real and imaginary parts each of variance 1/(4D)); diagonal entries
/// are real Gaussian with variance 1/(2D). With this normalization the
/// spectrum follows the semicircle law of radius sqrt(2). Hermitian by
/// construction, bit-exactly.
pub fn sample_gue(n_qubits: u32, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(n_qubits >= 1);
    let d = 1usize << n_qubits;
    let sigma_diag = (1.0 / (2.0 * d as f64)).sqrt();
    let sigma_off = (1.0 / (4.0 * d as f64)).sqrt();
    let mut h = ComplexMatrix::zeros(d);
    for i in 0..d {
        let g: f64 = rng.sample(StandardNormal);
        h.set(i, i, C64::new(g * sigma_diag, 0.0));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = C64::new(re * sigma_off, im * sigma_off);
            h.set(i, j, z);
            h.set(j, i, z.conj());
        }
    }
    h
}

const TWO_BODY: [SinglePauli; 3] = [SinglePauli::X, SinglePauli::Y, SinglePauli::Z];

/// Assemble the random all-to-all spin Hamiltonian
///
/// ```text
///   H = Σ_{i<j} Σ_{P,P' ∈ {X,Y,Z}} J_ij^{PP'} P_i P'_j + Σ_i Σ_P h_i^P P_i
/// ```
///
/// with couplings J uniform on [-1/sqrt(N), 1/sqrt(N)] and fields h uniform
/// on [-1, 1], accumulated term by term from Pauli strings. Every term is
/// traceless and Hermitian, so the assembled matrix is too.
pub fn build_random_spin(n_qubits: u32, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(n_qubits >= 2);
    let d = 1usize << n_qubits;
    let j_scale = 1.0 / (n_qubits as f64).sqrt();
    let mut h = ComplexMatrix::zeros(d);

    for i in 1..=n_qubits {
        for j in (i + 1)..=n_qubits {
            for p in TWO_BODY {
                for q in TWO_BODY {
                    let coupling = (2.0 * rng.gen::<f64>() - 1.0) * j_scale;
                    let string = two_site_string(n_qubits, i, p, j, q);
                    accumulate_pauli(&mut h, &string, coupling);
                }
            }
        }
    }
    for i in 1..=n_qubits {
        for p in TWO_BODY {
            let field = 2.0 * rng.gen::<f64>() - 1.0;
            let string = one_site_string(n_qubits, i, p);
            accumulate_pauli(&mut h, &string, field);
        }
    }
    h
}

fn site_masks(p: SinglePauli, bit: u32) -> (u64, u64) {
    match p {
        SinglePauli::I => (0, 0),
        SinglePauli::X => (1 << bit, 0),
        SinglePauli::Y => (1 << bit, 1 << bit),
        SinglePauli::Z => (0, 1 << bit),
    }
}

fn one_site_string(n: u32, site: u32, p: SinglePauli) -> PauliString {
    let (x, z) = site_masks(p, site - 1);
    PauliString::new(n, x, z).expect("valid qubit count")
}

fn two_site_string(n: u32, site_a: u32, pa: SinglePauli, site_b: u32, pb: SinglePauli) -> PauliString {
    let (xa, za) = site_masks(pa, site_a - 1);
    let (xb, zb) = site_masks(pb, site_b - 1);
    PauliString::new(n, xa | xb, za | zb).expect("valid qubit count")
}

/// H += coeff * dense(P), using the string's sparse action. The two mirror
/// entries of each column receive exactly conjugate increments, so the
/// accumulated matrix stays Hermitian bit-exactly.
fn accumulate_pauli(h: &mut ComplexMatrix, p: &PauliString, coeff: f64) {
    let d = h.dim();
    for b in 0..d as u64 {
        let (b_out, phase) = p.apply_to_basis_state(b);
        let cur = h.get(b_out as usize, b as usize);
        h.set(b_out as usize, b as usize, cur + phase * coeff);
    }
}

/// Spectral radius and mean level spacing of a decomposition.
#[derive(Debug, Clone, Copy)]
pub struct WidthStats {
    pub radius: f64,
    pub mean_level_spacing: f64,
}

pub fn spectral_width_stats(spec: &SpectralDecomposition) -> WidthStats {
    let ev = &spec.eigenvalues;
    let d = ev.len();
    assert!(d >= 2);
    let min = ev[0];
    let max = ev[d - 1];
    WidthStats {
        radius: min.abs().max(max.abs()),
        mean_level_spacing: (max - min) / (d - 1) as f64,
    }
}

/// Median of the consecutive level gaps, a bulk-typical spacing estimate.
pub fn median_level_spacing(spec: &SpectralDecomposition) -> f64 {
    let ev = &spec.eigenvalues;
    assert!(ev.len() >= 2);
    let mut gaps: Vec<f64> = ev.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = gaps.len();
    if n % 2 == 1 {
        gaps[n / 2]
    } else {
        0.5 * (gaps[n / 2 - 1] + gaps[n / 2])
    }
}

/// CDF of the semicircle law with radius sqrt(2).
pub fn semicircle_cdf(x: f64) -> f64 {
    let r = std::f64::consts::SQRT_2;
    if x <= -r {
        0.0
    } else if x >= r {
        1.0
    } else {
        0.5 + x * (r * r - x * x).sqrt() / (std::f64::consts::PI * r * r)
            + (x / r).asin() / std::f64::consts::PI
    }
}

/// Kolmogorov-Smirnov distance between the eigenvalue distribution and the
/// radius-sqrt(2) semicircle law.
pub fn semicircle_ks_distance(spec: &SpectralDecomposition) -> f64 {
    crate::stats::ks_distance(&spec.eigenvalues, semicircle_cdf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigendecompose, kron, EIGEN_TOL, HERMITICITY_TOL};

    #[test]
    fn gue_is_hermitian_bit_exactly() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let h = sample_gue(5, &mut rng);
        assert_eq!(h.hermiticity_violation(), 0.0);
    }

    #[test]
    fn gue_offdiagonal_second_moment() {
        // E |H_12|^2 = 1/(2D) = 1/8 at D = 4; Monte Carlo over 1e5 draws.
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let n = 100_000usize;
        let mut vals = Vec::with_capacity(n);
        for _ in 0..n {
            let h = sample_gue(2, &mut rng);
            vals.push(h.get(0, 1).norm_sqr());
        }
        let (mean, var) = crate::stats::mean_variance(&vals);
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - 0.125).abs() <= 3.0 * se,
            "E|H12|^2 = {mean:.5}, expected 0.125 +- {:.5}",
            3.0 * se
        );
    }

    #[test]
    fn gue_spectral_radius_concentrates_near_sqrt2() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let h = sample_gue(7, &mut rng);
        let spec = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        let stats = spectral_width_stats(&spec);
        assert!(
            stats.radius > 1.2 && stats.radius < 1.6,
            "radius = {}",
            stats.radius
        );
    }

    #[test]
    fn gue_draws_are_seed_deterministic() {
        let model = HamiltonianModel {
            kind: ModelKind::Gue,
            n_qubits: 4,
            seed: 99,
        };
        assert_eq!(model.sample(), model.sample());
    }

    #[test]
    fn spin_model_is_hermitian_and_traceless() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let h = build_random_spin(4, &mut rng);
        assert!(h.hermiticity_violation() <= HERMITICITY_TOL * h.maxnorm());
        let d = h.dim() as f64;
        assert!(h.trace().norm() <= 1e-10 * d * h.maxnorm());
    }

    #[test]
    fn pure_zz_coupling_spectrum() {
        // H = c Z_1 Z_2 has eigenvalues {±c, ±c}.
        let c = 0.7;
        let mut h = ComplexMatrix::zeros(4);
        let zz = two_site_string(2, 1, SinglePauli::Z, 2, SinglePauli::Z);
        accumulate_pauli(&mut h, &zz, c);
        let spec = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        let expect = [-c, -c, c, c];
        for (got, want) in spec.eigenvalues.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn spin_model_matches_kronecker_oracle() {
        // Re-derive the same draw with an independent dense Kronecker
        // assembly, consuming the coefficient stream in the same order.
        let n = 3u32;
        let d = 1usize << n;
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let h = build_random_spin(n, &mut rng);

        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let j_scale = 1.0 / (n as f64).sqrt();
        let mut oracle = ComplexMatrix::zeros(d);
        let dense_site = |p: SinglePauli, site: u32| -> ComplexMatrix {
            let mut m = ComplexMatrix::identity(1);
            for s in 1..=n {
                let factor = if s == site {
                    one_site_string(1, 1, p).to_dense()
                } else {
                    ComplexMatrix::identity(2)
                };
                m = kron(&factor, &m);
            }
            m
        };
        for i in 1..=n {
            for j in (i + 1)..=n {
                for p in TWO_BODY {
                    for q in TWO_BODY {
                        let coupling = (2.0 * rng.gen::<f64>() - 1.0) * j_scale;
                        let term = dense_site(p, i).mul(&dense_site(q, j)).unwrap();
                        oracle = oracle.add(&term.scale(C64::new(coupling, 0.0)));
                    }
                }
            }
        }
        for i in 1..=n {
            for p in TWO_BODY {
                let field = 2.0 * rng.gen::<f64>() - 1.0;
                oracle = oracle.add(&dense_site(p, i).scale(C64::new(field, 0.0)));
            }
        }
        assert!(h.sub(&oracle).maxnorm() < 1e-12);
    }

    #[test]
    fn spin_model_scales_linearly_with_couplings() {
        // Scaling all couplings by λ scales every eigenvalue by λ. Checked
        // by diagonalizing H and 2H at N = 3.
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let h = build_random_spin(3, &mut rng);
        let h2 = h.scale(C64::new(2.0, 0.0));
        let s1 = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        let s2 = hermitian_eigendecompose(&h2, EIGEN_TOL).unwrap();
        for (a, b) in s1.eigenvalues.iter().zip(&s2.eigenvalues) {
            assert!((2.0 * a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn spin_spectrum_width_grows_with_system_size() {
        // Extensive spectrum: the radius grows roughly linearly over N = 4..8.
        let mut radii = Vec::new();
        for n in 4..=8u32 {
            let model = HamiltonianModel {
                kind: ModelKind::RandomSpin,
                n_qubits: n,
                seed: 100 + n as u64,
            };
            let spec = hermitian_eigendecompose(&model.sample(), EIGEN_TOL).unwrap();
            radii.push(spectral_width_stats(&spec).radius);
        }
        // Least-squares slope of radius vs N is clearly positive.
        let xs: Vec<f64> = (4..=8).map(|n| n as f64).collect();
        let ws = vec![1.0; xs.len()];
        let (slope, _) = crate::stats::weighted_line_fit(&xs, &radii, &ws).unwrap();
        assert!(slope > 0.3, "radius growth slope = {slope}");
    }

    #[test]
    fn gue_mean_level_spacing_follows_the_semicircle_width() {
        // Semicircle support [-sqrt(2), sqrt(2)] gives spacing 2*sqrt(2)/(D-1).
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let h = sample_gue(7, &mut rng);
        let spec = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        let spacing = spectral_width_stats(&spec).mean_level_spacing;
        let expect = 2.0 * std::f64::consts::SQRT_2 / 127.0;
        assert!(
            (spacing - expect).abs() < 0.1 * expect,
            "spacing {spacing} vs {expect}"
        );
    }

    #[test]
    fn width_stats_on_a_known_spectrum() {
        let spec = SpectralDecomposition {
            eigenvalues: vec![-1.0, 0.0, 1.0],
            eigenvectors: ComplexMatrix::identity(3),
        };
        let stats = spectral_width_stats(&spec);
        assert_eq!(stats.radius, 1.0);
        assert_eq!(stats.mean_level_spacing, 1.0);
    }

    #[test]
    fn semicircle_quantile_construction_has_small_distance() {
        // Eigenvalues at the exact semicircle quantiles (i - 1/2)/D.
        let d = 64usize;
        let eigenvalues: Vec<f64> = (0..d)
            .map(|i| {
                let target = (i as f64 + 0.5) / d as f64;
                // Bisection for semicircle_cdf(x) = target.
                let mut lo = -std::f64::consts::SQRT_2;
                let mut hi = std::f64::consts::SQRT_2;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if semicircle_cdf(mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect();
        let spec = SpectralDecomposition {
            eigenvalues,
            eigenvectors: ComplexMatrix::identity(d),
        };
        let dist = semicircle_ks_distance(&spec);
        assert!(
            dist <= 0.5 / d as f64 + 1e-9,
            "quantile construction distance = {dist}"
        );
    }

    #[test]
    fn all_zero_spectrum_is_half_away_from_semicircle() {
        let spec = SpectralDecomposition {
            eigenvalues: vec![0.0; 16],
            eigenvectors: ComplexMatrix::identity(16),
        };
        assert!((semicircle_ks_distance(&spec) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gue_single_draw_is_close_to_semicircle() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let h = sample_gue(7, &mut rng);
        let spec = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        assert!(semicircle_ks_distance(&spec) <= 0.1);
    }

    #[test]
    fn median_spacing_of_uniform_grid() {
        let spec = SpectralDecomposition {
            eigenvalues: (0..5).map(|i| i as f64 * 0.25).collect(),
            eigenvectors: ComplexMatrix::identity(5),
        };
        assert!((median_level_spacing(&spec) - 0.25).abs() < 1e-15);
    }
}
