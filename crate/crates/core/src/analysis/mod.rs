//! Experiment drivers: Pauli-spectrum statistics, finite-time sweeps, and
//! finite-size sweeps over (k, N) grids.

mod sweeps;

pub use sweeps::{
    sweep_system_size, sweep_time, SizeSweep, SizeSweepCell, SizeSweepConfig, SlopeFit,
    TimeSweep, TimeSweepConfig, TimeSweepPoint,
};

use rand::Rng;
use thiserror::Error;

use crate::hamiltonian::ModelKind;
use crate::linalg::{hermitian_eigendecompose, SpectralDecomposition, EIGEN_TOL};
use crate::pauli::{PauliEnsemble, PauliEnsembleKind};
use crate::protocol::{EvolutionPair, ProtocolError};
use crate::stats;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("empty or non-increasing grid")]
    BadGrid,
    #[error("ensemble has no non-identity members to sample")]
    DegenerateEnsemble,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("expectation value carried imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// Diagonal Pauli matrix elements `c = <ε_a|P|ε_a>` over random non-identity
/// strings and random eigenstates.
#[derive(Debug, Clone)]
pub struct PauliSpectrumSample {
    pub values: Vec<f64>,
    pub n_qubits: u32,
    pub ensemble: PauliEnsemble,
}

/// Draw `n` Pauli-spectrum values from the eigenstates of one Hamiltonian.
///
/// Identity draws are rejected and resampled; their expectation is the
/// trivial constant 1 and sits outside the fluctuation statistics.
pub fn pauli_spectrum_samples(
    spec: &SpectralDecomposition,
    ensemble: &PauliEnsemble,
    n: usize,
    rng: &mut impl Rng,
) -> Result<PauliSpectrumSample, AnalysisError> {
    if n < 1 {
        return Err(AnalysisError::TooFewSamples { needed: 1, got: n });
    }
    if ensemble.support_size() <= 1 {
        return Err(AnalysisError::DegenerateEnsemble);
    }
    let d = spec.dim();
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let pauli = loop {
            let p = ensemble.sample(rng);
            if !p.is_identity() {
                break p;
            }
        };
        let a = rng.gen_range(0..d);
        let state = spec.eigenvectors.column(a);
        let c = pauli.expectation(&state);
        if c.im.abs() > 1e-10 {
            return Err(AnalysisError::ImaginaryResidue(c.im.abs()));
        }
        values.push(c.re);
    }
    Ok(PauliSpectrumSample {
        values,
        n_qubits: ensemble.n_qubits,
        ensemble: *ensemble,
    })
}

/// Moments of a Pauli-spectrum sample and its KS distance to the Gaussian
/// with the chaotic-eigenstate variance 1/(D+1).
#[derive(Debug, Clone, Copy)]
pub struct GaussianityReport {
    pub mean: f64,
    pub variance: f64,
    pub excess_kurtosis: f64,
    pub ks_to_gaussian: f64,
    /// The reference variance 1/(D+1) the KS distance is taken against.
    pub claimed_variance: f64,
}

pub fn gaussianity_report(sample: &PauliSpectrumSample) -> Result<GaussianityReport, AnalysisError> {
    if sample.values.len() < 100 {
        return Err(AnalysisError::TooFewSamples {
            needed: 100,
            got: sample.values.len(),
        });
    }
    let d = 1u64 << sample.n_qubits;
    let claimed_variance = 1.0 / (d as f64 + 1.0);
    let sigma = claimed_variance.sqrt();
    let (mean, variance) = stats::mean_variance(&sample.values);
    let excess_kurtosis = stats::excess_kurtosis(&sample.values);
    let ks_to_gaussian = stats::ks_distance(&sample.values, |x| {
        stats::standard_normal_cdf(x / sigma)
    });
    Ok(GaussianityReport {
        mean,
        variance,
        excess_kurtosis,
        ks_to_gaussian,
        claimed_variance,
    })
}

/// Diagonalize one model draw for each Hamiltonian seed and bundle them.
pub fn prepare_evolution_pair(
    model: ModelKind,
    n_qubits: u32,
    seed_h1: u64,
    seed_h2: u64,
) -> Result<EvolutionPair, ProtocolError> {
    let h1 = crate::hamiltonian::HamiltonianModel {
        kind: model,
        n_qubits,
        seed: seed_h1,
    }
    .sample();
    let h2 = crate::hamiltonian::HamiltonianModel {
        kind: model,
        n_qubits,
        seed: seed_h2,
    }
    .sample();
    let spec1 = hermitian_eigendecompose(&h1, EIGEN_TOL)?;
    let spec2 = hermitian_eigendecompose(&h2, EIGEN_TOL)?;
    EvolutionPair::new(spec1, spec2)
}

/// Uniform ensembles usable for spectrum sampling at a given system size.
pub fn spectrum_ensemble(kind: PauliEnsembleKind, n_qubits: u32) -> PauliEnsemble {
    kind.at(n_qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::sample_gue;
    use crate::linalg::ComplexMatrix;
    use crate::C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn stabilizer_eigenstate_has_unit_expectation() {
        // H = Z on one qubit: |0> is an eigenstate with c(Z) = 1.
        let mut h = ComplexMatrix::zeros(2);
        h.set(0, 0, C64::new(1.0, 0.0));
        h.set(1, 1, C64::new(-1.0, 0.0));
        let spec = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        // Ascending order puts |1> (eigenvalue -1) first, |0> second.
        let state = spec.eigenvectors.column(1);
        let z: crate::pauli::PauliString = "Z".parse().unwrap();
        let c = z.expectation(&state);
        assert!((c.re - 1.0).abs() < 1e-12 && c.im.abs() < 1e-12);
    }

    #[test]
    fn gue_spectrum_statistics_match_the_chaotic_form() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let h = sample_gue(7, &mut rng);
        let spec = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        let ensemble = PauliEnsembleKind::UniformFull.at(7);
        let n = 10_000usize;
        let sample = pauli_spectrum_samples(&spec, &ensemble, n, &mut rng).unwrap();
        for &v in &sample.values {
            assert!((-1.0..=1.0).contains(&v));
        }
        let report = gaussianity_report(&sample).unwrap();
        let se_mean = (report.variance / n as f64).sqrt();
        assert!(
            report.mean.abs() <= 3.0 * se_mean,
            "mean {} vs 3se {}",
            report.mean,
            3.0 * se_mean
        );
        let claimed = 1.0 / 129.0;
        assert!(
            (report.variance - claimed).abs() <= 0.1 * claimed,
            "variance {} vs claimed {claimed}",
            report.variance
        );
        assert!(
            report.excess_kurtosis.abs() <= 0.15,
            "kurtosis {}",
            report.excess_kurtosis
        );
    }

    #[test]
    fn exhaustive_pauli_sum_reproduces_the_purity() {
        // Σ over all 64 strings of c^2 = 8 for each N = 3 eigenstate.
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let h = sample_gue(3, &mut rng);
        let spec = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        for a in 0..8usize {
            let state = spec.eigenvectors.column(a);
            let mut total = 0.0;
            for code in 0..64u64 {
                let p = crate::pauli::PauliString::new(3, code & 7, code >> 3).unwrap();
                let c = p.expectation(&state);
                total += c.re * c.re;
            }
            assert!((total - 8.0).abs() < 1e-9, "state {a}: sum {total}");
        }
    }

    #[test]
    fn synthetic_gaussian_passes_the_ks_check() {
        use rand_distr::StandardNormal;
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let d = 128u64;
        let sigma = (1.0 / (d as f64 + 1.0)).sqrt();
        let n = 10_000usize;
        let values: Vec<f64> = (0..n)
            .map(|_| {
                let g: f64 = rng.sample(StandardNormal);
                g * sigma
            })
            .collect();
        let sample = PauliSpectrumSample {
            values,
            n_qubits: 7,
            ensemble: PauliEnsembleKind::UniformFull.at(7),
        };
        let report = gaussianity_report(&sample).unwrap();
        assert!(report.ks_to_gaussian <= 1.36 / (n as f64).sqrt());
    }

    #[test]
    fn constant_input_is_flagged_as_non_gaussian() {
        let sample = PauliSpectrumSample {
            values: vec![0.0; 500],
            n_qubits: 7,
            ensemble: PauliEnsembleKind::UniformFull.at(7),
        };
        let report = gaussianity_report(&sample).unwrap();
        assert_eq!(report.variance, 0.0);
        assert!((report.ks_to_gaussian - 0.5).abs() < 1e-9);
    }

    #[test]
    fn identity_only_ensemble_cannot_be_sampled() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let h = sample_gue(2, &mut rng);
        let spec = hermitian_eigendecompose(&h, EIGEN_TOL).unwrap();
        let ensemble = PauliEnsembleKind::IdentityOnly.at(2);
        assert!(matches!(
            pauli_spectrum_samples(&spec, &ensemble, 10, &mut rng),
            Err(AnalysisError::DegenerateEnsemble)
        ));
    }
}
