//! The temporal ensemble itself: element sampling, the eigenbasis overlap
//! kernel, Monte Carlo frame-potential estimation, and the closed-form
//! predictions the estimates are compared against.
//!
//! An ensemble element is `U = exp(-i H2 t2) · P · exp(-i H1 t1)` with
//! `t1, t2` uniform on `[0, T]` and `P` drawn from a Pauli ensemble. In the
//! eigenbases `H1 = W1 E W1†`, `H2 = W2 ε W2†` the overlap of two elements
//! reduces to
//!
//! ```text
//!   tr[V† U] = Σ_{a,i} exp(-i δt1 E_i - i δt2 ε_a) C_ai C'_ai^*
//! ```
//!
//! with the transition matrix `C = W2† P W1` cached per element, so a pair
//! costs O(D^2) after an O(D^3) setup per distinct Pauli.

mod estimator;
mod oracle;

pub use estimator::{
    estimate_frame_potentials, estimate_frame_potentials_from_unitaries, exact_frame_potential,
    pairwise_overlap_sq, pairwise_overlap_sq_seq,
};
pub use oracle::direct_overlap_oracle;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::linalg::{ComplexMatrix, LinalgError, SpectralDecomposition};
use crate::pauli::{PauliEnsemble, PauliEnsembleKind, PauliError, PauliString};
use crate::seed::split_seed;
use crate::C64;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix dimension {matrix_dim} does not match 2^{n_qubits}")]
    EnsembleMismatch { matrix_dim: usize, n_qubits: u32 },
    #[error("elements come from different Hamiltonian pairs")]
    ProvenanceMismatch,
    #[error("need at least two sampled elements, got {0}")]
    TooFewSamples(usize),
    #[error("k = {0} is outside the valid range for this operation")]
    InvalidK(u32),
    #[error("eta = {0} must lie in (0, 1]")]
    InvalidEta(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Parameters of one ensemble construction.
#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    /// Upper bound of the uniform evolution-time window `[0, T]`.
    pub t_max: f64,
    /// Number of sampled elements M.
    pub n_samples: usize,
    /// Frame-potential orders to estimate.
    pub k_list: Vec<u32>,
    /// The intermediate Pauli-operation ensemble.
    pub ensemble: PauliEnsemble,
    /// Master seed; element streams are derived from it by label.
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        if !(self.t_max > 0.0) {
            return Err(ProtocolError::InvalidConfig(format!(
                "T = {} must be positive",
                self.t_max
            )));
        }
        if self.n_samples < 2 {
            return Err(ProtocolError::TooFewSamples(self.n_samples));
        }
        if self.k_list.is_empty() {
            return Err(ProtocolError::InvalidConfig("empty k list".into()));
        }
        if let Some(&k) = self.k_list.iter().find(|&&k| k < 1) {
            return Err(ProtocolError::InvalidK(k));
        }
        Ok(())
    }
}

/// The two diagonalized Hamiltonians an ensemble is built over, plus a
/// provenance hash so elements from different pairs cannot be mixed.
#[derive(Debug, Clone)]
pub struct EvolutionPair {
    pub spec1: SpectralDecomposition,
    pub spec2: SpectralDecomposition,
    provenance: u64,
}

impl EvolutionPair {
    pub fn new(
        spec1: SpectralDecomposition,
        spec2: SpectralDecomposition,
    ) -> Result<Self, ProtocolError> {
        if spec1.dim() != spec2.dim() {
            return Err(ProtocolError::DimensionMismatch(spec1.dim(), spec2.dim()));
        }
        let mut h = Sha256::new();
        h.update((spec1.dim() as u64).to_le_bytes());
        for &e in &spec1.eigenvalues {
            h.update(e.to_le_bytes());
        }
        for &e in &spec2.eigenvalues {
            h.update(e.to_le_bytes());
        }
        let digest = h.finalize();
        let provenance = u64::from_le_bytes(digest[..8].try_into().expect("long enough"));
        Ok(Self {
            spec1,
            spec2,
            provenance,
        })
    }

    pub fn dim(&self) -> usize {
        self.spec1.dim()
    }

    pub fn provenance(&self) -> u64 {
        self.provenance
    }
}

/// One sampled ensemble member with its cached kernel data.
#[derive(Debug, Clone)]
pub struct SampledElement {
    pub t1: f64,
    pub t2: f64,
    pub pauli: PauliString,
    /// Transition matrix `C = W2† P W1`; shared between elements that drew
    /// the same Pauli string.
    pub transition: Arc<ComplexMatrix>,
    /// Per-element phase vector `exp(-i t1 E_i)`.
    pub phase1: Vec<C64>,
    /// Per-element phase vector `exp(-i t2 ε_a)`.
    pub phase2: Vec<C64>,
    /// `diag(phase2) · C · diag(phase1)`: the matrix whose pairwise
    /// Hilbert-Schmidt inner products are the overlap traces.
    pub dressed: ComplexMatrix,
    provenance: u64,
}

impl SampledElement {
    /// Build an element with explicit parameters, computing the transition
    /// matrix from scratch.
    pub fn build(
        t1: f64,
        t2: f64,
        pauli: PauliString,
        pair: &EvolutionPair,
    ) -> Result<Self, ProtocolError> {
        let transition = Arc::new(transition_matrix(&pauli, pair)?);
        Ok(Self::from_parts(t1, t2, pauli, transition, pair))
    }

    fn from_parts(
        t1: f64,
        t2: f64,
        pauli: PauliString,
        transition: Arc<ComplexMatrix>,
        pair: &EvolutionPair,
    ) -> Self {
        let phase1 = phase_vector(&pair.spec1.eigenvalues, t1);
        let phase2 = phase_vector(&pair.spec2.eigenvalues, t2);
        let d = pair.dim();
        let mut dressed = ComplexMatrix::zeros(d);
        for a in 0..d {
            let row_in = transition.row(a);
            let row_out = dressed.row_mut(a);
            let pa = phase2[a];
            for (i, (o, c)) in row_out.iter_mut().zip(row_in).enumerate() {
                *o = pa * c * phase1[i];
            }
        }
        Self {
            t1,
            t2,
            pauli,
            transition,
            phase1,
            phase2,
            dressed,
            provenance: pair.provenance,
        }
    }

    pub fn dim(&self) -> usize {
        self.dressed.dim()
    }

    pub fn provenance(&self) -> u64 {
        self.provenance
    }
}

fn phase_vector(eigenvalues: &[f64], t: f64) -> Vec<C64> {
    eigenvalues
        .iter()
        .map(|&e| {
            let arg = -e * t;
            C64::new(arg.cos(), arg.sin())
        })
        .collect()
}

/// `C = W2† · (P · W1)`: one O(D^2) Pauli application and one O(D^3) matmul.
fn transition_matrix(
    pauli: &PauliString,
    pair: &EvolutionPair,
) -> Result<ComplexMatrix, ProtocolError> {
    let d = pair.dim();
    if pauli.dim() != d {
        return Err(ProtocolError::EnsembleMismatch {
            matrix_dim: d,
            n_qubits: pauli.n_qubits(),
        });
    }
    let pw1 = pauli.apply_to_matrix_left(&pair.spec1.eigenvectors)?;
    Ok(pair.spec2.eigenvectors.adjoint().mul(&pw1)?)
}

/// A batch of sampled elements over one Hamiltonian pair.
#[derive(Debug, Clone)]
pub struct ElementSet {
    pub elements: Vec<SampledElement>,
    dim: usize,
    provenance: u64,
}

impl ElementSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> u64 {
        self.provenance
    }

    /// Wrap explicit unitaries (e.g. Haar draws) so the same estimator can
    /// run on them; times are zero and the Pauli slot is the identity.
    pub fn from_unitaries(mats: Vec<ComplexMatrix>) -> Result<Self, ProtocolError> {
        if mats.len() < 2 {
            return Err(ProtocolError::TooFewSamples(mats.len()));
        }
        let dim = mats[0].dim();
        let n_bits = dim.trailing_zeros().max(1);
        let pauli = PauliString::identity(n_bits);
        let ones = vec![C64::new(1.0, 0.0); dim];
        let elements = mats
            .into_iter()
            .map(|m| {
                if m.dim() != dim {
                    return Err(ProtocolError::DimensionMismatch(m.dim(), dim));
                }
                let arc = Arc::new(m);
                Ok(SampledElement {
                    t1: 0.0,
                    t2: 0.0,
                    pauli,
                    transition: arc.clone(),
                    phase1: ones.clone(),
                    phase2: ones.clone(),
                    dressed: (*arc).clone(),
                    provenance: 0,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            elements,
            dim,
            provenance: 0,
        })
    }
}

/// Draw one ensemble element: independent uniform times on `[0, T]` and a
/// Pauli from the configured ensemble.
pub fn sample_element(
    cfg: &ProtocolConfig,
    pair: &EvolutionPair,
    rng_times: &mut impl Rng,
    rng_paulis: &mut impl Rng,
) -> Result<SampledElement, ProtocolError> {
    check_compatible(cfg, pair)?;
    let t1 = rng_times.gen::<f64>() * cfg.t_max;
    let t2 = rng_times.gen::<f64>() * cfg.t_max;
    let pauli = cfg.ensemble.sample(rng_paulis);
    SampledElement::build(t1, t2, pauli, pair)
}

/// Sample the full element batch for a run. Transition matrices are
/// computed once per distinct Pauli string and shared.
pub fn sample_elements(
    cfg: &ProtocolConfig,
    pair: &EvolutionPair,
) -> Result<ElementSet, ProtocolError> {
    cfg.validate()?;
    check_compatible(cfg, pair)?;
    let mut rng_times = ChaCha12Rng::seed_from_u64(split_seed(cfg.seed, "times"));
    let mut rng_paulis = ChaCha12Rng::seed_from_u64(split_seed(cfg.seed, "paulis"));

    let mut draws = Vec::with_capacity(cfg.n_samples);
    for _ in 0..cfg.n_samples {
        let t1 = rng_times.gen::<f64>() * cfg.t_max;
        let t2 = rng_times.gen::<f64>() * cfg.t_max;
        let pauli = cfg.ensemble.sample(&mut rng_paulis);
        draws.push((t1, t2, pauli));
    }

    let mut cache: std::collections::HashMap<(u64, u64), Arc<ComplexMatrix>> =
        std::collections::HashMap::new();
    let mut elements = Vec::with_capacity(cfg.n_samples);
    for (t1, t2, pauli) in draws {
        let key = (pauli.x_mask(), pauli.z_mask());
        let transition = match cache.get(&key) {
            Some(arc) => arc.clone(),
            None => {
                let arc = Arc::new(transition_matrix(&pauli, pair)?);
                cache.insert(key, arc.clone());
                arc
            }
        };
        elements.push(SampledElement::from_parts(t1, t2, pauli, transition, pair));
    }
    Ok(ElementSet {
        elements,
        dim: pair.dim(),
        provenance: pair.provenance,
    })
}

fn check_compatible(cfg: &ProtocolConfig, pair: &EvolutionPair) -> Result<(), ProtocolError> {
    let d = pair.dim();
    if d != (1usize << cfg.ensemble.n_qubits) {
        return Err(ProtocolError::EnsembleMismatch {
            matrix_dim: d,
            n_qubits: cfg.ensemble.n_qubits,
        });
    }
    Ok(())
}

/// Overlap trace `tr[V† U]` of two elements via the cached kernel data.
///
/// O(D^2); the magnitude is bounded by D up to rounding.
pub fn pair_overlap(e: &SampledElement, f: &SampledElement) -> Result<C64, ProtocolError> {
    if e.dim() != f.dim() {
        return Err(ProtocolError::DimensionMismatch(e.dim(), f.dim()));
    }
    if e.provenance != f.provenance {
        return Err(ProtocolError::ProvenanceMismatch);
    }
    Ok(e.dressed.hs_inner(&f.dressed))
}

/// One Monte Carlo frame-potential estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePotentialEstimate {
    pub k: u32,
    pub mean: f64,
    /// Leave-one-element-out jackknife standard error; infinite when only
    /// two elements were sampled.
    pub stderr: f64,
    /// Number of ordered pairs M(M-1) entering the mean.
    pub n_pairs: u64,
    /// Whether the powers were computed in log space to dodge overflow.
    pub log_space: bool,
}

/// Closed-form prediction for the ensemble's k-th frame potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryPrediction {
    pub k: u32,
    pub p0: f64,
    pub f_2sp: f64,
    pub predicted: f64,
}

/// Frame potential of the two-step (no Pauli) protocol.
///
/// Exactly 6 for k = 2; for k >= 3 only the asymptotic growth e·(k!)^2 is
/// available and the returned value is that approximation.
pub fn f_2sp(k: u32) -> Result<f64, ProtocolError> {
    if k < 2 {
        return Err(ProtocolError::InvalidK(k));
    }
    if k == 2 {
        Ok(6.0)
    } else {
        let kf = factorial(k);
        Ok(std::f64::consts::E * kf * kf)
    }
}

pub fn factorial(k: u32) -> f64 {
    (1..=k as u64).map(|i| i as f64).product()
}

/// `F(k) = p0·F_2SP(k) + (1 - p0)·k!` for k >= 2; exactly 1 for k = 1.
pub fn predict_frame_potential(k: u32, p0: f64) -> TheoryPrediction {
    assert!((0.0..=1.0).contains(&p0), "p0 = {p0} out of [0, 1]");
    assert!(k >= 1);
    if k == 1 {
        // A uniform Pauli twirl is an exact 1-design regardless of p0;
        // setting f_2sp = 1 keeps the k >= 2 formula formally valid here.
        return TheoryPrediction {
            k,
            p0,
            f_2sp: 1.0,
            predicted: 1.0,
        };
    }
    let f2sp = f_2sp(k).expect("k >= 2 here");
    TheoryPrediction {
        k,
        p0,
        f_2sp: f2sp,
        predicted: p0 * f2sp + (1.0 - p0) * factorial(k),
    }
}

/// `|F - k!| / k!`, the design-quality deviation.
pub fn normalized_deviation(k: u32, f: f64) -> f64 {
    let kf = factorial(k);
    (f - kf).abs() / kf
}

/// Smallest system size N at which the ensemble's collision probability
/// drops below `eta · k! / F_2SP(k)`, i.e. the residual two-step
/// contribution is suppressed. `None` when no finite N satisfies it.
pub fn critical_system_size(
    k: u32,
    eta: f64,
    kind: PauliEnsembleKind,
) -> Result<Option<u32>, ProtocolError> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(ProtocolError::InvalidEta(eta));
    }
    let threshold = eta * factorial(k) / f_2sp(k)?;
    if threshold <= 0.0 {
        return Ok(None);
    }
    let p0 = |n: u32| kind.at(n).collision_probability();
    let first_at_or_above = |guess: f64| -> u32 {
        let mut n = guess.floor().max(1.0) as u32;
        n = n.saturating_sub(2).max(1);
        while p0(n) > threshold {
            n += 1;
        }
        n
    };
    let n_c = match kind {
        PauliEnsembleKind::UniformFull => {
            // 4^-N <= threshold
            first_at_or_above((1.0 / threshold).ln() / 4.0f64.ln())
        }
        PauliEnsembleKind::UniformIZ => first_at_or_above((1.0 / threshold).log2()),
        PauliEnsembleKind::PrefixZ => {
            // 1/(N+1) <= threshold; grows factorially with k.
            first_at_or_above(1.0 / threshold - 1.0)
        }
        PauliEnsembleKind::IdentityOnly => {
            return Ok(if 1.0 <= threshold { Some(1) } else { None });
        }
    };
    Ok(Some(n_c))
}
