//! Numerical laboratory for temporal-ensemble unitary designs.
//!
//! The ensemble under study is built from two fixed chaotic Hamiltonians
//! `H1`, `H2` and a random Pauli operation `P`:
//!
//! ```text
//!     U = exp(-i H2 t2) · P · exp(-i H1 t1),    t1, t2 ~ Uniform[0, T]
//! ```
//!
//! The crate estimates the ensemble's frame potentials
//! `F(k) = E |tr(V† U)|^(2k)` by Monte Carlo over sampled pairs, using an
//! eigenbasis expansion of the overlap trace so each pair costs `O(D^2)`
//! instead of `O(D^3)`, and compares the estimates against closed-form
//! predictions parameterized by the Pauli-collision probability `p0`.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices, Hermitian eigensolver, Haar sampling
//! - [`pauli`]: bitmask Pauli strings and the Pauli-operation ensembles
//! - [`hamiltonian`]: GUE and random-spin Hamiltonian samplers, spectral stats
//! - [`protocol`]: ensemble sampling, the overlap kernel, the frame-potential
//!   estimator, and theory predictions
//! - [`analysis`]: Pauli-spectrum statistics, finite-time and finite-size sweeps
//! - [`seed`]: domain-separated seed derivation
//!
//! With the default `parallel` feature the matmul and the pairwise overlap
//! pass run on rayon. Results are bit-identical to the sequential fallback
//! and independent of the worker count: every parallel loop writes disjoint
//! output slots that are reduced in a fixed order.

pub mod analysis;
pub mod hamiltonian;
pub mod linalg;
pub mod pauli;
pub mod protocol;
pub mod seed;
pub mod stats;

pub use linalg::{ComplexMatrix, SpectralDecomposition};
pub use pauli::{PauliEnsemble, PauliEnsembleKind, PauliString};
pub use protocol::{ElementSet, EvolutionPair, FramePotentialEstimate, SampledElement};

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
