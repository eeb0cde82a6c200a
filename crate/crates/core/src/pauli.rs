//! Pauli strings in bit-packed symplectic form, and the Pauli-operation
//! ensembles the protocol draws from.
//!
//! Convention: `P = i^popcount(x & z) · X^x · Z^z`, with bit `i` of each
//! mask holding the component on site `i + 1`. Under this phase convention
//! every string is Hermitian with `P^2 = I`, so strings can be used on
//! either side of an overlap without conjugation bookkeeping.
//!
//! Text form: one character per site over `{I, X, Y, Z}`, site 1 leftmost,
//! e.g. `"XIZ"` for three qubits.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::linalg::{kron, ComplexMatrix};
use crate::C64;

#[derive(Debug, Error)]
pub enum PauliError {
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(u32, u32),
    #[error("qubit count {0} out of range (1..=63)")]
    QubitCount(u32),
    #[error("invalid Pauli character {0:?}; expected one of I, X, Y, Z")]
    InvalidCharacter(char),
    #[error("matrix dimension {0} does not match 2^{1}")]
    DimensionMismatch(usize, u32),
}

/// Hermitian N-qubit Pauli string in symplectic (x-mask, z-mask) form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: u32,
    x_mask: u64,
    z_mask: u64,
}

impl PauliString {
    pub fn new(n_qubits: u32, x_mask: u64, z_mask: u64) -> Result<Self, PauliError> {
        if n_qubits == 0 || n_qubits > 63 {
            return Err(PauliError::QubitCount(n_qubits));
        }
        let mask = (1u64 << n_qubits) - 1;
        Ok(Self {
            n_qubits,
            x_mask: x_mask & mask,
            z_mask: z_mask & mask,
        })
    }

    pub fn identity(n_qubits: u32) -> Self {
        Self::new(n_qubits, 0, 0).expect("valid qubit count")
    }

    #[inline]
    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    /// Apply to a computational basis state: returns the image index and
    /// the unit phase, i.e. `P|b> = phase |b_out>`.
    #[inline]
    pub fn apply_to_basis_state(&self, b: u64) -> (u64, C64) {
        debug_assert!(b < (1u64 << self.n_qubits));
        let b_out = b ^ self.x_mask;
        let quarter_turns = (self.x_mask & self.z_mask).count_ones()
            + 2 * (b & self.z_mask).count_ones();
        (b_out, i_power(quarter_turns))
    }

    /// Apply to a state vector: `out = P ψ`. O(D).
    pub fn apply_to_vector(&self, psi: &[C64]) -> Vec<C64> {
        let d = self.dim();
        debug_assert_eq!(psi.len(), d);
        let mut out = vec![C64::new(0.0, 0.0); d];
        for b in 0..d as u64 {
            let (b_out, phase) = self.apply_to_basis_state(b);
            out[b_out as usize] = phase * psi[b as usize];
        }
        out
    }

    /// Left-multiply a matrix: `P · M` as a row permutation with per-row
    /// phases, O(D^2), without materializing the dense Pauli.
    pub fn apply_to_matrix_left(&self, m: &ComplexMatrix) -> Result<ComplexMatrix, PauliError> {
        let d = self.dim();
        if m.dim() != d {
            return Err(PauliError::DimensionMismatch(m.dim(), self.n_qubits));
        }
        let mut out = ComplexMatrix::zeros(d);
        for b in 0..d as u64 {
            let (b_out, phase) = self.apply_to_basis_state(b);
            let src = m.row(b as usize);
            let dst = out.row_mut(b_out as usize);
            for (o, s) in dst.iter_mut().zip(src) {
                *o = phase * s;
            }
        }
        Ok(out)
    }

    /// Expectation value <ψ|P|ψ>; real up to rounding for Hermitian P.
    pub fn expectation(&self, psi: &[C64]) -> C64 {
        let applied = self.apply_to_vector(psi);
        psi.iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Product of two strings: `dense(self)·dense(other) = phase · dense(result)`
    /// with the result in the canonical Hermitian convention; phase in {±1, ±i}.
    pub fn multiply(&self, other: &Self) -> Result<(Self, C64), PauliError> {
        if self.n_qubits != other.n_qubits {
            return Err(PauliError::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        // i^a X^x1 Z^z1 · i^b X^x2 Z^z2 = i^(a+b) (-1)^|z1 & x2| X^x Z^z,
        // and the canonical form of the result already carries i^|x & z|.
        let turns = (self.x_mask & self.z_mask).count_ones() as i32
            + (other.x_mask & other.z_mask).count_ones() as i32
            + 2 * (self.z_mask & other.x_mask).count_ones() as i32
            - (x & z).count_ones() as i32;
        let result = Self {
            n_qubits: self.n_qubits,
            x_mask: x,
            z_mask: z,
        };
        Ok((result, i_power(turns.rem_euclid(4) as u32)))
    }

    /// Dense matrix form, assembled by Kronecker products of the four
    /// single-qubit matrices. Intended for small N.
    pub fn to_dense(&self) -> ComplexMatrix {
        let mut out = single_qubit_dense(self.site(1));
        for site in 2..=self.n_qubits {
            // Site 1 owns the lowest bit: it indexes the fastest-varying
            // tensor slot, so later sites go on the left of the product.
            out = kron(&single_qubit_dense(self.site(site)), &out);
        }
        out
    }

    /// The single-site component at `site` (1-based).
    pub fn site(&self, site: u32) -> SinglePauli {
        let bit = site - 1;
        let x = (self.x_mask >> bit) & 1;
        let z = (self.z_mask >> bit) & 1;
        match (x, z) {
            (0, 0) => SinglePauli::I,
            (1, 0) => SinglePauli::X,
            (0, 1) => SinglePauli::Z,
            _ => SinglePauli::Y,
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for site in 1..=self.n_qubits {
            write!(f, "{:?}", self.site(site))?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, PauliError> {
        let n = s.chars().count() as u32;
        let mut x = 0u64;
        let mut z = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => x |= 1 << i,
                'Z' => z |= 1 << i,
                'Y' => {
                    x |= 1 << i;
                    z |= 1 << i;
                }
                other => return Err(PauliError::InvalidCharacter(other)),
            }
        }
        PauliString::new(n, x, z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinglePauli {
    I,
    X,
    Y,
    Z,
}

fn single_qubit_dense(p: SinglePauli) -> ComplexMatrix {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let entries = match p {
        SinglePauli::I => [one, zero, zero, one],
        SinglePauli::X => [zero, one, one, zero],
        SinglePauli::Y => [zero, -i, i, zero],
        SinglePauli::Z => [one, zero, zero, -one],
    };
    ComplexMatrix::from_row_major(2, entries.to_vec())
}

#[inline]
fn i_power(quarter_turns: u32) -> C64 {
    match quarter_turns % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Families of Pauli-operation ensembles, independent of the qubit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliEnsembleKind {
    /// Uniform over all 4^N strings.
    UniformFull,
    /// Uniform over the 2^N strings with I or Z on every site.
    UniformIZ,
    /// Z on a uniformly drawn prefix of sites 1..=l, l uniform in {0..N}.
    PrefixZ,
    /// The identity only; the no-Pauli limit of the protocol.
    IdentityOnly,
}

impl PauliEnsembleKind {
    pub fn at(self, n_qubits: u32) -> PauliEnsemble {
        PauliEnsemble {
            kind: self,
            n_qubits,
        }
    }
}

/// A Pauli-operation ensemble at a fixed qubit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliEnsemble {
    pub kind: PauliEnsembleKind,
    pub n_qubits: u32,
}

impl PauliEnsemble {
    pub fn support_size(&self) -> u128 {
        let n = self.n_qubits;
        match self.kind {
            PauliEnsembleKind::UniformFull => 1u128 << (2 * n),
            PauliEnsembleKind::UniformIZ => 1u128 << n,
            PauliEnsembleKind::PrefixZ => (n + 1) as u128,
            PauliEnsembleKind::IdentityOnly => 1,
        }
    }

    /// Draw a uniform member of the ensemble's support.
    pub fn sample(&self, rng: &mut impl Rng) -> PauliString {
        let n = self.n_qubits;
        let mask = (1u64 << n) - 1;
        let (x, z) = match self.kind {
            PauliEnsembleKind::UniformFull => (rng.gen::<u64>() & mask, rng.gen::<u64>() & mask),
            PauliEnsembleKind::UniformIZ => (0, rng.gen::<u64>() & mask),
            PauliEnsembleKind::PrefixZ => {
                let l = rng.gen_range(0..=n);
                (0, (1u64 << l) - 1)
            }
            PauliEnsembleKind::IdentityOnly => (0, 0),
        };
        PauliString::new(n, x, z).expect("validated qubit count")
    }

    /// Probability p0 that two independent draws coincide.
    pub fn collision_probability(&self) -> f64 {
        let n = self.n_qubits as i32;
        match self.kind {
            PauliEnsembleKind::UniformFull => 0.25f64.powi(n),
            PauliEnsembleKind::UniformIZ => 0.5f64.powi(n),
            PauliEnsembleKind::PrefixZ => 1.0 / (self.n_qubits as f64 + 1.0),
            PauliEnsembleKind::IdentityOnly => 1.0,
        }
    }
}
