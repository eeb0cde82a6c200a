//! Domain-separated seed derivation.
//!
//! Every randomized stage of a run (Hamiltonian draws, evolution times,
//! Pauli draws, ...) gets its own stream seed derived from the master seed
//! and a short label, so stages can be re-run in isolation and adding a
//! stage never shifts the streams of the others.

use sha2::{Digest, Sha256};

/// Derive a 64-bit stream seed from a master seed and a label.
///
/// SHA-256 over the little-endian master bytes, a separator byte, and the
/// label; the first eight digest bytes, little-endian. Distinct labels give
/// independent streams.
pub fn split_seed(master: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update([0x1f]);
    h.update(label.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is long enough"))
}
