//! Dense-matrix overlap oracle: builds the two evolution operators
//! explicitly and takes the trace, independently of the eigenbasis
//! phase-vector kernel. Intended for small dimensions (N <= 6).

use crate::linalg::{hermitian_eigendecompose, ComplexMatrix, EIGEN_TOL};
use crate::C64;

use super::{ProtocolError, SampledElement};

/// tr[V† U] with U, V assembled as dense products of matrix exponentials
/// and Kronecker-built Pauli matrices. The spectral decompositions are
/// recomputed internally from the raw Hamiltonians.
pub fn direct_overlap_oracle(
    e: &SampledElement,
    f: &SampledElement,
    h1: &ComplexMatrix,
    h2: &ComplexMatrix,
) -> Result<C64, ProtocolError> {
    if h1.dim() != h2.dim() || h1.dim() != e.dim() || e.dim() != f.dim() {
        return Err(ProtocolError::DimensionMismatch(h1.dim(), e.dim()));
    }
    let spec1 = hermitian_eigendecompose(h1, EIGEN_TOL)?;
    let spec2 = hermitian_eigendecompose(h2, EIGEN_TOL)?;

    let build = |el: &SampledElement| -> Result<ComplexMatrix, ProtocolError> {
        let u1 = evolution_operator(&spec1, el.t1);
        let u2 = evolution_operator(&spec2, el.t2);
        let p = el.pauli.to_dense();
        Ok(u2.mul(&p.mul(&u1)?)?)
    };
    let u = build(e)?;
    let v = build(f)?;
    Ok(v.adjoint().mul(&u)?.trace())
}

/// exp(-i H t) from a spectral decomposition: V diag(e^{-iEt}) V†.
fn evolution_operator(
    spec: &crate::linalg::SpectralDecomposition,
    t: f64,
) -> ComplexMatrix {
    let d = spec.dim();
    let phases: Vec<C64> = spec
        .eigenvalues
        .iter()
        .map(|&ev| {
            let arg = -ev * t;
            C64::new(arg.cos(), arg.sin())
        })
        .collect();
    let scaled = ComplexMatrix::from_fn(d, |r, c| spec.eigenvectors.get(r, c) * phases[c]);
    scaled
        .mul(&spec.eigenvectors.adjoint())
        .expect("dims agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::sample_gue;
    use crate::linalg::hermitian_eigendecompose;
    use crate::pauli::{PauliEnsembleKind, PauliString};
    use crate::protocol::{pair_overlap, EvolutionPair};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn setup(n_qubits: u32, seed: u64) -> (ComplexMatrix, ComplexMatrix, EvolutionPair) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let h1 = sample_gue(n_qubits, &mut rng);
        let h2 = sample_gue(n_qubits, &mut rng);
        let pair = EvolutionPair::new(
            hermitian_eigendecompose(&h1, EIGEN_TOL).unwrap(),
            hermitian_eigendecompose(&h2, EIGEN_TOL).unwrap(),
        )
        .unwrap();
        (h1, h2, pair)
    }

    #[test]
    fn self_overlap_is_the_dimension() {
        let (h1, h2, pair) = setup(3, 1);
        let p = PauliEnsembleKind::UniformFull.at(3).sample(
            &mut ChaCha12Rng::seed_from_u64(2),
        );
        let e = crate::protocol::SampledElement::build(1.2, 3.4, p, &pair).unwrap();
        let tr = direct_overlap_oracle(&e, &e, &h1, &h2).unwrap();
        let d = pair.dim() as f64;
        assert!((tr - C64::new(d, 0.0)).norm() < 1e-9 * d);
    }

    #[test]
    fn identity_pauli_at_zero_times_gives_the_dimension() {
        let (h1, h2, pair) = setup(2, 3);
        let id = PauliString::identity(2);
        let e = crate::protocol::SampledElement::build(0.0, 0.0, id, &pair).unwrap();
        let f = e.clone();
        let tr = direct_overlap_oracle(&e, &f, &h1, &h2).unwrap();
        assert!((tr - C64::new(4.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn fast_kernel_agrees_with_the_oracle() {
        // 50 random pairs at N = 3; moderate times keep phase rounding far
        // below the agreement tolerance.
        let (h1, h2, pair) = setup(3, 4);
        let ensemble = PauliEnsembleKind::UniformFull.at(3);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..50 {
            let draw = |rng: &mut ChaCha12Rng| {
                let t1 = rng.gen::<f64>() * 1000.0;
                let t2 = rng.gen::<f64>() * 1000.0;
                let p = ensemble.sample(rng);
                crate::protocol::SampledElement::build(t1, t2, p, &pair).unwrap()
            };
            let e = draw(&mut rng);
            let f = draw(&mut rng);
            let fast = pair_overlap(&e, &f).unwrap();
            let slow = direct_overlap_oracle(&e, &f, &h1, &h2).unwrap();
            let scale = fast.norm().max(slow.norm()).max(1.0);
            assert!(
                (fast - slow).norm() <= 1e-8 * scale,
                "kernel {fast} vs oracle {slow}"
            );
        }
    }
}
