//! Parallel vs sequential kernel comparison: the dense matmul behind the
//! transition matrices and the pairwise overlap pass behind the estimator.
//!
//! Run with `cargo bench -p tempens-core`.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use tempens_core::hamiltonian::sample_gue;
use tempens_core::linalg::{hermitian_eigendecompose, EIGEN_TOL};
use tempens_core::pauli::PauliEnsembleKind;
use tempens_core::protocol::{
    pairwise_overlap_sq, pairwise_overlap_sq_seq, sample_elements, EvolutionPair, ProtocolConfig,
};

fn bench_matmul(c: &mut Criterion) {
    let mut group = c.benchmark_group("matmul");
    for n_qubits in [6u32, 7, 8] {
        let mut rng = ChaCha12Rng::seed_from_u64(n_qubits as u64);
        let a = sample_gue(n_qubits, &mut rng);
        let b = sample_gue(n_qubits, &mut rng);
        let dim = a.dim();
        group.sample_size(10);
        group.bench_with_input(BenchmarkId::new("parallel", dim), &dim, |bch, _| {
            bch.iter(|| black_box(a.mul(&b).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("sequential", dim), &dim, |bch, _| {
            bch.iter(|| black_box(a.mul_seq(&b).unwrap()))
        });
    }
    group.finish();
}

fn build_elements(n_qubits: u32, n_samples: usize) -> tempens_core::ElementSet {
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let h1 = sample_gue(n_qubits, &mut rng);
    let h2 = sample_gue(n_qubits, &mut rng);
    let pair = EvolutionPair::new(
        hermitian_eigendecompose(&h1, EIGEN_TOL).unwrap(),
        hermitian_eigendecompose(&h2, EIGEN_TOL).unwrap(),
    )
    .unwrap();
    let cfg = ProtocolConfig {
        t_max: 1e6,
        n_samples,
        k_list: vec![2],
        ensemble: PauliEnsembleKind::UniformFull.at(n_qubits),
        seed: 2,
    };
    sample_elements(&cfg, &pair).unwrap()
}

fn bench_pair_pass(c: &mut Criterion) {
    let mut group = c.benchmark_group("pairwise_overlap_sq");
    let set = build_elements(7, 100);
    group.sample_size(10);
    group.bench_function("parallel/D128_M100", |bch| {
        bch.iter(|| black_box(pairwise_overlap_sq(&set)))
    });
    group.bench_function("sequential/D128_M100", |bch| {
        bch.iter(|| black_box(pairwise_overlap_sq_seq(&set)))
    });
    group.finish();
}

fn bench_eigendecompose(c: &mut Criterion) {
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let h = sample_gue(7, &mut rng);
    let mut group = c.benchmark_group("hermitian_eigendecompose");
    group.sample_size(10);
    group.bench_function("D128", |bch| {
        bch.iter(|| black_box(hermitian_eigendecompose(&h, EIGEN_TOL).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_matmul, bench_pair_pass, bench_eigendecompose);
criterion_main!(benches);
