//! Statistical invariants of the time sweep that only hold in the median
//! over several independent Hamiltonian draws.

use tempens_core::analysis::{sweep_time, TimeSweepConfig};
use tempens_core::hamiltonian::ModelKind;
use tempens_core::pauli::PauliEnsembleKind;

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// The finite-T deviation decays monotonically in the median over five
/// Hamiltonian draws.
///
/// The prefix-Z ensemble is the regime where this is statistically
/// resolvable at M = 400: its collision probability 1/(N+1) makes Pauli
/// coincidences abundant, so the decaying tail of the deviation is densely
/// sampled instead of being carried by a handful of rare pairs. For the
/// full ensemble at this size the post-crossing curve drops within a
/// couple of grid points to the estimator's statistical floor (~1e-2),
/// below which no ordering survives.
#[test]
fn deviation_medians_decrease_with_time_window() {
    let t_grid = vec![300.0, 1000.0, 3000.0, 10000.0];
    let mut per_t: Vec<Vec<f64>> = vec![Vec::new(); t_grid.len()];
    for seed in 0..5u64 {
        let cfg = TimeSweepConfig {
            model: ModelKind::Gue,
            n_qubits: 7,
            k: 2,
            n_samples: 400,
            ensemble_kind: PauliEnsembleKind::PrefixZ,
            t_grid: t_grid.clone(),
            seed: 900 + seed,
            epsilon: 0.1,
            fit_window: None,
        };
        let sweep = sweep_time(&cfg).expect("sweep");
        for (i, p) in sweep.points.iter().enumerate() {
            per_t[i].push(p.delta_f);
        }
    }
    let medians: Vec<f64> = per_t.iter().map(|v| median(v)).collect();
    for w in medians.windows(2) {
        assert!(
            w[0] > w[1],
            "medians not decreasing: {medians:?}"
        );
    }
}

/// Spot check that the sweep machinery leaves elements reusable: the same
/// grid re-run point by point gives the same per-point deviations (the
/// cell-isolation contract, exercised through the public driver).
#[test]
fn sweep_points_rerun_in_isolation() {
    let base = TimeSweepConfig {
        model: ModelKind::RandomSpin,
        n_qubits: 4,
        k: 2,
        n_samples: 50,
        ensemble_kind: PauliEnsembleKind::UniformFull,
        t_grid: vec![10.0, 100.0],
        seed: 31,
        epsilon: 0.1,
        fit_window: None,
    };
    let full = sweep_time(&base).expect("sweep");
    let mut head = base.clone();
    head.t_grid = vec![10.0];
    let partial = sweep_time(&head).expect("sweep");
    assert_eq!(full.points[0].f_mean, partial.points[0].f_mean);
    assert_eq!(full.points[0].stderr, partial.points[0].stderr);
}
