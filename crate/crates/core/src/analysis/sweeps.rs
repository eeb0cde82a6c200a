//! Finite-time and finite-size sweep drivers.
//!
//! Seeding contract: every grid cell derives its streams from the master
//! seed and a label naming the cell, so any cell re-run in isolation
//! reproduces its grid value bit-exactly. Hamiltonians are drawn once per
//! system size and kept fixed across k and across the time grid.

use crate::hamiltonian::{spectral_width_stats, ModelKind};
use crate::pauli::PauliEnsembleKind;
use crate::protocol::{
    critical_system_size, estimate_frame_potentials, factorial, normalized_deviation,
    sample_elements, ProtocolConfig,
};
use crate::seed::split_seed;
use crate::stats;

use super::{prepare_evolution_pair, AnalysisError};

/// Configuration for a frame-potential deviation sweep over the time window T.
#[derive(Debug, Clone)]
pub struct TimeSweepConfig {
    pub model: ModelKind,
    pub n_qubits: u32,
    pub k: u32,
    pub n_samples: usize,
    pub ensemble_kind: PauliEnsembleKind,
    /// Strictly increasing grid of T values.
    pub t_grid: Vec<f64>,
    pub seed: u64,
    /// Deviation threshold whose first downward crossing is located.
    pub epsilon: f64,
    /// Fit window for the log-log slope; defaults to the decade starting
    /// at the crossing.
    pub fit_window: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct TimeSweepPoint {
    pub t_max: f64,
    pub f_mean: f64,
    pub stderr: f64,
    pub delta_f: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

#[derive(Debug, Clone)]
pub struct TimeSweep {
    pub k: u32,
    pub points: Vec<TimeSweepPoint>,
    /// Interpolated T where the deviation first drops through epsilon.
    pub crossing: Option<f64>,
    /// Weighted log-log slope of the deviation over the fit window.
    pub slope: Option<SlopeFit>,
    /// Mean level spacings of the two Hamiltonians, for T-scale context.
    pub mean_level_spacing: (f64, f64),
}

pub fn sweep_time(cfg: &TimeSweepConfig) -> Result<TimeSweep, AnalysisError> {
    if cfg.t_grid.is_empty() || cfg.t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::BadGrid);
    }
    let pair = prepare_evolution_pair(
        cfg.model,
        cfg.n_qubits,
        split_seed(cfg.seed, "H1"),
        split_seed(cfg.seed, "H2"),
    )?;
    let spacing = (
        spectral_width_stats(&pair.spec1).mean_level_spacing,
        spectral_width_stats(&pair.spec2).mean_level_spacing,
    );

    let mut points = Vec::with_capacity(cfg.t_grid.len());
    for (idx, &t_max) in cfg.t_grid.iter().enumerate() {
        let run = ProtocolConfig {
            t_max,
            n_samples: cfg.n_samples,
            k_list: vec![cfg.k],
            ensemble: cfg.ensemble_kind.at(cfg.n_qubits),
            seed: split_seed(cfg.seed, &format!("T{idx}")),
        };
        let set = sample_elements(&run, &pair)?;
        let est = estimate_frame_potentials(&set, &[cfg.k])?;
        let e = &est[0];
        points.push(TimeSweepPoint {
            t_max,
            f_mean: e.mean,
            stderr: e.stderr,
            delta_f: normalized_deviation(cfg.k, e.mean),
        });
    }

    let crossing = find_crossing(&points, cfg.epsilon);
    let window = cfg
        .fit_window
        .or_else(|| crossing.map(|tc| (tc, 10.0 * tc)));
    let slope = window.and_then(|w| fit_slope(&points, cfg.k, w));

    Ok(TimeSweep {
        k: cfg.k,
        points,
        crossing,
        slope,
        mean_level_spacing: spacing,
    })
}

/// First downward crossing of `delta_f` through `epsilon`, log-interpolated
/// between the bracketing grid points.
fn find_crossing(points: &[TimeSweepPoint], epsilon: f64) -> Option<f64> {
    let idx = points.iter().position(|p| p.delta_f <= epsilon)?;
    if idx == 0 {
        return Some(points[0].t_max);
    }
    let (a, b) = (&points[idx - 1], &points[idx]);
    let la = a.delta_f.max(1e-300).ln();
    let lb = b.delta_f.max(1e-300).ln();
    let le = epsilon.ln();
    let frac = if la == lb { 1.0 } else { (le - la) / (lb - la) };
    Some((a.t_max.ln() + frac * (b.t_max.ln() - a.t_max.ln())).exp())
}

/// Weighted least squares of ln(delta_f) on ln(T) over the window, with
/// inverse-variance weights propagated from the jackknife errors. Points
/// with vanishing deviation carry no information and are dropped.
fn fit_slope(points: &[TimeSweepPoint], k: u32, window: (f64, f64)) -> Option<SlopeFit> {
    let kf = factorial(k);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for p in points {
        if p.t_max < window.0 || p.t_max > window.1 || p.delta_f <= 0.0 {
            continue;
        }
        let sigma_delta = p.stderr / kf;
        let w = if sigma_delta > 0.0 {
            let rel = p.delta_f / sigma_delta;
            rel * rel
        } else {
            1.0
        };
        xs.push(p.t_max.ln());
        ys.push(p.delta_f.ln());
        ws.push(w);
    }
    let n_points = xs.len();
    let (slope, intercept) = stats::weighted_line_fit(&xs, &ys, &ws)?;
    Some(SlopeFit {
        slope,
        intercept,
        window,
        n_points,
    })
}

/// Configuration for a deviation sweep over (k, N) cells.
#[derive(Debug, Clone)]
pub struct SizeSweepConfig {
    pub model: ModelKind,
    pub k_list: Vec<u32>,
    /// Strictly increasing system sizes.
    pub n_range: Vec<u32>,
    pub ensemble_kind: PauliEnsembleKind,
    pub t_max: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Suppression factor in the critical-size condition.
    pub eta: f64,
    /// Cells whose working set would exceed this are skipped, not failed.
    pub mem_budget_bytes: u64,
}

#[derive(Debug, Clone)]
pub struct SizeSweepCell {
    pub k: u32,
    pub n_qubits: u32,
    /// `(F_mean, stderr, delta_f)` when the cell ran.
    pub estimate: Option<(f64, f64, f64)>,
    pub skip_reason: Option<String>,
    /// Predicted critical size for this k (same for every N in the row).
    pub n_critical: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct SizeSweep {
    pub cells: Vec<SizeSweepCell>,
}

pub fn sweep_system_size(cfg: &SizeSweepConfig) -> Result<SizeSweep, AnalysisError> {
    if cfg.k_list.is_empty()
        || cfg.n_range.is_empty()
        || cfg.n_range.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(AnalysisError::BadGrid);
    }
    let mut cells = Vec::with_capacity(cfg.k_list.len() * cfg.n_range.len());
    for &n in &cfg.n_range {
        // One Hamiltonian pair per system size, shared by every k.
        let mut pair = None;
        for &k in &cfg.k_list {
            let n_critical = critical_system_size(k, cfg.eta, cfg.ensemble_kind)?;
            if let Some(reason) = over_budget(cfg, n) {
                cells.push(SizeSweepCell {
                    k,
                    n_qubits: n,
                    estimate: None,
                    skip_reason: Some(reason),
                    n_critical,
                });
                continue;
            }
            if pair.is_none() {
                pair = Some(prepare_evolution_pair(
                    cfg.model,
                    n,
                    split_seed(cfg.seed, &format!("H1:N{n}")),
                    split_seed(cfg.seed, &format!("H2:N{n}")),
                )?);
            }
            let run = ProtocolConfig {
                t_max: cfg.t_max,
                n_samples: cfg.n_samples,
                k_list: vec![k],
                ensemble: cfg.ensemble_kind.at(n),
                seed: split_seed(cfg.seed, &format!("k{k}:N{n}")),
            };
            let set = sample_elements(&run, pair.as_ref().expect("built above"))?;
            let est = &estimate_frame_potentials(&set, &[k])?[0];
            cells.push(SizeSweepCell {
                k,
                n_qubits: n,
                estimate: Some((est.mean, est.stderr, normalized_deviation(k, est.mean))),
                skip_reason: None,
                n_critical,
            });
        }
    }
    Ok(SizeSweep { cells })
}

/// Rough working-set estimate: dressed matrices per element, cached
/// transition matrices per distinct Pauli, and a handful of D x D
/// temporaries for the eigensolver.
fn over_budget(cfg: &SizeSweepConfig, n_qubits: u32) -> Option<String> {
    let d = 1u128 << n_qubits;
    let support = cfg.ensemble_kind.at(n_qubits).support_size();
    let cached = (cfg.n_samples as u128).min(support);
    let mats = cfg.n_samples as u128 + cached + 8;
    let bytes = mats * d * d * 16;
    if bytes > cfg.mem_budget_bytes as u128 {
        Some(format!(
            "needs ~{bytes} bytes > budget {}",
            cfg.mem_budget_bytes
        ))
    } else {
        None
    }
}
