//! Monte Carlo frame-potential estimation from pairwise overlap traces.
//!
//! One O(M^2 D^2) pass computes |tr|^2 for every unordered element pair;
//! all requested orders k reuse those values. The pass is the parallel hot
//! spot: pairs are independent, each worker fills disjoint slots of the
//! result vector, and the reduction runs in a fixed order afterwards, so
//! the output is bit-identical for any worker count and for the
//! sequential fallback.

use crate::linalg::ComplexMatrix;

use super::{ElementSet, FramePotentialEstimate, ProtocolError};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// |tr[V† U]|^2 for every unordered element pair, in row-major pair order
/// ((0,1), (0,2), ..., (1,2), ...).
pub fn pairwise_overlap_sq(set: &ElementSet) -> Vec<f64> {
    let dressed: Vec<&ComplexMatrix> = set.elements.iter().map(|e| &e.dressed).collect();
    pairwise_sq(&dressed)
}

/// Single-threaded variant of [`pairwise_overlap_sq`]; same values, bit for bit.
pub fn pairwise_overlap_sq_seq(set: &ElementSet) -> Vec<f64> {
    let dressed: Vec<&ComplexMatrix> = set.elements.iter().map(|e| &e.dressed).collect();
    pairwise_sq_seq(&dressed)
}

fn pair_indices(m: usize) -> Vec<(u32, u32)> {
    let mut pairs = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in (i + 1)..m {
            pairs.push((i as u32, j as u32));
        }
    }
    pairs
}

#[cfg(feature = "parallel")]
fn pairwise_sq(mats: &[&ComplexMatrix]) -> Vec<f64> {
    let pairs = pair_indices(mats.len());
    pairs
        .par_iter()
        .map(|&(i, j)| mats[i as usize].hs_inner(mats[j as usize]).norm_sqr())
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn pairwise_sq(mats: &[&ComplexMatrix]) -> Vec<f64> {
    pairwise_sq_seq(mats)
}

fn pairwise_sq_seq(mats: &[&ComplexMatrix]) -> Vec<f64> {
    let pairs = pair_indices(mats.len());
    pairs
        .iter()
        .map(|&(i, j)| mats[i as usize].hs_inner(mats[j as usize]).norm_sqr())
        .collect()
}

/// Estimate the frame potentials for every k in `k_list`.
///
/// The mean runs over all M(M-1) ordered pairs, excluding self-pairs;
/// the overlap trace is conjugate-symmetric, so each unordered pair is
/// computed once and counted twice. The standard error comes from a
/// leave-one-element-out jackknife, which accounts for the correlation
/// between pairs sharing an element.
pub fn estimate_frame_potentials(
    set: &ElementSet,
    k_list: &[u32],
) -> Result<Vec<FramePotentialEstimate>, ProtocolError> {
    if set.len() < 2 {
        return Err(ProtocolError::TooFewSamples(set.len()));
    }
    if let Some(&k) = k_list.iter().find(|&&k| k < 1) {
        return Err(ProtocolError::InvalidK(k));
    }
    let w = pairwise_overlap_sq(set);
    Ok(k_list
        .iter()
        .map(|&k| estimate_single_k(&w, set.len(), k, set.dim()))
        .collect())
}

/// Same estimator over explicit unitaries (e.g. a Haar baseline).
pub fn estimate_frame_potentials_from_unitaries(
    mats: &[ComplexMatrix],
    k_list: &[u32],
) -> Result<Vec<FramePotentialEstimate>, ProtocolError> {
    if mats.len() < 2 {
        return Err(ProtocolError::TooFewSamples(mats.len()));
    }
    let dim = mats[0].dim();
    for m in mats {
        if m.dim() != dim {
            return Err(ProtocolError::DimensionMismatch(m.dim(), dim));
        }
    }
    let refs: Vec<&ComplexMatrix> = mats.iter().collect();
    let w = pairwise_sq(&refs);
    Ok(k_list
        .iter()
        .map(|&k| estimate_single_k(&w, mats.len(), k, dim))
        .collect())
}

fn estimate_single_k(w: &[f64], m: usize, k: u32, dim: usize) -> FramePotentialEstimate {
    // |tr|^(2k) <= D^(2k); fall back to exp(k·ln) when powers would push
    // past the exponent range.
    let log_space = 2.0 * k as f64 * (dim as f64).log2() > 1000.0;
    let pow_k = |x: f64| -> f64 {
        if log_space {
            if x == 0.0 {
                0.0
            } else {
                (k as f64 * x.ln()).exp()
            }
        } else {
            x.powi(k as i32)
        }
    };
    let powed: Vec<f64> = w.iter().map(|&x| pow_k(x)).collect();

    let n_pairs = (m * (m - 1)) as u64;
    // Ordered sum: each unordered value counts for both directions.
    let total: f64 = 2.0 * powed.iter().sum::<f64>();
    let mean = total / n_pairs as f64;

    let stderr = if m >= 3 {
        // Per-element marginals: sum of pair values touching element i.
        let mut marginal = vec![0.0f64; m];
        let mut p = 0usize;
        for i in 0..m {
            for j in (i + 1)..m {
                marginal[i] += powed[p];
                marginal[j] += powed[p];
                p += 1;
            }
        }
        let denom = ((m - 1) * (m - 2)) as f64;
        let theta: Vec<f64> = marginal
            .iter()
            .map(|&row| (total - 2.0 * row) / denom)
            .collect();
        let theta_bar = theta.iter().sum::<f64>() / m as f64;
        let ss: f64 = theta.iter().map(|t| (t - theta_bar) * (t - theta_bar)).sum();
        ((m - 1) as f64 / m as f64 * ss).sqrt()
    } else {
        f64::INFINITY
    };

    FramePotentialEstimate {
        k,
        mean,
        stderr,
        n_pairs,
        log_space,
    }
}

/// Exact frame potential of a finite set of unitaries under the full
/// product measure, self-pairs included:
/// `F(k) = (1/M^2) Σ_{m,m'} |tr(V† U)|^(2k)`.
pub fn exact_frame_potential(mats: &[ComplexMatrix], k: u32) -> f64 {
    let m = mats.len();
    assert!(m >= 1 && k >= 1);
    let mut acc = 0.0f64;
    for a in mats {
        for b in mats {
            acc += a.hs_inner(b).norm_sqr().powi(k as i32);
        }
    }
    acc / (m * m) as f64
}
