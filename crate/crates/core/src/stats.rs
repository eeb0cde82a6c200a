//! Small statistics helpers shared by the analysis drivers and tests.

/// Sample mean and unbiased variance.
pub fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Excess kurtosis m4/m2^2 - 3 from sample central moments.
pub fn excess_kurtosis(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    if m2 == 0.0 {
        return 0.0;
    }
    m4 / (m2 * m2) - 3.0
}

/// Standard normal CDF.
pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples`
/// and a reference CDF. Sorts a copy of the input.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        worst = worst.max((f - lo).abs()).max((hi - f).abs());
    }
    worst
}

/// Weighted least-squares line fit; returns (slope, intercept).
///
/// Weights are inverse variances of the `y` values. Returns `None` when
/// fewer than two points carry positive weight or the x-spread vanishes.
pub fn weighted_line_fit(xs: &[f64], ys: &[f64], ws: &[f64]) -> Option<(f64, f64)> {
    assert_eq!(xs.len(), ys.len());
    assert_eq!(xs.len(), ws.len());
    let mut sw = 0.0;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut n_pos = 0usize;
    for ((&x, &y), &w) in xs.iter().zip(ys).zip(ws) {
        if w > 0.0 {
            sw += w;
            sx += w * x;
            sy += w * y;
            n_pos += 1;
        }
    }
    if n_pos < 2 || sw == 0.0 {
        return None;
    }
    let xbar = sx / sw;
    let ybar = sy / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for ((&x, &y), &w) in xs.iter().zip(ys).zip(ws) {
        if w > 0.0 {
            sxx += w * (x - xbar) * (x - xbar);
            sxy += w * (x - xbar) * (y - ybar);
        }
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, ybar - slope * xbar))
}

/// Logarithmically spaced grid from `lo` to `hi` inclusive.
pub fn log_spaced_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && points >= 2);
    let step = (hi / lo).ln() / (points - 1) as f64;
    (0..points).map(|i| lo * (step * i as f64).exp()).collect()
}
