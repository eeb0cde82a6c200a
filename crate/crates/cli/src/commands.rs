//! Command drivers: resolve configuration, run the core, write results.

use std::time::Instant;

use serde_json::json;

use tempens_core::analysis::{
    gaussianity_report, pauli_spectrum_samples, prepare_evolution_pair, sweep_system_size,
    sweep_time, SizeSweepConfig, TimeSweepConfig,
};
use tempens_core::hamiltonian::{spectral_width_stats, ModelKind};
use tempens_core::pauli::PauliEnsembleKind;
use tempens_core::protocol::{
    estimate_frame_potentials, factorial, normalized_deviation, predict_frame_potential,
    sample_elements, ProtocolConfig,
};
use tempens_core::seed::split_seed;
use tempens_core::stats::log_spaced_grid;

use crate::config::{
    self, config_error, parse_model, parse_pauli, resolve_common, Cli, Command, FileConfig,
    ResolvedCommon,
};
use crate::output::{self, Row, Schema};
use crate::validate;

const DEFAULT_N: u32 = 7;
const DEFAULT_T: f64 = 1e6;
const DEFAULT_SAMPLES: usize = 400;
const DEFAULT_EPSILON: f64 = 0.1;

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::FramePotential(args) => frame_potential(args),
        Command::SweepTime(args) => cmd_sweep_time(args),
        Command::SweepSize(args) => cmd_sweep_size(args),
        Command::PauliSpectrum(args) => pauli_spectrum(args),
        Command::Validate(args) => validate::run(args),
    }
}

fn init_threads(common: &ResolvedCommon) {
    #[cfg(feature = "parallel")]
    if let Some(threads) = common.threads {
        // Ignore the error from re-initialization; the pool is per-process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = common;
}

fn frame_potential(args: config::FramePotentialArgs) -> anyhow::Result<()> {
    let start = Instant::now();
    let file = FileConfig::load(args.common.config.as_ref())?;
    let common = resolve_common(&args.common, &file, "frame-potential")?;
    init_threads(&common);

    let model = parse_model(
        &args
            .model
            .or(file.get::<String>("model")?)
            .unwrap_or_else(|| "gue".into()),
    )?;
    let n = args.n.or(file.get("n")?).unwrap_or(DEFAULT_N);
    let t_max = args.t_max.or(file.get("T")?).unwrap_or(DEFAULT_T);
    let samples = args.samples.or(file.get("samples")?).unwrap_or(DEFAULT_SAMPLES);
    let k_list = args
        .k
        .or(file.get_list("k")?)
        .unwrap_or_else(|| vec![1, 2, 3, 4]);
    let kind = parse_pauli(
        &args
            .pauli
            .or(file.get::<String>("pauli")?)
            .unwrap_or_else(|| "full".into()),
    )?;

    let seed_h1 = split_seed(common.seed, "H1");
    let seed_h2 = split_seed(common.seed, "H2");
    let seed_elements = split_seed(common.seed, "elements");

    let pair = prepare_evolution_pair(model, n, seed_h1, seed_h2)?;
    let cfg = ProtocolConfig {
        t_max,
        n_samples: samples,
        k_list: k_list.clone(),
        ensemble: kind.at(n),
        seed: seed_elements,
    };
    let set = sample_elements(&cfg, &pair)?;
    let estimates = estimate_frame_potentials(&set, &k_list)?;

    let p0 = kind.at(n).collision_probability();
    let rows: Vec<Row> = estimates
        .iter()
        .map(|est| Row {
            t_max: None,
            n_qubits: None,
            k: est.k,
            f_mean: est.mean,
            f_stderr: est.stderr,
            f_haar: factorial(est.k),
            delta_f: normalized_deviation(est.k, est.mean),
            prediction: predict_frame_potential(est.k, p0).predicted,
            p0,
            n_pairs: est.n_pairs,
            n_critical: None,
            status: None,
        })
        .collect();

    output::write_atomic(
        &common.output,
        &output::render(Schema::FramePotential, &rows, common.format),
    )?;
    output::write_meta(
        &common.output,
        "frame-potential",
        json!({
            "model": model_name(model), "n": n, "T": t_max, "samples": samples,
            "k": k_list, "pauli": pauli_name(kind), "seed": common.seed,
            "threads": common.threads, "format": common.format.extension(),
        }),
        json!({"H1": seed_h1, "H2": seed_h2, "elements": seed_elements}),
        json!({
            "mean_level_spacing_H1": spectral_width_stats(&pair.spec1).mean_level_spacing,
            "mean_level_spacing_H2": spectral_width_stats(&pair.spec2).mean_level_spacing,
        }),
        start.elapsed().as_secs_f64(),
    )?;
    Ok(())
}

fn cmd_sweep_time(args: config::SweepTimeArgs) -> anyhow::Result<()> {
    let start = Instant::now();
    let file = FileConfig::load(args.common.config.as_ref())?;
    let common = resolve_common(&args.common, &file, "sweep-time")?;
    init_threads(&common);

    let model = parse_model(
        &args
            .model
            .or(file.get::<String>("model")?)
            .unwrap_or_else(|| "gue".into()),
    )?;
    let n = args.n.or(file.get("n")?).unwrap_or(DEFAULT_N);
    let k = args.k.or(file.get("k")?).unwrap_or(2);
    let samples = args.samples.or(file.get("samples")?).unwrap_or(DEFAULT_SAMPLES);
    let kind = parse_pauli(
        &args
            .pauli
            .or(file.get::<String>("pauli")?)
            .unwrap_or_else(|| "full".into()),
    )?;
    let epsilon = args.epsilon.or(file.get("epsilon")?).unwrap_or(DEFAULT_EPSILON);

    let t_grid = match args.t_grid.or(file.get_list("t-grid")?) {
        Some(grid) => grid,
        None => {
            let lo = args.t_min.or(file.get("t-min")?).unwrap_or(1.0);
            let hi = args.t_max.or(file.get("t-max")?).unwrap_or(1e5);
            let points = args.t_points.or(file.get("t-points")?).unwrap_or(10);
            if !(lo > 0.0 && hi > lo && points >= 2) {
                return Err(config_error(format!(
                    "bad time grid: t-min={lo}, t-max={hi}, t-points={points}"
                )));
            }
            log_spaced_grid(lo, hi, points)
        }
    };
    let fit_window = match args.fit_window.or(file.get_list("fit-window")?) {
        None => None,
        Some(v) if v.len() == 2 && v[0] < v[1] => Some((v[0], v[1])),
        Some(v) => {
            return Err(config_error(format!("bad fit-window {v:?}; want lo,hi")));
        }
    };

    let cfg = TimeSweepConfig {
        model,
        n_qubits: n,
        k,
        n_samples: samples,
        ensemble_kind: kind,
        t_grid,
        seed: common.seed,
        epsilon,
        fit_window,
    };
    let sweep = sweep_time(&cfg)?;

    let p0 = kind.at(n).collision_probability();
    let prediction = predict_frame_potential(k, p0).predicted;
    let n_pairs = (samples * (samples - 1)) as u64;
    let rows: Vec<Row> = sweep
        .points
        .iter()
        .map(|p| Row {
            t_max: Some(p.t_max),
            n_qubits: None,
            k,
            f_mean: p.f_mean,
            f_stderr: p.stderr,
            f_haar: factorial(k),
            delta_f: p.delta_f,
            prediction,
            p0,
            n_pairs,
            n_critical: None,
            status: Some("ok".into()),
        })
        .collect();

    output::write_atomic(
        &common.output,
        &output::render(Schema::SweepTime, &rows, common.format),
    )?;
    output::write_meta(
        &common.output,
        "sweep-time",
        json!({
            "model": model_name(model), "n": n, "k": k, "samples": samples,
            "pauli": pauli_name(kind), "seed": common.seed, "epsilon": epsilon,
            "t-grid": cfg.t_grid, "fit-window": fit_window.map(|w| vec![w.0, w.1]),
            "threads": common.threads, "format": common.format.extension(),
        }),
        json!({
            "H1": split_seed(common.seed, "H1"),
            "H2": split_seed(common.seed, "H2"),
            "per-point": "elements drawn from split_seed(seed, \"T{index}\")",
        }),
        json!({
            "crossing_T": sweep.crossing,
            "slope": sweep.slope.as_ref().map(|s| json!({
                "slope": s.slope, "intercept": s.intercept,
                "window": [s.window.0, s.window.1], "n_points": s.n_points,
            })),
            "mean_level_spacing_H1": sweep.mean_level_spacing.0,
            "mean_level_spacing_H2": sweep.mean_level_spacing.1,
        }),
        start.elapsed().as_secs_f64(),
    )?;
    Ok(())
}

fn cmd_sweep_size(args: config::SweepSizeArgs) -> anyhow::Result<()> {
    let start = Instant::now();
    let file = FileConfig::load(args.common.config.as_ref())?;
    let common = resolve_common(&args.common, &file, "sweep-size")?;
    init_threads(&common);

    let model = parse_model(
        &args
            .model
            .or(file.get::<String>("model")?)
            .unwrap_or_else(|| "gue".into()),
    )?;
    let k_list = args.k.or(file.get_list("k")?).unwrap_or_else(|| vec![2, 3]);
    let n_min = args.n_min.or(file.get("n-min")?).unwrap_or(2);
    let n_max = args.n_max.or(file.get("n-max")?).unwrap_or(DEFAULT_N);
    if n_min > n_max {
        return Err(config_error(format!("n-min {n_min} > n-max {n_max}")));
    }
    let kind = parse_pauli(
        &args
            .pauli
            .or(file.get::<String>("pauli")?)
            .unwrap_or_else(|| "iz".into()),
    )?;
    let t_max = args.t_max.or(file.get("T")?).unwrap_or(DEFAULT_T);
    let samples = args.samples.or(file.get("samples")?).unwrap_or(DEFAULT_SAMPLES);
    let eta = args
        .eta
        .or(file.get("eta")?)
        .unwrap_or(std::f64::consts::E.recip());
    let mem_budget = args
        .mem_budget
        .or(file.get("mem-budget")?)
        .unwrap_or(8 << 30);

    let cfg = SizeSweepConfig {
        model,
        k_list: k_list.clone(),
        n_range: (n_min..=n_max).collect(),
        ensemble_kind: kind,
        t_max,
        n_samples: samples,
        seed: common.seed,
        eta,
        mem_budget_bytes: mem_budget,
    };
    let sweep = sweep_system_size(&cfg)?;

    let n_pairs = (samples * (samples - 1)) as u64;
    let rows: Vec<Row> = sweep
        .cells
        .iter()
        .map(|cell| {
            let p0 = kind.at(cell.n_qubits).collision_probability();
            let (f_mean, f_stderr, delta_f) = cell.estimate.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
            Row {
                t_max: None,
                n_qubits: Some(cell.n_qubits),
                k: cell.k,
                f_mean,
                f_stderr,
                f_haar: factorial(cell.k),
                delta_f,
                prediction: predict_frame_potential(cell.k, p0).predicted,
                p0,
                n_pairs,
                n_critical: Some(cell.n_critical),
                status: Some(match &cell.skip_reason {
                    None => "ok".to_string(),
                    Some(reason) => format!("skipped: {reason}"),
                }),
            }
        })
        .collect();

    output::write_atomic(
        &common.output,
        &output::render(Schema::SweepSize, &rows, common.format),
    )?;
    output::write_meta(
        &common.output,
        "sweep-size",
        json!({
            "model": model_name(model), "k": k_list, "n-min": n_min, "n-max": n_max,
            "pauli": pauli_name(kind), "T": t_max, "samples": samples,
            "eta": eta, "mem-budget": mem_budget, "seed": common.seed,
            "threads": common.threads, "format": common.format.extension(),
        }),
        json!({
            "per-size": "H1, H2 from split_seed(seed, \"H{1,2}:N{n}\")",
            "per-cell": "elements from split_seed(seed, \"k{k}:N{n}\")",
        }),
        json!(null),
        start.elapsed().as_secs_f64(),
    )?;
    Ok(())
}

fn pauli_spectrum(args: config::PauliSpectrumArgs) -> anyhow::Result<()> {
    let start = Instant::now();
    let file = FileConfig::load(args.common.config.as_ref())?;
    let common = resolve_common(&args.common, &file, "pauli-spectrum")?;
    init_threads(&common);

    let model = parse_model(
        &args
            .model
            .or(file.get::<String>("model")?)
            .unwrap_or_else(|| "gue".into()),
    )?;
    let n = args.n.or(file.get("n")?).unwrap_or(DEFAULT_N);
    let samples = args.samples.or(file.get("samples")?).unwrap_or(10_000);
    let kind = parse_pauli(
        &args
            .pauli
            .or(file.get::<String>("pauli")?)
            .unwrap_or_else(|| "full".into()),
    )?;

    let seed_h1 = split_seed(common.seed, "H1");
    let seed_spectrum = split_seed(common.seed, "spectrum");
    let pair_spec = {
        let h = tempens_core::hamiltonian::HamiltonianModel {
            kind: model,
            n_qubits: n,
            seed: seed_h1,
        }
        .sample();
        tempens_core::linalg::hermitian_eigendecompose(&h, tempens_core::linalg::EIGEN_TOL)?
    };
    let mut rng = rand_chacha_rng(seed_spectrum);
    let sample = pauli_spectrum_samples(&pair_spec, &kind.at(n), samples, &mut rng)?;
    let report = gaussianity_report(&sample)?;

    let payload = match common.format {
        crate::config::OutputFormat::Csv => format!(
            "n_samples,mean,variance,claimed_variance,excess_kurtosis,ks_to_gaussian\n{},{},{},{},{},{}\n",
            samples, report.mean, report.variance, report.claimed_variance,
            report.excess_kurtosis, report.ks_to_gaussian
        ),
        crate::config::OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&json!({
                "n_samples": samples,
                "mean": report.mean,
                "variance": report.variance,
                "claimed_variance": report.claimed_variance,
                "excess_kurtosis": report.excess_kurtosis,
                "ks_to_gaussian": report.ks_to_gaussian,
            }))?;
            text.push('\n');
            text
        }
    };
    output::write_atomic(&common.output, &payload)?;

    if let Some(values_path) = &args.values {
        let mut text = String::from("index,c\n");
        for (i, v) in sample.values.iter().enumerate() {
            text.push_str(&format!("{i},{v}\n"));
        }
        output::write_atomic(values_path, &text)?;
    }

    output::write_meta(
        &common.output,
        "pauli-spectrum",
        json!({
            "model": model_name(model), "n": n, "samples": samples,
            "pauli": pauli_name(kind), "seed": common.seed,
            "threads": common.threads, "format": common.format.extension(),
        }),
        json!({"H1": seed_h1, "spectrum": seed_spectrum}),
        json!(null),
        start.elapsed().as_secs_f64(),
    )?;
    Ok(())
}

pub fn rand_chacha_rng(seed: u64) -> impl rand::Rng {
    use rand::SeedableRng as _;
    rand_chacha::ChaCha12Rng::seed_from_u64(seed)
}

fn model_name(model: ModelKind) -> &'static str {
    match model {
        ModelKind::Gue => "gue",
        ModelKind::RandomSpin => "spin",
    }
}

fn pauli_name(kind: PauliEnsembleKind) -> &'static str {
    match kind {
        PauliEnsembleKind::UniformFull => "full",
        PauliEnsembleKind::UniformIZ => "iz",
        PauliEnsembleKind::PrefixZ => "prefix-z",
        PauliEnsembleKind::IdentityOnly => "none",
    }
}
