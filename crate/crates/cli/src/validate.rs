//! The `validate` subcommand: a built-in verification battery that
//! exercises the small-dimension identities and oracles, printing one
//! PASS/FAIL line per check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use tempens_core::hamiltonian::{sample_gue, semicircle_ks_distance, spectral_width_stats};
use tempens_core::linalg::{
    hermitian_eigendecompose, sample_haar_unitary, ComplexMatrix, EIGEN_TOL,
};
use tempens_core::pauli::{PauliEnsembleKind, PauliString};
use tempens_core::protocol::{
    direct_overlap_oracle, estimate_frame_potentials_from_unitaries, exact_frame_potential,
    factorial, pair_overlap, SampledElement,
};
use tempens_core::seed::split_seed;
use tempens_core::C64;

use crate::config::{config_error, resolve_common, FileConfig, ValidateArgs};

/// At least one validation check failed. Exit code 3.
#[derive(Debug)]
pub struct ValidationFailed(pub usize);

impl std::fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} validation check(s) failed", self.0)
    }
}

impl std::error::Error for ValidationFailed {}

pub fn run(args: ValidateArgs) -> anyhow::Result<()> {
    let file = FileConfig::load(args.common.config.as_ref())?;
    let common = resolve_common(&args.common, &file, "validate")?;
    let level = args
        .level
        .or(file.get::<String>("level")?)
        .unwrap_or_else(|| "quick".into());
    if level != "quick" && level != "full" {
        return Err(config_error(format!(
            "unknown level {level:?}; expected quick or full"
        )));
    }

    let mut checks: Vec<(&str, fn(u64) -> Result<(), String>)> = vec![
        ("pauli-algebra", check_pauli_algebra),
        ("purity-sum", check_purity_sum),
        ("eigen-reconstruction", check_eigen_reconstruction),
        ("oracle-equivalence", check_oracle_equivalence),
        ("exact-1-design", check_exact_one_design),
    ];
    if level == "full" {
        checks.push(("gue-moments", check_gue_moments));
        checks.push(("semicircle", check_semicircle));
        checks.push(("haar-baseline", check_haar_baseline));
    }

    let mut failed = 0usize;
    for (name, check) in checks {
        match check(common.seed) {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(anyhow::Error::new(ValidationFailed(failed)));
    }
    Ok(())
}

fn check_pauli_algebra(_seed: u64) -> Result<(), String> {
    for n in 1..=3u32 {
        let count = 1u64 << (2 * n);
        for code in 0..count {
            let p = PauliString::new(n, code & ((1 << n) - 1), code >> n)
                .map_err(|e| e.to_string())?;
            let dense = p.to_dense();
            if dense.sub(&dense.adjoint()).maxnorm() > 1e-14 {
                return Err(format!("{p} is not Hermitian"));
            }
            let sq = dense.mul(&dense).map_err(|e| e.to_string())?;
            if sq.sub(&ComplexMatrix::identity(dense.dim())).maxnorm() > 1e-14 {
                return Err(format!("{p}^2 is not the identity"));
            }
        }
    }
    Ok(())
}

fn check_purity_sum(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(split_seed(seed, "validate:purity"));
    for n in 1..=4u32 {
        let d = 1usize << n;
        let mut psi: Vec<C64> = (0..d)
            .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut psi {
            *z /= norm;
        }
        let mut total = 0.0;
        for code in 0..(1u64 << (2 * n)) {
            let p = PauliString::new(n, code & ((1 << n) - 1), code >> n)
                .map_err(|e| e.to_string())?;
            let c = p.expectation(&psi);
            if c.im.abs() > 1e-10 {
                return Err(format!("imaginary residue {:.3e}", c.im));
            }
            total += c.re * c.re;
        }
        if (total - d as f64).abs() > 1e-9 {
            return Err(format!("purity sum at N={n} is {total}, want {d}"));
        }
    }
    Ok(())
}

fn check_eigen_reconstruction(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(split_seed(seed, "validate:eigen"));
    let h = sample_gue(4, &mut rng);
    let spec = hermitian_eigendecompose(&h, EIGEN_TOL).map_err(|e| e.to_string())?;
    let err = spec.reconstruct().sub(&h).frobenius_norm();
    let bound = 1e-10 * h.frobenius_norm();
    if err > bound {
        return Err(format!("residual {err:.3e} > {bound:.3e}"));
    }
    Ok(())
}

fn check_oracle_equivalence(seed: u64) -> Result<(), String> {
    for n in 2..=4u32 {
        let stream = split_seed(seed, &format!("validate:oracle:{n}"));
        let mut rng = ChaCha12Rng::seed_from_u64(stream);
        let h1 = sample_gue(n, &mut rng);
        let h2 = sample_gue(n, &mut rng);
        let pair = prepare_pair_from(&h1, &h2).map_err(|e| e.to_string())?;
        let ensemble = PauliEnsembleKind::UniformFull.at(n);
        for trial in 0..50 {
            let mut draw = || -> Result<SampledElement, String> {
                let t1 = rng.gen::<f64>() * 1000.0;
                let t2 = rng.gen::<f64>() * 1000.0;
                SampledElement::build(t1, t2, ensemble.sample(&mut rng), &pair)
                    .map_err(|e| e.to_string())
            };
            let e = draw()?;
            let f = draw()?;
            let fast = pair_overlap(&e, &f).map_err(|e| e.to_string())?;
            let slow = direct_overlap_oracle(&e, &f, &h1, &h2).map_err(|e| e.to_string())?;
            let scale = fast.norm().max(slow.norm()).max(1.0);
            if (fast - slow).norm() > 1e-8 * scale {
                return Err(format!(
                    "N={n} trial {trial}: kernel {fast} vs oracle {slow}"
                ));
            }
        }
    }
    Ok(())
}

fn prepare_pair_from(
    h1: &ComplexMatrix,
    h2: &ComplexMatrix,
) -> anyhow::Result<tempens_core::EvolutionPair> {
    Ok(tempens_core::EvolutionPair::new(
        hermitian_eigendecompose(h1, EIGEN_TOL)?,
        hermitian_eigendecompose(h2, EIGEN_TOL)?,
    )?)
}

fn check_exact_one_design(_seed: u64) -> Result<(), String> {
    let mats: Vec<ComplexMatrix> = ["I", "X", "Y", "Z"]
        .iter()
        .map(|s| s.parse::<PauliString>().unwrap().to_dense())
        .collect();
    let f1 = exact_frame_potential(&mats, 1);
    if (f1 - 1.0).abs() > 1e-12 {
        return Err(format!("single-qubit Pauli group F(1) = {f1}, want 1"));
    }
    Ok(())
}

fn check_gue_moments(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(split_seed(seed, "validate:gue"));
    let n = 20_000usize;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let h = sample_gue(2, &mut rng);
        let v = h.get(0, 1).norm_sqr();
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let var = sum_sq / n as f64 - mean * mean;
    let se = (var / n as f64).sqrt();
    if (mean - 0.125).abs() > 3.0 * se {
        return Err(format!("E|H12|^2 = {mean:.5}, want 0.125 +- {:.5}", 3.0 * se));
    }
    Ok(())
}

fn check_semicircle(seed: u64) -> Result<(), String> {
    let mut ok = 0;
    let draws = 3;
    for i in 0..draws {
        let mut rng = ChaCha12Rng::seed_from_u64(split_seed(seed, &format!("validate:sc:{i}")));
        let h = sample_gue(7, &mut rng);
        let spec = hermitian_eigendecompose(&h, EIGEN_TOL).map_err(|e| e.to_string())?;
        let stats = spectral_width_stats(&spec);
        if semicircle_ks_distance(&spec) <= 0.1 && (1.2..=1.6).contains(&stats.radius) {
            ok += 1;
        }
    }
    if ok < draws - 1 {
        return Err(format!("only {ok}/{draws} draws matched the semicircle"));
    }
    Ok(())
}

fn check_haar_baseline(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha12Rng::seed_from_u64(split_seed(seed, "validate:haar"));
    let mats: Vec<ComplexMatrix> = (0..200).map(|_| sample_haar_unitary(32, &mut rng)).collect();
    let ests =
        estimate_frame_potentials_from_unitaries(&mats, &[1, 2]).map_err(|e| e.to_string())?;
    for est in &ests {
        let expect = factorial(est.k);
        if (est.mean - expect).abs() > 3.0 * est.stderr {
            return Err(format!(
                "k={}: {} +- {} vs Haar {expect}",
                est.k, est.mean, est.stderr
            ));
        }
    }
    Ok(())
}

