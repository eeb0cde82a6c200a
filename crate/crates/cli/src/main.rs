//! `tempens` — frame-potential experiments on the temporal ensemble of two
//! chaotic Hamiltonian evolutions with an intermediate random Pauli
//! operation.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical error.

mod commands;
mod config;
mod output;
mod validate;

use std::process::ExitCode;

use clap::Parser;

use config::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap prints help/version with status 0 and usage errors with 2.
        Err(e) => e.exit(),
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::from(0),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// Map an error chain onto the documented exit codes.
fn classify(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<tempens_core::linalg::LinalgError>() {
            return match e {
                tempens_core::linalg::LinalgError::Convergence { .. } => 3,
                _ => 2,
            };
        }
        if let Some(e) = cause.downcast_ref::<tempens_core::protocol::ProtocolError>() {
            return match e {
                tempens_core::protocol::ProtocolError::Linalg(
                    tempens_core::linalg::LinalgError::Convergence { .. },
                ) => 3,
                _ => 2,
            };
        }
        if cause
            .downcast_ref::<tempens_core::analysis::AnalysisError>()
            .is_some()
        {
            return 2;
        }
        if cause.downcast_ref::<config::ConfigError>().is_some() {
            return 2;
        }
        if cause.downcast_ref::<validate::ValidationFailed>().is_some() {
            return 3;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 1;
        }
    }
    1
}
