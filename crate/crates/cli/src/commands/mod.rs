mod check;
mod coeffs;
mod enumerate;
mod estimate;
mod mc;
mod symmetrize;

use crate::args::{Cli, Command};
use crate::error::CliResult;

/// Agreement tolerance for exact claims: relative, with an absolute floor
/// at magnitude 1.
pub const EXACT_CLAIM_TOL: f64 = 1e-10;

/// Bias-consistency margin, in standard errors, for Monte Carlo claims.
pub const MC_SIGMA_MARGIN: f64 = 4.0;

/// Agreement margin, in standard errors, for sampled symmetrization.
pub const SAMPLED_SIGMA_MARGIN: f64 = 5.0;

/// Dispatches a parsed invocation. `Ok(true)` means the command's
/// mathematical claim held (exit 0), `Ok(false)` that it was violated
/// (exit 2).
pub fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Coeffs { family } => coeffs::run(family, cli.json),
        Command::Estimate(args) => estimate::run(args, cli.json),
        Command::Check(args) => check::run(args, cli.json),
        Command::Symmetrize(args) => symmetrize::run(args, cli.json),
        Command::Mc(args) => mc::run(args, cli.json),
        Command::Enumerate(args) => enumerate::run(args, cli.json),
    }
}

/// Space-separated shortest round-trip rendering of a float list.
pub fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Prints either the JSON document or the prepared human rendering.
pub fn emit(json: bool, output: &impl serde::Serialize, human: &str) {
    if json {
        println!(
            "{}",
            serde_json::to_string(output).expect("command output serializes")
        );
    } else {
        println!("{human}");
    }
}
