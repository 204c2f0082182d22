use std::fmt::Write as _;

use serde::Serialize;

use aauv::symmetry::{
    permutation_average_exact, permutation_average_lambda_exact, permutation_average_sampled,
};
use aauv::AverageMode;

use crate::args::SymmetrizeArgs;
use crate::commands::{emit, EXACT_CLAIM_TOL, SAMPLED_SIGMA_MARGIN};
use crate::error::CliResult;
use crate::files::{read_coefficient_file, read_data_file};
use crate::record::write_record;

#[derive(Debug, Serialize)]
struct SymmetrizeOutput {
    command: &'static str,
    data: String,
    coeffs: String,
    n: usize,
    lambda: Option<f64>,
    mode: AverageMode,
    q: f64,
    reference_s2: f64,
    difference: f64,
    permutations_used: u64,
    stderr: Option<f64>,
    seed: Option<u64>,
    claim_held: bool,
}

pub fn run(args: SymmetrizeArgs, json: bool) -> CliResult<bool> {
    let sample = read_data_file(&args.data)?;
    let vector = read_coefficient_file(&args.coeffs)?.to_vector()?;

    let result = if args.exact {
        match args.lambda {
            None => permutation_average_exact(&sample, &vector)?,
            Some(lambda) => permutation_average_lambda_exact(&sample, &vector, lambda)?,
        }
    } else {
        let reps = args.samples.expect("clap enforces the mode group");
        permutation_average_sampled(&sample, &vector, args.lambda, reps, args.seed)?
    };

    let difference = result.q - result.reference_s2;
    let claim_held = match result.mode {
        AverageMode::Exact => {
            difference.abs() <= EXACT_CLAIM_TOL * result.reference_s2.abs().max(1.0)
        }
        AverageMode::Sampled => {
            difference.abs() <= SAMPLED_SIGMA_MARGIN * result.stderr.unwrap_or(0.0)
        }
    };

    let seed = match result.mode {
        AverageMode::Exact => None,
        AverageMode::Sampled => Some(args.seed),
    };
    let output = SymmetrizeOutput {
        command: "symmetrize",
        data: args.data.display().to_string(),
        coeffs: args.coeffs.display().to_string(),
        n: sample.len(),
        lambda: args.lambda,
        mode: result.mode,
        q: result.q,
        reference_s2: result.reference_s2,
        difference,
        permutations_used: result.permutations_used,
        stderr: result.stderr,
        seed,
        claim_held,
    };

    let mut human = String::new();
    let _ = writeln!(
        human,
        "mode: {}",
        match result.mode {
            AverageMode::Exact => "exact",
            AverageMode::Sampled => "sampled",
        }
    );
    let _ = writeln!(human, "n: {}", output.n);
    if let Some(lambda) = output.lambda {
        let _ = writeln!(human, "lambda: {lambda}");
    }
    let _ = writeln!(human, "q: {}", output.q);
    let _ = writeln!(human, "reference_s2: {}", output.reference_s2);
    let _ = writeln!(human, "difference: {}", output.difference);
    let _ = writeln!(human, "permutations_used: {}", output.permutations_used);
    if let Some(stderr) = output.stderr {
        let _ = writeln!(human, "stderr: {stderr}");
    }
    if let Some(seed) = output.seed {
        let _ = writeln!(human, "seed: {seed}");
    }
    let _ = write!(human, "claim_held: {claim_held}");
    emit(json, &output, &human);

    if let Some(out) = &args.out {
        write_record(out, &[&args.data, &args.coeffs], seed, &output)?;
    }

    Ok(claim_held)
}
