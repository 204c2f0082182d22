use std::fmt::Write as _;

use serde::Serialize;

use aauv::verify::{
    exact_expectation, parse_distribution, target_moment, theoretical_expectation,
};
use aauv::DEFAULT_FEASIBILITY_TOL;

use crate::args::EnumerateArgs;
use crate::commands::{emit, EXACT_CLAIM_TOL};
use crate::error::{CliError, CliResult};
use crate::record::write_record;
use crate::spec::EstimatorSpec;

#[derive(Debug, Serialize)]
struct EnumerateOutput {
    command: &'static str,
    dist: String,
    n: usize,
    estimator: String,
    expectation: f64,
    /// The true moment targeted (sigma^2 or mu3).
    target_moment: f64,
    /// What the estimator's expectation should be; differs from the
    /// target only for the biased naive form.
    theoretical_expectation: f64,
    difference: f64,
    claim_held: bool,
}

pub fn run(args: EnumerateArgs, json: bool) -> CliResult<bool> {
    let dist = parse_distribution(&args.dist)?;
    if !dist.is_discrete() {
        return Err(CliError::Usage(
            "enumeration requires a discrete distribution".into(),
        ));
    }
    let spec = EstimatorSpec::parse(&args.estimator)?;
    let estimator = spec.build(args.n, DEFAULT_FEASIBILITY_TOL)?;

    let expectation = exact_expectation(&dist, args.n, &estimator)?;
    let target = target_moment(&estimator, &dist);
    let theoretical = theoretical_expectation(&estimator, &dist, args.n);
    let difference = expectation - target;
    let claim_held = (expectation - theoretical).abs()
        <= EXACT_CLAIM_TOL * theoretical.abs().max(expectation.abs()).max(1.0);

    let output = EnumerateOutput {
        command: "enumerate",
        dist: args.dist.clone(),
        n: args.n,
        estimator: spec.text.clone(),
        expectation,
        target_moment: target,
        theoretical_expectation: theoretical,
        difference,
        claim_held,
    };

    let mut human = String::new();
    let _ = writeln!(human, "dist: {}", output.dist);
    let _ = writeln!(human, "n: {}", output.n);
    let _ = writeln!(human, "estimator: {}", output.estimator);
    let _ = writeln!(human, "expectation: {}", output.expectation);
    let _ = writeln!(human, "target_moment: {}", output.target_moment);
    if output.theoretical_expectation != output.target_moment {
        let _ = writeln!(
            human,
            "theoretical_expectation: {}",
            output.theoretical_expectation
        );
    }
    let _ = writeln!(human, "difference: {}", output.difference);
    let _ = write!(human, "claim_held: {claim_held}");
    emit(json, &output, &human);

    if let Some(out) = &args.out {
        let inputs: Vec<&std::path::Path> = spec.input_path().into_iter().collect();
        write_record(out, &inputs, None, &output)?;
    }

    Ok(claim_held)
}
