use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use aauv::estimators::{
    aauv_with_tol, interpolated_variance_with_tol, naive_variance, third_moment_estimator_with_tol,
    unbiased_variance,
};
use aauv::{EstimateReport, DEFAULT_FEASIBILITY_TOL};

use crate::args::EstimateArgs;
use crate::commands::emit;
use crate::error::{CliError, CliResult};
use crate::files::read_data_file;
use crate::record::write_record;
use crate::spec::{CoeffsRef, EstimatorSpec, SpecKind};

#[derive(Debug, Serialize)]
struct EstimateOutput {
    command: &'static str,
    data: String,
    estimator: String,
    report: EstimateReport,
}

/// Merges the short flag form (`--estimator aauv --coeffs file`) and the
/// spec grammar (`--estimator aauv:half`) into one parsed spec.
fn resolve_spec(args: &EstimateArgs) -> CliResult<EstimatorSpec> {
    if args.estimator.contains(':') {
        if args.coeffs.is_some() || args.lambda.is_some() {
            return Err(CliError::Usage(
                "give parameters either inside the estimator spec or via \
                 --coeffs/--lambda, not both"
                    .into(),
            ));
        }
        return EstimatorSpec::parse(&args.estimator);
    }
    let coeffs_file = || -> CliResult<CoeffsRef> {
        let path = args.coeffs.clone().ok_or_else(|| {
            CliError::Usage(format!(
                "missing coefficients for estimator `{}`: pass --coeffs <file>",
                args.estimator
            ))
        })?;
        Ok(CoeffsRef::File(path))
    };
    let kind = match args.estimator.as_str() {
        "naive" | "unbiased" => {
            if args.coeffs.is_some() || args.lambda.is_some() {
                return Err(CliError::Usage(format!(
                    "estimator `{}` takes no --coeffs/--lambda",
                    args.estimator
                )));
            }
            if args.estimator == "naive" {
                SpecKind::Naive
            } else {
                SpecKind::Unbiased
            }
        }
        "aauv" | "third" => {
            if args.lambda.is_some() {
                return Err(CliError::Usage(format!(
                    "estimator `{}` takes no --lambda",
                    args.estimator
                )));
            }
            if args.estimator == "aauv" {
                SpecKind::Aauv(coeffs_file()?)
            } else {
                SpecKind::Third(coeffs_file()?)
            }
        }
        "interp" => {
            let lambda = args.lambda.ok_or_else(|| {
                CliError::Usage("estimator `interp` needs --lambda".into())
            })?;
            SpecKind::Interpolated(coeffs_file()?, lambda)
        }
        other => return Err(CliError::Usage(format!("unknown estimator `{other}`"))),
    };
    Ok(EstimatorSpec {
        text: args.estimator.clone(),
        kind,
    })
}

pub fn run(args: EstimateArgs, json: bool) -> CliResult<bool> {
    let sample = read_data_file(&args.data)?;
    let n = sample.len();
    let tol = args.tol.unwrap_or(DEFAULT_FEASIBILITY_TOL);
    let spec = resolve_spec(&args)?;

    let report: EstimateReport = match &spec.kind {
        SpecKind::Naive => naive_variance(&sample),
        SpecKind::Unbiased => unbiased_variance(&sample)?,
        SpecKind::Aauv(r) => aauv_with_tol(&sample, &r.resolve(n)?, tol)?,
        SpecKind::Interpolated(r, lambda) => {
            interpolated_variance_with_tol(&sample, &r.resolve(n)?, *lambda, tol)?
        }
        SpecKind::Third(r) => third_moment_estimator_with_tol(&sample, &r.resolve(n)?, tol)?,
    };

    let output = EstimateOutput {
        command: "estimate",
        data: args.data.display().to_string(),
        estimator: spec.text.clone(),
        report,
    };

    let mut human = String::new();
    let _ = writeln!(human, "estimator: {}", output.report.estimator_id().as_str());
    let _ = writeln!(human, "n: {}", output.report.n());
    if let Some(lambda) = output.report.lambda() {
        let _ = writeln!(human, "lambda: {lambda}");
    }
    let _ = write!(human, "estimate: {}", output.report.estimate());
    emit(json, &output, &human);

    if let Some(out) = &args.out {
        let mut inputs: Vec<&Path> = vec![&args.data];
        if let Some(path) = spec.input_path() {
            inputs.push(path);
        }
        write_record(out, &inputs, None, &output)?;
    }

    Ok(true)
}
