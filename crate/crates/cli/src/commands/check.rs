use std::fmt::Write as _;

use serde::Serialize;

use aauv::estimators::{
    check_order2_conditions, check_order3_conditions, coeff_bound, pairwise_product_sum,
};
use aauv::{MomentOrder, DEFAULT_FEASIBILITY_TOL};

use crate::args::CheckArgs;
use crate::commands::{emit, join_floats};
use crate::error::{CliError, CliResult};
use crate::files::read_coefficient_file;
use crate::record::write_record;

/// The entry bound is a closed interval attained exactly by m = 1 block
/// weights; this slack covers the rounding between the two expressions.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Serialize)]
struct CheckOutput {
    command: &'static str,
    coeffs: String,
    n: usize,
    order: u8,
    tolerance: f64,
    residual_sum: f64,
    residual_sumsq: Option<f64>,
    residual_k3: Option<f64>,
    feasible: bool,
    bound_lo: Option<f64>,
    bound_hi: Option<f64>,
    bound_violations: Vec<usize>,
    pairwise_product_sum: Option<f64>,
    pairwise_expected: Option<f64>,
}

pub fn run(args: CheckArgs, json: bool) -> CliResult<bool> {
    let file = read_coefficient_file(&args.coeffs)?;
    let vector = file.to_vector()?;
    let order = match args.order {
        None => vector.order(),
        Some(o) => MomentOrder::from_u8(o)
            .ok_or_else(|| CliError::Usage(format!("--order must be 2 or 3, got {o}")))?,
    };
    let tol = args.tol.unwrap_or(DEFAULT_FEASIBILITY_TOL);
    let n = vector.len();

    let (residual_sum, residual_sumsq, residual_k3, feasible) = match order {
        MomentOrder::Two => {
            let r = check_order2_conditions(&vector);
            (r.sum, Some(r.sum_sq), None, r.within(tol))
        }
        MomentOrder::Three => {
            let r = check_order3_conditions(&vector);
            (r.sum, None, Some(r.k3), r.within(tol))
        }
    };

    // entry bound and pairwise-product identity are order-2 facts
    let (bound_lo, bound_hi, bound_violations, pairwise, pairwise_expected) = match order {
        MomentOrder::Two => {
            let (lo, hi) = coeff_bound(n);
            let violations: Vec<usize> = vector
                .weights()
                .iter()
                .enumerate()
                .filter(|(_, &w)| w < lo - BOUND_SLACK || w > hi + BOUND_SLACK)
                .map(|(i, _)| i)
                .collect();
            (
                Some(lo),
                Some(hi),
                violations,
                Some(pairwise_product_sum(&vector)),
                Some((n as f64 - 2.0) / n as f64),
            )
        }
        MomentOrder::Three => (None, None, Vec::new(), None, None),
    };

    let output = CheckOutput {
        command: "check",
        coeffs: args.coeffs.display().to_string(),
        n,
        order: order.as_u8(),
        tolerance: tol,
        residual_sum,
        residual_sumsq,
        residual_k3,
        feasible,
        bound_lo,
        bound_hi,
        bound_violations,
        pairwise_product_sum: pairwise,
        pairwise_expected,
    };

    let mut human = String::new();
    let _ = writeln!(human, "coeffs: {}", output.coeffs);
    let _ = writeln!(human, "n: {n}");
    let _ = writeln!(human, "order: {}", output.order);
    let _ = writeln!(human, "c: {}", join_floats(vector.weights()));
    let _ = writeln!(human, "tolerance: {tol}");
    let _ = writeln!(human, "residual_sum: {residual_sum}");
    if let Some(r) = residual_sumsq {
        let _ = writeln!(human, "residual_sumsq: {r}");
    }
    if let Some(r) = residual_k3 {
        let _ = writeln!(human, "residual_k3: {r}");
    }
    if let (Some(lo), Some(hi)) = (output.bound_lo, output.bound_hi) {
        let _ = writeln!(human, "bound: [{lo}, {hi}]");
        if output.bound_violations.is_empty() {
            let _ = writeln!(human, "bound_violations: none");
        } else {
            let _ = writeln!(
                human,
                "bound_violations: indices {:?}",
                output.bound_violations
            );
        }
    }
    if let (Some(p), Some(e)) = (output.pairwise_product_sum, output.pairwise_expected) {
        let _ = writeln!(human, "pairwise_product_sum: {p} (expected {e})");
    }
    let _ = write!(human, "feasible: {feasible}");
    emit(json, &output, &human);

    if let Some(out) = &args.out {
        write_record(out, &[&args.coeffs], None, &output)?;
    }

    Ok(feasible)
}
