use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use aauv::estimators::{
    check_order2_conditions, check_order3_conditions, coeffs_half_sample, coeffs_m_block,
    coeffs_random_feasible, coeffs_third_family,
};
use aauv::{CoefficientVector, MomentOrder, DEFAULT_FEASIBILITY_TOL};

use crate::args::CoeffsFamily;
use crate::commands::{emit, join_floats};
use crate::error::CliResult;
use crate::files::{write_coefficient_file, CoefficientFile};

#[derive(Debug, Serialize)]
struct CoeffsOutput {
    command: &'static str,
    family: &'static str,
    n: usize,
    order: u8,
    c: Vec<f64>,
    provenance: String,
    residual_sum: f64,
    residual_sumsq: Option<f64>,
    residual_k3: Option<f64>,
    feasible: bool,
}

pub fn run(family: CoeffsFamily, json: bool) -> CliResult<bool> {
    let (name, vector, provenance, out): (&'static str, CoefficientVector, String, Option<PathBuf>) =
        match family {
            CoeffsFamily::Half { n, out } => (
                "half",
                coeffs_half_sample(n)?,
                format!("half-sample n={n}"),
                out,
            ),
            CoeffsFamily::Mblock { n, m, out } => (
                "mblock",
                coeffs_m_block(n, m)?,
                format!("m-block n={n} m={m}"),
                out,
            ),
            CoeffsFamily::Third { m, k, out } => (
                "third",
                coeffs_third_family(m, k)?,
                format!("third-family m={m} k={k}"),
                out,
            ),
            CoeffsFamily::Random { n, seed, out } => (
                "random",
                coeffs_random_feasible(n, seed)?,
                format!("random-feasible n={n} seed={seed}"),
                out,
            ),
        };

    // generation bug guard: a construction that misses its own conditions
    // must not exit cleanly
    let (residual_sum, residual_sumsq, residual_k3, feasible) = match vector.order() {
        MomentOrder::Two => {
            let r = check_order2_conditions(&vector);
            (r.sum, Some(r.sum_sq), None, r.within(DEFAULT_FEASIBILITY_TOL))
        }
        MomentOrder::Three => {
            let r = check_order3_conditions(&vector);
            (r.sum, None, Some(r.k3), r.within(DEFAULT_FEASIBILITY_TOL))
        }
    };

    let output = CoeffsOutput {
        command: "coeffs",
        family: name,
        n: vector.len(),
        order: vector.order().as_u8(),
        c: vector.weights().to_vec(),
        provenance: provenance.clone(),
        residual_sum,
        residual_sumsq,
        residual_k3,
        feasible,
    };

    if let Some(path) = &out {
        write_coefficient_file(path, &CoefficientFile::from_vector(&vector, provenance))?;
    }

    let mut human = String::new();
    let _ = writeln!(human, "family: {}", output.family);
    let _ = writeln!(human, "n: {}", output.n);
    let _ = writeln!(human, "order: {}", output.order);
    let _ = writeln!(human, "c: {}", join_floats(&output.c));
    let _ = writeln!(human, "provenance: {}", output.provenance);
    let _ = writeln!(human, "residual_sum: {}", output.residual_sum);
    if let Some(r) = output.residual_sumsq {
        let _ = writeln!(human, "residual_sumsq: {r}");
    }
    if let Some(r) = output.residual_k3 {
        let _ = writeln!(human, "residual_k3: {r}");
    }
    let _ = write!(human, "feasible: {}", output.feasible);
    if let Some(path) = &out {
        let _ = write!(human, "\nwrote: {}", path.display());
    }
    emit(json, &output, &human);

    Ok(feasible)
}
