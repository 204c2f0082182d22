use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "aauv",
    version,
    about = "Average-adjusted unbiased variance toolkit",
    long_about = "Estimators that stay unbiased with denominator N by adjusting the mean \
                  estimator, their coefficient constructions, permutation symmetrization, \
                  and exact/Monte-Carlo verification engines."
)]
pub struct Cli {
    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a coefficient vector and echo its condition residuals
    Coeffs {
        #[command(subcommand)]
        family: CoeffsFamily,
    },
    /// Apply an estimator to a data file
    Estimate(EstimateArgs),
    /// Check the feasibility conditions of a coefficient file
    Check(CheckArgs),
    /// Average an order-sensitive estimator over sample permutations
    Symmetrize(SymmetrizeArgs),
    /// Seeded Monte Carlo bias and variance experiments
    Mc(McArgs),
    /// Exact expectation of an estimator over a discrete distribution
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Subcommand)]
pub enum CoeffsFamily {
    /// First n/2 weights are 2/n, the rest zero (n must be even)
    Half {
        #[arg(long)]
        n: usize,
        /// Write the coefficient file here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-level block weights for block size m (1 <= m < n)
    Mblock {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Order-3 family with n = 2m + k: m weights alpha, m weights -alpha, k weights 1/k
    Third {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniform random point on the order-2 feasibility manifold
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Data file: one decimal per line, blank lines ignored
    #[arg(long)]
    pub data: PathBuf,

    /// naive | unbiased | aauv | interp | third, or a full spec such as
    /// aauv:half, interp:coeffs.json:0.5, third:family=1,2
    #[arg(long)]
    pub estimator: String,

    /// Coefficient file, required by aauv/interp/third when the estimator
    /// is given in short form
    #[arg(long)]
    pub coeffs: Option<PathBuf>,

    /// Interpolation parameter, required by interp in short form
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Feasibility tolerance override (absolute, applied to both residuals)
    #[arg(long)]
    pub tol: Option<f64>,

    /// Write a result record here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Coefficient file to check
    #[arg(long)]
    pub coeffs: PathBuf,

    /// Condition order to check (2 or 3); defaults to the file's declared order
    #[arg(long)]
    pub order: Option<u8>,

    /// Feasibility tolerance override
    #[arg(long)]
    pub tol: Option<f64>,

    /// Write a result record here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exact", "samples"])))]
pub struct SymmetrizeArgs {
    /// Data file: one decimal per line
    #[arg(long)]
    pub data: PathBuf,

    /// Coefficient file (order 2)
    #[arg(long)]
    pub coeffs: PathBuf,

    /// Interpolation parameter; omitted averages the plain adjusted estimator
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Enumerate all N! permutations exactly (N <= 8)
    #[arg(long)]
    pub exact: bool,

    /// Average over this many sampled permutations instead
    #[arg(long)]
    pub samples: Option<u64>,

    /// Master seed for sampled mode
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write a result record here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Distribution spec, e.g. normal:mu=0,sd=1 or discrete:values=0|3,probs=0.5|0.5
    #[arg(long)]
    pub dist: String,

    /// Sample size per replicate
    #[arg(long)]
    pub n: usize,

    /// Number of replicates (at least 100)
    #[arg(long)]
    pub reps: u64,

    /// Master seed
    #[arg(long)]
    pub seed: u64,

    /// Estimator spec, repeatable: naive | unbiased | aauv:<ref> |
    /// interp:<ref>:<lambda> | third:<ref> where <ref> is half, mblock=M,
    /// random=SEED, family=M,K, or a coefficient file path
    #[arg(long = "estimator", required = true)]
    pub estimators: Vec<String>,

    /// Write a result record here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Discrete distribution spec: discrete:values=...,probs=...
    #[arg(long)]
    pub dist: String,

    /// Sample size
    #[arg(long)]
    pub n: usize,

    /// Estimator spec (same grammar as mc)
    #[arg(long)]
    pub estimator: String,

    /// Write a result record here
    #[arg(long)]
    pub out: Option<PathBuf>,
}
