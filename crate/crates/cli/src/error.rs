use aauv::Error;

/// CLI failure split by exit code: usage and parse problems exit 1,
/// violated mathematical claims exit 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Claim(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            // feeding infeasible coefficients into a gated estimator is a
            // broken mathematical claim, not a usage slip
            Error::InfeasibleOrder2 { .. } | Error::InfeasibleOrder3 { .. } => {
                CliError::Claim(err.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}
