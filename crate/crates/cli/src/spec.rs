//! The `--estimator` flag grammar and coefficient references.

use std::path::{Path, PathBuf};

use aauv::estimators::{
    coeffs_half_sample, coeffs_m_block, coeffs_random_feasible, coeffs_third_family,
};
use aauv::{CoefficientVector, Estimator};

use crate::error::{CliError, CliResult};
use crate::files::read_coefficient_file;

/// Where coefficients come from: a builtin construction sized by the
/// ambient sample size, or a coefficient file.
#[derive(Debug, Clone)]
pub enum CoeffsRef {
    Half,
    MBlock(usize),
    Random(u64),
    ThirdFamily { m: usize, k: usize },
    File(PathBuf),
}

impl CoeffsRef {
    pub fn parse(text: &str) -> CliResult<Self> {
        if text.is_empty() {
            return Err(CliError::Usage("empty coefficient reference".into()));
        }
        if text == "half" {
            return Ok(Self::Half);
        }
        if let Some(rest) = text.strip_prefix("mblock=") {
            let m = rest
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid block size `{rest}`")))?;
            return Ok(Self::MBlock(m));
        }
        if let Some(rest) = text.strip_prefix("random=") {
            let seed = rest
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid seed `{rest}`")))?;
            return Ok(Self::Random(seed));
        }
        if let Some(rest) = text.strip_prefix("family=") {
            let (m_text, k_text) = rest.split_once(',').ok_or_else(|| {
                CliError::Usage(format!("family reference needs `m,k`, got `{rest}`"))
            })?;
            let m = m_text
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid m `{m_text}`")))?;
            let k = k_text
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid k `{k_text}`")))?;
            return Ok(Self::ThirdFamily { m, k });
        }
        Ok(Self::File(PathBuf::from(text)))
    }

    /// Resolves to a concrete vector for samples of size `n`.
    pub fn resolve(&self, n: usize) -> CliResult<CoefficientVector> {
        match self {
            Self::Half => Ok(coeffs_half_sample(n)?),
            Self::MBlock(m) => Ok(coeffs_m_block(n, *m)?),
            Self::Random(seed) => Ok(coeffs_random_feasible(n, *seed)?),
            Self::ThirdFamily { m, k } => {
                let c = coeffs_third_family(*m, *k)?;
                if c.len() != n {
                    return Err(CliError::Usage(format!(
                        "third family m={m} k={k} has length {}, but n = {n}",
                        c.len()
                    )));
                }
                Ok(c)
            }
            Self::File(path) => {
                let c = read_coefficient_file(path)?.to_vector()?;
                if c.len() != n {
                    return Err(CliError::Usage(format!(
                        "{} carries {} weights, but n = {n}",
                        path.display(),
                        c.len()
                    )));
                }
                Ok(c)
            }
        }
    }

    pub fn input_path(&self) -> Option<&Path> {
        match self {
            Self::File(path) => Some(path),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum SpecKind {
    Naive,
    Unbiased,
    Aauv(CoeffsRef),
    Interpolated(CoeffsRef, f64),
    Third(CoeffsRef),
}

/// One parsed `--estimator` flag:
/// `naive | unbiased | aauv:<ref> | interp:<ref>:<lambda> | third:<ref>`.
#[derive(Debug, Clone)]
pub struct EstimatorSpec {
    pub text: String,
    pub kind: SpecKind,
}

impl EstimatorSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let kind = match text.split_once(':') {
            None => match text {
                "naive" => SpecKind::Naive,
                "unbiased" => SpecKind::Unbiased,
                "aauv" | "interp" | "third" => {
                    return Err(CliError::Usage(format!(
                        "estimator `{text}` needs coefficients, e.g. `{text}:half` \
                         or `{text}:coeffs.json`"
                    )))
                }
                other => {
                    return Err(CliError::Usage(format!("unknown estimator `{other}`")))
                }
            },
            Some(("naive", _) | ("unbiased", _)) => {
                return Err(CliError::Usage(format!(
                    "estimator takes no parameters: `{text}`"
                )))
            }
            Some(("aauv", rest)) => SpecKind::Aauv(CoeffsRef::parse(rest)?),
            Some(("third", rest)) => SpecKind::Third(CoeffsRef::parse(rest)?),
            Some(("interp", rest)) => {
                let (ref_text, lambda_text) = rest.rsplit_once(':').ok_or_else(|| {
                    CliError::Usage(format!(
                        "interp needs `interp:<coeffs>:<lambda>`, got `{text}`"
                    ))
                })?;
                let lambda = lambda_text
                    .parse()
                    .map_err(|_| CliError::Usage(format!("invalid lambda `{lambda_text}`")))?;
                SpecKind::Interpolated(CoeffsRef::parse(ref_text)?, lambda)
            }
            Some((other, _)) => {
                return Err(CliError::Usage(format!("unknown estimator `{other}`")))
            }
        };
        Ok(Self {
            text: text.to_string(),
            kind,
        })
    }

    /// Builds the validated estimator for samples of size `n`.
    pub fn build(&self, n: usize, tol: f64) -> CliResult<Estimator> {
        match &self.kind {
            SpecKind::Naive => Ok(Estimator::naive()),
            SpecKind::Unbiased => Ok(Estimator::unbiased()),
            SpecKind::Aauv(coeffs) => {
                Ok(Estimator::aauv_with_tol(coeffs.resolve(n)?, tol)?)
            }
            SpecKind::Interpolated(coeffs, lambda) => Ok(Estimator::interpolated_with_tol(
                coeffs.resolve(n)?,
                *lambda,
                tol,
            )?),
            SpecKind::Third(coeffs) => {
                Ok(Estimator::third_moment_with_tol(coeffs.resolve(n)?, tol)?)
            }
        }
    }

    pub fn input_path(&self) -> Option<&Path> {
        match &self.kind {
            SpecKind::Aauv(r) | SpecKind::Interpolated(r, _) | SpecKind::Third(r) => {
                r.input_path()
            }
            _ => None,
        }
    }
}
