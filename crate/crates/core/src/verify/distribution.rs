//! Sampling distributions with known moments.

use rand::Rng;
use rand_distr::{Distribution as _, Exp, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric;

/// A named distribution with validated parameters and closed-form moments.
///
/// Continuous draws use fixed, documented methods so that a seed pins the
/// sequence: normal via the ziggurat behind `rand_distr::StandardNormal`,
/// exponential via `rand_distr::Exp`, uniform by scaling a standard
/// 53-bit uniform draw. Discrete draws walk the cumulative distribution
/// in support order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Normal { mu: f64, sd: f64 },
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Discrete { values: Vec<f64>, probs: Vec<f64> },
}

/// Discrete probabilities must sum to 1 within this tolerance.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

impl DistributionSpec {
    pub fn normal(mu: f64, sd: f64) -> Result<Self> {
        if !mu.is_finite() || !sd.is_finite() || sd <= 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "normal requires finite mu and sd > 0, got mu = {mu}, sd = {sd}"
            )));
        }
        Ok(Self::Normal { mu, sd })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::InvalidDistribution(format!(
                "uniform requires finite a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(Self::Uniform { a, b })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "exponential requires rate > 0, got {rate}"
            )));
        }
        Ok(Self::Exponential { rate })
    }

    pub fn discrete(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDistribution(
                "discrete support must be non-empty".into(),
            ));
        }
        if values.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "discrete has {} support values but {} probabilities",
                values.len(),
                probs.len()
            )));
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "discrete support value {v} is not finite"
                )));
            }
        }
        for (i, v) in values.iter().enumerate() {
            if values[..i].contains(v) {
                return Err(Error::InvalidDistribution(format!(
                    "discrete support values must be distinct, {v} repeats"
                )));
            }
        }
        for &p in &probs {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "discrete probabilities must be finite and >= 0, got {p}"
                )));
            }
        }
        let sum = numeric::total(probs.iter().copied());
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "discrete probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self::Discrete { values, probs })
    }

    /// A single-point discrete law sitting at `value`.
    pub fn point_mass(value: f64) -> Result<Self> {
        Self::discrete(vec![value], vec![1.0])
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Discrete { .. })
    }

    /// Number of support points; `None` for continuous laws.
    pub fn support_size(&self) -> Option<usize> {
        match self {
            Self::Discrete { values, .. } => Some(values.len()),
            _ => None,
        }
    }

    /// True mean.
    pub fn mean(&self) -> f64 {
        match self {
            Self::Normal { mu, .. } => *mu,
            Self::Uniform { a, b } => 0.5 * (a + b),
            Self::Exponential { rate } => 1.0 / rate,
            Self::Discrete { values, probs } => {
                numeric::total(values.iter().zip(probs).map(|(&v, &p)| p * v))
            }
        }
    }

    /// True variance.
    pub fn variance(&self) -> f64 {
        match self {
            Self::Normal { sd, .. } => sd * sd,
            Self::Uniform { a, b } => (b - a) * (b - a) / 12.0,
            Self::Exponential { rate } => 1.0 / (rate * rate),
            Self::Discrete { values, probs } => {
                let mu = self.mean();
                numeric::total(
                    values
                        .iter()
                        .zip(probs)
                        .map(|(&v, &p)| p * (v - mu) * (v - mu)),
                )
            }
        }
    }

    /// True third central moment.
    pub fn third_central_moment(&self) -> f64 {
        match self {
            Self::Normal { .. } | Self::Uniform { .. } => 0.0,
            Self::Exponential { rate } => 2.0 / (rate * rate * rate),
            Self::Discrete { values, probs } => {
                let mu = self.mean();
                numeric::total(
                    values
                        .iter()
                        .zip(probs)
                        .map(|(&v, &p)| p * (v - mu) * (v - mu) * (v - mu)),
                )
            }
        }
    }

    /// Point-mass laws are allowed but flagged.
    pub fn is_degenerate(&self) -> bool {
        self.variance() == 0.0
    }

    /// Draws one observation.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Normal { mu, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mu + sd * z
            }
            Self::Uniform { a, b } => a + (b - a) * rng.random::<f64>(),
            Self::Exponential { rate } => Exp::new(*rate).expect("validated rate").sample(rng),
            Self::Discrete { values, probs } => {
                let u: f64 = rng.random();
                let mut cumulative = 0.0;
                for (&v, &p) in values.iter().zip(probs) {
                    cumulative += p;
                    if u < cumulative {
                        return v;
                    }
                }
                // u landed in the sliver above the accumulated total
                *values.last().expect("non-empty support")
            }
        }
    }

    /// Fills `buffer` with independent draws.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, buffer: &mut [f64]) {
        for slot in buffer.iter_mut() {
            *slot = self.sample(rng);
        }
    }
}

/// Parses the distribution grammar `kind:key=value[,key=value...]`.
///
/// Kinds: `normal(mu,sd)`, `uniform(a,b)`, `exponential(rate)`,
/// `discrete(values=v1|v2|...,probs=p1|p2|...)`. `|` separates list items.
pub fn parse_distribution(text: &str) -> Result<DistributionSpec> {
    let parse_err = |offset: usize, message: String| Error::DistributionParse { offset, message };

    let colon = text.find(':').ok_or_else(|| {
        parse_err(
            text.len(),
            "expected `:` after the distribution kind".into(),
        )
    })?;
    let kind = &text[..colon];
    let body_start = colon + 1;

    // key=value pairs, each tagged with the byte offset of its value
    let mut pairs: Vec<(usize, &str, &str)> = Vec::new();
    let mut cursor = body_start;
    for part in text[body_start..].split(',') {
        let offset = cursor;
        cursor += part.len() + 1;
        if part.is_empty() {
            return Err(parse_err(offset, "empty key=value entry".into()));
        }
        let eq = part
            .find('=')
            .ok_or_else(|| parse_err(offset, format!("expected key=value, got `{part}`")))?;
        pairs.push((offset + eq + 1, &part[..eq], &part[eq + 1..]));
    }

    let lookup = |key: &str| -> Result<(usize, &str)> {
        let mut found = None;
        for &(offset, k, v) in &pairs {
            if k == key {
                if found.is_some() {
                    return Err(parse_err(offset, format!("duplicate key `{key}`")));
                }
                found = Some((offset, v));
            }
        }
        found.ok_or_else(|| parse_err(text.len(), format!("missing key `{key}`")))
    };

    let expect_keys = |allowed: &[&str]| -> Result<()> {
        for &(offset, k, _) in &pairs {
            if !allowed.contains(&k) {
                return Err(parse_err(offset, format!("unknown key `{k}`")));
            }
        }
        Ok(())
    };

    let number = |offset: usize, raw: &str| -> Result<f64> {
        raw.parse::<f64>()
            .map_err(|_| parse_err(offset, format!("invalid number `{raw}`")))
    };

    let list = |offset: usize, raw: &str| -> Result<Vec<f64>> {
        let mut out = Vec::new();
        let mut item_offset = offset;
        for item in raw.split('|') {
            out.push(number(item_offset, item)?);
            item_offset += item.len() + 1;
        }
        Ok(out)
    };

    match kind {
        "normal" => {
            expect_keys(&["mu", "sd"])?;
            let (mo, mv) = lookup("mu")?;
            let (so, sv) = lookup("sd")?;
            DistributionSpec::normal(number(mo, mv)?, number(so, sv)?)
        }
        "uniform" => {
            expect_keys(&["a", "b"])?;
            let (ao, av) = lookup("a")?;
            let (bo, bv) = lookup("b")?;
            DistributionSpec::uniform(number(ao, av)?, number(bo, bv)?)
        }
        "exponential" => {
            expect_keys(&["rate"])?;
            let (ro, rv) = lookup("rate")?;
            DistributionSpec::exponential(number(ro, rv)?)
        }
        "discrete" => {
            expect_keys(&["values", "probs"])?;
            let (vo, vv) = lookup("values")?;
            let (po, pv) = lookup("probs")?;
            DistributionSpec::discrete(list(vo, vv)?, list(po, pv)?)
        }
        other => Err(parse_err(0, format!("unknown distribution kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::rng::replicate_rng;

    #[test]
    fn parse_examples() {
        let normal = parse_distribution("normal:mu=0,sd=1").unwrap();
        assert_eq!(normal, DistributionSpec::Normal { mu: 0.0, sd: 1.0 });
        assert_eq!(normal.mean(), 0.0);
        assert_eq!(normal.variance(), 1.0);
        assert_eq!(normal.third_central_moment(), 0.0);

        let exp = parse_distribution("exponential:rate=2").unwrap();
        assert_eq!(exp.mean(), 0.5);
        assert_eq!(exp.variance(), 0.25);
        assert_eq!(exp.third_central_moment(), 0.25);

        let disc = parse_distribution("discrete:values=0|3,probs=0.5|0.5").unwrap();
        assert_eq!(disc.mean(), 1.5);
        assert_eq!(disc.variance(), 2.25);
        assert_eq!(disc.third_central_moment(), 0.0);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_distribution("normol:mu=0,sd=1").unwrap_err() {
            Error::DistributionParse { offset, message } => {
                assert_eq!(offset, 0);
                assert!(message.contains("normol"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_distribution("normal:mu=x,sd=1").unwrap_err() {
            Error::DistributionParse { offset, message } => {
                assert_eq!(offset, 10);
                assert!(message.contains('x'));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_distribution("normal"),
            Err(Error::DistributionParse { .. })
        ));
        assert!(matches!(
            parse_distribution("normal:mu=0"),
            Err(Error::DistributionParse { .. })
        ));
        assert!(matches!(
            parse_distribution("normal:mu=0,sd=1,extra=2"),
            Err(Error::DistributionParse { .. })
        ));
        assert!(matches!(
            parse_distribution("discrete:values=0|1,probs=0.5|0.6"),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            parse_distribution("normal:mu=0,sd=0"),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn discrete_validation() {
        assert!(matches!(
            DistributionSpec::discrete(vec![1.0, 1.0], vec![0.5, 0.5]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            DistributionSpec::discrete(vec![0.0, 1.0], vec![0.7, 0.5]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            DistributionSpec::discrete(vec![0.0, 1.0], vec![-0.2, 1.2]),
            Err(Error::InvalidDistribution(_))
        ));
        // probs within 1e-12 of 1 are accepted
        let p = 2.0 / 3.0;
        let spec = DistributionSpec::discrete(vec![0.0, 3.0], vec![p, 1.0 - p]).unwrap();
        assert!(!spec.is_degenerate());
    }

    #[test]
    fn asymmetric_two_point_moments() {
        // P(0) = 2/3, P(3) = 1/3: mu = 1, sigma^2 = 2, mu3 = 2
        let spec =
            DistributionSpec::discrete(vec![0.0, 3.0], vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_relative_eq!(spec.mean(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(spec.variance(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(spec.third_central_moment(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn point_mass_is_degenerate() {
        let spec = DistributionSpec::point_mass(5.0).unwrap();
        assert!(spec.is_degenerate());
        assert_eq!(spec.mean(), 5.0);
        assert_eq!(spec.variance(), 0.0);
        let mut rng = replicate_rng(0, 0);
        for _ in 0..10 {
            assert_eq!(spec.sample(&mut rng), 5.0);
        }
    }

    #[test]
    fn uniform_moments() {
        let spec = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert_eq!(spec.mean(), 0.5);
        assert_relative_eq!(spec.variance(), 1.0 / 12.0, max_relative = 1e-15);
        assert_eq!(spec.third_central_moment(), 0.0);
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let spec = DistributionSpec::normal(1.0, 2.0).unwrap();
        let mut a = replicate_rng(3, 0);
        let mut b = replicate_rng(3, 0);
        let draws_a: Vec<f64> = (0..8).map(|_| spec.sample(&mut a)).collect();
        let draws_b: Vec<f64> = (0..8).map(|_| spec.sample(&mut b)).collect();
        assert_eq!(draws_a, draws_b);
    }

    #[test]
    fn sampler_moments_match_closed_forms() {
        // mean within 5 * sd/sqrt(R); variance within 5 * sqrt((mu4 - sigma^4)/R)
        let cases: [(DistributionSpec, f64); 3] = [
            (DistributionSpec::normal(0.0, 1.0).unwrap(), 3.0), // mu4 = 3 sigma^4
            (DistributionSpec::uniform(0.0, 1.0).unwrap(), 1.0 / 80.0),
            (DistributionSpec::exponential(1.0).unwrap(), 9.0),
        ];
        let reps = 1_000_000u64;
        for (spec, mu4) in cases {
            let mut rng = replicate_rng(11, 0);
            let mut sum = crate::numeric::CompensatedSum::new();
            let mut sum_sq = crate::numeric::CompensatedSum::new();
            let mu = spec.mean();
            for _ in 0..reps {
                let d = spec.sample(&mut rng) - mu;
                sum.add(d);
                sum_sq.add(d * d);
            }
            let rf = reps as f64;
            let mean_err = sum.value() / rf;
            let var = (sum_sq.value() - sum.value() * mean_err) / (rf - 1.0);
            let sigma2 = spec.variance();
            assert!(
                mean_err.abs() <= 5.0 * (sigma2 / rf).sqrt(),
                "{spec:?}: mean off by {mean_err}"
            );
            let var_stderr = ((mu4 - sigma2 * sigma2) / rf).sqrt();
            assert!(
                (var - sigma2).abs() <= 5.0 * var_stderr,
                "{spec:?}: variance {var} vs {sigma2}"
            );
        }
    }
}
