//! Monte Carlo estimator study: simulate from a known regression truth,
//! refit, and aggregate bias and mean squared error per parameter.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::dist::Zip3;
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::regression::{fit, FitOptions, FitResult, Link, ModelSpec};
use crate::rng::substream;

/// How one design column is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CovariateGenerator {
    /// Intercept column of ones.
    Constant1,
    /// Standard uniform.
    Uniform01,
    /// Bernoulli with the given success probability.
    Bernoulli(f64),
}

impl CovariateGenerator {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            CovariateGenerator::Constant1 => 1.0,
            CovariateGenerator::Uniform01 => rng.random::<f64>(),
            CovariateGenerator::Bernoulli(p) => {
                if rng.random::<f64>() < p {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for CovariateGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CovariateGenerator::Constant1 => f.write_str("constant1"),
            CovariateGenerator::Uniform01 => f.write_str("uniform01"),
            CovariateGenerator::Bernoulli(p) => write!(f, "bernoulli({p})"),
        }
    }
}

impl FromStr for CovariateGenerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "constant1" => return Ok(CovariateGenerator::Constant1),
            "uniform01" => return Ok(CovariateGenerator::Uniform01),
            _ => {}
        }
        let p = s
            .strip_prefix("bernoulli(")
            .and_then(|rest| rest.strip_suffix(')'))
            .and_then(|inner| inner.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown covariate generator '{s}'")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "bernoulli probability must lie in [0, 1], got {p}"
            )));
        }
        Ok(CovariateGenerator::Bernoulli(p))
    }
}

/// Data-generating truth and study layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub beta_true: Vec<f64>,
    pub gamma_true: Vec<f64>,
    pub x_generators: Vec<CovariateGenerator>,
    pub z_generators: Vec<CovariateGenerator>,
    pub n_list: Vec<usize>,
    pub n_reps: usize,
    pub seed: u64,
    #[serde(skip)]
    pub link_mu: Link,
    #[serde(skip)]
    pub link_phi: Link,
}

impl ScenarioConfig {
    /// `log mu = -1 + x1 + 0.5 x2`, `log phi = 1 + 0.5 z1` with
    /// `x1, z1 ~ U(0, 1)` and `x2 ~ Bernoulli(0.5)`.
    pub fn scenario1(n_list: Vec<usize>, n_reps: usize, seed: u64) -> Self {
        use CovariateGenerator::*;
        Self {
            beta_true: vec![-1.0, 1.0, 0.5],
            gamma_true: vec![1.0, 0.5],
            x_generators: vec![Constant1, Uniform01, Bernoulli(0.5)],
            z_generators: vec![Constant1, Uniform01],
            n_list,
            n_reps,
            seed,
            link_mu: Link::Log,
            link_phi: Link::Log,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta_true.len() != self.x_generators.len() {
            return Err(Error::InvalidParameter(format!(
                "beta has {} entries but there are {} mean covariate generators",
                self.beta_true.len(),
                self.x_generators.len()
            )));
        }
        if self.gamma_true.len() != self.z_generators.len() {
            return Err(Error::InvalidParameter(format!(
                "gamma has {} entries but there are {} dispersion covariate generators",
                self.gamma_true.len(),
                self.z_generators.len()
            )));
        }
        for (label, gens) in [("mean", &self.x_generators), ("dispersion", &self.z_generators)] {
            if gens.first() != Some(&CovariateGenerator::Constant1) {
                return Err(Error::InvalidParameter(format!(
                    "first {label} covariate generator must be constant1 (intercept)"
                )));
            }
        }
        if self.n_reps == 0 {
            return Err(Error::InvalidParameter("n_reps must be at least 1".to_string()));
        }
        if self.n_list.is_empty() {
            return Err(Error::InvalidParameter("n_list is empty".to_string()));
        }
        let s = self.beta_true.len() + self.gamma_true.len();
        if let Some(&n) = self.n_list.iter().find(|&&n| n < s) {
            return Err(Error::InvalidParameter(format!(
                "sample size {n} is smaller than the {s} parameters"
            )));
        }
        Ok(())
    }

    /// Names in stacked order: `beta0.., gamma0..`.
    pub fn parameter_names(&self) -> Vec<String> {
        (0..self.beta_true.len())
            .map(|j| format!("beta{j}"))
            .chain((0..self.gamma_true.len()).map(|j| format!("gamma{j}")))
            .collect()
    }

    pub fn truth(&self) -> Vec<f64> {
        self.beta_true
            .iter()
            .chain(&self.gamma_true)
            .copied()
            .collect()
    }
}

/// Draws covariates and responses for one replicate of size `n`.
///
/// Per row: mean covariates, then dispersion covariates, then the response.
///
/// Panics if `config` fails [`ScenarioConfig::validate`] for this `n`.
pub fn generate_dataset<R: Rng + ?Sized>(config: &ScenarioConfig, n: usize, rng: &mut R) -> ModelSpec {
    let q1 = config.x_generators.len();
    let q2 = config.z_generators.len();
    let mut x = DMatrix::zeros(n, q1);
    let mut z = DMatrix::zeros(n, q2);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        for (j, g) in config.x_generators.iter().enumerate() {
            x[(i, j)] = g.draw(rng);
        }
        for (j, g) in config.z_generators.iter().enumerate() {
            z[(i, j)] = g.draw(rng);
        }
        let eta: f64 = (0..q1).map(|j| x[(i, j)] * config.beta_true[j]).sum();
        let varsigma: f64 = (0..q2).map(|j| z[(i, j)] * config.gamma_true[j]).sum();
        let dist = Zip3::new(config.link_mu.inverse(eta), config.link_phi.inverse(varsigma))
            .expect("true linear predictors map into the parameter space");
        y.push(dist.sample_one(rng));
    }
    ModelSpec::new(y, x, z, config.link_mu, config.link_phi)
        .expect("generated designs have an intercept and matching shapes")
}

/// Generates and fits replicate `rep` at sample size `n`.
pub fn run_replicate(config: &ScenarioConfig, n: usize, rep: usize) -> Result<FitResult> {
    let mut rng = substream(config.seed, &[n as u64, rep as u64]);
    let spec = generate_dataset(config, n, &mut rng);
    fit(&spec, &FitOptions::default())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSummary {
    pub name: String,
    pub truth: f64,
    pub bias: f64,
    pub mse: f64,
    /// Fraction of converged replicates whose 95% Wald interval covers the truth.
    pub wald_coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRow {
    pub n: usize,
    pub params: Vec<ParamSummary>,
    pub n_converged: usize,
    pub n_failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub rows: Vec<McRow>,
    pub n_reps: usize,
    pub seed: u64,
}

/// Aggregates converged replicate estimates into bias/MSE rows.
fn summarize(config: &ScenarioConfig, n: usize, outcomes: &[Option<(Vec<f64>, Vec<f64>)>]) -> McRow {
    let truth = config.truth();
    let names = config.parameter_names();
    let ok: Vec<&(Vec<f64>, Vec<f64>)> = outcomes.iter().flatten().collect();
    let m = ok.len() as f64;
    let params = (0..truth.len())
        .map(|j| {
            let mut err_sum = 0.0;
            let mut sq_sum = 0.0;
            let mut covered = 0usize;
            for (est, se) in &ok {
                let err = est[j] - truth[j];
                err_sum += err;
                sq_sum += err * err;
                if err.abs() <= 1.96 * se[j] {
                    covered += 1;
                }
            }
            ParamSummary {
                name: names[j].clone(),
                truth: truth[j],
                bias: err_sum / m,
                mse: sq_sum / m,
                wald_coverage: covered as f64 / m,
            }
        })
        .collect();
    McRow {
        n,
        params,
        n_converged: ok.len(),
        n_failed: outcomes.len() - ok.len(),
    }
}

/// Runs every `(n, replicate)` pair; replicates execute in parallel but the
/// summary depends only on the config.
pub fn run_study(config: &ScenarioConfig) -> Result<McSummary> {
    config.validate()?;
    let rows = config
        .n_list
        .iter()
        .map(|&n| {
            let outcomes = map_indexed(config.n_reps, |rep| match run_replicate(config, n, rep) {
                Ok(f) if f.converged => Some((f.theta_hat.stacked().iter().copied().collect(), f.se)),
                _ => None,
            });
            summarize(config, n, &outcomes)
        })
        .collect();
    Ok(McSummary {
        rows,
        n_reps: config.n_reps,
        seed: config.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn generator_parsing() {
        assert_eq!("constant1".parse::<CovariateGenerator>().unwrap(), CovariateGenerator::Constant1);
        assert_eq!(
            " Bernoulli(0.25) ".parse::<CovariateGenerator>().unwrap(),
            CovariateGenerator::Bernoulli(0.25)
        );
        assert!("bernoulli(2)".parse::<CovariateGenerator>().is_err());
        assert!("normal".parse::<CovariateGenerator>().is_err());
        let g = CovariateGenerator::Bernoulli(0.5);
        assert_eq!(g.to_string().parse::<CovariateGenerator>().unwrap(), g);
    }

    #[test]
    fn validation_catches_bad_configs() {
        let mut c = ScenarioConfig::scenario1(vec![100], 10, 1);
        assert!(c.validate().is_ok());
        c.x_generators[0] = CovariateGenerator::Uniform01;
        assert!(c.validate().is_err());
        let mut c = ScenarioConfig::scenario1(vec![100], 0, 1);
        assert!(c.validate().is_err());
        c.n_reps = 1;
        c.gamma_true.push(0.1);
        assert!(c.validate().is_err());
    }

    #[test]
    fn intercept_column_is_all_ones() {
        let c = ScenarioConfig::scenario1(vec![50], 1, 3);
        let spec = generate_dataset(&c, 50, &mut stream(3));
        assert!(spec.x().column(0).iter().all(|&v| v == 1.0));
        assert!(spec.z().column(0).iter().all(|&v| v == 1.0));
        assert!(spec.x().column(2).iter().all(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn baseline_mean_at_zero_covariates() {
        let c = ScenarioConfig::scenario1(vec![50], 1, 3);
        let mu = c.link_mu.inverse(c.beta_true[0]);
        assert!((mu - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn single_replicate_bias_is_the_estimation_error() {
        let c = ScenarioConfig::scenario1(vec![200], 1, 77);
        let f = run_replicate(&c, 200, 0).unwrap();
        let summary = run_study(&c).unwrap();
        let row = &summary.rows[0];
        assert_eq!(row.n_converged + row.n_failed, 1);
        if f.converged {
            let est = f.theta_hat.stacked();
            for (j, p) in row.params.iter().enumerate() {
                assert_eq!(p.bias, est[j] - p.truth);
            }
        }
    }
}
