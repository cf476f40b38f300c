//! The zero-inflated Poisson distribution indexed by its mean and a
//! dispersion parameter.
//!
//! With `p = phi / (mu + phi)` and `lambda = mu + phi` the mean/dispersion
//! form is the classic zero-inflated Poisson mixture: a structural zero with
//! probability `p`, otherwise a `Poisson(lambda)` draw. Then `E[Y] = mu` and
//! `Var[Y] = mu (1 + phi)`, so `phi = 0` is plain `Poisson(mu)`.
//!
//! Two other parameterizations are provided for conversion only: the
//! latent-class form `(lambda, p)` and the marginal-mean form
//! `(mu_star, delta_star)` with `delta_star = p`.

use rand::distr::{Distribution, Open01};
use rand::Rng;
use rand_distr::Poisson;

use crate::error::{Error, Result};
use crate::special::{ln_factorial, log_add_exp};

/// Once the upper tail drops below this the cdf is reported as exactly 1.
const CDF_TAIL_CLAMP: f64 = 1e-15;

/// Mean/dispersion parameters `(mu, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zip3 {
    mu: f64,
    phi: f64,
}

/// Latent-class parameters: Poisson rate `lambda` and zero-state probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zip1 {
    lambda: f64,
    p: f64,
}

/// Marginal-mean parameters: mean `mu_star` and zero-state probability `delta_star`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zip2 {
    mu_star: f64,
    delta_star: f64,
}

/// Which parameterization a value is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameterization {
    Zip1,
    Zip2,
    Zip3,
}

/// A distribution value in any of the three parameterizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZipParams {
    Zip1(Zip1),
    Zip2(Zip2),
    Zip3(Zip3),
}

impl Zip1 {
    pub fn new(lambda: f64, p: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p must lie in [0, 1), got {p}")));
        }
        Ok(Self { lambda, p })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn to_zip3(self) -> Zip3 {
        Zip3 {
            mu: (1.0 - self.p) * self.lambda,
            phi: self.p * self.lambda,
        }
    }

    pub fn to_zip2(self) -> Zip2 {
        Zip2 {
            mu_star: (1.0 - self.p) * self.lambda,
            delta_star: self.p,
        }
    }
}

impl Zip2 {
    pub fn new(mu_star: f64, delta_star: f64) -> Result<Self> {
        if !(mu_star.is_finite() && mu_star > 0.0) {
            return Err(Error::InvalidParameter(format!("mu* must be positive, got {mu_star}")));
        }
        if !(0.0..1.0).contains(&delta_star) {
            return Err(Error::InvalidParameter(format!(
                "delta* must lie in [0, 1), got {delta_star}"
            )));
        }
        Ok(Self { mu_star, delta_star })
    }

    pub fn mu_star(&self) -> f64 {
        self.mu_star
    }

    pub fn delta_star(&self) -> f64 {
        self.delta_star
    }

    pub fn to_zip1(self) -> Zip1 {
        Zip1 {
            lambda: self.mu_star / (1.0 - self.delta_star),
            p: self.delta_star,
        }
    }

    pub fn to_zip3(self) -> Zip3 {
        Zip3 {
            mu: self.mu_star,
            phi: self.delta_star * self.mu_star / (1.0 - self.delta_star),
        }
    }
}

impl ZipParams {
    pub fn parameterization(&self) -> Parameterization {
        match self {
            ZipParams::Zip1(_) => Parameterization::Zip1,
            ZipParams::Zip2(_) => Parameterization::Zip2,
            ZipParams::Zip3(_) => Parameterization::Zip3,
        }
    }

    /// Re-expresses the same distribution in `target`.
    pub fn convert(self, target: Parameterization) -> ZipParams {
        match (self, target) {
            (ZipParams::Zip1(a), Parameterization::Zip2) => ZipParams::Zip2(a.to_zip2()),
            (ZipParams::Zip1(a), Parameterization::Zip3) => ZipParams::Zip3(a.to_zip3()),
            (ZipParams::Zip2(a), Parameterization::Zip1) => ZipParams::Zip1(a.to_zip1()),
            (ZipParams::Zip2(a), Parameterization::Zip3) => ZipParams::Zip3(a.to_zip3()),
            (ZipParams::Zip3(a), Parameterization::Zip1) => ZipParams::Zip1(a.to_zip1()),
            (ZipParams::Zip3(a), Parameterization::Zip2) => ZipParams::Zip2(a.to_zip2()),
            (same, _) => same,
        }
    }

    /// The mean/dispersion form, which all evaluation goes through.
    pub fn as_zip3(self) -> Zip3 {
        match self {
            ZipParams::Zip1(a) => a.to_zip3(),
            ZipParams::Zip2(a) => a.to_zip3(),
            ZipParams::Zip3(a) => a,
        }
    }
}

impl From<Zip1> for ZipParams {
    fn from(v: Zip1) -> Self {
        ZipParams::Zip1(v)
    }
}

impl From<Zip2> for ZipParams {
    fn from(v: Zip2) -> Self {
        ZipParams::Zip2(v)
    }
}

impl From<Zip3> for ZipParams {
    fn from(v: Zip3) -> Self {
        ZipParams::Zip3(v)
    }
}

/// First and second partial derivatives of `log P(Y = y | mu, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPmfDerivatives {
    pub d_mu: f64,
    pub d_phi: f64,
    pub d_mumu: f64,
    pub d_phiphi: f64,
    /// Mixed partial; the Hessian is symmetric so one value covers both orders.
    pub d_muphi: f64,
}

impl Zip3 {
    /// `mu > 0` and `phi >= 0`, both finite. `phi = 0` is the Poisson case.
    pub fn new(mu: f64, phi: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
        }
        if !(phi.is_finite() && phi >= 0.0) {
            return Err(Error::InvalidParameter(format!("phi must be non-negative, got {phi}")));
        }
        Ok(Self { mu, phi })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Probability of the structural-zero component, `phi / (mu + phi)`.
    pub fn zero_state_prob(&self) -> f64 {
        self.phi / (self.mu + self.phi)
    }

    /// Rate of the Poisson component, `mu + phi`.
    pub fn rate(&self) -> f64 {
        self.mu + self.phi
    }

    pub fn to_zip1(self) -> Zip1 {
        Zip1 {
            lambda: self.rate(),
            p: self.zero_state_prob(),
        }
    }

    pub fn to_zip2(self) -> Zip2 {
        Zip2 {
            mu_star: self.mu,
            delta_star: self.zero_state_prob(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.mu
    }

    pub fn variance(&self) -> f64 {
        self.mu * (1.0 + self.phi)
    }

    pub fn log_pmf(&self, y: u64) -> f64 {
        let rate = self.rate();
        if y == 0 {
            log_add_exp(self.phi.ln(), self.mu.ln() - rate) - rate.ln()
        } else {
            self.mu.ln() + (y - 1) as f64 * rate.ln() - rate - ln_factorial(y)
        }
    }

    pub fn pmf(&self, y: u64) -> f64 {
        self.log_pmf(y).exp()
    }

    /// `P(Y <= y)`, with `cdf(-1) = 0`.
    pub fn cdf(&self, y: i64) -> f64 {
        if y < 0 {
            return 0.0;
        }
        self.cdf_iter()
            .nth(y as usize)
            .expect("cdf iterator is unbounded")
    }

    /// `(F(y - 1), F(y))`, the interval a randomized quantile residual draws from.
    pub fn cdf_interval(&self, y: u64) -> (f64, f64) {
        if y == 0 {
            return (0.0, self.cdf(0));
        }
        let mut it = self.cdf_iter().skip(y as usize - 1);
        let lo = it.next().expect("unbounded");
        let hi = it.next().expect("unbounded");
        (lo, hi)
    }

    /// Cumulative probabilities `F(0), F(1), ...` as an endless iterator.
    pub fn cdf_iter(&self) -> CdfIter {
        CdfIter {
            total: 0.0,
            log_term: self.mu.ln() - self.rate(),
            log_rate: self.rate().ln(),
            pmf0: self.pmf(0),
            next_k: 0,
            saturated: false,
        }
    }

    /// Smallest `y` with `F(y) >= u`, for `u` in `(0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<u64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile level must lie in (0, 1), got {u}"
            )));
        }
        let mut bracket = (self.mu + 10.0 * self.variance().sqrt() + 10.0).ceil() as usize;
        loop {
            let table: Vec<f64> = self.cdf_iter().take(bracket + 1).collect();
            if table[bracket] >= u {
                return Ok(table.partition_point(|&c| c < u) as u64);
            }
            bracket *= 2;
        }
    }

    /// One draw from the two-component mixture.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let structural_zero = rng.random::<f64>() < self.zero_state_prob();
        if structural_zero {
            return 0;
        }
        let poisson = Poisson::new(self.rate()).expect("rate is positive and finite");
        poisson.sample(rng) as u64
    }

    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<u64> {
        (0..count).map(|_| self.sample_one(rng)).collect()
    }

    /// Inversion sampler; slower than [`Zip3::sample_one`], kept as a cross-check.
    pub fn sample_by_inversion<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = Open01.sample(rng);
        self.quantile(u).expect("Open01 draws lie in (0, 1)")
    }

    /// Analytic gradient and Hessian of `log_pmf(y)` in `(mu, phi)`.
    ///
    /// Requires `phi > 0`. For `y = 0` the shared denominator
    /// `mu + phi * exp(mu + phi)` is handled in log space so large rates do
    /// not overflow.
    pub fn log_pmf_derivatives(&self, y: u64) -> Result<LogPmfDerivatives> {
        let (mu, phi) = (self.mu, self.phi);
        if phi <= 0.0 {
            return Err(Error::InvalidParameter(
                "log-pmf derivatives need phi > 0".to_string(),
            ));
        }
        let rate = mu + phi;
        let inv_rate2 = 1.0 / (rate * rate);
        if y > 0 {
            let ym1 = (y - 1) as f64;
            return Ok(LogPmfDerivatives {
                d_mu: 1.0 / mu + ym1 / rate - 1.0,
                d_phi: ym1 / rate - 1.0,
                d_mumu: -1.0 / (mu * mu) - ym1 * inv_rate2,
                d_phiphi: -ym1 * inv_rate2,
                d_muphi: -ym1 * inv_rate2,
            });
        }
        // log(mu + phi e^rate)
        let log_den = log_add_exp(mu.ln(), phi.ln() + rate);
        let inv_den = (-log_den).exp();
        let e_over_den = (rate - log_den).exp();
        let e_over_den2 = (rate - 2.0 * log_den).exp();
        let inv_den2 = (-2.0 * log_den).exp();
        let e2_over_den2 = e_over_den * e_over_den;
        Ok(LogPmfDerivatives {
            d_mu: (1.0 - mu) * inv_den - 1.0 / rate,
            d_phi: e_over_den - mu * inv_den - 1.0 / rate,
            d_mumu: phi * (mu - 2.0) * e_over_den2 - inv_den2 + inv_rate2,
            d_phiphi: mu * (phi + 2.0) * e_over_den2 - e2_over_den2 + inv_rate2,
            d_muphi: (mu - 1.0) * (phi + 1.0) * e_over_den2 + inv_rate2,
        })
    }
}

/// Running cdf `F(0), F(1), ...` built from the ratio recurrence
/// `pmf(k + 1) = pmf(k) * (mu + phi) / (k + 1)` for `k >= 1`, kept in log
/// space so a large rate cannot underflow the seed term.
#[derive(Debug, Clone)]
pub struct CdfIter {
    total: f64,
    log_term: f64,
    log_rate: f64,
    pmf0: f64,
    next_k: u64,
    saturated: bool,
}

impl Iterator for CdfIter {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.saturated {
            return Some(1.0);
        }
        let k = self.next_k;
        self.next_k += 1;
        if k == 0 {
            self.total = self.pmf0;
        } else {
            if k > 1 {
                self.log_term += self.log_rate - (k as f64).ln();
            }
            self.total += self.log_term.exp();
        }
        if 1.0 - self.total < CDF_TAIL_CLAMP {
            self.saturated = true;
            return Some(1.0);
        }
        Some(self.total)
    }
}
