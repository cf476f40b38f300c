//! Double regression model: `g1(mu_i) = x_i' beta` and `g2(phi_i) = z_i' gamma`
//! with `Y_i ~ ZIP(mu_i, phi_i)`.
//!
//! Fitting is Newton-Raphson on the analytic observed information with
//! step halving, falling back to a ridge-regularized step when the
//! information is not positive definite.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::dist::Zip3;
use crate::error::{Error, Result};
use crate::special::{chi2_sf, log_add_exp};

/// Link function connecting a distribution parameter to its linear predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Link {
    #[default]
    Log,
    Identity,
}

impl Link {
    pub fn name(&self) -> &'static str {
        match self {
            Link::Log => "log",
            Link::Identity => "identity",
        }
    }

    /// `g(m)`.
    pub fn forward(&self, m: f64) -> f64 {
        match self {
            Link::Log => m.ln(),
            Link::Identity => m,
        }
    }

    /// `g^{-1}(eta)`.
    pub fn inverse(&self, eta: f64) -> f64 {
        match self {
            Link::Log => eta.exp(),
            Link::Identity => eta,
        }
    }

    /// `g'(m)`.
    pub fn deriv(&self, m: f64) -> f64 {
        match self {
            Link::Log => 1.0 / m,
            Link::Identity => 1.0,
        }
    }

    /// `g''(m)`.
    pub fn second_deriv(&self, m: f64) -> f64 {
        match self {
            Link::Log => -1.0 / (m * m),
            Link::Identity => 0.0,
        }
    }

    /// `dm/deta = 1 / g'(m)`.
    fn dm_deta(&self, m: f64) -> f64 {
        1.0 / self.deriv(m)
    }

    /// `d^2 m / deta^2 = -g''(m) / g'(m)^3`.
    fn d2m_deta2(&self, m: f64) -> f64 {
        let g1 = self.deriv(m);
        -self.second_deriv(m) / (g1 * g1 * g1)
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Link {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "log" => Ok(Link::Log),
            "identity" => Ok(Link::Identity),
            other => Err(Error::InvalidParameter(format!("unknown link '{other}'"))),
        }
    }
}

/// Response, the two design matrices and their links.
///
/// Both designs must carry an intercept in column 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    y: Vec<u64>,
    x: DMatrix<f64>,
    z: DMatrix<f64>,
    link_mu: Link,
    link_phi: Link,
}

fn check_intercept(m: &DMatrix<f64>, label: &str) -> Result<()> {
    if m.ncols() == 0 {
        return Err(Error::Design(format!("{label} design has no columns")));
    }
    if let Some(row) = m.column(0).iter().position(|&v| v != 1.0) {
        return Err(Error::Design(format!(
            "{label} design column 0 must be the intercept (row {row} is not 1)"
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Design(format!("{label} design has non-finite entries")));
    }
    Ok(())
}

fn check_full_rank(m: &DMatrix<f64>, label: &str) -> Result<()> {
    for j in 1..m.ncols() {
        let col = m.column(j);
        let first = col[0];
        if col.iter().all(|&v| v == first) {
            return Err(Error::Design(format!(
                "{label} design column {j} is constant and confounded with the intercept"
            )));
        }
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if max.is_nan() || max <= 0.0 || min <= max * 1e-10 {
        return Err(Error::Design(format!("{label} design is rank deficient")));
    }
    Ok(())
}

impl ModelSpec {
    pub fn new(
        y: Vec<u64>,
        x: DMatrix<f64>,
        z: DMatrix<f64>,
        link_mu: Link,
        link_phi: Link,
    ) -> Result<Self> {
        let n = y.len();
        if x.nrows() != n || z.nrows() != n {
            return Err(Error::Dimension(format!(
                "response has {n} rows but designs have {} and {}",
                x.nrows(),
                z.nrows()
            )));
        }
        check_intercept(&x, "mu")?;
        check_intercept(&z, "phi")?;
        if n < x.ncols() + z.ncols() {
            return Err(Error::Design(format!(
                "{n} observations cannot identify {} parameters",
                x.ncols() + z.ncols()
            )));
        }
        Ok(Self {
            y,
            x,
            z,
            link_mu,
            link_phi,
        })
    }

    /// Both submodels on the log link.
    pub fn with_log_links(y: Vec<u64>, x: DMatrix<f64>, z: DMatrix<f64>) -> Result<Self> {
        Self::new(y, x, z, Link::Log, Link::Log)
    }

    /// Intercept-only designs for both parameters.
    pub fn intercept_only(y: Vec<u64>) -> Result<Self> {
        let n = y.len();
        Self::with_log_links(y, DMatrix::from_element(n, 1, 1.0), DMatrix::from_element(n, 1, 1.0))
    }

    pub fn y(&self) -> &[u64] {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn link_mu(&self) -> Link {
        self.link_mu
    }

    pub fn link_phi(&self) -> Link {
        self.link_phi
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn q_mu(&self) -> usize {
        self.x.ncols()
    }

    pub fn q_phi(&self) -> usize {
        self.z.ncols()
    }

    /// Total number of coefficients `q_mu + q_phi`.
    pub fn n_params(&self) -> usize {
        self.q_mu() + self.q_phi()
    }

    /// Full column rank for both designs; constant covariates are rejected.
    pub fn check_rank(&self) -> Result<()> {
        check_full_rank(&self.x, "mu")?;
        check_full_rank(&self.z, "phi")
    }

    /// Same designs with a different response vector.
    pub fn with_response(&self, y: Vec<u64>) -> Result<Self> {
        Self::new(y, self.x.clone(), self.z.clone(), self.link_mu, self.link_phi)
    }

    /// Copy with the listed (0-based) rows removed.
    pub fn without_rows(&self, rows: &[usize]) -> Result<Self> {
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.n()) {
            return Err(Error::Dimension(format!("row {bad} out of range for n = {}", self.n())));
        }
        let mut sorted = rows.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let y = self
            .y
            .iter()
            .enumerate()
            .filter(|(i, _)| sorted.binary_search(i).is_err())
            .map(|(_, &v)| v)
            .collect();
        Self::new(
            y,
            self.x.clone().remove_rows_at(&sorted),
            self.z.clone().remove_rows_at(&sorted),
            self.link_mu,
            self.link_phi,
        )
    }
}

/// Regression coefficients for the mean (`beta`) and dispersion (`gamma`) submodels.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta {
    pub beta: DVector<f64>,
    pub gamma: DVector<f64>,
}

impl Theta {
    pub fn new(beta: Vec<f64>, gamma: Vec<f64>) -> Self {
        Self {
            beta: DVector::from_vec(beta),
            gamma: DVector::from_vec(gamma),
        }
    }

    /// Splits a stacked `(beta, gamma)` vector after the first `q_mu` entries.
    pub fn from_stacked(v: &DVector<f64>, q_mu: usize) -> Self {
        Self {
            beta: v.rows(0, q_mu).into_owned(),
            gamma: v.rows(q_mu, v.len() - q_mu).into_owned(),
        }
    }

    pub fn stacked(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.len());
        v.rows_mut(0, self.beta.len()).copy_from(&self.beta);
        v.rows_mut(self.beta.len(), self.gamma.len()).copy_from(&self.gamma);
        v
    }

    pub fn len(&self) -> usize {
        self.beta.len() + self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_dims(&self, spec: &ModelSpec) -> Result<()> {
        if self.beta.len() != spec.q_mu() || self.gamma.len() != spec.q_phi() {
            return Err(Error::Dimension(format!(
                "theta has ({}, {}) coefficients, model needs ({}, {})",
                self.beta.len(),
                self.gamma.len(),
                spec.q_mu(),
                spec.q_phi()
            )));
        }
        Ok(())
    }
}

/// Per-observation `(mu_i, phi_i)` implied by `theta`.
pub fn fitted_parameters(spec: &ModelSpec, theta: &Theta) -> Result<(Vec<f64>, Vec<f64>)> {
    theta.check_dims(spec)?;
    let eta = spec.x() * &theta.beta;
    let varsigma = spec.z() * &theta.gamma;
    let mut mu = Vec::with_capacity(spec.n());
    let mut phi = Vec::with_capacity(spec.n());
    for i in 0..spec.n() {
        let m = spec.link_mu().inverse(eta[i]);
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::Domain {
                row: i,
                what: "mu",
                value: m,
            });
        }
        let p = spec.link_phi().inverse(varsigma[i]);
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::Domain {
                row: i,
                what: "phi",
                value: p,
            });
        }
        mu.push(m);
        phi.push(p);
    }
    Ok((mu, phi))
}

fn distributions(spec: &ModelSpec, theta: &Theta) -> Result<Vec<Zip3>> {
    let (mu, phi) = fitted_parameters(spec, theta)?;
    mu.into_iter()
        .zip(phi)
        .map(|(m, p)| Zip3::new(m, p))
        .collect()
}

pub fn log_likelihood(spec: &ModelSpec, theta: &Theta) -> Result<f64> {
    let dists = distributions(spec, theta)?;
    Ok(dists
        .iter()
        .zip(spec.y())
        .map(|(d, &y)| d.log_pmf(y))
        .sum())
}

/// Per-observation pieces of the score.
///
/// `d_mu`, `d_phi` are the log-pmf partials and `l_mu`, `l_phi` the inverse
/// link slopes. `y_star`, `mu_star`, `c1`, `c2` and `rho` are the vectors of
/// the matrix form `U_beta = X' L_mu [(y* - mu*) + rho . c1]`,
/// `U_gamma = Z' L_phi [(y* - 1) + rho . c2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreParts {
    pub d_mu: Vec<f64>,
    pub l_mu: Vec<f64>,
    pub d_phi: Vec<f64>,
    pub l_phi: Vec<f64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub y_star: Vec<f64>,
    pub mu_star: Vec<f64>,
    pub rho: Vec<f64>,
}

pub fn score_parts(spec: &ModelSpec, theta: &Theta) -> Result<ScoreParts> {
    let (mu, phi) = fitted_parameters(spec, theta)?;
    let n = spec.n();
    let mut parts = ScoreParts {
        d_mu: Vec::with_capacity(n),
        l_mu: Vec::with_capacity(n),
        d_phi: Vec::with_capacity(n),
        l_phi: Vec::with_capacity(n),
        c1: Vec::with_capacity(n),
        c2: Vec::with_capacity(n),
        y_star: Vec::with_capacity(n),
        mu_star: Vec::with_capacity(n),
        rho: Vec::with_capacity(n),
    };
    for i in 0..n {
        let (m, p, y) = (mu[i], phi[i], spec.y()[i]);
        let derivs = Zip3::new(m, p)?.log_pmf_derivatives(y)?;
        let yf = y as f64;
        let rate = m + p;
        let log_den = log_add_exp(m.ln(), p.ln() + rate);
        let inv_den = (-log_den).exp();
        let e_over_den = (rate - log_den).exp();
        parts.d_mu.push(derivs.d_mu);
        parts.d_phi.push(derivs.d_phi);
        parts.l_mu.push(1.0 / spec.link_mu().deriv(m));
        parts.l_phi.push(1.0 / spec.link_phi().deriv(p));
        parts.c1.push((1.0 - m) * inv_den + (m - 1.0) / m - yf / rate);
        parts.c2.push(e_over_den - m * inv_den + (rate - yf) / rate);
        parts.y_star.push((yf - 1.0) / rate);
        parts.mu_star.push(1.0 - 1.0 / m);
        parts.rho.push(if y == 0 { 1.0 } else { 0.0 });
    }
    Ok(parts)
}

/// Score vector `(U_beta, U_gamma)` from the chain-rule sums
/// `sum_i d_mu_i l_mu_i x_ij` and `sum_i d_phi_i l_phi_i z_ij`.
pub fn score(spec: &ModelSpec, theta: &Theta) -> Result<DVector<f64>> {
    let parts = score_parts(spec, theta)?;
    Ok(score_from_parts(spec, &parts))
}

fn score_from_parts(spec: &ModelSpec, parts: &ScoreParts) -> DVector<f64> {
    let (q1, q2) = (spec.q_mu(), spec.q_phi());
    let mut u = DVector::zeros(q1 + q2);
    for i in 0..spec.n() {
        let wb = parts.d_mu[i] * parts.l_mu[i];
        let wg = parts.d_phi[i] * parts.l_phi[i];
        for j in 0..q1 {
            u[j] += wb * spec.x()[(i, j)];
        }
        for j in 0..q2 {
            u[q1 + j] += wg * spec.z()[(i, j)];
        }
    }
    u
}

/// Score vector through the matrix form; an independent route to [`score`].
pub fn score_compact(spec: &ModelSpec, theta: &Theta) -> Result<DVector<f64>> {
    let p = score_parts(spec, theta)?;
    let n = spec.n();
    let r_mu = DVector::from_iterator(
        n,
        (0..n).map(|i| p.l_mu[i] * ((p.y_star[i] - p.mu_star[i]) + p.rho[i] * p.c1[i])),
    );
    let r_phi = DVector::from_iterator(
        n,
        (0..n).map(|i| p.l_phi[i] * ((p.y_star[i] - 1.0) + p.rho[i] * p.c2[i])),
    );
    let u_beta = spec.x().tr_mul(&r_mu);
    let u_gamma = spec.z().tr_mul(&r_phi);
    Ok(Theta {
        beta: u_beta,
        gamma: u_gamma,
    }
    .stacked())
}

/// Negative Hessian of the log-likelihood in `theta`, by the chain rule on
/// the analytic second derivatives of the log-pmf.
pub fn observed_information(spec: &ModelSpec, theta: &Theta) -> Result<DMatrix<f64>> {
    let (mu, phi) = fitted_parameters(spec, theta)?;
    let (q1, q2) = (spec.q_mu(), spec.q_phi());
    let s = q1 + q2;
    let mut info = DMatrix::zeros(s, s);
    let mut row = vec![0.0; s];
    for i in 0..spec.n() {
        let d = Zip3::new(mu[i], phi[i])?.log_pmf_derivatives(spec.y()[i])?;
        let a = spec.link_mu().dm_deta(mu[i]);
        let a2 = spec.link_mu().d2m_deta2(mu[i]);
        let b = spec.link_phi().dm_deta(phi[i]);
        let b2 = spec.link_phi().d2m_deta2(phi[i]);
        let w_bb = -(d.d_mumu * a * a + d.d_mu * a2);
        let w_gg = -(d.d_phiphi * b * b + d.d_phi * b2);
        let w_bg = -(d.d_muphi * a * b);
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = if j < q1 { spec.x()[(i, j)] } else { spec.z()[(i, j - q1)] };
        }
        for j in 0..s {
            for k in j..s {
                let w = match (j < q1, k < q1) {
                    (true, true) => w_bb,
                    (false, false) => w_gg,
                    _ => w_bg,
                };
                info[(j, k)] += w * row[j] * row[k];
            }
        }
    }
    for j in 0..s {
        for k in 0..j {
            info[(j, k)] = info[(k, j)];
        }
    }
    Ok(info)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub max_iter: usize,
    /// Relative change in log-likelihood between accepted iterates.
    pub tol_loglik: f64,
    /// Largest absolute score component allowed at convergence.
    pub tol_score: f64,
    pub start: Option<Theta>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol_loglik: 1e-8,
            tol_score: 1e-6,
            start: None,
        }
    }
}

impl FitOptions {
    pub fn with_start(mut self, start: Theta) -> Self {
        self.start = Some(start);
        self
    }
}

/// Maximum-likelihood fit and its inferential summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub theta_hat: Theta,
    /// Standard errors from the inverse observed information, stacked like theta.
    pub se: Vec<f64>,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub observed_info: DMatrix<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub mu_hat: Vec<f64>,
    pub phi_hat: Vec<f64>,
    /// Log-likelihood at the start and after every accepted step.
    pub trace: Vec<f64>,
    pub max_abs_score: f64,
    pub n: usize,
}

impl FitResult {
    /// Evaluates every summary at `theta` for the given model.
    pub fn evaluate(
        spec: &ModelSpec,
        theta: Theta,
        iterations: usize,
        converged: bool,
        trace: Vec<f64>,
    ) -> Result<Self> {
        let loglik = log_likelihood(spec, &theta)?;
        let (mu_hat, phi_hat) = fitted_parameters(spec, &theta)?;
        let observed_info = observed_information(spec, &theta)?;
        let max_abs_score = score(spec, &theta)?.amax();
        let se = standard_errors(&observed_info);
        let s = theta.len() as f64;
        let n = spec.n();
        Ok(Self {
            theta_hat: theta,
            se,
            loglik,
            aic: -2.0 * loglik + 2.0 * s,
            bic: -2.0 * loglik + s * (n as f64).ln(),
            observed_info,
            iterations,
            converged,
            mu_hat,
            phi_hat,
            trace,
            max_abs_score,
            n,
        })
    }

    pub fn n_params(&self) -> usize {
        self.theta_hat.len()
    }

    /// Inverse observed information, if it is invertible.
    pub fn covariance(&self) -> Option<DMatrix<f64>> {
        invert_information(&self.observed_info)
    }
}

fn invert_information(info: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if let Some(chol) = info.clone().cholesky() {
        return Some(chol.inverse());
    }
    info.clone().try_inverse()
}

fn standard_errors(info: &DMatrix<f64>) -> Vec<f64> {
    match invert_information(info) {
        Some(cov) => cov
            .diagonal()
            .iter()
            .map(|&v| if v > 0.0 { v.sqrt() } else { f64::NAN })
            .collect(),
        None => vec![f64::NAN; info.nrows()],
    }
}

/// Method-of-moments start: `mu = ybar`, `phi = s^2 / ybar - 1`, both floored at 0.05.
pub fn default_start(spec: &ModelSpec) -> Theta {
    let n = spec.n() as f64;
    let mean = spec.y().iter().map(|&v| v as f64).sum::<f64>() / n;
    let var = if spec.n() > 1 {
        spec.y()
            .iter()
            .map(|&v| (v as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0)
    } else {
        0.0
    };
    let mu0 = mean.max(0.05);
    let phi0 = if mean > 0.0 { (var / mean - 1.0).max(0.05) } else { 0.05 };
    let mut beta = vec![0.0; spec.q_mu()];
    let mut gamma = vec![0.0; spec.q_phi()];
    beta[0] = spec.link_mu().forward(mu0);
    gamma[0] = spec.link_phi().forward(phi0);
    Theta::new(beta, gamma)
}

const MAX_HALVINGS: usize = 30;
const RIDGE_START: f64 = 1e-6;
const RIDGE_TRIES: usize = 40;
/// Relative size of log-likelihood changes treated as summation noise.
const ROUNDING_FLOOR: f64 = 1e-12;

/// Newton direction `I^{-1} U`, adding a growing ridge when `I` is not
/// positive definite.
fn newton_direction(info: &DMatrix<f64>, u: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(chol) = info.clone().cholesky() {
        return Some(chol.solve(u));
    }
    let s = info.nrows();
    let scale = info.diagonal().amax().max(1.0);
    let mut tau = RIDGE_START;
    for _ in 0..RIDGE_TRIES {
        let ridged = info + DMatrix::identity(s, s) * (tau * scale);
        if let Some(chol) = ridged.cholesky() {
            return Some(chol.solve(u));
        }
        tau *= 10.0;
    }
    None
}

/// Maximum-likelihood fit.
///
/// Errors on rank-deficient designs, an all-zero response, or an infeasible
/// start. Running out of iterations is not an error: the result comes back
/// with `converged = false` and the trace retained.
pub fn fit(spec: &ModelSpec, options: &FitOptions) -> Result<FitResult> {
    spec.check_rank()?;
    if spec.y().iter().all(|&v| v == 0) {
        return Err(Error::Boundary(
            "every response is zero; the mean is estimated on the boundary".to_string(),
        ));
    }
    let q1 = spec.q_mu();
    let mut theta = match &options.start {
        Some(t) => {
            t.check_dims(spec)?;
            t.clone()
        }
        None => default_start(spec),
    };
    let mut ll = log_likelihood(spec, &theta)?;
    let mut trace = vec![ll];
    let mut u = score(spec, &theta)?;
    let mut iterations = 0;
    let mut converged = false;

    for iter in 1..=options.max_iter {
        let info = observed_information(spec, &theta)?;
        let Some(direction) = newton_direction(&info, &u) else {
            break;
        };
        let current = theta.stacked();
        // Below this the log-likelihood sum cannot resolve an ascent step.
        let floor = ROUNDING_FLOOR * ll.abs().max(1.0);
        let predicted_gain = 0.5 * u.dot(&direction);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let candidate = Theta::from_stacked(&(&current + &direction * step), q1);
            if let Ok(cand_ll) = log_likelihood(spec, &candidate) {
                let within_noise =
                    step == 1.0 && predicted_gain.abs() < floor && cand_ll >= ll - floor;
                if cand_ll.is_finite() && (cand_ll >= ll || within_noise) {
                    accepted = Some((candidate, cand_ll));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((next, next_ll)) = accepted else {
            // no ascent possible along the Newton direction
            converged = u.amax() <= options.tol_score;
            break;
        };
        let rel_change = (next_ll - ll).abs() / ll.abs().max(f64::MIN_POSITIVE);
        theta = next;
        ll = next_ll;
        trace.push(ll);
        iterations = iter;
        u = score(spec, &theta)?;
        if rel_change <= options.tol_loglik && u.amax() <= options.tol_score {
            converged = true;
            break;
        }
    }
    FitResult::evaluate(spec, theta, iterations, converged, trace)
}

/// Likelihood-ratio comparison of nested fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrTest {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Numerical slack allowed for a negative statistic between nested fits.
const LR_SLACK: f64 = 1e-8;

pub fn lr_test(full: &FitResult, reduced: &FitResult) -> Result<LrTest> {
    let (s_full, s_red) = (full.n_params(), reduced.n_params());
    if s_full <= s_red {
        return Err(Error::LrTest(format!(
            "full model has {s_full} parameters, reduced has {s_red}; need full > reduced"
        )));
    }
    let raw = 2.0 * (full.loglik - reduced.loglik);
    if raw < -LR_SLACK {
        return Err(Error::LrTest(format!(
            "negative statistic {raw}; fits are not nested or did not converge"
        )));
    }
    let statistic = raw.max(0.0);
    let df = s_full - s_red;
    Ok(LrTest {
        statistic,
        df,
        p_value: chi2_sf(statistic, df),
    })
}
