//! Residual and influence diagnostics for a fitted model.

use log::warn;
use rand::distr::{Distribution, Open01};
use rand::Rng;
use serde::Serialize;

use crate::dist::Zip3;
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::regression::{fit as fit_model, log_likelihood, FitOptions, FitResult, ModelSpec};
use crate::rng::{stream, substream};
use crate::special::{norm_cdf, norm_ppf};

/// Smallest width allowed for the residual's uniform interval.
const MIN_INTERVAL: f64 = 1e-15;

/// Tag that keeps envelope substreams apart from other uses of the same seed.
const ENVELOPE_STREAM: u64 = 0x454e_5645;

/// Randomized quantile residuals of one fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSet {
    pub q: Vec<f64>,
    pub seed: u64,
}

/// `Phi^{-1}(u)` for `u = F(y - 1) + position * (F(y) - F(y - 1))`.
///
/// `position` lies in `(0, 1)`; the randomized residual draws it uniformly.
pub fn quantile_residual(y: u64, dist: &Zip3, position: f64) -> f64 {
    let (lo, hi) = dist.cdf_interval(y);
    let mut width = hi - lo;
    if width <= 0.0 {
        warn!(
            "zero-width cdf interval at y = {y} (mu = {}, phi = {}); clamping",
            dist.mu(),
            dist.phi()
        );
        width = MIN_INTERVAL;
    }
    let u = (lo + position * width).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
    norm_ppf(u)
}

fn residuals_from<R: Rng + ?Sized>(
    y: &[u64],
    mu: &[f64],
    phi: &[f64],
    rng: &mut R,
) -> Result<Vec<f64>> {
    y.iter()
        .zip(mu.iter().zip(phi))
        .map(|(&yi, (&m, &p))| {
            let dist = Zip3::new(m, p)?;
            let position: f64 = Open01.sample(rng);
            Ok(quantile_residual(yi, &dist, position))
        })
        .collect()
}

fn require_converged(fit: &FitResult) -> Result<()> {
    if fit.converged {
        Ok(())
    } else {
        Err(Error::NotConverged)
    }
}

fn check_alignment(fit: &FitResult, spec: &ModelSpec) -> Result<()> {
    if fit.mu_hat.len() != spec.n() || fit.theta_hat.beta.len() != spec.q_mu() {
        return Err(Error::Dimension(
            "fit does not belong to this model specification".to_string(),
        ));
    }
    Ok(())
}

/// Randomized quantile residuals at the fitted `(mu_i, phi_i)`.
pub fn quantile_residuals(fit: &FitResult, spec: &ModelSpec, seed: u64) -> Result<ResidualSet> {
    require_converged(fit)?;
    check_alignment(fit, spec)?;
    let mut rng = stream(seed);
    let q = residuals_from(spec.y(), &fit.mu_hat, &fit.phi_hat, &mut rng)?;
    Ok(ResidualSet { q, seed })
}

/// Blom plotting positions `Phi^{-1}((i - 3/8) / (n + 1/4))`, `i = 1..n`.
pub fn normal_scores(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| norm_ppf((i as f64 - 0.375) / (n as f64 + 0.25)))
        .collect()
}

/// Kolmogorov-Smirnov distance between the sample and `N(0, 1)`.
pub fn ks_distance_normal(sample: &[f64]) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = norm_cdf(v);
            (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}

/// Sorted observed residuals with a pointwise band from refits on data
/// simulated from the fitted model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeBand {
    pub theoretical: Vec<f64>,
    pub sorted_residuals: Vec<f64>,
    pub lower: Vec<f64>,
    pub median: Vec<f64>,
    pub upper: Vec<f64>,
    pub n_sim: usize,
    /// Replicates that refit successfully and entered the band.
    pub n_used: usize,
    pub coverage: f64,
}

/// Linear-interpolation empirical quantile of sorted data.
fn sorted_quantile(sorted: &[f64], prob: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn simulated_envelope(
    fit: &FitResult,
    spec: &ModelSpec,
    n_sim: usize,
    coverage: f64,
    seed: u64,
) -> Result<EnvelopeBand> {
    require_converged(fit)?;
    check_alignment(fit, spec)?;
    if n_sim == 0 {
        return Err(Error::InvalidParameter("n_sim must be at least 1".to_string()));
    }
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "coverage must lie in (0, 1), got {coverage}"
        )));
    }
    let mut observed = quantile_residuals(fit, spec, seed)?.q;
    observed.sort_by(f64::total_cmp);

    let dists: Vec<Zip3> = fit
        .mu_hat
        .iter()
        .zip(&fit.phi_hat)
        .map(|(&m, &p)| Zip3::new(m, p))
        .collect::<Result<_>>()?;
    let options = FitOptions::default().with_start(fit.theta_hat.clone());

    let replicates: Vec<Option<Vec<f64>>> = map_indexed(n_sim, |r| {
        let mut rng = substream(seed, &[ENVELOPE_STREAM, r as u64]);
        let y: Vec<u64> = dists.iter().map(|d| d.sample_one(&mut rng)).collect();
        let sim_spec = spec.with_response(y).ok()?;
        let refit = match fit_model(&sim_spec, &options) {
            Ok(f) if f.converged => f,
            Ok(_) => {
                warn!("envelope replicate {r}: refit did not converge, dropped");
                return None;
            }
            Err(e) => {
                warn!("envelope replicate {r}: refit failed ({e}), dropped");
                return None;
            }
        };
        let mut q = residuals_from(sim_spec.y(), &refit.mu_hat, &refit.phi_hat, &mut rng).ok()?;
        q.sort_by(f64::total_cmp);
        Some(q)
    });

    let used: Vec<Vec<f64>> = replicates.into_iter().flatten().collect();
    let dropped = n_sim - used.len();
    if used.is_empty() || dropped * 5 > n_sim {
        return Err(Error::TooManyFailures {
            failed: dropped,
            total: n_sim,
        });
    }

    let n = spec.n();
    let alpha = (1.0 - coverage) / 2.0;
    let mut lower = Vec::with_capacity(n);
    let mut median = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut column = vec![0.0; used.len()];
    for k in 0..n {
        for (slot, rep) in column.iter_mut().zip(&used) {
            *slot = rep[k];
        }
        column.sort_by(f64::total_cmp);
        lower.push(sorted_quantile(&column, alpha));
        median.push(sorted_quantile(&column, 0.5));
        upper.push(sorted_quantile(&column, 1.0 - alpha));
    }
    Ok(EnvelopeBand {
        theoretical: normal_scores(n),
        sorted_residuals: observed,
        lower,
        median,
        upper,
        n_sim,
        n_used: used.len(),
        coverage,
    })
}

/// Leave-one-out refits, each warm-started at the full-data estimate.
/// A refit that errors or fails to converge comes back as `None`.
pub fn leave_one_out_fits(fit: &FitResult, spec: &ModelSpec) -> Result<Vec<Option<FitResult>>> {
    require_converged(fit)?;
    check_alignment(fit, spec)?;
    if spec.n() < spec.n_params() + 2 {
        return Err(Error::Design(format!(
            "case deletion needs n >= s + 2, have n = {} and s = {}",
            spec.n(),
            spec.n_params()
        )));
    }
    let options = FitOptions::default().with_start(fit.theta_hat.clone());
    Ok(map_indexed(spec.n(), |i| {
        let reduced = spec.without_rows(&[i]).ok()?;
        match fit_model(&reduced, &options) {
            Ok(f) if f.converged => Some(f),
            Ok(_) => {
                warn!("case {i}: leave-one-out refit did not converge");
                None
            }
            Err(e) => {
                warn!("case {i}: leave-one-out refit failed ({e})");
                None
            }
        }
    }))
}

/// `LD_i = 2 [l(theta_hat) - l(theta_hat_(i))]`, both terms on the full data.
fn displacement(
    fit: &FitResult,
    spec: &ModelSpec,
    loo: &[Option<FitResult>],
) -> Vec<Option<f64>> {
    loo.iter()
        .map(|f| {
            let f = f.as_ref()?;
            let ll = log_likelihood(spec, &f.theta_hat).ok()?;
            Some(2.0 * (fit.loglik - ll))
        })
        .collect()
}

/// Likelihood displacement of every case; `None` where the refit failed.
pub fn likelihood_displacement(fit: &FitResult, spec: &ModelSpec) -> Result<Vec<Option<f64>>> {
    let loo = leave_one_out_fits(fit, spec)?;
    Ok(displacement(fit, spec, &loo))
}

/// Percent relative changes in estimates and standard errors after deletion.
/// Entries are `None` where the full-data value is zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeChanges {
    pub rc: Vec<Option<f64>>,
    pub rcse: Vec<Option<f64>>,
}

fn percent_change(full: f64, reduced: f64) -> Option<f64> {
    if full == 0.0 || !full.is_finite() || !reduced.is_finite() {
        None
    } else {
        Some(((full - reduced) / full).abs() * 100.0)
    }
}

pub fn relative_changes(full: &FitResult, without: &FitResult) -> Result<RelativeChanges> {
    if full.theta_hat.beta.len() != without.theta_hat.beta.len()
        || full.theta_hat.gamma.len() != without.theta_hat.gamma.len()
    {
        return Err(Error::Dimension(
            "fits have different model structures".to_string(),
        ));
    }
    require_converged(full)?;
    require_converged(without)?;
    let a = full.theta_hat.stacked();
    let b = without.theta_hat.stacked();
    Ok(RelativeChanges {
        rc: a.iter().zip(b.iter()).map(|(&x, &y)| percent_change(x, y)).collect(),
        rcse: full
            .se
            .iter()
            .zip(&without.se)
            .map(|(&x, &y)| percent_change(x, y))
            .collect(),
    })
}

/// Case-deletion influence for every observation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceReport {
    pub ld: Vec<Option<f64>>,
    /// Per deleted case, percent change of each coefficient; `None` when the refit failed.
    pub rc: Vec<Option<Vec<Option<f64>>>>,
    pub rcse: Vec<Option<Vec<Option<f64>>>>,
}

pub fn influence_report(fit: &FitResult, spec: &ModelSpec) -> Result<InfluenceReport> {
    let loo = leave_one_out_fits(fit, spec)?;
    let ld = displacement(fit, spec, &loo);
    let mut rc = Vec::with_capacity(loo.len());
    let mut rcse = Vec::with_capacity(loo.len());
    for f in &loo {
        match f.as_ref().map(|f| relative_changes(fit, f)).transpose()? {
            Some(c) => {
                rc.push(Some(c.rc));
                rcse.push(Some(c.rcse));
            }
            None => {
                rc.push(None);
                rcse.push(None);
            }
        }
    }
    Ok(InfluenceReport { ld, rc, rcse })
}
