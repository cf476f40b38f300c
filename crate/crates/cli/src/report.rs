//! Serializable reports and their fixed-width renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use zip3::{FitResult, Link};

use crate::config::Submodel;
use crate::data::Dataset;

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefRow {
    pub submodel: Submodel,
    pub term: String,
    pub level: Option<String>,
    pub estimate: f64,
    pub std_error: Option<f64>,
    /// `exp(estimate)`; present only for log-link submodels.
    pub exp_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub converged: bool,
    pub iterations: usize,
    pub max_abs_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrRow {
    pub submodel: Submodel,
    pub term: String,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Links {
    pub mu: String,
    pub phi: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub n: usize,
    pub links: Links,
    pub coefficients: Vec<CoefRow>,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub convergence: Convergence,
    pub lr_tests: Vec<LrRow>,
}

impl FitReport {
    pub fn new(data: &Dataset, fit: &FitResult, lr_tests: Vec<LrRow>) -> Self {
        let est = fit.theta_hat.stacked();
        let coefficients = data
            .columns
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let link = match c.submodel {
                    Submodel::Mu => data.spec.link_mu(),
                    Submodel::Phi => data.spec.link_phi(),
                };
                CoefRow {
                    submodel: c.submodel,
                    term: c.term.clone(),
                    level: c.level.clone(),
                    estimate: est[j],
                    std_error: finite(fit.se[j]),
                    exp_estimate: (link == Link::Log).then(|| est[j].exp()),
                }
            })
            .collect();
        Self {
            n: fit.n,
            links: Links {
                mu: data.spec.link_mu().to_string(),
                phi: data.spec.link_phi().to_string(),
            },
            coefficients,
            loglik: fit.loglik,
            aic: fit.aic,
            bic: fit.bic,
            convergence: Convergence {
                converged: fit.converged,
                iterations: fit.iterations,
                max_abs_score: fit.max_abs_score,
            },
            lr_tests,
        }
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.estimate).collect()
    }

    /// Fixed-width table with four decimals.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<8} {:<16} {:<14} {:>10} {:>10} {:>10}",
            "Submodel", "Term", "Level", "Estimate", "Std.Error", "Exp(est)"
        );
        for c in &self.coefficients {
            let _ = writeln!(
                s,
                "{:<8} {:<16} {:<14} {:>10} {:>10} {:>10}",
                c.submodel.to_string(),
                c.term,
                c.level.as_deref().unwrap_or(""),
                fmt4(Some(c.estimate)),
                fmt4(c.std_error),
                fmt4(c.exp_estimate)
            );
        }
        let _ = writeln!(
            s,
            "\nn = {}  loglik = {:.4}  AIC = {:.4}  BIC = {:.4}",
            self.n, self.loglik, self.aic, self.bic
        );
        let _ = writeln!(
            s,
            "converged = {}  iterations = {}  max|score| = {:.3e}",
            self.convergence.converged, self.convergence.iterations, self.convergence.max_abs_score
        );
        if !self.lr_tests.is_empty() {
            let _ = writeln!(s, "\nLikelihood ratio tests");
            let _ = writeln!(s, "{:<8} {:<16} {:>10} {:>4} {:>10}", "Submodel", "Term", "LR", "df", "p-value");
            for t in &self.lr_tests {
                let _ = writeln!(
                    s,
                    "{:<8} {:<16} {:>10.4} {:>4} {:>10}",
                    t.submodel.to_string(),
                    t.term,
                    t.statistic,
                    t.df,
                    fmt_p(t.p_value)
                );
            }
        }
        s
    }
}

pub fn fmt4(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.4}"),
        None => "NA".to_string(),
    }
}

pub fn fmt_p(p: f64) -> String {
    if p < 1e-4 {
        "< 0.0001".to_string()
    } else {
        format!("{p:.4}")
    }
}

/// Relative changes after deleting one set of cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcRow {
    pub submodel: Submodel,
    pub term: String,
    pub level: Option<String>,
    pub rc_percent: Option<f64>,
    pub rcse_percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasewiseSet {
    /// 1-based case indices removed; empty for the full data.
    pub dropped: Vec<usize>,
    pub n: usize,
    pub loglik: f64,
    pub rows: Vec<RcRow>,
    pub lr_tests: Vec<LrRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasewiseReport {
    pub sets: Vec<CasewiseSet>,
}

impl CasewiseReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<14} {:<8} {:<16} {:<14} {:>10} {:>10}",
            "Removed", "Submodel", "Term", "Level", "RC(%)", "RCSE(%)"
        );
        for set in &self.sets {
            let label = if set.dropped.is_empty() {
                "none".to_string()
            } else {
                let ids: Vec<String> = set.dropped.iter().map(usize::to_string).collect();
                format!("{{{}}}", ids.join(", "))
            };
            for r in &set.rows {
                let _ = writeln!(
                    s,
                    "{:<14} {:<8} {:<16} {:<14} {:>10} {:>10}",
                    label,
                    r.submodel.to_string(),
                    r.term,
                    r.level.as_deref().unwrap_or(""),
                    fmt4(r.rc_percent),
                    fmt4(r.rcse_percent)
                );
            }
            for t in &set.lr_tests {
                let _ = writeln!(
                    s,
                    "{:<14} {:<8} {:<16} LR p-value = {}",
                    label,
                    t.submodel.to_string(),
                    t.term,
                    fmt_p(t.p_value)
                );
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub ks_distance: f64,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSummary {
    pub n_sim: usize,
    pub n_used: usize,
    pub coverage: f64,
    pub fraction_inside: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdSummary {
    pub n_missing: usize,
    pub max: Option<f64>,
    /// 1-based cases with the largest displacement, largest first.
    pub top_cases: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSummary {
    pub n: usize,
    pub seed: u64,
    pub residuals: ResidualSummary,
    pub envelope: Option<EnvelopeSummary>,
    pub ld: Option<LdSummary>,
}
