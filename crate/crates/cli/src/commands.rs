//! Subcommand implementations. Each writes human-readable output to `out`
//! and machine-readable artifacts to files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use zip3::diagnostics::{
    ks_distance_normal, likelihood_displacement, quantile_residuals, relative_changes,
    simulated_envelope, EnvelopeBand,
};
use zip3::regression::lr_test;
use zip3::simulation::{run_study, McSummary};
use zip3::{fit, FitOptions, FitResult, ModelSpec, Theta};

use crate::config::{RunConfig, ScenarioFile};
use crate::data::Dataset;
use crate::error::{write_error, CliError, CliResult};
use crate::report::{
    CasewiseReport, CasewiseSet, DiagnosticsSummary, EnvelopeSummary, FitReport, LdSummary, LrRow,
    RcRow, ResidualSummary,
};

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Data(format!("cannot write output: {e}")))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| write_error(path, e))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Likelihood-ratio tests for each declared term, dropping all of its columns.
pub fn lr_rows(
    config: &RunConfig,
    data: &Dataset,
    spec: &ModelSpec,
    full: &FitResult,
) -> CliResult<Vec<LrRow>> {
    config
        .lr_tests
        .iter()
        .map(|t| {
            let reduced = data.drop_term(spec, t.submodel, &t.term)?;
            let rf = fit(&reduced, &config.options)?;
            if !rf.converged {
                return Err(CliError::NotConverged(format!(
                    "model without {}:{} did not converge",
                    t.submodel, t.term
                )));
            }
            let lr = lr_test(full, &rf)?;
            Ok(LrRow {
                submodel: t.submodel,
                term: t.term.clone(),
                statistic: lr.statistic,
                df: lr.df,
                p_value: lr.p_value,
            })
        })
        .collect()
}

fn not_converged(f: &FitResult) -> CliError {
    CliError::NotConverged(format!(
        "fit did not converge after {} iterations (max |score| = {:e})",
        f.iterations, f.max_abs_score
    ))
}

/// Fits the configured model and builds its report.
pub fn fit_report(config: &RunConfig, data: &Dataset) -> CliResult<(FitResult, FitReport)> {
    let f = fit(&data.spec, &config.options)?;
    let lr = if f.converged {
        lr_rows(config, data, &data.spec, &f)?
    } else {
        Vec::new()
    };
    let report = FitReport::new(data, &f, lr);
    Ok((f, report))
}

pub fn run_fit(config_path: &Path, out: &mut dyn Write) -> CliResult<()> {
    let config = RunConfig::load(config_path)?;
    let data = Dataset::load(&config)?;
    let (f, report) = fit_report(&config, &data)?;
    let json = to_json(&report);
    match &config.output_path {
        Some(p) => write_file(p, &json)?,
        None => emit(out, &json)?,
    }
    emit(out, &report.render())?;
    if f.converged {
        Ok(())
    } else {
        Err(not_converged(&f))
    }
}

/// Rebuilds a fit from a saved report, checking it matches the configured model.
pub fn load_fit_artifact(path: &Path, data: &Dataset) -> CliResult<FitResult> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: cannot read fit artifact: {e}", path.display())))?;
    let report: FitReport = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: not a fit report: {e}", path.display())))?;
    let matches = report.n == data.n()
        && report.coefficients.len() == data.columns.len()
        && report.coefficients.iter().zip(&data.columns).all(|(r, c)| {
            r.submodel == c.submodel && r.term == c.term && r.level == c.level
        });
    if !matches {
        return Err(CliError::Config(format!(
            "{}: fit artifact does not match the configured model and data",
            path.display()
        )));
    }
    let theta = Theta::from_stacked(&report.estimates().into(), data.spec.q_mu());
    Ok(FitResult::evaluate(
        &data.spec,
        theta,
        report.convergence.iterations,
        report.convergence.converged,
        vec![report.loglik],
    )?)
}

#[derive(Debug, Clone)]
pub struct DiagnoseArgs {
    pub config: PathBuf,
    pub fit: Option<PathBuf>,
    pub envelope: bool,
    pub ld: bool,
    pub n_sim: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, var.sqrt())
}

pub fn envelope_csv(band: &EnvelopeBand) -> String {
    let mut s = String::from(
        "index,theoretical_normal_quantile,observed_sorted_residual,lower,median,upper\n",
    );
    for k in 0..band.theoretical.len() {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            k + 1,
            band.theoretical[k],
            band.sorted_residuals[k],
            band.lower[k],
            band.median[k],
            band.upper[k]
        ));
    }
    s
}

pub fn ld_csv(ld: &[Option<f64>]) -> String {
    let mut s = String::from("case_index,ld_value\n");
    for (i, v) in ld.iter().enumerate() {
        match v {
            Some(x) => s.push_str(&format!("{},{x}\n", i + 1)),
            None => s.push_str(&format!("{},\n", i + 1)),
        }
    }
    s
}

pub fn residuals_csv(spec: &ModelSpec, f: &FitResult, q: &[f64]) -> String {
    let mut s = String::from("case_index,y,mu_hat,phi_hat,residual\n");
    for (i, r) in q.iter().enumerate() {
        s.push_str(&format!(
            "{},{},{},{},{r}\n",
            i + 1,
            spec.y()[i],
            f.mu_hat[i],
            f.phi_hat[i]
        ));
    }
    s
}

fn ld_summary(ld: &[Option<f64>]) -> LdSummary {
    let mut ranked: Vec<(usize, f64)> = ld
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|x| (i + 1, x)))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    LdSummary {
        n_missing: ld.iter().filter(|v| v.is_none()).count(),
        max: ranked.first().map(|r| r.1),
        top_cases: ranked.iter().take(5).map(|r| r.0).collect(),
    }
}

pub fn run_diagnose(args: &DiagnoseArgs, out: &mut dyn Write) -> CliResult<()> {
    let config = RunConfig::load(&args.config)?;
    let data = Dataset::load(&config)?;
    let f = match &args.fit {
        Some(p) => load_fit_artifact(p, &data)?,
        None => fit(&data.spec, &config.options)?,
    };
    if !f.converged {
        return Err(not_converged(&f));
    }
    let seed = args.seed.unwrap_or(config.seed);
    let n_sim = args.n_sim.unwrap_or(config.n_sim);
    fs::create_dir_all(&args.out_dir).map_err(|e| write_error(&args.out_dir, e))?;

    let q = quantile_residuals(&f, &data.spec, seed)?.q;
    write_file(&args.out_dir.join("residuals.csv"), &residuals_csv(&data.spec, &f, &q))?;
    let (mean, sd) = mean_sd(&q);
    let mut summary = DiagnosticsSummary {
        n: data.n(),
        seed,
        residuals: ResidualSummary {
            ks_distance: ks_distance_normal(&q),
            mean,
            sd,
        },
        envelope: None,
        ld: None,
    };

    if args.envelope {
        let band = simulated_envelope(&f, &data.spec, n_sim, config.coverage, seed)?;
        write_file(&args.out_dir.join("envelope.csv"), &envelope_csv(&band))?;
        let inside = (0..band.lower.len())
            .filter(|&k| band.lower[k] <= band.sorted_residuals[k] && band.sorted_residuals[k] <= band.upper[k])
            .count();
        summary.envelope = Some(EnvelopeSummary {
            n_sim: band.n_sim,
            n_used: band.n_used,
            coverage: band.coverage,
            fraction_inside: inside as f64 / band.lower.len() as f64,
        });
    }
    if args.ld {
        let ld = likelihood_displacement(&f, &data.spec)?;
        write_file(&args.out_dir.join("ld.csv"), &ld_csv(&ld))?;
        summary.ld = Some(ld_summary(&ld));
    }
    let json = to_json(&summary);
    write_file(&args.out_dir.join("diagnostics.json"), &json)?;
    emit(out, &json)
}

/// Bias and MSE table, one row per sample size.
pub fn mc_csv(summary: &McSummary) -> String {
    let mut s = String::from("n");
    if let Some(row) = summary.rows.first() {
        for p in &row.params {
            s.push_str(&format!(",B({})", p.name));
        }
        for p in &row.params {
            s.push_str(&format!(",MSE({})", p.name));
        }
    }
    s.push_str(",n_converged,n_failed\n");
    for row in &summary.rows {
        s.push_str(&row.n.to_string());
        for p in &row.params {
            s.push_str(&format!(",{}", p.bias));
        }
        for p in &row.params {
            s.push_str(&format!(",{}", p.mse));
        }
        s.push_str(&format!(",{},{}\n", row.n_converged, row.n_failed));
    }
    s
}

fn mc_table(summary: &McSummary) -> String {
    let mut s = String::new();
    for (i, line) in mc_csv(summary).lines().enumerate() {
        let cells: Vec<String> = line
            .split(',')
            .map(|c| match c.parse::<f64>() {
                Ok(v) if i > 0 && c.contains('.') => format!("{v:.4}"),
                _ => c.to_string(),
            })
            .map(|c| format!("{c:>11}"))
            .collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

pub fn run_simulate(scenario: &Path, out_path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let file = ScenarioFile::load(scenario)?;
    let summary = run_study(&file.scenario)?;
    let csv = mc_csv(&summary);
    match out_path.or(file.output_path.as_deref()) {
        Some(p) => {
            write_file(p, &csv)?;
            emit(out, &mc_table(&summary))
        }
        None => emit(out, &csv),
    }
}

/// Parses `none` or a comma-separated list of 1-based case indices.
pub fn parse_drop(spec: &str, n: usize) -> CliResult<Vec<usize>> {
    if spec.trim().eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    let mut cases = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        let i: usize = item
            .parse()
            .map_err(|_| CliError::Config(format!("--drop: '{item}' is not a case index")))?;
        if i == 0 || i > n {
            return Err(CliError::Config(format!(
                "--drop: case {i} out of range (cases are numbered 1 to {n})"
            )));
        }
        if !cases.contains(&i) {
            cases.push(i);
        }
    }
    Ok(cases)
}

fn casewise_set(
    config: &RunConfig,
    data: &Dataset,
    full: &FitResult,
    dropped: Vec<usize>,
) -> CliResult<CasewiseSet> {
    let (spec, reduced) = if dropped.is_empty() {
        (data.spec.clone(), full.clone())
    } else {
        let remaining = data.n() - dropped.len();
        let s = data.spec.n_params();
        if remaining < s + 2 {
            return Err(CliError::Data(format!(
                "removing {} case(s) leaves n = {remaining} < s + 2 = {}",
                dropped.len(),
                s + 2
            )));
        }
        let rows: Vec<usize> = dropped.iter().map(|i| i - 1).collect();
        let spec = data.spec.without_rows(&rows)?;
        let options = FitOptions {
            start: Some(full.theta_hat.clone()),
            ..config.options.clone()
        };
        let f = fit(&spec, &options)?;
        if !f.converged {
            return Err(not_converged(&f));
        }
        (spec, f)
    };
    let changes = relative_changes(full, &reduced)?;
    let rows = data
        .columns
        .iter()
        .enumerate()
        .map(|(j, c)| RcRow {
            submodel: c.submodel,
            term: c.term.clone(),
            level: c.level.clone(),
            rc_percent: changes.rc[j],
            rcse_percent: changes.rcse[j],
        })
        .collect();
    Ok(CasewiseSet {
        dropped,
        n: spec.n(),
        loglik: reduced.loglik,
        rows,
        lr_tests: lr_rows(config, data, &spec, &reduced)?,
    })
}

pub fn casewise_report(config: &RunConfig, data: &Dataset, drops: &[String]) -> CliResult<CasewiseReport> {
    let sets: Vec<Vec<usize>> = drops
        .iter()
        .map(|d| parse_drop(d, data.n()))
        .collect::<CliResult<_>>()?;
    let full = fit(&data.spec, &config.options)?;
    if !full.converged {
        return Err(not_converged(&full));
    }
    let sets = sets
        .into_iter()
        .map(|d| casewise_set(config, data, &full, d))
        .collect::<CliResult<_>>()?;
    Ok(CasewiseReport { sets })
}

pub fn run_casewise(
    config_path: &Path,
    drops: &[String],
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let config = RunConfig::load(config_path)?;
    let data = Dataset::load(&config)?;
    let report = casewise_report(&config, &data, drops)?;
    if let Some(p) = out_path {
        write_file(p, &to_json(&report))?;
    }
    emit(out, &report.render())
}
