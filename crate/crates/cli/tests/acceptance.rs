//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use zip3::diagnostics::{
    ks_distance_normal, likelihood_displacement, quantile_residuals, simulated_envelope,
};
use zip3::regression::{log_likelihood, observed_information, score, score_compact};
use zip3::rng::{stream, substream, Stream};
use zip3::simulation::{generate_dataset, run_study, ScenarioConfig};
use zip3::{fit, FitOptions, ModelSpec, Theta, Zip3};
use zip3_cli::commands::{casewise_report, fit_report, mc_csv};
use zip3_cli::config::{RunConfig, ScenarioFile};
use zip3_cli::data::Dataset;
use zip3_cli::report::FitReport;

use common::{data, read_numeric_csv, stderr, stdout, zip3};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Reference MSE row at n = 500 for beta0, beta1, beta2, gamma0, gamma1.
const REFERENCE_MSE_500: [f64; 5] = [0.0734, 0.1305, 0.0489, 0.0167, 0.0411];

fn monte_carlo() -> Outcome {
    let mut file = ScenarioFile::load(&data("scenario1.conf")).unwrap();
    file.scenario.n_list = vec![100, 200, 500];
    let start = Instant::now();
    let summary = run_study(&file.scenario).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let row500 = &summary.rows[2];
    let mut ok = secs <= 600.0;
    let mut notes = Vec::new();
    for (j, p) in row500.params.iter().enumerate() {
        let lo = 0.5 * REFERENCE_MSE_500[j];
        let hi = 1.5 * REFERENCE_MSE_500[j];
        let bias_ok = p.bias.abs() <= 0.05;
        let mse_ok = (lo..=hi).contains(&p.mse);
        let mses: Vec<f64> = summary.rows.iter().map(|r| r.params[j].mse).collect();
        let decreasing = mses.windows(2).all(|w| w[1] < w[0]);
        ok &= bias_ok && mse_ok && decreasing;
        notes.push(format!(
            "{} bias {:+.4} mse {:.4} [{lo:.4},{hi:.4}] {}",
            p.name,
            p.bias,
            p.mse,
            if decreasing { "decr" } else { "NOT decr" }
        ));
    }
    let failed: Vec<usize> = summary.rows.iter().map(|r| r.n_failed).collect();
    outcome(
        ok,
        format!("{}; failed per n {failed:?}; {secs:.1}s", notes.join("; ")),
    )
}

const MU_GRID: [f64; 4] = [0.1, 1.0, 5.0, 20.0];
const PHI_GRID: [f64; 4] = [0.0, 0.5, 2.0, 10.0];

fn power_over_factorial(lambda: f64, y: u64) -> f64 {
    (1..=y).fold(1.0, |acc, k| acc * lambda / k as f64)
}

fn distribution_suite() -> Outcome {
    let start = Instant::now();
    let mut worst = [0.0f64; 4];
    for &mu in &MU_GRID {
        for &phi in &PHI_GRID {
            let d = Zip3::new(mu, phi).unwrap();
            let ymax = d.cdf_iter().position(|c| c >= 1.0 - 1e-12).unwrap() as u64;
            let total: f64 = (0..=ymax).map(|y| d.pmf(y)).sum();
            let mean: f64 = (0..=ymax).map(|y| y as f64 * d.pmf(y)).sum();
            let var: f64 = (0..=ymax).map(|y| (y as f64 - mu).powi(2) * d.pmf(y)).sum();
            worst[0] = worst[0].max((total - 1.0).abs());
            worst[1] = worst[1].max((mean - mu).abs());
            worst[2] = worst[2].max((var - mu * (1.0 + phi)).abs());
            let z1 = d.to_zip1();
            for y in 0..=50 {
                let poisson = (-z1.lambda()).exp() * power_over_factorial(z1.lambda(), y);
                let want = if y == 0 {
                    z1.p() + (1.0 - z1.p()) * poisson
                } else {
                    (1.0 - z1.p()) * poisson
                };
                worst[3] = worst[3].max((d.pmf(y) - want).abs());
            }
        }
    }
    let mut poisson_err = 0.0f64;
    for &mu in &MU_GRID {
        let d = Zip3::new(mu, 0.0).unwrap();
        for y in 0..=50 {
            poisson_err = poisson_err.max((d.pmf(y) - (-mu).exp() * power_over_factorial(mu, y)).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst[0] < 1e-10
        && worst[1] < 1e-8
        && worst[2] < 1e-6
        && worst[3] < 1e-12
        && poisson_err < 1e-12
        && secs <= 10.0;
    outcome(
        pass,
        format!(
            "norm {:.1e}, mean {:.1e}, var {:.1e}, oracle {:.1e}, poisson {:.1e}; {secs:.2}s",
            worst[0], worst[1], worst[2], worst[3], poisson_err
        ),
    )
}

fn random_case(seed: u64) -> (ModelSpec, Theta) {
    let mut rng = stream(seed);
    let n = rng.random_range(30..120);
    let config = ScenarioConfig::scenario1(vec![n], 1, seed);
    let spec = generate_dataset(&config, n, &mut rng);
    let jitter = |v: f64, rng: &mut Stream| v + rng.random_range(-0.5..0.5);
    let beta = config.beta_true.iter().map(|&v| jitter(v, &mut rng)).collect();
    let gamma = config.gamma_true.iter().map(|&v| jitter(v, &mut rng)).collect();
    (spec, Theta::new(beta, gamma))
}

fn shifted(theta: &Theta, q1: usize, moves: &[(usize, f64)]) -> Theta {
    let mut v = theta.stacked();
    for &(j, h) in moves {
        v[j] += h;
    }
    Theta::from_stacked(&v, q1)
}

fn rel(a: f64, num: f64, floor: f64) -> f64 {
    (a - num).abs() / num.abs().max(floor)
}

fn derivative_suite() -> Outcome {
    let start = Instant::now();
    let lp = |mu: f64, phi: f64, y: u64| Zip3::new(mu, phi).unwrap().log_pmf(y);
    let mut first = 0.0f64;
    let mut second = 0.0f64;
    let mut rng = stream(31_337);
    for _ in 0..50 {
        let mu = rng.random_range(0.05..10.0);
        let phi = rng.random_range(0.05..10.0);
        let y = rng.random_range(0..=20u64);
        let a = Zip3::new(mu, phi).unwrap().log_pmf_derivatives(y).unwrap();
        let (hm, hp) = (1e-6 * mu.max(1.0), 1e-6 * phi.max(1.0));
        let dm = (lp(mu + hm, phi, y) - lp(mu - hm, phi, y)) / (2.0 * hm);
        let dp = (lp(mu, phi + hp, y) - lp(mu, phi - hp, y)) / (2.0 * hp);
        first = first.max(rel(a.d_mu, dm, 1.0)).max(rel(a.d_phi, dp, 1.0));
        let (hm, hp) = (1e-4 * mu.max(1.0), 1e-4 * phi.max(1.0));
        let f0 = lp(mu, phi, y);
        let dmm = (lp(mu + hm, phi, y) - 2.0 * f0 + lp(mu - hm, phi, y)) / (hm * hm);
        let dpp = (lp(mu, phi + hp, y) - 2.0 * f0 + lp(mu, phi - hp, y)) / (hp * hp);
        let dmp = (lp(mu + hm, phi + hp, y) - lp(mu + hm, phi - hp, y) - lp(mu - hm, phi + hp, y)
            + lp(mu - hm, phi - hp, y))
            / (4.0 * hm * hp);
        second = second
            .max(rel(a.d_mumu, dmm, 1.0))
            .max(rel(a.d_phiphi, dpp, 1.0))
            .max(rel(a.d_muphi, dmp, 1.0));
    }
    for seed in 0..50 {
        let (spec, theta) = random_case(seed);
        let q1 = spec.q_mu();
        let ll = |t: &Theta| log_likelihood(&spec, t).unwrap();
        let u = score(&spec, &theta).unwrap();
        let info = observed_information(&spec, &theta).unwrap();
        let base = theta.stacked();
        let s = theta.len();
        let mut num = nalgebra::DMatrix::zeros(s, s);
        let f0 = ll(&theta);
        for j in 0..s {
            let h = 1e-6 * base[j].abs().max(1.0);
            let d = (ll(&shifted(&theta, q1, &[(j, h)])) - ll(&shifted(&theta, q1, &[(j, -h)]))) / (2.0 * h);
            first = first.max(rel(u[j], d, 1.0));
            let hj = 1e-4 * base[j].abs().max(1.0);
            num[(j, j)] = -(ll(&shifted(&theta, q1, &[(j, hj)])) - 2.0 * f0
                + ll(&shifted(&theta, q1, &[(j, -hj)])))
                / (hj * hj);
            for k in (j + 1)..s {
                let hk = 1e-4 * base[k].abs().max(1.0);
                let at = |a: f64, b: f64| ll(&shifted(&theta, q1, &[(j, a), (k, b)]));
                let v = -(at(hj, hk) - at(hj, -hk) - at(-hj, hk) + at(-hj, -hk)) / (4.0 * hj * hk);
                num[(j, k)] = v;
                num[(k, j)] = v;
            }
        }
        let scale = num.amax().max(1.0);
        for j in 0..s {
            for k in 0..s {
                second = second.max(rel(info[(j, k)], num[(j, k)], 1e-2 * scale));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        first <= 1e-5 && second <= 1e-4 && secs <= 10.0,
        format!("first-order {first:.1e}, second-order {second:.1e}; {secs:.2}s"),
    )
}

fn two_path_score() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 1000..1050 {
        let (spec, theta) = random_case(seed);
        let a = score(&spec, &theta).unwrap();
        let b = score_compact(&spec, &theta).unwrap();
        worst = worst.max((a - b).amax());
    }
    outcome(worst <= 1e-10, format!("max abs difference {worst:.1e}"))
}

fn recovery() -> Outcome {
    let config = ScenarioConfig::scenario1(vec![20_000], 1, 2);
    let spec = generate_dataset(&config, 20_000, &mut stream(20_000));
    let f = fit(&spec, &FitOptions::default()).unwrap();
    let est = f.theta_hat.stacked();
    let z: Vec<f64> = config
        .truth()
        .iter()
        .enumerate()
        .map(|(j, t)| (est[j] - t) / f.se[j])
        .collect();
    let max_z = z.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    outcome(
        f.converged && max_z <= 3.0 && f.iterations <= 30,
        format!("max |est - truth| / SE = {max_z:.2}, {} iterations", f.iterations),
    )
}

fn calibration() -> Outcome {
    let n = 2000;
    let critical = 1.63 / (n as f64).sqrt();
    let mut passes = 0;
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let config = ScenarioConfig::scenario1(vec![n], 1, seed);
        let spec = generate_dataset(&config, n, &mut substream(6, &[seed]));
        let f = fit(&spec, &FitOptions::default()).unwrap();
        let d = ks_distance_normal(&quantile_residuals(&f, &spec, seed).unwrap().q);
        worst = worst.max(d);
        if d < critical {
            passes += 1;
        }
    }
    outcome(
        passes >= 19,
        format!("{passes}/20 below {critical:.4} (largest KS {worst:.4})"),
    )
}

/// Linear-interpolation 99th percentile.
fn p99(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * 0.99;
    let lo = h.floor() as usize;
    v[lo] + (h - lo as f64) * (v[h.ceil() as usize] - v[lo])
}

fn influence() -> Outcome {
    let mut hits = 0;
    for seed in 0..20u64 {
        let config = ScenarioConfig::scenario1(vec![200], 1, seed);
        let mut rng = substream(7, &[seed]);
        let base = generate_dataset(&config, 200, &mut rng);
        let target = rng.random_range(0..200usize);
        let mut y = base.y().to_vec();
        y[target] = 50;
        let spec = base.with_response(y).unwrap();
        let f = fit(&spec, &FitOptions::default()).unwrap();
        let ld = likelihood_displacement(&f, &spec).unwrap();
        let others: Vec<f64> = ld
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != target)
            .filter_map(|(_, v)| *v)
            .collect();
        if ld[target].is_some_and(|v| v > p99(others)) {
            hits += 1;
        }
    }
    outcome(hits >= 18, format!("{hits}/20 seeds flag the injected case"))
}

fn bits_equal(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

fn golden_matches(name: &str, actual: &[u8]) -> bool {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read(path).is_ok_and(|g| g == actual)
}

fn cli_parity() -> Outcome {
    let conf = data("toy.conf");
    let config = RunConfig::load(&conf).unwrap();
    let ds = Dataset::load(&config).unwrap();
    let mut checks: Vec<(&str, bool)> = Vec::new();

    let o = zip3(&["fit", "--config", conf.to_str().unwrap()]);
    let text = stdout(&o);
    let json_end = text.find("\n}\n").map_or(0, |i| i + 3);
    let report: Result<FitReport, _> = serde_json::from_str(&text[..json_end]);
    let (lib_fit, lib_report) = fit_report(&config, &ds).unwrap();
    checks.push(("fit", o.status.success() && report.as_ref().is_ok_and(|r| *r == lib_report)));
    checks.push(("fit golden", golden_matches("toy_fit.txt", &o.stdout)));

    let dir = tempfile::tempdir().unwrap();
    let o = zip3(&[
        "diagnose",
        "--config",
        conf.to_str().unwrap(),
        "--envelope",
        "--ld",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let col = |file: &str, j: usize| -> Vec<f64> {
        read_numeric_csv(&dir.path().join(file)).1.iter().map(|r| r[j]).collect()
    };
    let q = quantile_residuals(&lib_fit, &ds.spec, config.seed).unwrap().q;
    let band = simulated_envelope(&lib_fit, &ds.spec, config.n_sim, config.coverage, config.seed).unwrap();
    let ld: Vec<f64> = likelihood_displacement(&lib_fit, &ds.spec)
        .unwrap()
        .into_iter()
        .map(|v| v.unwrap_or(f64::NAN))
        .collect();
    checks.push((
        "diagnose",
        o.status.success()
            && bits_equal(&col("residuals.csv", 4), &q)
            && bits_equal(&col("envelope.csv", 1), &band.theoretical)
            && bits_equal(&col("envelope.csv", 2), &band.sorted_residuals)
            && bits_equal(&col("envelope.csv", 3), &band.lower)
            && bits_equal(&col("envelope.csv", 4), &band.median)
            && bits_equal(&col("envelope.csv", 5), &band.upper)
            && bits_equal(&col("ld.csv", 1), &ld),
    ));
    checks.push((
        "diagnose golden",
        ["residuals.csv", "envelope.csv", "ld.csv", "diagnostics.json"]
            .iter()
            .all(|f| golden_matches(&format!("toy_{f}"), &fs::read(dir.path().join(f)).unwrap())),
    ));

    let smoke = data("smoke.conf");
    let o = zip3(&["simulate", "--scenario", smoke.to_str().unwrap()]);
    let lib = mc_csv(&run_study(&ScenarioFile::load(&smoke).unwrap().scenario).unwrap());
    checks.push(("simulate", o.status.success() && stdout(&o) == lib));
    checks.push(("simulate golden", golden_matches("smoke_simulate.csv", &o.stdout)));

    let json = dir.path().join("casewise.json");
    let o = zip3(&[
        "casewise",
        "--config",
        conf.to_str().unwrap(),
        "--drop",
        "none",
        "--drop",
        "3",
        "--drop",
        "3,17",
        "--out",
        json.to_str().unwrap(),
    ]);
    let lib = casewise_report(&config, &ds, &["none".into(), "3".into(), "3,17".into()]).unwrap();
    let cli: Option<zip3_cli::report::CasewiseReport> =
        fs::read_to_string(&json).ok().and_then(|t| serde_json::from_str(&t).ok());
    checks.push(("casewise", o.status.success() && cli.is_some_and(|c| c == lib)));
    checks.push(("casewise golden", golden_matches("toy_casewise.txt", &o.stdout)));

    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} parity checks bit-identical", checks.len())
        } else {
            format!("mismatch in {failed:?}")
        },
    )
}

fn walkthrough() -> Outcome {
    let conf = data("oromia_like.conf");
    let config = RunConfig::load(&conf).unwrap();
    let ds = Dataset::load(&config).unwrap();
    let zeros = ds.spec.y().iter().filter(|&&v| v == 0).count();
    let shape_ok = ds.n() == 691 && zeros == 504 && ds.levels().len() == 3;

    let o = zip3(&["fit", "--config", conf.to_str().unwrap()]);
    let fit_ok = o.status.success();
    let (f, report) = fit_report(&config, &ds).unwrap();
    let lr_ok = report.lr_tests.len() == 3;

    let dir = tempfile::tempdir().unwrap();
    let o = zip3(&[
        "diagnose",
        "--config",
        conf.to_str().unwrap(),
        "--envelope",
        "--ld",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let diag_ok = o.status.success();
    if !diag_ok {
        eprintln!("{}", stderr(&o));
    }
    let ld = likelihood_displacement(&f, &ds.spec).unwrap();
    let mut ranked: Vec<(usize, f64)> = ld.iter().enumerate().map(|(i, v)| (i + 1, v.unwrap())).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    let (a, b) = (ranked[0].0, ranked[1].0);
    let drops = [a.to_string(), b.to_string(), format!("{a},{b}")];
    let cw = casewise_report(&config, &ds, &drops).unwrap();
    let max_rc = cw
        .sets
        .iter()
        .flat_map(|s| &s.rows)
        .filter_map(|r| r.rc_percent)
        .fold(0.0f64, f64::max);
    let lr_kept = cw.sets.iter().flat_map(|s| &s.lr_tests).all(|t| t.p_value < 0.05);
    outcome(
        shape_ok && fit_ok && lr_ok && diag_ok,
        format!(
            "n = {}, zeros = {zeros} ({:.1}%), loglik {:.4}, AIC {:.4}, BIC {:.4}; top LD cases {a}, {b}; \
             largest RC after deletion {max_rc:.2}%; LR tests stay significant: {lr_kept}",
            ds.n(),
            100.0 * zeros as f64 / ds.n() as f64,
            report.loglik,
            report.aic,
            report.bic
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Monte Carlo bias/MSE at n = 100, 200, 500", monte_carlo),
        ("distribution correctness suite", distribution_suite),
        ("derivatives, score and information vs finite differences", derivative_suite),
        ("elementwise and matrix score agree", two_path_score),
        ("parameter recovery at n = 20000", recovery),
        ("quantile residual calibration", calibration),
        ("influence detection of an injected outlier", influence),
        ("CLI parity with library calls", cli_parity),
        ("synthetic application walkthrough", walkthrough),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        all &= o.pass;
        println!(
            "{} [{}] {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
