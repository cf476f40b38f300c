use nalgebra::DMatrix;
use zip3::diagnostics::{
    influence_report, ks_distance_normal, likelihood_displacement, quantile_residuals,
    simulated_envelope,
};
use zip3::regression::{fit, FitOptions, ModelSpec};
use zip3::rng::stream;
use zip3::simulation::{generate_dataset, ScenarioConfig};

fn scenario_data(n: usize, seed: u64) -> ModelSpec {
    let config = ScenarioConfig::scenario1(vec![n], 1, seed);
    generate_dataset(&config, n, &mut stream(seed))
}

/// Copy of `spec` with row `src` appended at the end.
fn with_duplicate(spec: &ModelSpec, src: usize) -> ModelSpec {
    let n = spec.n();
    let mut y = spec.y().to_vec();
    y.push(y[src]);
    let grow = |m: &DMatrix<f64>| {
        DMatrix::from_fn(n + 1, m.ncols(), |i, j| m[(if i == n { src } else { i }, j)])
    };
    ModelSpec::with_log_links(y, grow(spec.x()), grow(spec.z())).unwrap()
}

#[test]
fn residuals_are_calibrated_under_the_true_model() {
    let n = 2000;
    let critical = 1.63 / (n as f64).sqrt();
    let mut passes = 0;
    for seed in 0..5 {
        let spec = scenario_data(n, 1000 + seed);
        let f = fit(&spec, &FitOptions::default()).unwrap();
        let q = quantile_residuals(&f, &spec, seed).unwrap().q;
        if ks_distance_normal(&q) < critical {
            passes += 1;
        }
    }
    assert!(passes >= 4, "{passes} of 5");
}

#[test]
fn envelope_covers_correct_model_residuals() {
    let spec = scenario_data(150, 31);
    let f = fit(&spec, &FitOptions::default()).unwrap();
    let band = simulated_envelope(&f, &spec, 100, 0.95, 7).unwrap();
    let inside = (0..spec.n())
        .filter(|&k| {
            band.lower[k] <= band.sorted_residuals[k] && band.sorted_residuals[k] <= band.upper[k]
        })
        .count();
    let frac = inside as f64 / spec.n() as f64;
    assert!(frac >= 0.90, "{frac}");
    assert_eq!(band.n_used, 100);
    assert!(band.theoretical.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn envelope_is_reproducible() {
    let spec = scenario_data(80, 4);
    let f = fit(&spec, &FitOptions::default()).unwrap();
    let a = simulated_envelope(&f, &spec, 20, 0.95, 9).unwrap();
    let b = simulated_envelope(&f, &spec, 20, 0.95, 9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn duplicated_cases_have_equal_displacement() {
    let spec = with_duplicate(&scenario_data(60, 5), 3);
    let f = fit(&spec, &FitOptions::default()).unwrap();
    let ld = likelihood_displacement(&f, &spec).unwrap();
    assert_eq!(ld.len(), spec.n());
    let a = ld[3].unwrap();
    let b = ld[spec.n() - 1].unwrap();
    assert!((a - b).abs() < 1e-6, "{a} vs {b}");
}

#[test]
fn gross_outlier_stands_out() {
    let mut spec = scenario_data(200, 21);
    let mut y = spec.y().to_vec();
    y[17] = 50;
    spec = spec.with_response(y).unwrap();
    let f = fit(&spec, &FitOptions::default()).unwrap();
    let ld: Vec<f64> = likelihood_displacement(&f, &spec)
        .unwrap()
        .into_iter()
        .map(Option::unwrap)
        .collect();
    assert!(ld.iter().all(|&v| v >= -1e-6));
    let outlier = ld[17];
    assert!(ld.iter().enumerate().all(|(i, &v)| i == 17 || v < outlier));
}

#[test]
fn influence_report_shapes_and_reasonable_changes() {
    let spec = scenario_data(300, 8);
    let f = fit(&spec, &FitOptions::default()).unwrap();
    let report = influence_report(&f, &spec).unwrap();
    assert_eq!(report.ld.len(), spec.n());
    assert_eq!(report.rc.len(), spec.n());
    let s = spec.n_params();
    for (rc, rcse) in report.rc.iter().zip(&report.rcse) {
        assert_eq!(rc.as_ref().unwrap().len(), s);
        assert_eq!(rcse.as_ref().unwrap().len(), s);
    }
    let max_rc = report
        .rc
        .iter()
        .flatten()
        .flatten()
        .flatten()
        .fold(0.0f64, |a, &b| a.max(b));
    // informational: clean data should not move any estimate wildly
    eprintln!("largest RC on clean data: {max_rc:.2}%");
    assert!(max_rc.is_finite());
}
