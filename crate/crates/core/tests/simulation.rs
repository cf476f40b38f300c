use rayon::ThreadPoolBuilder;
use zip3::regression::fitted_parameters;
use zip3::rng::stream;
use zip3::simulation::{generate_dataset, run_study, ScenarioConfig};
use zip3::Theta;

#[test]
fn large_sample_mean_tracks_fitted_means() {
    let config = ScenarioConfig::scenario1(vec![100_000], 1, 0);
    let spec = generate_dataset(&config, 100_000, &mut stream(404));
    let truth = Theta::new(config.beta_true.clone(), config.gamma_true.clone());
    let (mu, _) = fitted_parameters(&spec, &truth).unwrap();
    let mean_mu = mu.iter().sum::<f64>() / mu.len() as f64;
    let mean_y = spec.y().iter().sum::<u64>() as f64 / spec.n() as f64;
    assert!(((mean_y - mean_mu) / mean_mu).abs() < 0.02, "{mean_y} vs {mean_mu}");
}

#[test]
fn study_is_independent_of_worker_count() {
    let config = ScenarioConfig::scenario1(vec![60, 120], 40, 5150);
    let run = |threads| {
        ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_study(&config).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run_study(&config).unwrap());
    for row in &one.rows {
        assert_eq!(row.n_converged + row.n_failed, 40);
        assert_eq!(row.params.len(), 5);
    }
}

#[test]
fn wald_intervals_have_nominal_coverage_at_500() {
    let config = ScenarioConfig::scenario1(vec![500], 1000, 99);
    let summary = run_study(&config).unwrap();
    for p in &summary.rows[0].params {
        assert!(
            (0.90..=0.98).contains(&p.wald_coverage),
            "{}: {}",
            p.name,
            p.wald_coverage
        );
    }
}
