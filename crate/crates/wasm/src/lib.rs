//! Browser bindings: a pmf explorer, a simulate-fit-envelope round trip and an
//! influence index plot. Every export returns plain numbers or a JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;
use zip3::diagnostics::{likelihood_displacement, simulated_envelope};
use zip3::rng::substream;
use zip3::simulation::{generate_dataset, ScenarioConfig};
use zip3::{fit, FitOptions, Zip3};

/// `P(Y = y)` for `y = 0..=y_max`; empty when the parameters are invalid.
#[wasm_bindgen]
pub fn pmf_curve(mu: f64, phi: f64, y_max: u32) -> Vec<f64> {
    match Zip3::new(mu, phi) {
        Ok(d) => (0..=u64::from(y_max)).map(|y| d.pmf(y)).collect(),
        Err(_) => Vec::new(),
    }
}

#[derive(Serialize)]
struct FitDemo {
    names: Vec<String>,
    truth: Vec<f64>,
    estimate: Vec<f64>,
    std_error: Vec<f64>,
    iterations: usize,
    zero_fraction: f64,
    theoretical: Vec<f64>,
    observed: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Serialize)]
struct InfluenceDemo {
    ld: Vec<Option<f64>>,
    outlier_index: usize,
}

#[derive(Serialize)]
struct Failure {
    error: String,
}

fn json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&Failure { error }),
    }
    .expect("demo types serialize")
}

fn fit_demo(n: usize, seed: u64, n_sim: usize) -> Result<FitDemo, String> {
    let config = ScenarioConfig::scenario1(vec![n], 1, seed);
    config.validate().map_err(|e| e.to_string())?;
    let spec = generate_dataset(&config, n, &mut substream(seed, &[n as u64]));
    let f = fit(&spec, &FitOptions::default()).map_err(|e| e.to_string())?;
    if !f.converged {
        return Err("fit did not converge".to_string());
    }
    let band = simulated_envelope(&f, &spec, n_sim, 0.95, seed).map_err(|e| e.to_string())?;
    Ok(FitDemo {
        names: config.parameter_names(),
        truth: config.truth(),
        estimate: f.theta_hat.stacked().iter().copied().collect(),
        std_error: f.se.clone(),
        iterations: f.iterations,
        zero_fraction: spec.y().iter().filter(|&&v| v == 0).count() as f64 / n as f64,
        theoretical: band.theoretical,
        observed: band.sorted_residuals,
        lower: band.lower,
        upper: band.upper,
    })
}

/// Simulates the reference scenario at size `n`, fits it and builds a
/// residual envelope from `n_sim` replicates.
#[wasm_bindgen]
pub fn simulate_fit_envelope(n: u32, seed: u32, n_sim: u32) -> String {
    json(fit_demo(n as usize, u64::from(seed), n_sim as usize))
}

fn influence_demo(n: usize, seed: u64, outlier_y: u64) -> Result<InfluenceDemo, String> {
    let config = ScenarioConfig::scenario1(vec![n], 1, seed);
    config.validate().map_err(|e| e.to_string())?;
    let base = generate_dataset(&config, n, &mut substream(seed, &[n as u64]));
    let outlier_index = n / 2;
    let mut y = base.y().to_vec();
    y[outlier_index] = outlier_y;
    let spec = base.with_response(y).map_err(|e| e.to_string())?;
    let f = fit(&spec, &FitOptions::default()).map_err(|e| e.to_string())?;
    if !f.converged {
        return Err("fit did not converge".to_string());
    }
    let ld = likelihood_displacement(&f, &spec).map_err(|e| e.to_string())?;
    Ok(InfluenceDemo { ld, outlier_index })
}

/// Likelihood displacement for every case after setting the middle case's
/// response to `outlier_y`.
#[wasm_bindgen]
pub fn influence_index(n: u32, seed: u32, outlier_y: u32) -> String {
    json(influence_demo(n as usize, u64::from(seed), u64::from(outlier_y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn pmf_curve_sums_towards_one() {
        let p = pmf_curve(2.0, 1.0, 60);
        assert_eq!(p.len(), 61);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(pmf_curve(-1.0, 1.0, 5).is_empty());
    }

    #[test]
    fn fit_round_trip_is_deterministic_json() {
        let a = simulate_fit_envelope(200, 3, 19);
        assert_eq!(a, simulate_fit_envelope(200, 3, 19));
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["estimate"].as_array().unwrap().len(), 5);
        assert_eq!(v["lower"].as_array().unwrap().len(), 200);
    }

    #[test]
    fn influence_flags_the_outlier() {
        let v: Value = serde_json::from_str(&influence_index(120, 4, 40)).unwrap();
        let ld: Vec<f64> = v["ld"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        let k = v["outlier_index"].as_u64().unwrap() as usize;
        assert!(ld.iter().enumerate().all(|(i, &x)| i == k || x < ld[k]));
    }

    #[test]
    fn errors_come_back_as_json() {
        let v: Value = serde_json::from_str(&simulate_fit_envelope(3, 1, 5)).unwrap();
        assert!(v["error"].is_string());
    }
}
