//! Bias and MSE of the ML estimator under the reference simulation design.
//!
//! cargo run --release -p zip3 --example scenario1 -- [n_reps] [seed]

use std::time::Instant;

use zip3::simulation::{run_study, ScenarioConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let n_reps = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(2024);
    let config = ScenarioConfig::scenario1(vec![50, 100, 200, 500], n_reps, seed);

    let start = Instant::now();
    let summary = run_study(&config).expect("valid scenario");
    let names = config.parameter_names();

    print!("{:>5}", "n");
    for name in &names {
        print!(" {:>9}", format!("B({name})"));
    }
    for name in &names {
        print!(" {:>10}", format!("MSE({name})"));
    }
    println!(" {:>6} {:>6}", "ok", "failed");
    for row in &summary.rows {
        print!("{:>5}", row.n);
        for p in &row.params {
            print!(" {:>9.4}", p.bias);
        }
        for p in &row.params {
            print!(" {:>10.4}", p.mse);
        }
        println!(" {:>6} {:>6}", row.n_converged, row.n_failed);
    }
    println!("elapsed: {:.1?}", start.elapsed());
}
