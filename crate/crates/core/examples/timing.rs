//! A short timing experiment. Pass the number of trials as the first
//! argument (default 50); per-trial times go to timings.csv.

use std::fs::File;

use hyperkin::harness::{run_timing, write_timing_csv, ExperimentConfig};

fn main() {
    let trials = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let cfg = ExperimentConfig {
        trials,
        samples_per_trial: 1000,
        warmup: 5,
        ..Default::default()
    };
    let reports = run_timing(&cfg).unwrap();
    for r in &reports {
        println!(
            "{} {:.3} ms (IQR {:.3}, {} spikes) | {} {:.3} ms (IQR {:.3}, {} spikes) | p = {:.2e}",
            r.first.solver,
            1e3 * r.first.median,
            1e3 * r.first.iqr,
            r.first.spikes,
            r.second.solver,
            1e3 * r.second.median,
            1e3 * r.second.iqr,
            r.second.spikes,
            r.rank_sum.p_value
        );
    }
    write_timing_csv(&reports, File::create("timings.csv").unwrap()).unwrap();
}
