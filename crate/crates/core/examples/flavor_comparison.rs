//! Classical differentiation against multidual evaluation, pair by pair,
//! over the reference motion: residual RMS per field and how white the
//! residual series look.

use hyperkin::harness::{run_accuracy, ExperimentConfig};

fn main() {
    let cfg = ExperimentConfig {
        trials: 1,
        samples_per_trial: 1000,
        ..Default::default()
    };
    for r in run_accuracy(&cfg).unwrap() {
        println!(
            "{} vs {} over {} samples (band ±{:.3})",
            r.pair.0, r.pair.1, r.samples, r.band
        );
        for f in &r.fields {
            println!(
                "  {:<13} rms {:.2e} (≤ {:.0e}: {})  lags in band {:.0}%",
                f.field,
                f.rms,
                f.threshold,
                f.rms_pass,
                100.0 * f.white_fraction
            );
        }
    }
}
