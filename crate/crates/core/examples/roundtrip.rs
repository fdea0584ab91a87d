//! FK after IK over the reference motion for every solver, then the same
//! with the forward pass run on a geometry whose l1 is 1 mm off.

use hyperkin::harness::{run_roundtrip_validation, run_roundtrip_with, ExperimentConfig};
use hyperkin::robot::RobotGeometry;
use hyperkin::solvers::SolverId;

fn main() {
    let cfg = ExperimentConfig {
        trials: 1,
        samples_per_trial: 500,
        ..Default::default()
    };
    let ok = run_roundtrip_validation(&cfg, &SolverId::ALL).unwrap();
    for r in &ok.results {
        println!("{}: {:.2e}", r.solver, r.max_deviation);
    }
    let off = RobotGeometry {
        l1: cfg.geometry.l1 + 1.0,
        ..cfg.geometry
    };
    let bad = run_roundtrip_with(&cfg, &[SolverId::Alg1], &off).unwrap();
    println!("corrupted l1: {}", bad.into_result().unwrap_err());
}
