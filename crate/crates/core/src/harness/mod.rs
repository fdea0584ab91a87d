//! Flavor-pair accuracy, execution-time and round-trip experiments over the
//! reference motion.
//!
//! A trial is one pass over `samples_per_trial` instants of the motion.
//! Trial 0 uses an even grid; later trials jitter every instant inside its
//! grid cell with a generator seeded from `seed` and the trial index, so a
//! fixed seed always yields the same sample sets.

pub mod stats;

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::robot::RobotGeometry;
use crate::solvers::{Branches, KinematicSample, SolverError, SolverId, Space};
use crate::trajectory::{reference_trajectory, TaskTrajectory, TrajectoryError};

pub use stats::RankSum;

pub const FIELDS: [&str; 4] = ["displacement", "velocity", "acceleration", "jerk"];
pub const MAX_LAG: usize = 20;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{solver} failed at sample {sample}: {source}")]
    Solver {
        solver: SolverId,
        sample: usize,
        source: SolverError,
    },
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(
        "round trip of {solver} deviates by {deviation:.3e} at sample {sample}, order {order}"
    )]
    RoundTrip {
        solver: SolverId,
        sample: usize,
        order: usize,
        deviation: f64,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub samples_per_trial: usize,
    pub pairs: Vec<(SolverId, SolverId)>,
    pub seed: u64,
    /// Timing trials run and discarded before recording.
    pub warmup: usize,
    pub geometry: RobotGeometry,
    pub trajectory: TaskTrajectory,
    /// Seconds trimmed from both ends of the ρ−q feasible window.
    pub map_margin: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            samples_per_trial: 1000,
            pairs: SolverId::PAIRS.to_vec(),
            seed: 42,
            warmup: 10,
            geometry: RobotGeometry::default(),
            trajectory: reference_trajectory(),
            map_margin: 0.5,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 || self.samples_per_trial == 0 {
            return Err(HarnessError::Config(
                "trials and samples must be at least 1".into(),
            ));
        }
        self.geometry
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))
    }

    fn times(&self, t0: f64, t1: f64, trial: usize) -> Vec<f64> {
        let n = self.samples_per_trial;
        if trial == 0 || n == 1 {
            return TaskTrajectory::times_between(t0, t1, n);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(
            self.seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let h = (t1 - t0) / n as f64;
        (0..n)
            .map(|i| t0 + h * (i as f64 + rng.gen::<f64>()))
            .collect()
    }

    /// Inputs of `id` for one trial.
    pub fn inputs(&self, id: SolverId, trial: usize) -> Result<Vec<KinematicSample>, HarnessError> {
        let tr = &self.trajectory;
        let g = &self.geometry;
        match id.input_space() {
            Space::Rho => {
                let (t0, t1) = tr.map_feasible_window(g, self.map_margin)?;
                self.times(t0, t1, trial)
                    .into_iter()
                    .map(|t| Ok(tr.rho_sample(t, g)?))
                    .collect()
            }
            Space::DualQuaternion => self
                .times(0.0, tr.duration(), trial)
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    tr.sample(t)
                        .task_to_dual_quat(1)
                        .map_err(|source| HarnessError::Solver {
                            solver: id,
                            sample: i,
                            source,
                        })
                })
                .collect(),
            _ => Ok(self
                .times(0.0, tr.duration(), trial)
                .into_iter()
                .map(|t| tr.sample(t))
                .collect()),
        }
    }
}

fn run(
    id: SolverId,
    g: &RobotGeometry,
    inputs: &[KinematicSample],
) -> Result<Vec<KinematicSample>, HarnessError> {
    let br = Branches::default();
    inputs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            id.ik(g, s, &br).map_err(|source| HarnessError::Solver {
                solver: id,
                sample: i,
                source,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldResidual {
    pub field: String,
    pub rms: f64,
    /// Lags 1..=20, one row per output component.
    pub autocorrelation: Vec<Vec<f64>>,
    /// Share of lags inside the white-noise band.
    pub white_fraction: f64,
    pub threshold: f64,
    pub rms_pass: bool,
    pub white: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub pair: (SolverId, SolverId),
    pub samples: usize,
    pub band: f64,
    pub fields: Vec<FieldResidual>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn rms_pass(&self) -> bool {
        self.fields.iter().all(|f| f.rms_pass)
    }

    pub fn white(&self) -> bool {
        self.fields.iter().all(|f| f.white)
    }
}

/// Pass thresholds per field: displacement exact, derivatives 1e−10.
pub const RESIDUAL_THRESHOLDS: [f64; 4] = [0.0, 1e-10, 1e-10, 1e-10];
/// Minimum share of in-band lags for a residual series to count as white.
pub const WHITE_FRACTION: f64 = 0.95;

/// Residuals between the two solvers of every pair on identical inputs.
pub fn run_accuracy(cfg: &ExperimentConfig) -> Result<Vec<ResidualReport>, HarnessError> {
    cfg.validate()?;
    let g = &cfg.geometry;
    cfg.pairs
        .iter()
        .map(|&(a, b)| {
            if a.input_space() != b.input_space() {
                return Err(HarnessError::Config(format!(
                    "{a} and {b} take different inputs"
                )));
            }
            // series[field][component] over all trials.
            let mut series = vec![vec![Vec::new(); 3]; 4];
            for trial in 0..cfg.trials {
                let inputs = cfg.inputs(a, trial)?;
                let (oa, ob) = (run(a, g, &inputs)?, run(b, g, &inputs)?);
                for (x, y) in oa.iter().zip(&ob) {
                    for (k, field) in series.iter_mut().enumerate() {
                        for (c, (u, v)) in x.order(k).iter().zip(y.order(k)).enumerate() {
                            field[c].push(u - v);
                        }
                    }
                }
            }
            let n = series[0][0].len();
            let band = stats::white_band(n);
            let fields: Vec<FieldResidual> = series
                .iter()
                .enumerate()
                .map(|(k, comps)| {
                    let flat: Vec<f64> = comps.iter().flatten().copied().collect();
                    let ac: Vec<Vec<f64>> = comps
                        .iter()
                        .map(|s| stats::autocorrelation(s, MAX_LAG))
                        .collect();
                    let total = ac.iter().map(Vec::len).sum::<usize>().max(1);
                    let inside = ac.iter().flatten().filter(|r| r.abs() <= band).count();
                    let white_fraction = inside as f64 / total as f64;
                    let rms = stats::rms(&flat);
                    let rms_pass = rms <= RESIDUAL_THRESHOLDS[k];
                    let white = white_fraction >= WHITE_FRACTION;
                    FieldResidual {
                        field: FIELDS[k].to_string(),
                        rms,
                        autocorrelation: ac,
                        white_fraction,
                        threshold: RESIDUAL_THRESHOLDS[k],
                        rms_pass,
                        white,
                        pass: rms_pass && white,
                    }
                })
                .collect();
            let pass = fields.iter().all(|f| f.pass);
            Ok(ResidualReport {
                pair: (a, b),
                samples: n,
                band,
                fields,
                pass,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingSeries {
    pub solver: SolverId,
    /// Wall time per recorded trial, seconds.
    pub seconds: Vec<f64>,
    pub median: f64,
    pub iqr: f64,
    /// Trials slower than three times the median.
    pub spikes: usize,
}

impl TimingSeries {
    fn new(solver: SolverId, seconds: Vec<f64>) -> Self {
        let median = stats::median(&seconds);
        let spikes = seconds.iter().filter(|&&s| s > 3.0 * median).count();
        Self {
            solver,
            median,
            iqr: stats::iqr(&seconds),
            spikes,
            seconds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub pair: (SolverId, SolverId),
    pub samples_per_trial: usize,
    pub first: TimingSeries,
    pub second: TimingSeries,
    pub rank_sum: RankSum,
    /// Reported, not asserted: hardware dependent.
    pub second_median_faster: bool,
}

/// Per-trial wall times of both solvers of every pair, measured serially on
/// the calling thread. Warm-up trials are run and discarded.
pub fn run_timing(cfg: &ExperimentConfig) -> Result<Vec<TimingReport>, HarnessError> {
    cfg.validate()?;
    let g = &cfg.geometry;
    let br = Branches::default();
    let time_once = |id: SolverId, inputs: &[KinematicSample]| -> Result<f64, HarnessError> {
        let start = Instant::now();
        for (i, s) in inputs.iter().enumerate() {
            let out = id
                .ik(g, black_box(s), &br)
                .map_err(|source| HarnessError::Solver {
                    solver: id,
                    sample: i,
                    source,
                })?;
            black_box(out);
        }
        Ok(start.elapsed().as_secs_f64())
    };
    cfg.pairs
        .iter()
        .map(|&(a, b)| {
            let mut ta = Vec::with_capacity(cfg.trials);
            let mut tb = Vec::with_capacity(cfg.trials);
            for trial in 0..cfg.warmup + cfg.trials {
                let t = trial.saturating_sub(cfg.warmup);
                let ia = cfg.inputs(a, t)?;
                let ib = if b.input_space() == a.input_space() {
                    ia.clone()
                } else {
                    cfg.inputs(b, t)?
                };
                // Alternate the order so neither solver always runs on a warm cache.
                let (xa, xb) = if trial % 2 == 0 {
                    let x = time_once(a, &ia)?;
                    (x, time_once(b, &ib)?)
                } else {
                    let y = time_once(b, &ib)?;
                    (time_once(a, &ia)?, y)
                };
                if trial >= cfg.warmup {
                    ta.push(xa);
                    tb.push(xb);
                }
            }
            let rs = stats::rank_sum(&ta, &tb);
            let (first, second) = (TimingSeries::new(a, ta), TimingSeries::new(b, tb));
            Ok(TimingReport {
                pair: (a, b),
                samples_per_trial: cfg.samples_per_trial,
                second_median_faster: second.median < first.median,
                first,
                second,
                rank_sum: rs,
            })
        })
        .collect()
}

/// Long-format CSV: `pair,solver,trial,seconds`.
pub fn write_timing_csv<W: Write>(reports: &[TimingReport], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["pair", "solver", "trial", "seconds"])?;
    for r in reports {
        let pair = format!("{}-{}", r.pair.0, r.pair.1);
        for s in [&r.first, &r.second] {
            for (i, t) in s.seconds.iter().enumerate() {
                w.write_record([
                    pair.as_str(),
                    s.solver.name(),
                    &i.to_string(),
                    &format!("{t:e}"),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTripResult {
    pub solver: SolverId,
    pub samples: usize,
    pub max_deviation: f64,
    pub worst_sample: usize,
    pub worst_order: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub tolerance: f64,
    pub results: Vec<RoundTripResult>,
    pub pass: bool,
}

impl RoundTripReport {
    /// First failing solver as an error.
    pub fn into_result(self) -> Result<Self, HarnessError> {
        match self.results.iter().find(|r| !r.pass) {
            Some(r) => Err(HarnessError::RoundTrip {
                solver: r.solver,
                sample: r.worst_sample,
                order: r.worst_order,
                deviation: r.max_deviation,
            }),
            None => Ok(self),
        }
    }
}

pub const ROUND_TRIP_TOL: f64 = 1e-9;

/// IK with `cfg.geometry`, FK with `fk_geometry`, compared against the
/// input (trial 0 grid). Deviation is `|a − b|∞ / max(|b|∞, 1)` per order.
pub fn run_roundtrip_with(
    cfg: &ExperimentConfig,
    solvers: &[SolverId],
    fk_geometry: &RobotGeometry,
) -> Result<RoundTripReport, HarnessError> {
    cfg.validate()?;
    let br = Branches::default();
    let mut results = Vec::new();
    for &id in solvers {
        let inputs = cfg.inputs(id, 0)?;
        let mut worst = (0.0f64, 0usize, 0usize);
        for (i, s) in inputs.iter().enumerate() {
            let err = |source| HarnessError::Solver {
                solver: id,
                sample: i,
                source,
            };
            let j = id.ik(&cfg.geometry, s, &br).map_err(err)?;
            let dev = match id.fk(fk_geometry, &j, &br) {
                Ok(back) => (0..4)
                    .map(|k| {
                        let (a, b) = (back.order(k), s.order(k));
                        let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                        let d = a
                            .iter()
                            .zip(&b)
                            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
                            / scale;
                        (d, k)
                    })
                    .fold((0.0, 0), |m, x| if x.0 > m.0 { x } else { m }),
                Err(_) => (f64::INFINITY, 0),
            };
            if !(dev.0 <= worst.0) {
                worst = (dev.0, i, dev.1);
            }
        }
        results.push(RoundTripResult {
            solver: id,
            samples: inputs.len(),
            max_deviation: worst.0,
            worst_sample: worst.1,
            worst_order: worst.2,
            pass: worst.0 <= ROUND_TRIP_TOL,
        });
    }
    let pass = results.iter().all(|r| r.pass);
    Ok(RoundTripReport {
        tolerance: ROUND_TRIP_TOL,
        results,
        pass,
    })
}

pub fn run_roundtrip_validation(
    cfg: &ExperimentConfig,
    solvers: &[SolverId],
) -> Result<RoundTripReport, HarnessError> {
    run_roundtrip_with(cfg, solvers, &cfg.geometry)
}
