//! Jerk-limited rest-to-rest motion planned in RCM coordinates and mapped
//! to the instrument tip.
//!
//! Each coordinate follows a seven-segment profile with piecewise-constant
//! jerk (`+j, 0, −j, 0, −j, 0, +j`). There is no velocity limit, so the
//! cruise segment always has zero length. The three coordinates share the
//! timeline of the slowest one; the faster ones keep its segment durations
//! and scale their jerk down by the distance ratio.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Vec3;
use crate::multidual::Jet3;
use crate::robot::{rcm_to_tip, rho_to_q, tip_to_rcm, KinematicsError, RobotGeometry};
use crate::solvers::{Branches, KinematicSample, SolverError, SolverId, Space};

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("invalid limits: a_max = {a_max}, j_max = {j_max} (both must be positive)")]
    InvalidLimits { a_max: f64, j_max: f64 },
    #[error("endpoint {which} outside the workspace: {source}")]
    Endpoint {
        which: &'static str,
        source: KinematicsError,
    },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("no time window where the rho-q relations are solvable")]
    NoFeasibleWindow,
    #[error("sample rate must be positive, got {0}")]
    InvalidRate(f64),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionLimits {
    pub a_max: f64,
    pub j_max: f64,
}

impl MotionLimits {
    pub fn new(a_max: f64, j_max: f64) -> Result<Self, TrajectoryError> {
        if !(a_max > 0.0 && j_max > 0.0 && a_max.is_finite() && j_max.is_finite()) {
            return Err(TrajectoryError::InvalidLimits { a_max, j_max });
        }
        Ok(Self { a_max, j_max })
    }
}

impl Default for MotionLimits {
    fn default() -> Self {
        Self {
            a_max: 4.0,
            j_max: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    pub jerk: f64,
}

/// State at the start of a segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Knot {
    t: f64,
    s: f64,
    v: f64,
    a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarProfile {
    pub s0: f64,
    pub s1: f64,
    pub segments: Vec<Segment>,
    knots: Vec<Knot>,
}

/// Segment durations `[T_j, T_a]` for distance `d`.
fn durations(d: f64, lim: &MotionLimits) -> (f64, f64) {
    let (a, j) = (lim.a_max, lim.j_max);
    if d >= 2.0 * a * a * a / (j * j) {
        let tj = a / j;
        (tj, (-3.0 * tj + (tj * tj + 4.0 * d / a).sqrt()) / 2.0)
    } else {
        ((d / (2.0 * j)).cbrt(), 0.0)
    }
}

impl ScalarProfile {
    fn from_segments(s0: f64, s1: f64, segments: Vec<Segment>) -> Self {
        let mut knots = Vec::with_capacity(segments.len());
        let mut k = Knot {
            t: 0.0,
            s: s0,
            v: 0.0,
            a: 0.0,
        };
        for seg in &segments {
            knots.push(k);
            let (dt, j) = (seg.duration, seg.jerk);
            k = Knot {
                t: k.t + dt,
                s: k.s + k.v * dt + k.a * dt * dt / 2.0 + j * dt * dt * dt / 6.0,
                v: k.v + k.a * dt + j * dt * dt / 2.0,
                a: k.a + j * dt,
            };
        }
        Self {
            s0,
            s1,
            segments,
            knots,
        }
    }

    /// Profile with given `[T_j, T_a]` and jerk magnitude, signed by direction.
    fn seven(s0: f64, s1: f64, tj: f64, ta: f64, j: f64) -> Self {
        let j = j * (s1 - s0).signum();
        let seg = |duration, jerk| Segment { duration, jerk };
        Self::from_segments(
            s0,
            s1,
            vec![
                seg(tj, j),
                seg(ta, 0.0),
                seg(tj, -j),
                seg(0.0, 0.0),
                seg(tj, -j),
                seg(ta, 0.0),
                seg(tj, j),
            ],
        )
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Instants where the jerk switches.
    pub fn switch_times(&self) -> Vec<f64> {
        self.knots.iter().skip(1).map(|k| k.t).collect()
    }

    /// `(s, ṡ, s̈, s⃛)` at `t`, clamped to `[0, T]`.
    pub fn sample(&self, t: f64) -> [f64; 4] {
        if t <= 0.0 || self.segments.is_empty() {
            return [self.s0, 0.0, 0.0, 0.0];
        }
        if t >= self.duration() {
            return [self.s1, 0.0, 0.0, 0.0];
        }
        let i = self.knots.iter().rposition(|k| k.t <= t).unwrap_or(0);
        let k = self.knots[i];
        let j = self.segments[i].jerk;
        let dt = t - k.t;
        [
            k.s + k.v * dt + k.a * dt * dt / 2.0 + j * dt * dt * dt / 6.0,
            k.v + k.a * dt + j * dt * dt / 2.0,
            k.a + j * dt,
            j,
        ]
    }

    /// Largest |jerk| over the segments.
    pub fn peak_jerk(&self) -> f64 {
        self.segments.iter().fold(0.0, |m, s| m.max(s.jerk.abs()))
    }
}

/// Rest-to-rest jerk-limited profile from `s0` to `s1`.
pub fn plan_scalar(s0: f64, s1: f64, lim: &MotionLimits) -> ScalarProfile {
    let d = (s1 - s0).abs();
    if d == 0.0 {
        return ScalarProfile::from_segments(s0, s1, Vec::new());
    }
    let (tj, ta) = durations(d, lim);
    ScalarProfile::seven(s0, s1, tj, ta, lim.j_max)
}

/// Start and end of the reference motion: (ψ, θ, l_ins) in rad, rad, mm.
pub fn reference_endpoints() -> (Vec3<f64>, Vec3<f64>) {
    let deg = std::f64::consts::PI / 180.0;
    (
        Vec3([1.40 * deg, 40.44 * deg, 7.73]),
        Vec3([10.0 * deg, 33.0 * deg, 100.0]),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskTrajectory {
    pub start: Vec3<f64>,
    pub end: Vec3<f64>,
    pub limits: MotionLimits,
    /// ψ, θ, l_ins.
    pub profiles: [ScalarProfile; 3],
}

fn check_endpoint(which: &'static str, rcm: &Vec3<f64>) -> Result<(), TrajectoryError> {
    let e = rcm_to_tip(rcm);
    let back = tip_to_rcm(&e, 1).map_err(|source| TrajectoryError::Endpoint { which, source })?;
    if !(rcm[2] > 0.0) || (back - *rcm).max_abs() > 1e-9 * (1.0 + rcm.max_abs()) {
        return Err(TrajectoryError::Endpoint {
            which,
            source: KinematicsError::OutOfWorkspace(format!(
                "{rcm:?} is not on the working branch"
            )),
        });
    }
    Ok(())
}

/// Synchronized plan between two RCM states.
pub fn plan_task_trajectory(
    start: Vec3<f64>,
    end: Vec3<f64>,
    lim: &MotionLimits,
) -> Result<TaskTrajectory, TrajectoryError> {
    MotionLimits::new(lim.a_max, lim.j_max)?;
    check_endpoint("start", &start)?;
    check_endpoint("end", &end)?;
    let d = [0, 1, 2].map(|i| (end[i] - start[i]).abs());
    let slow = (0..3).fold(0, |m, i| if d[i] > d[m] { i } else { m });
    let (tj, ta) = durations(d[slow], lim);
    let profiles = [0, 1, 2].map(|i| {
        if d[slow] == 0.0 {
            plan_scalar(start[i], end[i], lim)
        } else {
            ScalarProfile::seven(start[i], end[i], tj, ta, lim.j_max * d[i] / d[slow])
        }
    });
    Ok(TaskTrajectory {
        start,
        end,
        limits: *lim,
        profiles,
    })
}

/// The reference motion with the default limits.
pub fn reference_trajectory() -> TaskTrajectory {
    let (a, b) = reference_endpoints();
    plan_task_trajectory(a, b, &MotionLimits::default()).expect("reference endpoints are valid")
}

impl TaskTrajectory {
    pub fn duration(&self) -> f64 {
        self.profiles.iter().fold(0.0, |m, p| m.max(p.duration()))
    }

    pub fn rcm_stack(&self, t: f64) -> [Vec3<f64>; 4] {
        let s = self.profiles.each_ref().map(|p| p.sample(t));
        [0, 1, 2, 3].map(|k| Vec3([s[0][k], s[1][k], s[2][k]]))
    }

    /// Tip position with its derivative stack, through the RCM → E map on jets.
    pub fn sample(&self, t: f64) -> KinematicSample {
        let e = rcm_to_tip(&Vec3::<Jet3>::from_stack(&self.rcm_stack(t)));
        KinematicSample::vector(Space::Task, [0, 1, 2, 3].map(|k| e.derivative(k)))
    }

    /// `n` instants evenly spaced over `[t0, t1]` (one instant when n = 1).
    pub fn times_between(t0: f64, t1: f64, n: usize) -> Vec<f64> {
        if n <= 1 {
            return vec![t0];
        }
        (0..n)
            .map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn task_samples(&self, n: usize) -> Vec<KinematicSample> {
        Self::times_between(0.0, self.duration(), n)
            .into_iter()
            .map(|t| self.sample(t))
            .collect()
    }

    /// ρ-space image of the motion, via the geometric solver.
    pub fn rho_sample(
        &self,
        t: f64,
        g: &RobotGeometry,
    ) -> Result<KinematicSample, TrajectoryError> {
        Ok(SolverId::Alg3.ik(g, &self.sample(t), &Branches::default())?)
    }

    /// Time window in which the ρ image lies inside the ρ−q workspace,
    /// shrunk by `margin` seconds at both ends.
    pub fn map_feasible_window(
        &self,
        g: &RobotGeometry,
        margin: f64,
    ) -> Result<(f64, f64), TrajectoryError> {
        let n = 4000;
        let ok = |t: f64| {
            self.rho_sample(t, g)
                .ok()
                .and_then(|r| r.vectors().map(|s| s[0]))
                .is_some_and(|rho| rho_to_q(&rho, g, 1).is_ok_and(|q| (q[1] - q[0]).abs() > 1e-3))
        };
        let ts = Self::times_between(0.0, self.duration(), n);
        let first = ts
            .iter()
            .position(|&t| ok(t))
            .ok_or(TrajectoryError::NoFeasibleWindow)?;
        let mut last = first;
        while last + 1 < n && ok(ts[last + 1]) {
            last += 1;
        }
        let (t0, t1) = (ts[first] + margin, ts[last] - margin);
        if t1 <= t0 {
            return Err(TrajectoryError::NoFeasibleWindow);
        }
        Ok((t0, t1))
    }

    /// CSV with `t` and the tip position, velocity, acceleration and jerk.
    pub fn write_csv<W: Write>(&self, out: W, rate_hz: f64) -> Result<usize, TrajectoryError> {
        if !(rate_hz > 0.0 && rate_hz.is_finite()) {
            return Err(TrajectoryError::InvalidRate(rate_hz));
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        for prefix in ["", "d", "dd", "ddd"] {
            for c in ["X_E", "Y_E", "Z_E"] {
                header.push(format!("{prefix}{c}"));
            }
        }
        w.write_record(&header)?;
        let n = (self.duration() * rate_hz).floor() as usize + 1;
        for i in 0..n {
            let t = i as f64 / rate_hz;
            let s = self.sample(t);
            let mut row = vec![format!("{t}")];
            for k in 0..4 {
                // `+ 0.0` turns −0 into 0.
                row.extend(s.order(k).iter().map(|v| format!("{}", v + 0.0)));
            }
            w.write_record(&row)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(n)
    }
}
