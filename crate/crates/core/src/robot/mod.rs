//! Geometry, closed-form displacement maps, Jacobians, dual-quaternion
//! parameterizations and the mobility count of the hybrid parallel robot.
//!
//! Coordinates along the chain, task side first:
//!
//! * `E`  instrument tip (mm), relative to the RCM
//! * `RCM` = (ψ, θ, l_ins): yaw, pitch (rad) and insertion depth (mm)
//! * `P`  point on the instrument at distance `l` from the tip
//! * `ρ` = (ρ₁, ρ₂, ρ₃): simplified parallel-mechanism coordinates
//! * `q` = (q₁, q₂, q₃): active joints (mm, mm, rad)

mod closed;
mod dq;
mod jacobian;
pub mod rates;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multidual::MultiDualError;
use crate::quatkin::QuatError;

pub use closed::{
    p_to_rcm, p_to_rho, q_to_rho, rcm_to_p, rcm_to_tip, rho_to_p, rho_to_q, tip_to_rcm, wrap_angle,
};
pub use dq::{
    dq_fk_displacement, dq_ik_displacement, dq_parameterizations, half_tangent_params, p2_from_u3,
    DqFkSolution, DqParameterization,
};
pub use jacobian::{a_matrix, b_matrix, forward_jacobian, jacobians, Level, LevelJacobians};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("out of workspace: {0}")]
    OutOfWorkspace(String),
    #[error("serial singularity at level {0}")]
    SerialSingularity(&'static str),
    #[error("parallel singularity at level {0}")]
    ParallelSingularity(&'static str),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("half-tangent pole: {0} at ±π")]
    HalfTangentPole(&'static str),
    #[error("branch {branch} invalid for {what} (valid 1..={max})")]
    InvalidBranch {
        what: &'static str,
        branch: u8,
        max: u8,
    },
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("mobility precondition violated: class C{class} has non-positive factor {factor}")]
    Mobility { class: usize, factor: i64 },
    #[error("input dual quaternion violates the Study conditions (deviation {0:.3e})")]
    NonUnit(f64),
    #[error(transparent)]
    MultiDual(#[from] MultiDualError),
    #[error(transparent)]
    Quat(#[from] QuatError),
}

/// Link lengths in mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotGeometry {
    /// Instrument length: distance from the tip E to point P.
    pub l: f64,
    pub l0: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
}

impl Default for RobotGeometry {
    fn default() -> Self {
        Self {
            l: 400.0,
            l0: 300.0,
            l1: 200.0,
            l2: 150.0,
            l3: 170.0,
            l4: 50.0,
        }
    }
}

impl RobotGeometry {
    pub fn new(
        l: f64,
        l0: f64,
        l1: f64,
        l2: f64,
        l3: f64,
        l4: f64,
    ) -> Result<Self, KinematicsError> {
        let g = Self {
            l,
            l0,
            l1,
            l2,
            l3,
            l4,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), KinematicsError> {
        for (name, v) in self.named() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(KinematicsError::Geometry(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        Ok(())
    }

    fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("l", self.l),
            ("l0", self.l0),
            ("l1", self.l1),
            ("l2", self.l2),
            ("l3", self.l3),
            ("l4", self.l4),
        ]
    }

    /// Parse flat `key = value` lines (`#` comments, blank lines allowed).
    /// Missing keys keep their default values.
    pub fn from_kv_str(s: &str) -> Result<Self, KinematicsError> {
        let mut g = Self::default();
        for (n, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| {
                    KinematicsError::Geometry(format!("line {}: expected key = value", n + 1))
                })?;
            let v: f64 = v.trim().parse().map_err(|_| {
                KinematicsError::Geometry(format!("line {}: bad number {:?}", n + 1, v.trim()))
            })?;
            let slot = match k.trim() {
                "l" => &mut g.l,
                "l0" => &mut g.l0,
                "l1" => &mut g.l1,
                "l2" => &mut g.l2,
                "l3" => &mut g.l3,
                "l4" => &mut g.l4,
                other => return Err(KinematicsError::Geometry(format!("unknown key {other:?}"))),
            };
            *slot = v;
        }
        g.validate()?;
        Ok(g)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, KinematicsError> {
        let path = path.as_ref();
        let s = std::fs::read_to_string(path)
            .map_err(|e| KinematicsError::Geometry(format!("{}: {e}", path.display())))?;
        Self::from_kv_str(&s)
    }

    pub fn to_kv_string(&self) -> String {
        self.named()
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

/// Joint-class census for the modified Gruebler count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointClassCount {
    /// Family: number of motion constraints common to the whole mechanism.
    pub f: u32,
    /// Moving links.
    pub n: u32,
    /// `c[i - 1]` = number of class-i joints, i = 1..=5.
    pub c: [u32; 5],
}

/// `M = (6 − F)·N − Σ (i − F)·C_i`. Every class with joints present must
/// have a positive factor `i − F`.
pub fn mobility(jc: &JointClassCount) -> Result<i64, KinematicsError> {
    let f = i64::from(jc.f);
    let mut m = (6 - f) * i64::from(jc.n);
    for (idx, &count) in jc.c.iter().enumerate() {
        let class = idx + 1;
        let factor = class as i64 - f;
        if count == 0 {
            continue;
        }
        if factor <= 0 {
            return Err(KinematicsError::Mobility { class, factor });
        }
        m -= factor * i64::from(count);
    }
    Ok(m)
}

pub(crate) fn check_branch(what: &'static str, branch: u8, max: u8) -> Result<(), KinematicsError> {
    if branch == 0 || branch > max {
        return Err(KinematicsError::InvalidBranch { what, branch, max });
    }
    Ok(())
}
