//! The eight inverse-kinematics algorithms and their forward counterparts.
//!
//! Every solver maps one sample (a value plus three time derivatives) to
//! another. Algorithms come in pairs over the same formalism: a classical
//! flavor that propagates derivatives with hand-derived rules order by
//! order, and a multidual flavor that carries all orders at once in jets.
//!
//! | id   | level  | formalism       | flavor    | input  | output |
//! |------|--------|-----------------|-----------|--------|--------|
//! | alg1 | map    | Jacobian        | classical | ρ      | q      |
//! | alg2 | map    | Jacobian        | multidual | ρ      | q      |
//! | alg3 | full   | Jacobian        | classical | E      | ρ      |
//! | alg4 | full   | Jacobian        | multidual | E      | ρ      |
//! | alg5 | full   | homogeneous     | classical | E      | ρ      |
//! | alg6 | full   | homogeneous     | multidual | E      | ρ      |
//! | alg7 | full   | dual quaternion | classical | Q_E    | ρ      |
//! | alg8 | full   | dual quaternion | multidual | Q_E    | ρ      |

mod dual_quat;
mod geometric;
mod homogeneous;
mod level;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Vec3;
use crate::multidual::Jet3;
use crate::quatkin::{hmd_compose, DualQuaternion, Quaternion};
use crate::robot::{tip_to_rcm, KinematicsError, RobotGeometry};

pub use level::Direction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error("{solver} expects a {expected} sample, got {got}")]
    SpaceMismatch {
        solver: SolverId,
        expected: Space,
        got: Space,
    },
    #[error("unknown solver id {0:?} (expected alg1..alg8)")]
    UnknownSolver(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    Task,
    Rcm,
    Rho,
    Q,
    DualQuaternion,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Task => "task",
            Space::Rcm => "rcm",
            Space::Rho => "rho",
            Space::Q => "q",
            Space::DualQuaternion => "dual-quaternion",
        })
    }
}

/// Value and first three time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Stack {
    Vector([Vec3<f64>; 4]),
    DualQuat([DualQuaternion<f64>; 4]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicSample {
    pub space: Space,
    pub stack: Stack,
}

impl KinematicSample {
    pub fn vector(space: Space, stack: [Vec3<f64>; 4]) -> Self {
        debug_assert!(space != Space::DualQuaternion);
        Self {
            space,
            stack: Stack::Vector(stack),
        }
    }

    pub fn dual_quat(stack: [DualQuaternion<f64>; 4]) -> Self {
        Self {
            space: Space::DualQuaternion,
            stack: Stack::DualQuat(stack),
        }
    }

    /// A point at rest.
    pub fn at_rest(space: Space, v: Vec3<f64>) -> Self {
        Self::vector(space, [v, Vec3::zero(), Vec3::zero(), Vec3::zero()])
    }

    /// Order-`k` entries flattened (3 or 8 numbers).
    pub fn order(&self, k: usize) -> Vec<f64> {
        match &self.stack {
            Stack::Vector(s) => s[k].0.to_vec(),
            Stack::DualQuat(s) => s[k].to_array().to_vec(),
        }
    }

    pub fn vectors(&self) -> Option<&[Vec3<f64>; 4]> {
        match &self.stack {
            Stack::Vector(s) => Some(s),
            Stack::DualQuat(_) => None,
        }
    }

    pub fn dual_quats(&self) -> Option<&[DualQuaternion<f64>; 4]> {
        match &self.stack {
            Stack::DualQuat(s) => Some(s),
            Stack::Vector(_) => None,
        }
    }

    /// Task sample re-expressed as the tip frame `Q_E` with its derivative
    /// stack (the input of the dual-quaternion algorithms).
    pub fn task_to_dual_quat(&self, tip_branch: u8) -> Result<Self, SolverError> {
        let e = match (&self.space, &self.stack) {
            (Space::Task, Stack::Vector(s)) => s,
            _ => {
                return Err(SolverError::SpaceMismatch {
                    solver: SolverId::Alg7,
                    expected: Space::Task,
                    got: self.space,
                })
            }
        };
        let e_hat = Vec3::<Jet3>::from_stack(e);
        let rcm = tip_to_rcm(&e_hat, tip_branch)?;
        let q = Quaternion::from_zy(rcm[0], rcm[1]);
        let d = hmd_compose(e_hat, q);
        Ok(Self::dual_quat([0, 1, 2, 3].map(|k| d.derivative(k))))
    }
}

/// Branch choice at each multi-solution stage. Branch 1 everywhere is the
/// working mode of the reference tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branches {
    /// E → RCM (1..=4).
    pub tip: u8,
    /// P → ρ (1..=2).
    pub rho: u8,
    /// ρ → q (1..=4).
    pub q: u8,
    /// P → RCM on the forward side (1..=4).
    pub rcm_from_p: u8,
    /// q → ρ on the forward side (1..=4).
    pub rho_from_q: u8,
}

impl Default for Branches {
    fn default() -> Self {
        Self::uniform(1)
    }
}

impl Branches {
    /// `b` at every four-way stage and its parity at the two-way one.
    pub fn uniform(b: u8) -> Self {
        Self {
            tip: b,
            rho: 1 + (b.max(1) - 1) % 2,
            q: b,
            rcm_from_p: b,
            rho_from_q: b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverId {
    Alg1,
    Alg2,
    Alg3,
    Alg4,
    Alg5,
    Alg6,
    Alg7,
    Alg8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formalism {
    Jacobian,
    Homogeneous,
    DualQuaternion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Differentiation,
    Multidual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverLevel {
    /// ρ ↔ q only.
    MapQRho,
    /// Task space ↔ ρ.
    Full,
}

impl SolverId {
    pub const ALL: [SolverId; 8] = [
        SolverId::Alg1,
        SolverId::Alg2,
        SolverId::Alg3,
        SolverId::Alg4,
        SolverId::Alg5,
        SolverId::Alg6,
        SolverId::Alg7,
        SolverId::Alg8,
    ];

    /// The six task-space solvers.
    pub const FULL_IK: [SolverId; 6] = [
        SolverId::Alg3,
        SolverId::Alg4,
        SolverId::Alg5,
        SolverId::Alg6,
        SolverId::Alg7,
        SolverId::Alg8,
    ];

    /// Classical/multidual pairs.
    pub const PAIRS: [(SolverId, SolverId); 4] = [
        (SolverId::Alg1, SolverId::Alg2),
        (SolverId::Alg3, SolverId::Alg4),
        (SolverId::Alg5, SolverId::Alg6),
        (SolverId::Alg7, SolverId::Alg8),
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn name(self) -> &'static str {
        [
            "alg1", "alg2", "alg3", "alg4", "alg5", "alg6", "alg7", "alg8",
        ][self as usize]
    }

    pub fn formalism(self) -> Formalism {
        match self {
            SolverId::Alg1 | SolverId::Alg2 | SolverId::Alg3 | SolverId::Alg4 => {
                Formalism::Jacobian
            }
            SolverId::Alg5 | SolverId::Alg6 => Formalism::Homogeneous,
            SolverId::Alg7 | SolverId::Alg8 => Formalism::DualQuaternion,
        }
    }

    pub fn flavor(self) -> Flavor {
        if self.number() % 2 == 1 {
            Flavor::Differentiation
        } else {
            Flavor::Multidual
        }
    }

    pub fn level(self) -> SolverLevel {
        match self {
            SolverId::Alg1 | SolverId::Alg2 => SolverLevel::MapQRho,
            _ => SolverLevel::Full,
        }
    }

    /// Space of the IK input (and FK output).
    pub fn input_space(self) -> Space {
        match self {
            SolverId::Alg1 | SolverId::Alg2 => Space::Rho,
            SolverId::Alg7 | SolverId::Alg8 => Space::DualQuaternion,
            _ => Space::Task,
        }
    }

    /// Space of the IK output (and FK input).
    pub fn output_space(self) -> Space {
        match self {
            SolverId::Alg1 | SolverId::Alg2 => Space::Q,
            _ => Space::Rho,
        }
    }

    /// The other flavor of the same formalism.
    pub fn partner(self) -> SolverId {
        SolverId::ALL[(self as usize) ^ 1]
    }

    /// Inverse kinematics of one sample.
    pub fn ik(
        self,
        g: &RobotGeometry,
        input: &KinematicSample,
        br: &Branches,
    ) -> Result<KinematicSample, SolverError> {
        self.check(input, self.input_space())?;
        let out = match (self, &input.stack) {
            (SolverId::Alg1, Stack::Vector(s)) => geometric::map_ik_diff(g, s, br)?,
            (SolverId::Alg2, Stack::Vector(s)) => geometric::map_ik_md(g, s, br)?,
            (SolverId::Alg3, Stack::Vector(s)) => geometric::full_ik_diff(g, s, br)?,
            (SolverId::Alg4, Stack::Vector(s)) => geometric::full_ik_md(g, s, br)?,
            (SolverId::Alg5, Stack::Vector(s)) => homogeneous::ik_diff(g, s, br)?,
            (SolverId::Alg6, Stack::Vector(s)) => homogeneous::ik_md(g, s, br)?,
            (SolverId::Alg7, Stack::DualQuat(s)) => dual_quat::ik_diff(g, s, br)?,
            (SolverId::Alg8, Stack::DualQuat(s)) => dual_quat::ik_md(g, s, br)?,
            _ => unreachable!("space checked above"),
        };
        Ok(KinematicSample::vector(self.output_space(), out))
    }

    /// Forward counterpart: joint sample back to this solver's input space.
    pub fn fk(
        self,
        g: &RobotGeometry,
        joints: &KinematicSample,
        br: &Branches,
    ) -> Result<KinematicSample, SolverError> {
        self.check(joints, self.output_space())?;
        let s = joints.vectors().expect("vector space checked");
        Ok(match self {
            SolverId::Alg1 => {
                KinematicSample::vector(Space::Rho, geometric::map_fk_diff(g, s, br)?)
            }
            SolverId::Alg2 => KinematicSample::vector(Space::Rho, geometric::map_fk_md(g, s, br)?),
            SolverId::Alg3 => {
                KinematicSample::vector(Space::Task, geometric::full_fk_diff(g, s, br)?)
            }
            SolverId::Alg4 => {
                KinematicSample::vector(Space::Task, geometric::full_fk_md(g, s, br)?)
            }
            SolverId::Alg5 => KinematicSample::vector(Space::Task, homogeneous::fk_diff(g, s, br)?),
            SolverId::Alg6 => KinematicSample::vector(Space::Task, homogeneous::fk_md(g, s, br)?),
            SolverId::Alg7 => KinematicSample::dual_quat(dual_quat::fk_diff(g, s, br)?),
            SolverId::Alg8 => KinematicSample::dual_quat(dual_quat::fk_md(g, s, br)?),
        })
    }

    fn check(self, s: &KinematicSample, expected: Space) -> Result<(), SolverError> {
        let shape_ok = matches!(
            (&s.stack, expected),
            (Stack::DualQuat(_), Space::DualQuaternion)
                | (
                    Stack::Vector(_),
                    Space::Task | Space::Rcm | Space::Rho | Space::Q
                )
        );
        if s.space != expected || !shape_ok {
            return Err(SolverError::SpaceMismatch {
                solver: self,
                expected,
                got: s.space,
            });
        }
        Ok(())
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverId {
    type Err = SolverError;
    /// Accepts `alg3`, `3` or `Alg3`.
    fn from_str(s: &str) -> Result<Self, SolverError> {
        let t = s.trim().to_ascii_lowercase();
        let n = t.strip_prefix("alg").unwrap_or(&t);
        match n.parse::<usize>() {
            Ok(k @ 1..=8) => Ok(SolverId::ALL[k - 1]),
            _ => Err(SolverError::UnknownSolver(s.to_string())),
        }
    }
}

/// Parse `1-2,3-4` or `alg5:alg6` style pair lists.
pub fn parse_pairs(s: &str) -> Result<Vec<(SolverId, SolverId)>, SolverError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p
                .split_once(['-', ':', '/'])
                .ok_or_else(|| SolverError::UnknownSolver(p.to_string()))?;
            Ok((a.parse()?, b.parse()?))
        })
        .collect()
}
