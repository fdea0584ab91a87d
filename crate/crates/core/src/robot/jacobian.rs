//! Input-output Jacobians `A = ∂F/∂x`, `B = ∂F/∂q` of each level's
//! constraint `F(x, q) = 0`, so that `q̇ = J ẋ` with `J = −B⁻¹A`.

use serde::{Deserialize, Serialize};

use super::{KinematicsError, RobotGeometry};
use crate::linalg::{Mat3, Vec3};
use crate::multidual::Scalar;

/// Determinants below this (relative to the entry scale cubed) are singular.
pub(crate) const SINGULAR_TOL: f64 = 1e-12;

/// A level of the chain, named by its (output, input) pair in the IK direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    /// x = ρ, q = q. Constraint: the three relations of the parallel mechanism.
    RhoQ,
    /// x = P, q = ρ. Constraint: P − (ρ₂ sin ρ₃ − l₀, ρ₁, ρ₂ cos ρ₃).
    PRho,
    /// x = RCM, q = P. Constraint: P − (l_ins − l)·u(ψ, θ).
    RcmP,
    /// x = E, q = RCM. Constraint: E − l_ins·u(ψ, θ).
    RcmE,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::RhoQ => "rho-q",
            Level::PRho => "P-rho",
            Level::RcmP => "RCM-P",
            Level::RcmE => "RCM-E",
        }
    }
}

/// `∂(k·u(ψ, θ))/∂(ψ, θ, k)`.
pub(crate) fn m_matrix<S: Scalar>(psi: S, theta: S, k: S) -> Mat3<S> {
    let (sp, cp) = psi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let z = S::zero();
    Mat3([
        [-(k * sp * ct), -(k * cp * st), cp * ct],
        [k * cp * ct, -(k * sp * st), sp * ct],
        [z, -(k * ct), -st],
    ])
}

/// `∂P/∂ρ` for `P = (ρ₂ sin ρ₃ − l₀, ρ₁, ρ₂ cos ρ₃)`.
pub(crate) fn g_matrix<S: Scalar>(rho: &Vec3<S>) -> Mat3<S> {
    let (s, c) = rho[2].sin_cos();
    let (o, z) = (S::one(), S::zero());
    Mat3([[z, s, rho[1] * c], [o, z, z], [z, c, -(rho[1] * s)]])
}

/// Pieces of the third ρ−q relation `F₃ = U² + W² − l₂²`.
pub(crate) struct RhoQTerms<S> {
    pub e: S,
    pub f3_rho3: S,
    pub f3_d: S,
    pub f3_q3: S,
    pub d: S,
}

pub(crate) fn rho_q_terms<S: Scalar>(
    g: &RobotGeometry,
    rho: &Vec3<S>,
    q: &Vec3<S>,
) -> RhoQTerms<S> {
    let d = (q[1] - q[0]) * 0.5;
    let l1p = (-(d * d) + g.l1 * g.l1).sqrt();
    let l3p = (-(d * d) + g.l3 * g.l3).sqrt();
    let (sr, cr) = rho[2].sin_cos();
    let (s3, c3) = q[2].sin_cos();
    let u = l3p - s3 * g.l2 + l1p * sr;
    let w = c3 * g.l2 - l1p * cr;
    RhoQTerms {
        e: rho[1] - g.l4,
        f3_rho3: l1p * (u * cr + w * sr) * 2.0,
        f3_d: -(d * u * 2.0) / l3p + d * (w * cr - u * sr) * 2.0 / l1p,
        f3_q3: -((u * c3 + w * s3) * (2.0 * g.l2)),
        d,
    }
}

pub fn a_matrix<S: Scalar>(level: Level, g: &RobotGeometry, x: &Vec3<S>, q: &Vec3<S>) -> Mat3<S> {
    match level {
        Level::RcmE | Level::PRho => Mat3::identity(),
        Level::RcmP => -m_matrix(x[0], x[1], x[2] - g.l),
        Level::RhoQ => {
            let t = rho_q_terms(g, x, q);
            let (o, z) = (S::one(), S::zero());
            Mat3([[o, z, z], [z, t.e * 2.0, z], [z, z, t.f3_rho3]])
        }
    }
}

pub fn b_matrix<S: Scalar>(level: Level, g: &RobotGeometry, x: &Vec3<S>, q: &Vec3<S>) -> Mat3<S> {
    match level {
        Level::RcmE => -m_matrix(q[0], q[1], q[2]),
        Level::RcmP => Mat3::identity(),
        Level::PRho => -g_matrix(q),
        Level::RhoQ => {
            let t = rho_q_terms(g, x, q);
            let h = S::cst(0.5);
            let z = S::zero();
            Mat3([
                [-h, -h, z],
                [-t.d, t.d, z],
                [-(t.f3_d * 0.5), t.f3_d * 0.5, t.f3_q3],
            ])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelJacobians {
    pub a: Mat3<f64>,
    pub b: Mat3<f64>,
    /// Inverse-direction Jacobian `−B⁻¹A`.
    pub j: Mat3<f64>,
    pub det_a: f64,
    pub det_b: f64,
    /// `det A ≈ 0`: the forward map loses rank here.
    pub parallel_singular: bool,
}

/// A, B and J at `(x, q)`. A singular B is an error; a singular A is flagged.
pub fn jacobians(
    level: Level,
    g: &RobotGeometry,
    x: &Vec3<f64>,
    q: &Vec3<f64>,
) -> Result<LevelJacobians, KinematicsError> {
    let a = a_matrix(level, g, x, q);
    let b = b_matrix(level, g, x, q);
    let b_inv = b
        .inverse(SINGULAR_TOL)
        .ok_or(KinematicsError::SerialSingularity(level.name()))?;
    Ok(LevelJacobians {
        a,
        b,
        j: -b_inv.matmul(&a),
        det_a: a.det(),
        det_b: b.det(),
        parallel_singular: a.inverse(SINGULAR_TOL).is_none(),
    })
}

/// Forward-direction Jacobian `ẋ = −A⁻¹B q̇`.
pub fn forward_jacobian(
    level: Level,
    g: &RobotGeometry,
    x: &Vec3<f64>,
    q: &Vec3<f64>,
) -> Result<Mat3<f64>, KinematicsError> {
    let a = a_matrix(level, g, x, q);
    let b = b_matrix(level, g, x, q);
    let a_inv = a
        .inverse(SINGULAR_TOL)
        .ok_or(KinematicsError::ParallelSingularity(level.name()))?;
    Ok(-a_inv.matmul(&b))
}
