//! Closed-form displacement maps, written once over [`Scalar`] so the same
//! code yields plain values on `f64` and full derivative stacks on jets.
//!
//! Domain checks look at real parts only. Branch numbering follows the
//! solution order of the reference tables (branch 1 = working mode).

use std::f64::consts::PI;

use super::{check_branch, KinematicsError, RobotGeometry};
use crate::linalg::Vec3;
use crate::multidual::Scalar;

/// Shift into (−π, π] by a constant multiple of 2π.
pub fn wrap_angle<S: Scalar>(a: S) -> S {
    let r = a.re();
    if r > -PI && r <= PI {
        return a;
    }
    let k = ((r - PI) / (2.0 * PI)).ceil();
    let mut out = a - 2.0 * PI * k;
    if out.re() <= -PI {
        out = out + 2.0 * PI;
    }
    out
}

/// `asin(s)` as `atan2(s, √(1 − s²))`, requiring |s| < 1.
fn asin_atan2<S: Scalar>(s: S) -> S {
    s.atan2((S::one() - s * s).sqrt())
}

/// Instrument direction `u = Rz(ψ)Ry(θ)·e₁`.
pub(crate) fn direction<S: Scalar>(psi: S, theta: S) -> Vec3<S> {
    let (sp, cp) = psi.sin_cos();
    let (st, ct) = theta.sin_cos();
    Vec3([cp * ct, sp * ct, -st])
}

/// Solve `w = λ‖w‖·u(ψ, θ)` for one of the four (ψ, θ, λ‖w‖) triples.
/// Sign pattern per branch: (σ, λ) = (+,+), (+,−), (−,−), (−,+).
fn spherical<S: Scalar>(
    w: &Vec3<S>,
    branch: u8,
    what: &'static str,
) -> Result<Vec3<S>, KinematicsError> {
    check_branch(what, branch, 4)?;
    let (x, y, z) = (w[0], w[1], w[2]);
    let rxy2 = x * x + y * y;
    if rxy2.re() <= 0.0 {
        let msg = if (z * z).re() > 0.0 {
            format!("{what}: direction along z, yaw undefined")
        } else {
            format!("{what}: zero-length vector (RCM coincident)")
        };
        return Err(KinematicsError::OutOfWorkspace(msg));
    }
    let (sigma, lambda) = match branch {
        1 => (1.0, 1.0),
        2 => (1.0, -1.0),
        3 => (-1.0, -1.0),
        _ => (-1.0, 1.0),
    };
    let rxy = rxy2.sqrt();
    let n = (rxy2 + z * z).sqrt();
    let psi = (y * sigma).atan2(x * sigma);
    let theta = (z * -lambda).atan2(rxy * (lambda * sigma));
    Ok(Vec3([psi, theta, n * lambda]))
}

/// E → (ψ, θ, l_ins), four branches.
pub fn tip_to_rcm<S: Scalar>(e: &Vec3<S>, branch: u8) -> Result<Vec3<S>, KinematicsError> {
    spherical(e, branch, "tip_to_rcm")
}

/// (ψ, θ, l_ins) → E = l_ins·u(ψ, θ).
pub fn rcm_to_tip<S: Scalar>(rcm: &Vec3<S>) -> Vec3<S> {
    direction(rcm[0], rcm[1]).scale(rcm[2])
}

/// (ψ, θ, l_ins) → P = (l_ins − l)·u(ψ, θ).
pub fn rcm_to_p<S: Scalar>(rcm: &Vec3<S>, g: &RobotGeometry) -> Vec3<S> {
    direction(rcm[0], rcm[1]).scale(rcm[2] - g.l)
}

/// P → (ψ, θ, l_ins), four branches.
pub fn p_to_rcm<S: Scalar>(
    p: &Vec3<S>,
    g: &RobotGeometry,
    branch: u8,
) -> Result<Vec3<S>, KinematicsError> {
    check_branch("p_to_rcm", branch, 4)?;
    // Table order lists the short-insertion pair first.
    let inner = [3, 2, 1, 4][usize::from(branch - 1)];
    let s = spherical(p, inner, "p_to_rcm")?;
    Ok(Vec3([s[0], s[1], s[2] + g.l]))
}

/// P → ρ, two branches (ρ₂ > 0, ρ₂ < 0).
pub fn p_to_rho<S: Scalar>(
    p: &Vec3<S>,
    g: &RobotGeometry,
    branch: u8,
) -> Result<Vec3<S>, KinematicsError> {
    check_branch("p_to_rho", branch, 2)?;
    let w = p[0] + g.l0;
    let z = p[2];
    let r2 = w * w + z * z;
    if r2.re() <= 0.0 {
        return Err(KinematicsError::OutOfWorkspace(
            "p_to_rho: X_P + l0 = Z_P = 0, rho3 undefined".into(),
        ));
    }
    let sgn = if branch == 1 { 1.0 } else { -1.0 };
    Ok(Vec3([p[1], r2.sqrt() * sgn, (w * sgn).atan2(z * sgn)]))
}

/// ρ → P = (ρ₂ sin ρ₃ − l₀, ρ₁, ρ₂ cos ρ₃).
pub fn rho_to_p<S: Scalar>(rho: &Vec3<S>, g: &RobotGeometry) -> Vec3<S> {
    let (s, c) = rho[2].sin_cos();
    Vec3([rho[1] * s - g.l0, rho[0], rho[1] * c])
}

/// The two roots of `a sin x + b cos x = r·R` with `R = √(a² + b²)`:
/// `asin(r) − φ` and `π − asin(r) − φ`, `φ = atan2(b, a)`.
fn harmonic_roots<S: Scalar>(a: S, b: S, rhs: S, what: &str) -> Result<(S, S), KinematicsError> {
    let big_r2 = a * a + b * b;
    if big_r2.re() <= 0.0 {
        return Err(KinematicsError::OutOfWorkspace(format!(
            "{what}: degenerate coefficients"
        )));
    }
    let ratio = rhs / big_r2.sqrt();
    if ratio.re().abs() >= 1.0 {
        return Err(KinematicsError::OutOfWorkspace(format!(
            "{what}: no real solution (|sin| = {:.6} ≥ 1)",
            ratio.re().abs()
        )));
    }
    let phi = b.atan2(a);
    let base = asin_atan2(ratio);
    Ok((wrap_angle(base - phi), wrap_angle(-base - phi + PI)))
}

/// ρ → q, four branches: (d > 0, root A), (d > 0, root B), (d < 0, root B),
/// (d < 0, root A) where d = (q₂ − q₁)/2.
pub fn rho_to_q<S: Scalar>(
    rho: &Vec3<S>,
    g: &RobotGeometry,
    branch: u8,
) -> Result<Vec3<S>, KinematicsError> {
    check_branch("rho_to_q", branch, 4)?;
    let e = rho[1] - g.l4;
    let disc = -(e * e) + g.l1 * g.l1;
    if disc.re() <= 0.0 {
        return Err(KinematicsError::OutOfWorkspace(format!(
            "rho_to_q: second relation needs (rho2 - l4)^2 < l1^2, got rho2 = {}",
            rho[1].re()
        )));
    }
    let l3p2 = -disc + g.l3 * g.l3;
    if l3p2.re() <= 0.0 {
        return Err(KinematicsError::OutOfWorkspace(
            "rho_to_q: third relation needs |q2 - q1|/2 < l3".into(),
        ));
    }
    if e.re() == 0.0 {
        return Err(KinematicsError::OutOfWorkspace(
            "rho_to_q: rho2 = l4, third relation degenerate".into(),
        ));
    }
    let d = disc.sqrt() * if branch <= 2 { 1.0 } else { -1.0 };
    // l₁' = √(l₁² − d²) = |ρ₂ − l₄|
    let l1p = if e.re() > 0.0 { e } else { -e };
    let l3p = l3p2.sqrt();
    let (sr, cr) = rho[2].sin_cos();
    let a = l3p + l1p * sr;
    let b = l1p * cr;
    // a sin q₃ + b cos q₃ = (a² + b²)/(2 l₂)
    let (root_a, root_b) = harmonic_roots(
        a,
        b,
        (a * a + b * b) / (2.0 * g.l2),
        "rho_to_q third relation",
    )?;
    let q3 = if branch == 1 || branch == 4 {
        root_a
    } else {
        root_b
    };
    Ok(Vec3([rho[0] - d, rho[0] + d, q3]))
}

/// q → ρ, four branches: (ρ₂ = l₄ + l₁', root A), (l₄ + l₁', root B),
/// (l₄ − l₁', root B), (l₄ − l₁', root A).
pub fn q_to_rho<S: Scalar>(
    q: &Vec3<S>,
    g: &RobotGeometry,
    branch: u8,
) -> Result<Vec3<S>, KinematicsError> {
    check_branch("q_to_rho", branch, 4)?;
    let d = (q[1] - q[0]) * 0.5;
    let d2 = d * d;
    if d2.re() >= g.l1 * g.l1 || d2.re() >= g.l3 * g.l3 {
        return Err(KinematicsError::OutOfWorkspace(format!(
            "q_to_rho: |q2 - q1|/2 = {} must be below min(l1, l3)",
            d.re().abs()
        )));
    }
    let l1p = (-d2 + g.l1 * g.l1).sqrt();
    let l3p = (-d2 + g.l3 * g.l3).sqrt();
    let (s3, c3) = q[2].sin_cos();
    let c1 = l3p - s3 * g.l2;
    let c2 = c3 * g.l2;
    // 2 l₁'(c₁ sin ρ₃ − c₂ cos ρ₃) = l₂² − c₁² − c₂² − l₁'²
    let rhs = (-(c1 * c1) - c2 * c2 - l1p * l1p + g.l2 * g.l2) / (l1p * 2.0);
    let (root_a, root_b) = harmonic_roots(c1, -c2, rhs, "q_to_rho third relation")?;
    let eta = if branch <= 2 { 1.0 } else { -1.0 };
    let rho3 = if branch == 1 || branch == 4 {
        root_a
    } else {
        root_b
    };
    Ok(Vec3([(q[0] + q[1]) * 0.5, l1p * eta + g.l4, rho3]))
}
