//! Dual-quaternion (Study parameter) form of the RCM and parallel-mechanism
//! relations.
//!
//! Rotations are parameterized by half tangents `u₁ = tan(ψ/2)`,
//! `u₂ = tan(θ/2)`, `u₃ = tan(ρ₃/2)`. The instrument frame at P and the frame
//! reached through the parallel mechanism share the rotation `Rz(ψ)Ry(θ)`, so
//! equating `Q_P` and `Q_P2` reduces to equating translations.

use super::closed::direction;
use super::{p_to_rcm, rcm_to_p, rcm_to_tip, rho_to_p, KinematicsError, RobotGeometry};
use crate::linalg::Vec3;
use crate::multidual::Scalar;
use crate::quatkin::{DualQuaternion, Quaternion};

/// `|cos(a/2)|` below this is treated as the half-tangent pole.
const POLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DqParameterization<S = f64> {
    /// Instrument frame at P.
    pub q_p: DualQuaternion<S>,
    /// Instrument frame at the tip E.
    pub q_e: DualQuaternion<S>,
    /// Constant offset P → E along the instrument, `Q_E = Q_P Q_L`.
    pub q_l: DualQuaternion<S>,
    /// Frame at P reached through ρ.
    pub q_p2: DualQuaternion<S>,
}

fn check_pole(what: &'static str, a: f64) -> Result<(), KinematicsError> {
    if (a * 0.5).cos().abs() < POLE_TOL {
        return Err(KinematicsError::HalfTangentPole(what));
    }
    Ok(())
}

/// All four parameterizations at an RCM state and the matching ρ.
pub fn dq_parameterizations<S: Scalar>(
    rcm: &Vec3<S>,
    rho: &Vec3<S>,
    g: &RobotGeometry,
) -> Result<DqParameterization<S>, KinematicsError> {
    check_pole("psi", rcm[0].re())?;
    check_pole("theta", rcm[1].re())?;
    check_pole("rho3", rho[2].re())?;
    let q = Quaternion::from_zy(rcm[0], rcm[1]);
    let z = S::zero();
    Ok(DqParameterization {
        q_p: DualQuaternion::from_translation_rotation(rcm_to_p(rcm, g), q),
        q_e: DualQuaternion::from_translation_rotation(rcm_to_tip(rcm), q),
        q_l: DualQuaternion::translation(Vec3([S::cst(g.l), z, z])),
        q_p2: DualQuaternion::from_translation_rotation(rho_to_p(rho, g), q),
    })
}

/// `(sin a, cos a)` from `t = tan(a/2)`.
fn half_tangent_sin_cos<S: Scalar>(t: S) -> (S, S) {
    let w = S::one() / (S::one() + t * t);
    (t * 2.0 * w, (S::one() - t * t) * w)
}

/// `P₂ = (ρ₂ sin ρ₃ − l₀, ρ₁, ρ₂ cos ρ₃)` with ρ₃ given by `u₃`.
pub fn p2_from_u3<S: Scalar>(rho1: S, rho2: S, u3: S, g: &RobotGeometry) -> Vec3<S> {
    let (s, c) = half_tangent_sin_cos(u3);
    Vec3([rho2 * s - g.l0, rho1, rho2 * c])
}

/// `(u₁, u₂, l_ins)` → `(ρ₁, ρ₂, u₃)`. Branch 1 has ρ₂ > 0, branch 2 ρ₂ < 0.
pub fn dq_ik_displacement<S: Scalar>(
    u1: S,
    u2: S,
    l_ins: S,
    g: &RobotGeometry,
    branch: u8,
) -> Result<Vec3<S>, KinematicsError> {
    super::check_branch("dq_ik_displacement", branch, 2)?;
    let (sp, cp) = half_tangent_sin_cos(u1);
    let (st, ct) = half_tangent_sin_cos(u2);
    let k = l_ins - g.l;
    let w = k * cp * ct + g.l0;
    let z = -(k * st);
    let r2 = w * w + z * z;
    if r2.re() <= 0.0 {
        return Err(KinematicsError::OutOfWorkspace(
            "dq_ik_displacement: X_P + l0 = Z_P = 0".into(),
        ));
    }
    let rho2 = r2.sqrt() * if branch == 1 { 1.0 } else { -1.0 };
    let (d1, d2) = (rho2 + z, w);
    let u3 = if d1.re().abs() >= d2.re().abs() {
        w / d1
    } else {
        (rho2 - z) / d2
    };
    if !u3.re().is_finite() {
        return Err(KinematicsError::HalfTangentPole("rho3"));
    }
    Ok(Vec3([k * sp * ct, rho2, u3]))
}

/// Read `(u₁, u₂, l_ins)` off an instrument frame at P. The input may carry
/// any nonzero projective scale but must satisfy `x·y = 0`.
pub fn half_tangent_params<S: Scalar>(
    q_p: &DualQuaternion<S>,
    g: &RobotGeometry,
) -> Result<Vec3<S>, KinematicsError> {
    let re = q_p.re();
    let n2 = re.real.norm_sq();
    if n2 == 0.0 {
        return Err(KinematicsError::NonUnit(f64::INFINITY));
    }
    let dev = re.real.dot(&re.dual).abs() / (n2 * (1.0 + (re.dual.norm_sq() / n2).sqrt()));
    if dev > 1e-9 {
        return Err(KinematicsError::NonUnit(dev));
    }
    let x = q_p.real;
    if (x.w.re() / n2.sqrt()).abs() < POLE_TOL {
        return Err(KinematicsError::HalfTangentPole("psi/theta"));
    }
    let u1 = x.z / x.w;
    let u2 = x.y / x.w;
    let p = (q_p.dual * x.conj())
        .scale(S::cst(2.0) / x.norm_sq())
        .vector();
    let (sp, cp) = half_tangent_sin_cos(u1);
    let (st, ct) = half_tangent_sin_cos(u2);
    let u = Vec3([cp * ct, sp * ct, -st]);
    Ok(Vec3([u1, u2, p.dot(&u) + g.l]))
}

/// One forward solution: `(u₁, u₂, l_ins)` with its Study vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DqFkSolution {
    pub u: Vec3<f64>,
    pub q_p: DualQuaternion<f64>,
}

/// `(ρ₁, ρ₂, u₃)` → the eight Study-vector solutions: each of the four
/// instrument poses appears with both projective signs.
pub fn dq_fk_displacement(
    rho_u: &Vec3<f64>,
    g: &RobotGeometry,
) -> Result<Vec<DqFkSolution>, KinematicsError> {
    let p = p2_from_u3(rho_u[0], rho_u[1], rho_u[2], g);
    let mut out = Vec::with_capacity(8);
    for branch in 1..=4 {
        let rcm = p_to_rcm(&p, g, branch)?;
        check_pole("psi", rcm[0])?;
        check_pole("theta", rcm[1])?;
        let u = Vec3([(rcm[0] * 0.5).tan(), (rcm[1] * 0.5).tan(), rcm[2]]);
        let q = DualQuaternion::from_translation_rotation(p, Quaternion::from_zy(rcm[0], rcm[1]));
        debug_assert!(
            (direction(rcm[0], rcm[1]).scale(rcm[2] - g.l) - p).max_abs()
                < 1e-6 * (1.0 + p.max_abs())
        );
        out.push(DqFkSolution { u, q_p: q });
        out.push(DqFkSolution { u, q_p: -q });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robot::{p_to_rho, tip_to_rcm};

    fn g() -> RobotGeometry {
        RobotGeometry::default()
    }

    #[test]
    fn table_inverse_solutions() {
        let (u1, u2, l) = (0.4142, 0.4316, 41.231);
        let s1 = dq_ik_displacement(u1, u2, l, &g(), 1).unwrap();
        let s2 = dq_ik_displacement(u1, u2, l, &g(), 2).unwrap();
        assert!((s1[0] + 174.028).abs() < 0.15 && (s1[1] - 289.848).abs() < 0.15);
        assert!((2.0 * s1[2].atan() - 0.449).abs() < 1e-3);
        assert!((s2[1] + 289.848).abs() < 0.15 && (s2[2] + 4.373).abs() < 1e-3);
    }

    #[test]
    fn frames_agree_at_table_state() {
        let rcm = Vec3([2.0 * 0.4142f64.atan(), 2.0 * 0.4316f64.atan(), 41.231]);
        let rho = p_to_rho(&rcm_to_p(&rcm, &g()), &g(), 1).unwrap();
        let d = dq_parameterizations(&rcm, &rho, &g()).unwrap();
        assert!((d.q_p - d.q_p2).max_abs() < 1e-12);
        assert!((d.q_e * d.q_l.conjugate() - d.q_p).max_abs() < 1e-12);
        let u = half_tangent_params(&d.q_p, &g()).unwrap();
        assert!((u[0] - 0.4142).abs() < 1e-12 && (u[2] - 41.231).abs() < 1e-9);
    }

    #[test]
    fn identity_frame() {
        let rcm = Vec3([0.0, 0.0, g().l]);
        let rho = Vec3([0.0, 300.0, std::f64::consts::FRAC_PI_2]);
        let d = dq_parameterizations(&rcm, &rho, &g()).unwrap();
        assert_eq!(d.q_p.real, Quaternion::identity());
        assert!(d.q_p.dual.max_abs() == 0.0);
    }

    #[test]
    fn forward_doubles_and_collapses() {
        let s = dq_ik_displacement(0.4142, 0.4316, 41.231, &g(), 1).unwrap();
        let fk = dq_fk_displacement(&s, &g()).unwrap();
        assert_eq!(fk.len(), 8);
        assert!((fk[0].u - Vec3([0.4142, 0.4316, 41.231])).max_abs() < 1e-9);
        let mut distinct: Vec<DualQuaternion> = Vec::new();
        for f in &fk {
            if !distinct.iter().any(|d| d.same_displacement(&f.q_p, 1e-9)) {
                distinct.push(f.q_p);
            }
        }
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn matches_geometric_route() {
        let e = rcm_to_tip(&Vec3([0.3, 0.9, 60.0]));
        let rcm = tip_to_rcm(&e, 1).unwrap();
        for b in 1..=2 {
            let rho = p_to_rho(&rcm_to_p(&rcm, &g()), &g(), b).unwrap();
            let s = dq_ik_displacement((rcm[0] * 0.5).tan(), (rcm[1] * 0.5).tan(), rcm[2], &g(), b)
                .unwrap();
            assert!((s[0] - rho[0]).abs() < 1e-9 && (s[1] - rho[1]).abs() < 1e-9);
            assert!(
                (2.0 * s[2].atan() - rho[2]).abs() < 1e-12
                    || (2.0 * s[2].atan() - rho[2]).abs() > 6.0
            );
        }
    }

    #[test]
    fn poles_are_errors() {
        let rcm = Vec3([std::f64::consts::PI, 0.3, 50.0]);
        assert!(matches!(
            dq_parameterizations(&rcm, &Vec3([0.0, 250.0, 0.4]), &g()),
            Err(KinematicsError::HalfTangentPole("psi"))
        ));
    }
}
