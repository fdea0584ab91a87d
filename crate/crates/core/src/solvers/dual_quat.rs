//! Dual-quaternion formalism (alg7, alg8).
//!
//! `Q_P = Q_E Q_L*` is the instrument frame at P and `Q_P2` the frame
//! reached through `(ρ₁, ρ₂, u₃)`. Their real parts coincide, so matching
//! dual parts order by order matches the translations:
//! `2D^(n) = Σ_k C(n,k) P^(k) q^(n−k)`.

use super::homogeneous::rcm_from_p_stack;
use super::level::Stack3;
use super::Branches;
use crate::linalg::{Mat3, Vec3};
use crate::multidual::Jet3;
use crate::quatkin::{dq_derivative_stack, hmd_compose, DualQuaternion, HmdQuaternion, Quaternion};
use crate::robot::rates::{rho_to_p_rates, scaled_direction_rates, Rate};
use crate::robot::{
    dq_ik_displacement, half_tangent_params, p2_from_u3, p_to_rcm, rcm_to_tip, rho_to_p,
    KinematicsError, RobotGeometry,
};

type DqStack = [DualQuaternion<f64>; 4];

const UNIT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-12;

fn binomial(n: usize, k: usize) -> f64 {
    const C: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0],
        [1.0, 3.0, 3.0, 1.0],
    ];
    C[n][k]
}

fn q_l_conj(g: &RobotGeometry) -> DualQuaternion<f64> {
    DualQuaternion::translation(Vec3([g.l, 0.0, 0.0])).conjugate()
}

fn check_unit(q: &DualQuaternion<f64>) -> Result<(), KinematicsError> {
    if !q.is_unit(UNIT_TOL) {
        let dev = (q.real.norm_sq() - 1.0)
            .abs()
            .max(q.real.dot(&q.dual).abs());
        return Err(KinematicsError::NonUnit(dev));
    }
    Ok(())
}

/// `(ρ₁, ρ₂, u₃)` at order 0, shared by both flavors.
fn displacement(
    g: &RobotGeometry,
    q_p0: &DualQuaternion<f64>,
    br: &Branches,
) -> Result<Vec3<f64>, KinematicsError> {
    let u = half_tangent_params(q_p0, g)?;
    dq_ik_displacement(u[0], u[1], u[2], g, br.rho)
}

fn to_rho(r: Vec3<f64>) -> Vec3<f64> {
    Vec3([r[0], r[1], 2.0 * r[2].atan()])
}

/// `(s(u), c(u)) = (2u, 1 − u²)/(1 + u²)` with rates.
fn half_tangent_rates(u: Rate) -> (Rate, Rate) {
    let w = (u * u + 1.0).recip();
    ((u * 2.0) * w, (Rate::constant(1.0) - u * u) * w)
}

/// Rates of `P₂(ρ₁, ρ₂, u₃)`.
fn p2_rates(r: &[Rate; 3], g: &RobotGeometry) -> [Vec3<f64>; 4] {
    let (s, c) = half_tangent_rates(r[2]);
    crate::robot::rates::split_vec([r[1] * s - g.l0, r[0], r[1] * c])
}

pub(super) fn ik_diff(
    g: &RobotGeometry,
    q_e: &DqStack,
    br: &Branches,
) -> Result<Stack3, KinematicsError> {
    check_unit(&q_e[0])?;
    let ql = q_l_conj(g);
    let q_p = q_e.map(|q| q * ql);
    let r0 = displacement(g, &q_p[0], br)?;

    // Translation stack from the dual parts.
    let q0c = q_p[0].real.conj();
    let mut p = [Quaternion::zero(); 4];
    for n in 0..4 {
        let mut acc = q_p[n].dual.scale(2.0);
        for k in 0..n {
            acc = acc - (p[k] * q_p[n - k].real).scale(binomial(n, k));
        }
        p[n] = Quaternion::pure((acc * q0c).vector());
    }

    let u = r0[2];
    let w = 1.0 / (1.0 + u * u);
    let (s, c) = (2.0 * u * w, (1.0 - u * u) * w);
    let (s_u, c_u) = (2.0 * (1.0 - u * u) * w * w, -4.0 * u * w * w);
    let gu = Mat3([
        [0.0, s, r0[1] * s_u],
        [1.0, 0.0, 0.0],
        [0.0, c, r0[1] * c_u],
    ]);
    let gu_inv = gu
        .inverse(SINGULAR_TOL)
        .ok_or_else(|| KinematicsError::Singular("dual-quaternion linear system".into()))?;

    let z = Vec3::zero();
    let mut ru = [r0, z, z, z];
    for n in 1..4 {
        let low = p2_rates(&Rate::stack3(&ru[..n]), g)[n];
        ru[n] = gu_inv * (p[n].vector() - low);
    }
    let [r1, r2, u3] = Rate::stack3(&ru);
    let rho3 = u3.twice_atan();
    let mut out = [to_rho(r0), z, z, z];
    for (n, o) in out.iter_mut().enumerate().skip(1) {
        *o = Vec3([r1.0[n], r2.0[n], rho3.0[n]]);
    }
    Ok(out)
}

pub(super) fn ik_md(
    g: &RobotGeometry,
    q_e: &DqStack,
    br: &Branches,
) -> Result<Stack3, KinematicsError> {
    check_unit(&q_e[0])?;
    let ql = q_l_conj(g);
    let r0 = displacement(g, &(q_e[0] * ql), br)?;
    let q_p = HmdQuaternion::<4>::from_stack(q_e) * ql.lift();
    let u = half_tangent_params(&q_p, g)?;
    let r = dq_ik_displacement(u[0], u[1], u[2], g, br.rho)?;
    let rho = Vec3([r[0], r[1], r[2].atan() * 2.0]);
    Ok([
        to_rho(r0),
        rho.derivative(1),
        rho.derivative(2),
        rho.derivative(3),
    ])
}

/// Half-angle quaternion `Rz(ψ)Ry(θ)` with rates.
fn zy_quaternion_rates(psi: Rate, theta: Rate) -> [Quaternion<f64>; 4] {
    let (sp, cp) = psi.scale(0.5).sin_cos();
    let (st, ct) = theta.scale(0.5).sin_cos();
    let q = [cp * ct, -(sp * st), cp * st, sp * ct];
    [0, 1, 2, 3].map(|k| Quaternion::new(q[0].0[k], q[1].0[k], q[2].0[k], q[3].0[k]))
}

pub(super) fn fk_diff(
    g: &RobotGeometry,
    rho: &Stack3,
    br: &Branches,
) -> Result<DqStack, KinematicsError> {
    let p = rho_to_p_rates(&Rate::stack3(rho), g);
    let rcm = rcm_from_p_stack(g, &p, br.rcm_from_p)?;
    let [ps, th, l] = Rate::stack3(&rcm);
    let q = zy_quaternion_rates(ps, th);
    let mut e = scaled_direction_rates(ps, th, l);
    e[0] = rcm_to_tip(&rcm[0]);
    let out = dq_derivative_stack(&e, &q);
    Ok([out[0], out[1], out[2], out[3]])
}

pub(super) fn fk_md(
    g: &RobotGeometry,
    rho: &Stack3,
    br: &Branches,
) -> Result<DqStack, KinematicsError> {
    let rcm0 = p_to_rcm(&rho_to_p(&rho[0], g), g, br.rcm_from_p)?;
    let q0 = DualQuaternion::from_translation_rotation(
        rcm_to_tip(&rcm0),
        Quaternion::from_zy(rcm0[0], rcm0[1]),
    );
    let rho_hat = Vec3::<Jet3>::from_stack(rho);
    let u3 = (rho_hat[2] * 0.5).tan();
    let p2 = p2_from_u3(rho_hat[0], rho_hat[1], u3, g);
    let rcm = p_to_rcm(&p2, g, br.rcm_from_p)?;
    let q = hmd_compose(rcm_to_tip(&rcm), Quaternion::from_zy(rcm[0], rcm[1]));
    Ok([q0, q.derivative(1), q.derivative(2), q.derivative(3)])
}
