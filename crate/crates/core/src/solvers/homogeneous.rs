//! Homogeneous-transform formalism (alg5, alg6).
//!
//! The instrument frame at P is `b_P1 = [Rz(ψ)Ry(θ), (l_ins − l)·u]` and the
//! frame reached through ρ is `b_P2 = [Rz(ψ)Ry(θ), P₂(ρ)]`. Both share the
//! rotation, so their order-n fields `V^(n)(p) = K_n p + v_n` with
//! `K_n = R^(n) R₀ᵀ` must agree at the common point; that fixes ρ^(n).

use super::level::Stack3;
use super::Branches;
use crate::linalg::{Mat3, Vec3};
use crate::multidual::Jet3;
use crate::robot::rates::{rho_to_p_rates, rot_zy_rates, scaled_direction_rates, Rate};
use crate::robot::{
    a_matrix, b_matrix, p_to_rcm, p_to_rho, rcm_to_p, rcm_to_tip, rho_to_p, tip_to_rcm,
    KinematicsError, Level, RobotGeometry,
};
use crate::se3::{md_higher_order_field, rot_zy, MultiDualPose};

const SINGULAR_TOL: f64 = 1e-12;

fn solve_with(m: Mat3<f64>, what: &'static str) -> Result<Mat3<f64>, KinematicsError> {
    m.inverse(SINGULAR_TOL)
        .ok_or_else(|| KinematicsError::Singular(format!("{what} linear system")))
}

/// Order-`n` entries of `k·u(ψ, θ)` with the order-`n` RCM rates left at zero.
fn lower_order_part(rcm: &Stack3, n: usize, offset: f64) -> Vec3<f64> {
    let [p, t, l] = Rate::stack3(&rcm[..n]);
    scaled_direction_rates(p, t, l - offset)[n]
}

pub(super) fn ik_diff(
    g: &RobotGeometry,
    e: &Stack3,
    br: &Branches,
) -> Result<Stack3, KinematicsError> {
    let rcm0 = tip_to_rcm(&e[0], br.tip)?;
    let p0 = rcm_to_p(&rcm0, g);
    let rho0 = p_to_rho(&p0, g, br.rho)?;
    let p2_0 = rho_to_p(&rho0, g);
    let m_inv = solve_with(-b_matrix(Level::RcmE, g, &e[0], &rcm0), "tip")?;
    let g_inv = solve_with(-b_matrix(Level::PRho, g, &p0, &rho0), "rho")?;
    let r0t = rot_zy(rcm0[0], rcm0[1]).transpose();
    let z = Vec3::zero();
    let mut rcm = [rcm0, z, z, z];
    let mut rho = [rho0, z, z, z];
    for n in 1..4 {
        rcm[n] = m_inv * (e[n] - lower_order_part(&rcm, n, 0.0));
        let [ps, th, l] = Rate::stack3(&rcm[..=n]);
        let k_n = rot_zy_rates(ps, th)[n] * r0t;
        let p1_n = scaled_direction_rates(ps, th, l - g.l)[n];
        let v_p1 = p1_n - k_n * p0;
        let p2_n = v_p1 + k_n * p2_0;
        let p2_low = rho_to_p_rates(&Rate::stack3(&rho[..n]), g)[n];
        rho[n] = g_inv * (p2_n - p2_low);
    }
    Ok(rho)
}

pub(super) fn ik_md(
    g: &RobotGeometry,
    e: &Stack3,
    br: &Branches,
) -> Result<Stack3, KinematicsError> {
    let rcm0 = tip_to_rcm(&e[0], br.tip)?;
    let rho0 = p_to_rho(&rcm_to_p(&rcm0, g), g, br.rho)?;
    let e_hat = Vec3::<Jet3>::from_stack(e);
    let rcm = tip_to_rcm(&e_hat, br.tip)?;
    let r = rot_zy(rcm[0], rcm[1]);
    let z = Jet3::constant(0.0);
    let p1 = r * Vec3([rcm[2] - g.l, z, z]);
    let (k, v1) = md_higher_order_field(&MultiDualPose { r, t: p1 });
    let p2 = v1 + k * rho_to_p(&rho0, g).lift();
    let rho = p_to_rho(&p2, g, br.rho)?;
    Ok([
        rho0,
        rho.derivative(1),
        rho.derivative(2),
        rho.derivative(3),
    ])
}

/// RCM stack from a P stack: `P^(n) = ((l_ins − l)·u)^(n)` solved order by order.
pub(super) fn rcm_from_p_stack(
    g: &RobotGeometry,
    p: &Stack3,
    branch: u8,
) -> Result<Stack3, KinematicsError> {
    let rcm0 = p_to_rcm(&p[0], g, branch)?;
    let m_inv = solve_with(-a_matrix(Level::RcmP, g, &rcm0, &p[0]), "instrument")?;
    let z = Vec3::zero();
    let mut rcm = [rcm0, z, z, z];
    for n in 1..4 {
        rcm[n] = m_inv * (p[n] - lower_order_part(&rcm, n, g.l));
    }
    Ok(rcm)
}

pub(super) fn fk_diff(
    g: &RobotGeometry,
    rho: &Stack3,
    br: &Branches,
) -> Result<Stack3, KinematicsError> {
    let p = rho_to_p_rates(&Rate::stack3(rho), g);
    let rcm = rcm_from_p_stack(g, &p, br.rcm_from_p)?;
    let [ps, th, _] = Rate::stack3(&rcm);
    let rot = rot_zy_rates(ps, th);
    let z = Vec3::zero();
    let mut e = [rcm_to_tip(&rcm[0]), z, z, z];
    for n in 1..4 {
        e[n] = p[n] + rot[n].col(0).scale(g.l);
    }
    Ok(e)
}

pub(super) fn fk_md(
    g: &RobotGeometry,
    rho: &Stack3,
    br: &Branches,
) -> Result<Stack3, KinematicsError> {
    let rcm0 = p_to_rcm(&rho_to_p(&rho[0], g), g, br.rcm_from_p)?;
    let rho_hat = Vec3::<Jet3>::from_stack(rho);
    let p2 = rho_to_p(&rho_hat, g);
    let rcm = p_to_rcm(&p2, g, br.rcm_from_p)?;
    let r = rot_zy(rcm[0], rcm[1]);
    let z = Jet3::constant(0.0);
    let e = p2 + r * Vec3([Jet3::constant(g.l), z, z]);
    Ok([
        rcm_to_tip(&rcm0),
        e.derivative(1),
        e.derivative(2),
        e.derivative(3),
    ])
}
