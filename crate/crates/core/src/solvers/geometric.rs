//! Jacobian formalism: the ρ−q map (alg1, alg2) and the level chain
//! E → RCM → P → ρ (alg3, alg4), with forward counterparts.

use super::level::{md_level, sequential, Direction, Stack3};
use super::Branches;
use crate::robot::{
    p_to_rcm, p_to_rho, q_to_rho, rcm_to_p, rcm_to_tip, rho_to_p, rho_to_q, tip_to_rcm,
    KinematicsError, Level, RobotGeometry,
};

type R = Result<Stack3, KinematicsError>;

pub(super) fn map_ik_diff(g: &RobotGeometry, rho: &Stack3, br: &Branches) -> R {
    let q0 = rho_to_q(&rho[0], g, br.q)?;
    sequential(Level::RhoQ, g, Direction::Inverse, rho, q0)
}

pub(super) fn map_ik_md(g: &RobotGeometry, rho: &Stack3, br: &Branches) -> R {
    let q0 = rho_to_q(&rho[0], g, br.q)?;
    md_level(Level::RhoQ, g, Direction::Inverse, rho, q0, |x| {
        rho_to_q(x, g, br.q)
    })
}

pub(super) fn map_fk_diff(g: &RobotGeometry, q: &Stack3, br: &Branches) -> R {
    let rho0 = q_to_rho(&q[0], g, br.rho_from_q)?;
    sequential(Level::RhoQ, g, Direction::Forward, q, rho0)
}

pub(super) fn map_fk_md(g: &RobotGeometry, q: &Stack3, br: &Branches) -> R {
    let rho0 = q_to_rho(&q[0], g, br.rho_from_q)?;
    md_level(Level::RhoQ, g, Direction::Forward, q, rho0, |x| {
        q_to_rho(x, g, br.rho_from_q)
    })
}

pub(super) fn full_ik_diff(g: &RobotGeometry, e: &Stack3, br: &Branches) -> R {
    let inv = Direction::Inverse;
    let rcm0 = tip_to_rcm(&e[0], br.tip)?;
    let rcm = sequential(Level::RcmE, g, inv, e, rcm0)?;
    let p = sequential(Level::RcmP, g, inv, &rcm, rcm_to_p(&rcm0, g))?;
    let p0 = p[0];
    sequential(Level::PRho, g, inv, &p, p_to_rho(&p0, g, br.rho)?)
}

pub(super) fn full_ik_md(g: &RobotGeometry, e: &Stack3, br: &Branches) -> R {
    let inv = Direction::Inverse;
    let rcm0 = tip_to_rcm(&e[0], br.tip)?;
    let rcm = md_level(Level::RcmE, g, inv, e, rcm0, |x| tip_to_rcm(x, br.tip))?;
    let p0 = rcm_to_p(&rcm0, g);
    let p = md_level(Level::RcmP, g, inv, &rcm, p0, |x| Ok(rcm_to_p(x, g)))?;
    let rho0 = p_to_rho(&p0, g, br.rho)?;
    md_level(Level::PRho, g, inv, &p, rho0, |x| p_to_rho(x, g, br.rho))
}

pub(super) fn full_fk_diff(g: &RobotGeometry, rho: &Stack3, br: &Branches) -> R {
    let fwd = Direction::Forward;
    let p0 = rho_to_p(&rho[0], g);
    let p = sequential(Level::PRho, g, fwd, rho, p0)?;
    let rcm0 = p_to_rcm(&p0, g, br.rcm_from_p)?;
    let rcm = sequential(Level::RcmP, g, fwd, &p, rcm0)?;
    sequential(Level::RcmE, g, fwd, &rcm, rcm_to_tip(&rcm0))
}

pub(super) fn full_fk_md(g: &RobotGeometry, rho: &Stack3, br: &Branches) -> R {
    let fwd = Direction::Forward;
    let p0 = rho_to_p(&rho[0], g);
    let p = md_level(Level::PRho, g, fwd, rho, p0, |x| Ok(rho_to_p(x, g)))?;
    let rcm0 = p_to_rcm(&p0, g, br.rcm_from_p)?;
    let rcm = md_level(Level::RcmP, g, fwd, &p, rcm0, |x| {
        p_to_rcm(x, g, br.rcm_from_p)
    })?;
    md_level(Level::RcmE, g, fwd, &rcm, rcm_to_tip(&rcm0), |x| {
        Ok(rcm_to_tip(x))
    })
}
