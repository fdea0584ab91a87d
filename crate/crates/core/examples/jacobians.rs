//! Constraint Jacobians A, B per level, the IK Jacobian J = −B⁻¹A, and the
//! serial singularity of the slider level at q₁ = q₂.

use hyperkin::linalg::Vec3;
use hyperkin::robot::{forward_jacobian, jacobians, q_to_rho, rho_to_q, Level, RobotGeometry};

fn main() {
    let g = RobotGeometry::default();
    let rho = Vec3([50.0, 180.0, std::f64::consts::FRAC_PI_3]);
    let q = rho_to_q(&rho, &g, 1).unwrap();
    let jc = jacobians(Level::RhoQ, &g, &rho, &q).unwrap();
    println!("det A = {:.3}, det B = {:.3}", jc.det_a, jc.det_b);
    println!("J (q̇ = J ρ̇):\n{:#?}", jc.j);

    let q_eq = Vec3([12.0, 12.0, 0.4]);
    let rho_eq = q_to_rho(&q_eq, &g, 1).unwrap();
    println!(
        "at q₁ = q₂: {}",
        jacobians(Level::RhoQ, &g, &rho_eq, &q_eq).unwrap_err()
    );
    let fwd = forward_jacobian(Level::RhoQ, &g, &rho_eq, &q_eq).unwrap();
    println!("forward row for ρ₁: {:?}", fwd.0[0]);
}
