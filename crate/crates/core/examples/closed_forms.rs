//! Every displacement map of the robot with all its branches, at the tip
//! position E = (20, 20, −30) mm and at ρ = (50, 180, π/3).

use hyperkin::linalg::Vec3;
use hyperkin::robot::{
    p_to_rcm, p_to_rho, q_to_rho, rcm_to_p, rho_to_p, rho_to_q, tip_to_rcm, RobotGeometry,
};

fn main() {
    let g = RobotGeometry::default();
    let e = Vec3([20.0, 20.0, -30.0]);
    for b in 1..=4 {
        println!(
            "E -> (ψ, θ, l_ins) branch {b}: {:?}",
            tip_to_rcm(&e, b).unwrap()
        );
    }
    let rcm = tip_to_rcm(&e, 1).unwrap();
    let p = rcm_to_p(&rcm, &g);
    println!("P = {p:?}");
    for b in 1..=2 {
        println!("P -> ρ branch {b}: {:?}", p_to_rho(&p, &g, b).unwrap());
    }
    for b in 1..=4 {
        println!("P -> RCM branch {b}: {:?}", p_to_rcm(&p, &g, b).unwrap());
    }

    let rho = Vec3([50.0, 180.0, std::f64::consts::FRAC_PI_3]);
    for b in 1..=4 {
        let q = rho_to_q(&rho, &g, b).unwrap();
        println!(
            "ρ -> q branch {b}: {q:?}  back: {:?}",
            q_to_rho(&q, &g, 1).unwrap()
        );
    }
    println!("ρ -> P: {:?}", rho_to_p(&rho, &g));
    // Out of reach: |ρ₂ − l₄| > l₁ leaves no slider solution.
    println!("{}", rho_to_q(&Vec3([0.0, 400.0, 0.3]), &g, 1).unwrap_err());
}
