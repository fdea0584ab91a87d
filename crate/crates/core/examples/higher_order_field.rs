//! Velocity, acceleration and jerk fields of a moving rigid body: the k-th
//! derivative of any body point p is v_k + K_k p. Computed from classical
//! derivative stacks and, all at once, from a pose over jets.

use hyperkin::linalg::Vec3;
use hyperkin::multidual::Jet3;
use hyperkin::se3::{higher_order_field, md_higher_order_field, rot_zy, MultiDualPose};

fn main() {
    let t = Jet3::variable(0.5, &[1.0]);
    let r = rot_zy(t.sin(), t * 0.7);
    let tr = Vec3([t * t, t * 3.0, t.cos()]);
    let pose = MultiDualPose::new(r, tr).unwrap();

    let (rots, trs) = pose.derivative_stacks();
    let (k_hat, v_hat) = md_higher_order_field(&pose);
    let p = pose.re().apply(&Vec3([0.0, 0.0, 10.0]));

    for k in 1..=3 {
        let field = higher_order_field(&rots, &trs, k).unwrap();
        let from_jets = v_hat.derivative(k) + k_hat.derivative(k).mul_vec(&p);
        println!("order {k}: {:?}\n   jets: {:?}", field.at(&p), from_jets);
    }
}
