//! Rigid displacements as unit dual quaternions, and their derivative stacks
//! as dual quaternions over jets.

use hyperkin::linalg::Vec3;
use hyperkin::multidual::Jet3;
use hyperkin::quatkin::{dq_derivative_stack, hmd_compose, DualQuaternion, Quaternion};
use hyperkin::se3::{rot_zy, Pose};

fn main() {
    let pose = Pose::new(rot_zy(0.4, 0.9), Vec3([10.0, -5.0, 30.0])).unwrap();
    let q = DualQuaternion::from_pose(&pose).unwrap();
    println!("Study parameters: {:?}", q.to_array());
    println!("unit: {}", q.is_unit(1e-12));

    let back = q.to_pose().unwrap();
    let p = Vec3([1.0, 2.0, 3.0]);
    println!(
        "pose(p) = {:?}\nback(p) = {:?}",
        pose.apply(&p),
        back.apply(&p)
    );

    // A moving frame: yaw ψ(t) = 0.4 + 0.3t, pitch θ(t) = 0.9 − 0.1t², translation r(t) = (t, t², 0).
    let t = Jet3::variable(0.0, &[1.0]);
    let psi = t * 0.3 + 0.4;
    let theta = t * t * -0.1 + 0.9;
    let r = Vec3([t, t * t, Jet3::constant(0.0)]);
    let hmd = hmd_compose(r, Quaternion::from_zy(psi, theta));

    // Same derivatives from the factor stacks by the Leibniz rule.
    let rs: Vec<Vec3<f64>> = (0..4).map(|k| r.derivative(k)).collect();
    let qz = Quaternion::from_zy(psi, theta);
    let qs: Vec<Quaternion<f64>> = (0..4).map(|k| qz.derivative(k)).collect();
    let leibniz = dq_derivative_stack(&rs, &qs);
    for k in 0..4 {
        let d = (hmd.derivative(k) - leibniz[k]).max_abs();
        println!("order {k}: jet vs Leibniz max difference {d:.1e}");
    }
}
