mod common;

use common::{richardson, rng};
use hyperkin::linalg::{Mat3, Vec3};
use hyperkin::multidual::Jet3;
use hyperkin::se3::{
    higher_order_field, md_higher_order_field, rot_y, rot_z, rot_zy, MultiDualPose,
};
use rand::Rng;

/// Pose whose angles and translation are random cubics in t.
fn moving(c: &[f64; 12], t: Jet3) -> MultiDualPose<4> {
    let cub = |i: usize| t * t * t * c[i + 2] + t * t * c[i + 1] + t * c[i] + c[i] * 0.5;
    let r = rot_z(cub(0)) * rot_y(cub(3)) * rot_z(cub(6));
    MultiDualPose::new(r, Vec3([cub(9) * 20.0, cub(1) * 20.0, cub(4) * 20.0])).unwrap()
}

fn point_path(c: &[f64; 12], p: &Vec3<f64>, t: f64) -> Vec<f64> {
    let b = moving(c, Jet3::constant(t)).re();
    b.apply(p).0.to_vec()
}

#[test]
fn fields_match_finite_differences() {
    let mut r = rng(21);
    for _ in 0..200 {
        let c: [f64; 12] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let t0 = r.gen_range(-0.5..0.5);
        let body = Vec3([0, 1, 2].map(|_| r.gen_range(-50.0..50.0)));
        let pose = moving(&c, Jet3::variable(t0, &[1.0]));
        let (rots, trs) = pose.derivative_stacks();
        let fd = richardson(|h| point_path(&c, &body, t0 + h), 0.01);
        let p = pose.re().apply(&body);
        let (k_hat, v_hat) = md_higher_order_field(&pose);
        for k in 1..4 {
            let f = higher_order_field(&rots, &trs, k).unwrap();
            let got = f.at(&p);
            let scale = fd[k - 1].iter().fold(1.0f64, |m, v| m.max(v.abs()));
            assert!(
                (0..3).all(|i| (got[i] - fd[k - 1][i]).abs() <= 1e-6 * scale),
                "order {k}"
            );
            let md = v_hat.derivative(k) + k_hat.derivative(k).mul_vec(&p);
            assert!((md - got).max_abs() <= 1e-10 * scale.max(got.max_abs()));
            assert!((k_hat.derivative(k) - f.k).max_abs() <= 1e-10 * (1.0 + f.k.max_abs()));
        }
        assert_eq!(k_hat.re(), Mat3::identity());
        let k1 = higher_order_field(&rots, &trs, 1).unwrap().k;
        assert!((k1 + k1.transpose()).max_abs() < 1e-12);
    }
}

#[test]
fn second_order_field_is_derivative_of_first() {
    // K₂ = K̇₁ + K₁²: checked against a central difference of K₁.
    let mut r = rng(22);
    for _ in 0..50 {
        let c: [f64; 12] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let t0 = r.gen_range(-0.5..0.5);
        let k_at = |k: usize, t: f64| {
            let (rots, trs) = moving(&c, Jet3::variable(t, &[1.0])).derivative_stacks();
            higher_order_field(&rots, &trs, k).unwrap().k
        };
        let h = 1e-4;
        let k1 = k_at(1, t0);
        let k1_dot = (k_at(1, t0 + h) - k_at(1, t0 - h)).scale(1.0 / (2.0 * h));
        assert!((k_at(2, t0) - (k1_dot + k1 * k1)).max_abs() < 1e-6);
    }
}

#[test]
fn identity_motion_has_identity_field() {
    let pose = MultiDualPose::<4>::new(Mat3::identity().lift(), Vec3::zero().lift()).unwrap();
    let (k, v) = md_higher_order_field(&pose);
    assert_eq!(k, Mat3::identity().lift());
    assert_eq!(v, Vec3::zero().lift());
}

#[test]
fn instrument_direction_from_tip_angles() {
    let e = rot_zy(0.785, 0.81).mul_vec(&Vec3([41.231, 0.0, 0.0]));
    assert!((e - Vec3([20.0, 20.0, -30.0])).max_abs() < 0.15);
}
