mod common;

use common::{richardson, rng};
use hyperkin::linalg::Vec3;
use hyperkin::multidual::Jet3;
use hyperkin::quatkin::{dq_derivative_stack, hmd_compose, DualQuaternion, Quaternion};
use hyperkin::se3::{rot_x, rot_y, rot_z, Pose};
use rand::Rng;

fn random_pose(r: &mut impl Rng) -> Pose {
    let rot = rot_z(r.gen_range(-3.1..3.1))
        * rot_y(r.gen_range(-3.1..3.1))
        * rot_x(r.gen_range(-3.1..3.1));
    let t = Vec3([0, 1, 2].map(|_| r.gen_range(-100.0..100.0)));
    Pose::new(rot, t).unwrap()
}

fn study_deviation(q: &DualQuaternion) -> (f64, f64) {
    let [x0, x1, x2, x3, y0, y1, y2, y3] = q.to_array();
    (
        (x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3 - 1.0).abs(),
        (x0 * y0 + x1 * y1 + x2 * y2 + x3 * y3).abs(),
    )
}

fn pose_close(a: &Pose, b: &Pose, tol: f64) -> bool {
    (a.r - b.r).max_abs() <= tol && (a.t - b.t).max_abs() <= tol * (1.0 + b.t.max_abs())
}

#[test]
fn pose_round_trip_and_study_conditions() {
    let mut r = rng(1);
    for _ in 0..1000 {
        let p = random_pose(&mut r);
        let q = DualQuaternion::from_pose(&p).unwrap();
        let (n, o) = study_deviation(&q);
        assert!(n < 1e-10 && o < 1e-10);
        assert!(pose_close(&q.to_pose().unwrap(), &p, 1e-12));
        let back = DualQuaternion::from_pose(&q.to_pose().unwrap()).unwrap();
        assert!(back.same_displacement(&q, 1e-12));
        assert!(pose_close(&q.scale(2.5).to_pose().unwrap(), &p, 1e-12));
    }
}

#[test]
fn products_are_compositions() {
    let mut r = rng(2);
    for _ in 0..1000 {
        let (a, b) = (random_pose(&mut r), random_pose(&mut r));
        let (qa, qb) = (
            DualQuaternion::from_pose(&a).unwrap(),
            DualQuaternion::from_pose(&b).unwrap(),
        );
        let prod = qa * qb;
        let (n, o) = study_deviation(&prod);
        assert!(n < 1e-10 && o < 1e-10);
        let composed = DualQuaternion::from_pose(&a.compose(&b)).unwrap();
        assert!(prod.same_displacement(&composed, 1e-9 * (1.0 + composed.max_abs())));
    }
}

#[test]
fn hamilton_product_basics() {
    let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    assert_eq!(i * j, Quaternion::new(0.0, 0.0, 0.0, 1.0));
    let mut r = rng(3);
    for _ in 0..100 {
        let q = DualQuaternion::from_pose(&random_pose(&mut r)).unwrap();
        assert_eq!(q * DualQuaternion::identity(), q);
        assert_eq!(q.conjugate().conjugate(), q);
        let qq = q * q.conjugate();
        assert!((qq - DualQuaternion::identity()).max_abs() < 1e-12);
    }
}

/// Smooth pose path: angles and translation are cubics in t.
fn path(c: &[f64; 12], t: f64) -> (Vec3<f64>, Quaternion<f64>) {
    let cub = |i: usize| c[i] + c[i + 1] * t + 0.5 * c[i + 2] * t * t;
    let r = Vec3([cub(0) * 10.0, cub(3) * 10.0, c[6] + c[7] * t * t * t]);
    (r, Quaternion::from_zy(cub(8), c[11] + cub(9) * t))
}

fn path_jet(c: &[f64; 12], t0: f64) -> (Vec3<Jet3>, Quaternion<Jet3>) {
    let t = Jet3::variable(t0, &[1.0]);
    let cub = |i: usize| t * t * (0.5 * c[i + 2]) + t * c[i + 1] + c[i];
    let r = Vec3([cub(0) * 10.0, cub(3) * 10.0, t * t * t * c[7] + c[6]]);
    (r, Quaternion::from_zy(cub(8), cub(9) * t + c[11]))
}

#[test]
fn hmd_slices_match_finite_differences() {
    let mut r = rng(4);
    for _ in 0..200 {
        let c: [f64; 12] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let t0 = r.gen_range(-1.0..1.0);
        let (rj, qj) = path_jet(&c, t0);
        let hmd = hmd_compose(rj, qj);
        let dq_at = |t: f64| {
            let (rr, q) = path(&c, t);
            DualQuaternion::from_translation_rotation(rr, q)
                .to_array()
                .to_vec()
        };
        let (r0, q0) = path(&c, t0);
        assert!(
            (hmd.derivative(0) - DualQuaternion::from_translation_rotation(r0, q0)).max_abs()
                < 1e-12
        );
        let fd = richardson(|h| dq_at(t0 + h), 0.02);
        let rs: Vec<Vec3<f64>> = (0..4).map(|k| rj.derivative(k)).collect();
        let qs: Vec<Quaternion<f64>> = (0..4).map(|k| qj.derivative(k)).collect();
        let leibniz = dq_derivative_stack(&rs, &qs);
        for k in 1..4 {
            let got = hmd.derivative(k).to_array();
            let scale = fd[k - 1].iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for i in 0..8 {
                assert!(
                    (got[i] - fd[k - 1][i]).abs() <= 1e-6 * scale,
                    "order {k} component {i}"
                );
            }
            assert!((hmd.derivative(k) - leibniz[k]).max_abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn constant_displacement_has_no_derivatives() {
    let q = DualQuaternion::from_pose(&random_pose(&mut rng(5))).unwrap();
    let hmd = q.lift::<4>();
    for k in 1..4 {
        assert_eq!(
            hmd.derivative(k),
            DualQuaternion::new(Quaternion::zero(), Quaternion::zero())
        );
    }
}
