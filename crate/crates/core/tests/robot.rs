mod common;

use common::{random_rcm, random_rho_sample, richardson, rng};
use hyperkin::linalg::{Mat3, Vec3};
use hyperkin::quatkin::DualQuaternion;
use hyperkin::robot::{
    dq_fk_displacement, dq_ik_displacement, dq_parameterizations, forward_jacobian,
    half_tangent_params, jacobians, mobility, p_to_rcm, p_to_rho, q_to_rho, rcm_to_p, rcm_to_tip,
    rho_to_p, rho_to_q, tip_to_rcm, JointClassCount, KinematicsError, Level, RobotGeometry,
};

type Map = Box<dyn Fn(&Vec3<f64>) -> Vec3<f64>>;
/// Level, point, image, inverse map, forward map.
type Case = (Level, Vec3<f64>, Vec3<f64>, Map, Map);

fn fd_jacobian(f: &Map, x: &Vec3<f64>) -> Mat3<f64> {
    let cols = [0, 1, 2].map(|j| {
        let d = richardson(
            |t| {
                let mut y = *x;
                y[j] += t;
                f(&y).0.to_vec()
            },
            1e-3,
        );
        Vec3([d[0][0], d[0][1], d[0][2]])
    });
    Mat3::from_cols(cols[0], cols[1], cols[2])
}

/// A random state of every level: (ρ, q) from the ρ−q workspace, the rest
/// from a random RCM configuration.
struct State {
    rho_q: (Vec3<f64>, Vec3<f64>),
    e: Vec3<f64>,
    rcm: Vec3<f64>,
    p: Vec3<f64>,
    rho: Vec3<f64>,
}

fn states(n: usize) -> Vec<State> {
    let g = RobotGeometry::default();
    let mut r = rng(31);
    (0..n)
        .map(|_| {
            let s = random_rho_sample(&mut r, &g).order(0);
            let rho_m = Vec3([s[0], s[1], s[2]]);
            let rcm = random_rcm(&mut r);
            let p = rcm_to_p(&rcm, &g);
            State {
                rho_q: (rho_m, rho_to_q(&rho_m, &g, 1).unwrap()),
                e: rcm_to_tip(&rcm),
                rcm,
                p,
                rho: p_to_rho(&p, &g, 1).unwrap(),
            }
        })
        .collect()
}

fn close(a: &Mat3<f64>, b: &Mat3<f64>, tol: f64) -> bool {
    (*a - *b).max_abs() <= tol * b.max_abs().max(1.0)
}

#[test]
fn level_jacobians_match_finite_differences() {
    let g = RobotGeometry::default();
    for s in states(200) {
        // (level, x, q, x → q, q → x)
        let cases: [Case; 4] = [
            (
                Level::RhoQ,
                s.rho_q.0,
                s.rho_q.1,
                Box::new(move |x| rho_to_q(x, &g, 1).unwrap()),
                Box::new(move |q| q_to_rho(q, &g, 1).unwrap()),
            ),
            (
                Level::PRho,
                s.p,
                s.rho,
                Box::new(move |x| p_to_rho(x, &g, 1).unwrap()),
                Box::new(move |q| rho_to_p(q, &g)),
            ),
            (
                Level::RcmP,
                s.rcm,
                s.p,
                Box::new(move |x| rcm_to_p(x, &g)),
                Box::new(move |q| p_to_rcm(q, &g, 1).unwrap()),
            ),
            (
                Level::RcmE,
                s.e,
                s.rcm,
                Box::new(|x| tip_to_rcm(x, 1).unwrap()),
                Box::new(rcm_to_tip),
            ),
        ];
        for (level, x, q, inv, fwd) in &cases {
            let jc = jacobians(*level, &g, x, q).unwrap();
            let fdj = fd_jacobian(inv, x);
            assert!(
                close(&jc.j, &fdj, 1e-6),
                "{level:?} inverse at {x:?} {q:?}: {:?} vs {:?}",
                jc.j,
                fdj
            );
            let fj = forward_jacobian(*level, &g, x, q).unwrap();
            assert!(close(&fj, &fd_jacobian(fwd, q), 1e-6), "{level:?} forward");
            assert!(!jc.parallel_singular);
            assert!((jc.det_a - jc.a.det()).abs() == 0.0);
        }
    }
}

#[test]
fn equal_sliders_are_a_serial_singularity() {
    let g = RobotGeometry::default();
    let q = Vec3([12.0, 12.0, 0.4]);
    let rho = q_to_rho(&q, &g, 1).unwrap();
    assert!(matches!(
        jacobians(Level::RhoQ, &g, &rho, &q),
        Err(KinematicsError::SerialSingularity(_))
    ));
    let row = forward_jacobian(Level::RhoQ, &g, &rho, &q).unwrap().0[0];
    assert!((row[0] - 0.5).abs() < 1e-12 && (row[1] - 0.5).abs() < 1e-12 && row[2].abs() < 1e-12);
}

#[test]
fn dual_quaternion_closed_forms_agree_with_geometry() {
    let g = RobotGeometry::default();
    let mut r = rng(32);
    for _ in 0..1000 {
        let rcm = random_rcm(&mut r);
        let p = rcm_to_p(&rcm, &g);
        for b in 1..=2 {
            let rho = p_to_rho(&p, &g, b).unwrap();
            let (u1, u2) = ((rcm[0] / 2.0).tan(), (rcm[1] / 2.0).tan());
            let dq = dq_ik_displacement(u1, u2, rcm[2], &g, b).unwrap();
            let rho_dq = Vec3([dq[0], dq[1], 2.0 * dq[2].atan()]);
            let mut diff = rho_dq - rho;
            diff[2] = hyperkin::robot::wrap_angle(diff[2]);
            assert!(
                diff.max_abs() < 1e-9 * (1.0 + rho.max_abs()),
                "{rho:?} vs {rho_dq:?}"
            );
        }
        let par = dq_parameterizations(&rcm, &p_to_rho(&p, &g, 1).unwrap(), &g).unwrap();
        let u = half_tangent_params(&par.q_p, &g).unwrap();
        assert!((u - Vec3([(rcm[0] / 2.0).tan(), (rcm[1] / 2.0).tan(), rcm[2]])).max_abs() < 1e-9);
        assert!(par
            .q_p
            .same_displacement(&par.q_p2, 1e-9 * (1.0 + par.q_p.max_abs())));
    }
}

#[test]
fn tip_frame_is_point_frame_times_offset() {
    let g = RobotGeometry::default();
    let rcm = Vec3([2.0 * 0.4142f64.atan(), 2.0 * 0.4316f64.atan(), 41.231]);
    let rho = p_to_rho(&rcm_to_p(&rcm, &g), &g, 1).unwrap();
    let par = dq_parameterizations(&rcm, &rho, &g).unwrap();
    let scale = 1e-12 * (1.0 + par.q_e.max_abs());
    assert!((par.q_p * par.q_l).same_displacement(&par.q_e, scale));
    assert!((par.q_e * par.q_l.conjugate()).same_displacement(&par.q_p, scale));
}

#[test]
fn forward_dual_quaternion_solutions_reproduce_rho() {
    let g = RobotGeometry::default();
    let mut r = rng(33);
    for _ in 0..200 {
        let rcm = random_rcm(&mut r);
        let p = rcm_to_p(&rcm, &g);
        let rho = p_to_rho(&p, &g, 1).unwrap();
        let sols = dq_fk_displacement(&Vec3([rho[0], rho[1], (rho[2] / 2.0).tan()]), &g).unwrap();
        assert_eq!(sols.len(), 8);
        let target = Vec3([(rcm[0] / 2.0).tan(), (rcm[1] / 2.0).tan(), rcm[2]]);
        assert!(sols.iter().any(|s| (s.u - target).max_abs() < 1e-8));
        for s in &sols {
            let back = rcm_to_p(
                &Vec3([2.0 * s.u[0].atan(), 2.0 * s.u[1].atan(), s.u[2]]),
                &g,
            );
            assert!((back - p).max_abs() < 1e-8 * (1.0 + p.max_abs()));
        }
        let mut distinct: Vec<DualQuaternion> = Vec::new();
        for s in &sols {
            if !distinct.iter().any(|d| d.same_displacement(&s.q_p, 1e-9)) {
                distinct.push(s.q_p);
            }
        }
        assert_eq!(distinct.len(), 4);
    }
}

#[test]
fn mechanism_mobility() {
    assert_eq!(
        mobility(&JointClassCount {
            f: 2,
            n: 2,
            c: [0, 0, 1, 2, 0]
        })
        .unwrap(),
        3
    );
    assert_eq!(
        mobility(&JointClassCount {
            f: 0,
            n: 3,
            c: [0, 1, 1, 1, 1]
        })
        .unwrap(),
        4
    );
}

#[test]
fn branches_out_of_range_are_rejected() {
    let g = RobotGeometry::default();
    let e = Vec3([20.0, 20.0, -30.0]);
    assert!(matches!(
        tip_to_rcm(&e, 5),
        Err(KinematicsError::InvalidBranch { .. })
    ));
    assert!(matches!(
        p_to_rho(&e, &g, 0),
        Err(KinematicsError::InvalidBranch { .. })
    ));
    assert!(matches!(
        dq_ik_displacement(0.1, 0.2, 50.0, &g, 3),
        Err(KinematicsError::InvalidBranch { .. })
    ));
}
