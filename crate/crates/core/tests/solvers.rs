mod common;

use common::*;
use hyperkin::linalg::Vec3;
use hyperkin::robot::{q_to_rho, rho_to_q};
use hyperkin::solvers::{Branches, KinematicSample, SolverError, SolverId, Space};

#[test]
fn every_solver_matches_finite_differences() {
    let mut r = rng(11);
    for _ in 0..200 {
        let task = random_task_sample(&mut r);
        let rho = random_rho_sample(&mut r, &g());
        for id in SolverId::ALL {
            let out = id
                .ik(&g(), &input_for(id, &task, &rho), &Branches::default())
                .unwrap();
            let fd = oracle(id, &task, &rho);
            for k in 0..3 {
                let e = rel_err(&out.order(k + 1), &fd[k]);
                assert!(e < 1e-5, "{id} order {} rel err {e:e}", k + 1);
            }
        }
    }
}

#[test]
fn flavors_agree() {
    let mut r = rng(12);
    for _ in 0..200 {
        let task = random_task_sample(&mut r);
        let rho = random_rho_sample(&mut r, &g());
        for (a, b) in SolverId::PAIRS {
            let oa = a
                .ik(&g(), &input_for(a, &task, &rho), &Branches::default())
                .unwrap();
            let ob = b
                .ik(&g(), &input_for(b, &task, &rho), &Branches::default())
                .unwrap();
            assert_eq!(oa.order(0), ob.order(0), "{a}/{b} displacement");
            for k in 1..4 {
                let e = rel_err(&oa.order(k), &ob.order(k));
                assert!(e < 1e-11, "{a}/{b} order {k}: {e:e}");
            }
        }
    }
}

#[test]
fn full_solvers_agree_across_formalisms() {
    let mut r = rng(13);
    for _ in 0..1000 {
        let task = random_task_sample(&mut r);
        let base = SolverId::Alg3
            .ik(&g(), &task, &Branches::default())
            .unwrap();
        for id in SolverId::FULL_IK {
            let o = id
                .ik(&g(), &input_for(id, &task, &task), &Branches::default())
                .unwrap();
            for k in 0..4 {
                assert!(close(&o.order(k), &base.order(k), 1e-8), "{id} order {k}");
            }
        }
    }
}

#[test]
fn forward_counterparts_invert() {
    let mut r = rng(14);
    for _ in 0..200 {
        let task = random_task_sample(&mut r);
        let rho = random_rho_sample(&mut r, &g());
        for id in SolverId::ALL {
            let inp = input_for(id, &task, &rho);
            let joints = id.ik(&g(), &inp, &Branches::default()).unwrap();
            let back = id.fk(&g(), &joints, &Branches::default()).unwrap();
            for k in 0..4 {
                let e = rel_err(&back.order(k), &inp.order(k));
                assert!(e < 1e-9, "{id} order {k}: {e:e}");
            }
        }
    }
}

#[test]
fn rest_maps_to_rest() {
    let task = KinematicSample::at_rest(Space::Task, Vec3([20.0, 20.0, -30.0]));
    let rho =
        KinematicSample::at_rest(Space::Rho, Vec3([50.0, 180.0, std::f64::consts::FRAC_PI_3]));
    for id in SolverId::ALL {
        let o = id
            .ik(&g(), &input_for(id, &task, &rho), &Branches::default())
            .unwrap();
        for k in 1..4 {
            assert!(o.order(k).iter().all(|v| *v == 0.0), "{id} order {k}");
        }
        let back = id.fk(&g(), &o, &Branches::default()).unwrap();
        for k in 1..4 {
            assert!(back.order(k).iter().all(|v| *v == 0.0), "{id} fk order {k}");
        }
    }
}

#[test]
fn reference_displacements() {
    let rho =
        KinematicSample::at_rest(Space::Rho, Vec3([50.0, 180.0, std::f64::consts::FRAC_PI_3]));
    let q = SolverId::Alg2
        .ik(&g(), &rho, &Branches::default())
        .unwrap()
        .order(0);
    assert!(
        q.iter()
            .zip([-101.987, 201.987, 0.396])
            .all(|(a, b)| (a - b).abs() < 1e-3),
        "{q:?}"
    );
    let q_closed = rho_to_q(&Vec3([50.0, 180.0, std::f64::consts::FRAC_PI_3]), &g(), 1).unwrap();
    assert_eq!(q, q_closed.0.to_vec());

    let task = KinematicSample::at_rest(Space::Task, Vec3([20.0, 20.0, -30.0]));
    let r3 = SolverId::Alg3
        .ik(&g(), &task, &Branches::default())
        .unwrap()
        .order(0);
    let r7 = SolverId::Alg7
        .ik(
            &g(),
            &task.task_to_dual_quat(1).unwrap(),
            &Branches::default(),
        )
        .unwrap()
        .order(0);
    assert!(close(&r7, &r3, 1e-12));
    assert!(close(&r3, &e_to_rho(&Vec3([20.0, 20.0, -30.0])).0, 0.0));
}

#[test]
fn constant_rho1_velocity_moves_both_sliders() {
    let rho0 = Vec3([50.0, 180.0, std::f64::consts::FRAC_PI_3]);
    let z = Vec3::zero();
    let s = KinematicSample::vector(Space::Rho, [rho0, Vec3([1.0, 0.0, 0.0]), z, z]);
    let q = SolverId::Alg1.ik(&g(), &s, &Branches::default()).unwrap();
    let qd = q.order(1);
    assert!((qd[0] - 1.0).abs() < 1e-12 && (qd[1] - 1.0).abs() < 1e-12 && qd[2].abs() < 1e-12);
    let back = q_to_rho(
        &Vec3([q.order(0)[0], q.order(0)[1], q.order(0)[2]]),
        &g(),
        1,
    )
    .unwrap();
    assert!((back - rho0).max_abs() < 1e-9);
}

#[test]
fn singular_inputs_are_reported() {
    let z = Vec3::zero();
    // E on the z axis: yaw undefined.
    let task = KinematicSample::vector(Space::Task, [Vec3([0.0, 0.0, -40.0]), z, z, z]);
    for id in [
        SolverId::Alg3,
        SolverId::Alg4,
        SolverId::Alg5,
        SolverId::Alg6,
    ] {
        assert!(matches!(
            id.ik(&g(), &task, &Branches::default()),
            Err(SolverError::Kinematics(_))
        ));
    }
    let mut dq = KinematicSample::at_rest(Space::Task, Vec3([20.0, 20.0, -30.0]))
        .task_to_dual_quat(1)
        .unwrap();
    if let hyperkin::solvers::Stack::DualQuat(s) = &mut dq.stack {
        s[0] = s[0].scale(1.5);
    }
    assert!(SolverId::Alg7.ik(&g(), &dq, &Branches::default()).is_err());
    assert!(SolverId::Alg8.ik(&g(), &dq, &Branches::default()).is_err());
}
