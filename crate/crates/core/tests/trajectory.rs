use hyperkin::linalg::Vec3;
use hyperkin::multidual::Jet3;
use hyperkin::robot::rcm_to_tip;
use hyperkin::trajectory::{
    plan_scalar, plan_task_trajectory, reference_endpoints, reference_trajectory, MotionLimits,
    ScalarProfile, TrajectoryError,
};

fn near_switch(p: &ScalarProfile, t: f64, w: f64) -> bool {
    p.switch_times().iter().any(|s| (s - t).abs() < w)
}

#[test]
fn integrating_the_jerk_reproduces_the_profile() {
    // RK4 on (s, v, a) driven by the piecewise-constant jerk, stepping
    // exactly onto every switch so each step sees one jerk value.
    let tr = reference_trajectory();
    for p in &tr.profiles {
        let mut y = [p.s0, 0.0, 0.0];
        let mut t = 0.0;
        let mut bounds = p.switch_times();
        bounds.push(p.duration());
        bounds.dedup();
        for &tb in &bounds {
            let steps = 200;
            let h = (tb - t) / steps as f64;
            if h <= 0.0 {
                continue;
            }
            let j = p.sample(t + h / 2.0)[3];
            let f = |y: [f64; 3]| [y[1], y[2], j];
            for _ in 0..steps {
                let k1 = f(y);
                let k2 = f([0, 1, 2].map(|i| y[i] + h / 2.0 * k1[i]));
                let k3 = f([0, 1, 2].map(|i| y[i] + h / 2.0 * k2[i]));
                let k4 = f([0, 1, 2].map(|i| y[i] + h * k3[i]));
                y = [0, 1, 2].map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
            }
            t = tb;
            let s = p.sample(t - 1e-12);
            for i in 0..3 {
                assert!(
                    (y[i] - s[i]).abs() < 1e-9 * (1.0 + s[i].abs()),
                    "t = {t}, order {i}: {} vs {}",
                    y[i],
                    s[i]
                );
            }
        }
        assert!((y[0] - p.s1).abs() < 1e-9 && y[1].abs() < 1e-9 && y[2].abs() < 1e-9);
    }
}

#[test]
fn limits_hold_everywhere() {
    let tr = reference_trajectory();
    let lim = MotionLimits::default();
    let n = 20_000;
    for i in 0..=n {
        let t = tr.duration() * i as f64 / n as f64;
        for p in &tr.profiles {
            let s = p.sample(t);
            assert!(s[3].abs() <= lim.j_max + 1e-12 && s[2].abs() <= lim.a_max + 1e-12);
        }
    }
    assert!((tr.profiles[2].peak_jerk() - lim.j_max).abs() < 1e-12);
}

#[test]
fn endpoints_and_rest() {
    let tr = reference_trajectory();
    let (a, b) = reference_endpoints();
    let t_end = tr.duration();
    for (i, p) in tr.profiles.iter().enumerate() {
        assert_eq!(p.sample(0.0), [a[i], 0.0, 0.0, 0.0]);
        assert_eq!(p.sample(t_end), [b[i], 0.0, 0.0, 0.0]);
        assert_eq!(p.sample(t_end + 5.0), [b[i], 0.0, 0.0, 0.0]);
        // Approaching the end from inside the last segment.
        let s = p.sample(t_end * (1.0 - 1e-15));
        assert!((s[0] - b[i]).abs() < 1e-9 && s[1].abs() < 1e-9 && s[2].abs() < 1e-9);
    }
    let e = tr.sample(0.0);
    assert_eq!(e.order(0), rcm_to_tip(&a).0.to_vec());
    for k in 1..4 {
        assert!(e.order(k).iter().all(|v| *v == 0.0));
        assert!(tr.sample(t_end).order(k).iter().all(|v| *v == 0.0));
    }
    assert!((tr.duration() - 11.81).abs() < 0.01);
}

#[test]
fn tip_stack_matches_finite_differences_between_switches() {
    let tr = reference_trajectory();
    let h = 1e-3;
    for i in 1..400 {
        let t = tr.duration() * i as f64 / 400.0;
        if tr.profiles.iter().any(|p| near_switch(p, t, 4.0 * h)) {
            continue;
        }
        let s = tr.sample(t);
        let at = |dt: f64| tr.sample(t + dt).order(0);
        let (p1, m1, p2, m2) = (at(h), at(-h), at(2.0 * h), at(-2.0 * h));
        for c in 0..3 {
            let v = (p1[c] - m1[c]) / (2.0 * h);
            let a = (p1[c] - 2.0 * s.order(0)[c] + m1[c]) / (h * h);
            let j = (p2[c] - 2.0 * p1[c] + 2.0 * m1[c] - m2[c]) / (2.0 * h * h * h);
            assert!((v - s.order(1)[c]).abs() < 1e-5, "t = {t} velocity");
            assert!((a - s.order(2)[c]).abs() < 1e-4, "t = {t} acceleration");
            assert!((j - s.order(3)[c]).abs() < 1e-2, "t = {t} jerk");
        }
    }
}

#[test]
fn tip_stack_is_the_rcm_stack_pushed_through_the_tip_map() {
    let tr = reference_trajectory();
    let t = 4.321;
    let e = rcm_to_tip(&Vec3::<Jet3>::from_stack(&tr.rcm_stack(t)));
    for k in 0..4 {
        assert_eq!(tr.sample(t).order(k), e.derivative(k).0.to_vec());
    }
}

#[test]
fn short_and_degenerate_moves() {
    let lim = MotionLimits::default();
    let p = plan_scalar(0.0, 1.0, &lim);
    assert!(p.segments.iter().all(|s| s.jerk.abs() <= lim.j_max));
    assert_eq!(p.sample(p.duration())[0], 1.0);
    let still = plan_scalar(3.0, 3.0, &lim);
    assert_eq!(still.duration(), 0.0);
    assert_eq!(still.sample(1.0), [3.0, 0.0, 0.0, 0.0]);
    let down = plan_scalar(10.0, -20.0, &lim);
    assert!(down.sample(down.duration() / 2.0)[1] < 0.0);
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(matches!(
        MotionLimits::new(0.0, 1.0),
        Err(TrajectoryError::InvalidLimits { .. })
    ));
    let (a, _) = reference_endpoints();
    // Negative insertion depth leaves the working branch.
    let bad = Vec3([0.1, 0.5, -10.0]);
    assert!(matches!(
        plan_task_trajectory(a, bad, &MotionLimits::default()),
        Err(TrajectoryError::Endpoint { .. })
    ));
    let mut sink = Vec::new();
    assert!(matches!(
        reference_trajectory().write_csv(&mut sink, 0.0),
        Err(TrajectoryError::InvalidRate(_))
    ));
}

#[test]
fn csv_export_is_well_formed() {
    let mut buf = Vec::new();
    let rows = reference_trajectory().write_csv(&mut buf, 20.0).unwrap();
    let mut rd = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(rd.headers().unwrap().len(), 13);
    let recs: Vec<_> = rd.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), rows);
    for r in &recs {
        assert!(r.iter().all(|f| f.parse::<f64>().is_ok() && f != "-0"));
    }
}
