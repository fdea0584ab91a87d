//! Finite-difference oracle and random workspace states shared by the
//! integration tests.
#![allow(dead_code)]

use hyperkin::linalg::Vec3;
use hyperkin::robot::{p_to_rho, rcm_to_p, rcm_to_tip, rho_to_q, tip_to_rcm, RobotGeometry};
use hyperkin::solvers::{KinematicSample, SolverId, Space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Central differences of orders 1..3 at `t = 0`, refined by two levels
/// of Richardson extrapolation (steps h, h/2, h/4).
pub fn richardson(f: impl Fn(f64) -> Vec<f64>, h: f64) -> [Vec<f64>; 3] {
    let f0 = f(0.0);
    let m = f0.len();
    let raw = |h: f64| -> [Vec<f64>; 3] {
        let (p1, m1, p2, m2) = (f(h), f(-h), f(2.0 * h), f(-2.0 * h));
        let mut d = [vec![0.0; m], vec![0.0; m], vec![0.0; m]];
        for i in 0..m {
            d[0][i] = (p1[i] - m1[i]) / (2.0 * h);
            d[1][i] = (p1[i] - 2.0 * f0[i] + m1[i]) / (h * h);
            d[2][i] = (p2[i] - 2.0 * p1[i] + 2.0 * m1[i] - m2[i]) / (2.0 * h * h * h);
        }
        d
    };
    let (a, b, c) = (raw(h), raw(h / 2.0), raw(h / 4.0));
    let mut out = [vec![0.0; m], vec![0.0; m], vec![0.0; m]];
    for k in 0..3 {
        for i in 0..m {
            let r1 = (4.0 * b[k][i] - a[k][i]) / 3.0;
            let r2 = (4.0 * c[k][i] - b[k][i]) / 3.0;
            out[k][i] = (16.0 * r2 - r1) / 15.0;
        }
    }
    out
}

/// `|a − b|∞ ≤ tol · max(|b|∞, 1)`.
pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        / scale
}

/// Value at `t` of the cubic Taylor polynomial of a stack.
pub fn taylor(s: &[Vec3<f64>; 4], t: f64) -> Vec3<f64> {
    s[0] + s[1].scale(t) + s[2].scale(t * t / 2.0) + s[3].scale(t * t * t / 6.0)
}

pub fn random_rcm(r: &mut impl Rng) -> Vec3<f64> {
    Vec3([
        r.gen_range(-0.5..0.5),
        r.gen_range(0.3..1.2),
        r.gen_range(10.0..120.0),
    ])
}

fn random_vec(r: &mut impl Rng, scale: [f64; 3]) -> Vec3<f64> {
    Vec3([0, 1, 2].map(|i| r.gen_range(-1.0..1.0) * scale[i]))
}

/// Random RCM state with a random derivative stack, moderately scaled.
pub fn random_rcm_stack(r: &mut impl Rng) -> [Vec3<f64>; 4] {
    let s = [0.05, 0.05, 2.0];
    [
        random_rcm(r),
        random_vec(r, s),
        random_vec(r, s),
        random_vec(r, s),
    ]
}

/// Task-space sample whose RCM motion is a random cubic: E stack from the
/// RCM stack by jets.
pub fn random_task_sample(r: &mut impl Rng) -> KinematicSample {
    let rcm = random_rcm_stack(r);
    let e = rcm_to_tip(&Vec3::<hyperkin::multidual::Jet3>::from_stack(&rcm));
    KinematicSample::vector(Space::Task, [0, 1, 2, 3].map(|k| e.derivative(k)))
}

/// Inside the ρ−q workspace with a margin from its boundary, where the map
/// stays well conditioned.
pub fn rho_interior(rho: &Vec3<f64>, g: &RobotGeometry) -> bool {
    let margin = [1.0, 1.0, 0.05];
    (0..3).all(|j| {
        [-1.0, 1.0].iter().all(|s| {
            let mut y = *rho;
            y[j] += s * margin[j];
            rho_to_q(&y, g, 1).is_ok()
        })
    })
}

/// ρ sample inside the ρ−q workspace.
pub fn random_rho_sample(r: &mut impl Rng, g: &RobotGeometry) -> KinematicSample {
    loop {
        let rho = Vec3([
            r.gen_range(-60.0..60.0),
            r.gen_range(150.0..300.0),
            r.gen_range(0.2..1.6),
        ]);
        if rho_interior(&rho, g) {
            let s = [2.0, 2.0, 0.05];
            let st = [rho, random_vec(r, s), random_vec(r, s), random_vec(r, s)];
            return KinematicSample::vector(Space::Rho, st);
        }
    }
}

pub fn g() -> RobotGeometry {
    RobotGeometry::default()
}

pub fn e_to_rho(e: &Vec3<f64>) -> Vec3<f64> {
    let g = g();
    p_to_rho(&rcm_to_p(&tip_to_rcm(e, 1).unwrap(), &g), &g, 1).unwrap()
}

/// Input sample of the right kind for `id`, built from a task or ρ sample.
pub fn input_for(id: SolverId, task: &KinematicSample, rho: &KinematicSample) -> KinematicSample {
    match id.input_space() {
        Space::Rho => *rho,
        Space::DualQuaternion => task.task_to_dual_quat(1).unwrap(),
        _ => *task,
    }
}

/// Displacement map of each solver along the cubic through its input stack.
pub fn oracle(id: SolverId, task: &KinematicSample, rho: &KinematicSample) -> [Vec<f64>; 3] {
    let h = 0.05;
    match id.input_space() {
        Space::Rho => {
            let s = *rho.vectors().unwrap();
            richardson(|t| rho_to_q(&taylor(&s, t), &g(), 1).unwrap().0.to_vec(), h)
        }
        _ => {
            let s = *task.vectors().unwrap();
            richardson(|t| e_to_rho(&taylor(&s, t)).0.to_vec(), h)
        }
    }
}
