//! One tip sample (position, velocity, acceleration, jerk) through all six
//! full inverse solvers, then back through each forward counterpart.

use hyperkin::linalg::Vec3;
use hyperkin::robot::RobotGeometry;
use hyperkin::solvers::{Branches, KinematicSample, SolverId, Space};

fn main() {
    let g = RobotGeometry::default();
    let br = Branches::default();
    let task = KinematicSample::vector(
        Space::Task,
        [
            Vec3([20.0, 20.0, -30.0]),
            Vec3([1.0, -0.5, 2.0]),
            Vec3([0.1, 0.2, -0.3]),
            Vec3([0.01, 0.0, 0.02]),
        ],
    );
    let dq = task.task_to_dual_quat(1).unwrap();

    for id in SolverId::FULL_IK {
        let input = if id.input_space() == Space::DualQuaternion {
            &dq
        } else {
            &task
        };
        let rho = id.ik(&g, input, &br).unwrap();
        let back = id.fk(&g, &rho, &br).unwrap();
        let dev = (0..4)
            .flat_map(|k| {
                back.order(k)
                    .into_iter()
                    .zip(input.order(k))
                    .map(|(a, b)| (a - b).abs())
            })
            .fold(0.0f64, f64::max);
        println!(
            "{id} ({:?}, {:?}): ρ⃛ = {:?}  round trip {dev:.1e}",
            id.formalism(),
            id.flavor(),
            rho.order(3)
        );
    }
}
