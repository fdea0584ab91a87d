//! Degrees of freedom by the modified Gruebler count.

use hyperkin::robot::{mobility, JointClassCount};

fn main() {
    // Planar-family parallel mechanism: two moving links, one class-3 and
    // two class-4 joints.
    let pm = JointClassCount {
        f: 2,
        n: 2,
        c: [0, 0, 1, 2, 0],
    };
    // Whole chain up to the end effector.
    let ee = JointClassCount {
        f: 0,
        n: 3,
        c: [0, 1, 1, 1, 1],
    };
    println!("parallel mechanism: M = {}", mobility(&pm).unwrap());
    println!("end effector:       M = {}", mobility(&ee).unwrap());
}
