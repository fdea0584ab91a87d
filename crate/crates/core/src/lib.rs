//! Higher-order kinematics for a 4-DOF hybrid surgical parallel robot.
//!
//! Displacement, velocity, acceleration and jerk of the joints are computed
//! three ways (vector/Jacobian, homogeneous matrix, dual quaternion), each
//! by classical sequential differentiation or by evaluating the closed
//! forms over [`multidual::MultiDual`] jets.

pub mod goldens;
pub mod harness;
pub mod linalg;
pub mod multidual;
pub mod quatkin;
pub mod robot;
pub mod se3;
pub mod solvers;
pub mod trajectory;
