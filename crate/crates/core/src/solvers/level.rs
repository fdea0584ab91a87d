//! One level `F(x, q) = 0` of the chain, traversed in either direction.
//!
//! Classical flavor: with `M_in`, `M_out` the constraint Jacobians on the
//! known and unknown side, `J = −M_out⁻¹ M_in` and differentiating
//! `M_out J + M_in = 0` gives
//!
//! ```text
//! J̇ = −M_out⁻¹ (Ṁ_in + Ṁ_out J)
//! J̈ = −M_out⁻¹ (M̈_in + M̈_out J + 2 Ṁ_out J̇)
//! out⁽¹⁾ = J in⁽¹⁾
//! out⁽²⁾ = J̇ in⁽¹⁾ + J in⁽²⁾
//! out⁽³⁾ = J̈ in⁽¹⁾ + 2 J̇ in⁽²⁾ + J in⁽³⁾
//! ```
//!
//! Multidual flavor: the same Jacobian evaluated once on position jets,
//! `Q̂ = Ĵ X̂` with `X̂` the velocity jet.

use serde::{Deserialize, Serialize};

use crate::linalg::{Mat3, Vec3};
use crate::multidual::{Jet2, MultiDual};
use crate::robot::rates::level_rates;
use crate::robot::{a_matrix, b_matrix, KinematicsError, Level, RobotGeometry};

const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Known x, unknown q.
    Inverse,
    /// Known q, unknown x.
    Forward,
}

impl Direction {
    fn singular(self, level: Level) -> KinematicsError {
        match self {
            Direction::Inverse => KinematicsError::SerialSingularity(level.name()),
            Direction::Forward => KinematicsError::ParallelSingularity(level.name()),
        }
    }

    /// `(x, q)` from `(known, unknown)`.
    fn xq<'a, T>(self, known: &'a T, unknown: &'a T) -> (&'a T, &'a T) {
        match self {
            Direction::Inverse => (known, unknown),
            Direction::Forward => (unknown, known),
        }
    }

    /// `(M_in, M_out)` from `(A, B)`.
    fn split<T>(self, a: T, b: T) -> (T, T) {
        match self {
            Direction::Inverse => (a, b),
            Direction::Forward => (b, a),
        }
    }
}

pub(crate) type Stack3 = [Vec3<f64>; 4];

/// Classical propagation through one level, given the known stack and the
/// closed-form value of the unknown side.
pub(crate) fn sequential(
    level: Level,
    g: &RobotGeometry,
    dir: Direction,
    known: &Stack3,
    out0: Vec3<f64>,
) -> Result<Stack3, KinematicsError> {
    let z = Vec3::zero();
    let mut out = [out0, z, z, z];
    let (x, q) = dir.xq(&known[0], &out0);
    let (m_in, m_out) = dir.split(a_matrix(level, g, x, q), b_matrix(level, g, x, q));
    let inv = m_out.inverse(SINGULAR_TOL).ok_or(dir.singular(level))?;
    let j = -(inv * m_in);
    out[1] = j * known[1];

    let rates = |out: &Stack3| {
        let (x, q) = dir.xq(known, out);
        let (a, b) = level_rates(level, g, x, q);
        dir.split(a, b)
    };
    let (ri, ro) = rates(&out);
    let jd = -(inv * (ri[1] + ro[1] * j));
    out[2] = jd * known[1] + j * known[2];

    let (ri, ro) = rates(&out);
    let jdd = -(inv * (ri[2] + ro[2] * j + (ro[1] * jd).scale(2.0)));
    out[3] = jdd * known[1] + (jd * known[2]).scale(2.0) + j * known[3];
    Ok(out)
}

/// Position jet of order 2 from a stack: the velocity jet integrated once.
pub(crate) fn position_jet(s: &Stack3) -> Vec3<Jet2> {
    let v = velocity_jet(s);
    Vec3([0, 1, 2].map(|i| v[i].integrate(s[0][i])))
}

/// `[ẋ, ẍ, x⃛]` as a jet.
pub(crate) fn velocity_jet(s: &Stack3) -> Vec3<Jet2> {
    Vec3::<MultiDual<3>>::from_stack(&s[1..])
}

/// Multidual propagation through one level. `out_hat` maps the known
/// position jet to the unknown one (the lifted closed form).
pub(crate) fn md_level(
    level: Level,
    g: &RobotGeometry,
    dir: Direction,
    known: &Stack3,
    out0: Vec3<f64>,
    out_hat: impl FnOnce(&Vec3<Jet2>) -> Result<Vec3<Jet2>, KinematicsError>,
) -> Result<Stack3, KinematicsError> {
    let xv = velocity_jet(known);
    let xh = position_jet(known);
    let oh = out_hat(&xh)?;
    let (x, q) = dir.xq(&xh, &oh);
    let (m_in, m_out) = dir.split(a_matrix(level, g, x, q), b_matrix(level, g, x, q));
    let inv: Mat3<Jet2> = m_out.inverse(SINGULAR_TOL).ok_or(dir.singular(level))?;
    let qv = -(inv * m_in) * xv;
    Ok([out0, qv.derivative(0), qv.derivative(1), qv.derivative(2)])
}
