//! Rotations, rigid poses and the higher-order acceleration fields
//! `K_n = R^(n) Rᵀ`, `v_n = r^(n) − K_n r`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Mat3, Vec3};
use crate::multidual::{MultiDual, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Se3Error {
    #[error("rotation is not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),
    #[error("field order {k} outside 1..={n}")]
    OrderExceeded { k: usize, n: usize },
    #[error("rotation and translation stacks differ in depth")]
    StackMismatch,
}

pub fn rot_x<S: Scalar>(a: S) -> Mat3<S> {
    let (s, c) = a.sin_cos();
    let (o, z) = (S::one(), S::zero());
    Mat3([[o, z, z], [z, c, -s], [z, s, c]])
}

pub fn rot_y<S: Scalar>(a: S) -> Mat3<S> {
    let (s, c) = a.sin_cos();
    let (o, z) = (S::one(), S::zero());
    Mat3([[c, z, s], [z, o, z], [-s, z, c]])
}

pub fn rot_z<S: Scalar>(a: S) -> Mat3<S> {
    let (s, c) = a.sin_cos();
    let (o, z) = (S::one(), S::zero());
    Mat3([[c, -s, z], [s, c, z], [z, z, o]])
}

/// `Rz(ψ)·Ry(θ)`, the instrument orientation about the RCM.
pub fn rot_zy<S: Scalar>(psi: S, theta: S) -> Mat3<S> {
    rot_z(psi).matmul(&rot_y(theta))
}

fn orthonormality_error(r: &Mat3<f64>) -> f64 {
    let e = (r.transpose().matmul(r) - Mat3::identity()).max_abs();
    e.max((r.det() - 1.0).abs())
}

/// Rigid displacement: rotation `r` then translation `t` (mm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub r: Mat3<f64>,
    pub t: Vec3<f64>,
}

impl Pose {
    pub fn new(r: Mat3<f64>, t: Vec3<f64>) -> Result<Self, Se3Error> {
        let e = orthonormality_error(&r);
        if !(e <= 1e-9) {
            return Err(Se3Error::NotOrthonormal(e));
        }
        Ok(Self { r, t })
    }

    pub fn identity() -> Self {
        Self {
            r: Mat3::identity(),
            t: Vec3::zero(),
        }
    }

    pub fn compose(&self, o: &Pose) -> Pose {
        Pose {
            r: self.r.matmul(&o.r),
            t: self.r.mul_vec(&o.t) + self.t,
        }
    }

    pub fn inverse(&self) -> Pose {
        let rt = self.r.transpose();
        Pose {
            r: rt,
            t: -rt.mul_vec(&self.t),
        }
    }

    pub fn apply(&self, p: &Vec3<f64>) -> Vec3<f64> {
        self.r.mul_vec(p) + self.t
    }
}

/// Order-k field: the k-th derivative of a body-fixed point currently at
/// `p` is `v + K p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HigherOrderField {
    pub order: usize,
    pub k: Mat3<f64>,
    pub v: Vec3<f64>,
}

impl HigherOrderField {
    pub fn at(&self, p: &Vec3<f64>) -> Vec3<f64> {
        self.v + self.k.mul_vec(p)
    }
}

/// Field of order `k` from derivative stacks `rot[i] = R^(i)`, `tr[i] = r^(i)`.
pub fn higher_order_field(
    rot: &[Mat3<f64>],
    tr: &[Vec3<f64>],
    k: usize,
) -> Result<HigherOrderField, Se3Error> {
    if rot.len() != tr.len() {
        return Err(Se3Error::StackMismatch);
    }
    let n = rot.len().saturating_sub(1);
    if k == 0 || k > n {
        return Err(Se3Error::OrderExceeded { k, n });
    }
    let km = rot[k].matmul(&rot[0].transpose());
    Ok(HigherOrderField {
        order: k,
        k: km,
        v: tr[k] - km.mul_vec(&tr[0]),
    })
}

/// Pose whose entries are jets: `b̂ = [R̂ r̂; 0 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiDualPose<const N: usize> {
    pub r: Mat3<MultiDual<N>>,
    pub t: Vec3<MultiDual<N>>,
}

impl<const N: usize> MultiDualPose<N> {
    pub fn new(r: Mat3<MultiDual<N>>, t: Vec3<MultiDual<N>>) -> Result<Self, Se3Error> {
        let e = orthonormality_error(&r.re());
        if !(e <= 1e-9) {
            return Err(Se3Error::NotOrthonormal(e));
        }
        Ok(Self { r, t })
    }

    pub fn re(&self) -> Pose {
        Pose {
            r: self.r.re(),
            t: self.t.re(),
        }
    }

    /// `(R^(k), r^(k))` for k = 0..N.
    pub fn derivative_stacks(&self) -> (Vec<Mat3<f64>>, Vec<Vec3<f64>>) {
        (
            (0..N).map(|k| self.r.derivative(k)).collect(),
            (0..N).map(|k| self.t.derivative(k)).collect(),
        )
    }
}

/// `K̂ = R̂ R₀ᵀ`, `v̂ = r̂ − K̂ r₀`: every field order at once. The ε^k slice
/// times k! is the order-k field; the real slice of `K̂` is the identity.
pub fn md_higher_order_field<const N: usize>(
    b: &MultiDualPose<N>,
) -> (Mat3<MultiDual<N>>, Vec3<MultiDual<N>>) {
    let r0t = b.r.re().transpose().lift::<N>();
    let mut k = b.r.matmul(&r0t);
    // R₀R₀ᵀ is the identity; pin the real slice instead of carrying round-off.
    for i in 0..3 {
        for j in 0..3 {
            let mut c = *k.0[i][j].coeffs();
            c[0] = if i == j { 1.0 } else { 0.0 };
            k.0[i][j] = MultiDual::from_coeffs(c);
        }
    }
    let v = b.t - k.mul_vec(&b.t.re().lift());
    (k, v)
}
