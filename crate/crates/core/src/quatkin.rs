//! Quaternions, dual quaternions (Study parameters) and their multidual
//! lift, the HMD quaternion `Q̂ = (1 + ε₀ ½ r̂) q̂`.
//!
//! Convention: a pose `(R, t)` maps to `Q = q + ε₀ ½ t q` where `q` is the
//! unit quaternion of `R`. Conjugation acts on both parts classically.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Mat3, Vec3};
use crate::multidual::{MultiDual, Scalar};
use crate::se3::{Pose, Se3Error};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuatError {
    #[error(transparent)]
    Pose(#[from] Se3Error),
    #[error("real quaternion is zero")]
    ZeroReal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion<S = f64> {
    pub w: S,
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> Quaternion<S> {
    pub fn new(w: S, x: S, y: S, z: S) -> Self {
        Self { w, x, y, z }
    }

    pub fn identity() -> Self {
        Self::new(S::one(), S::zero(), S::zero(), S::zero())
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    pub fn pure(v: Vec3<S>) -> Self {
        Self::new(S::zero(), v[0], v[1], v[2])
    }

    pub fn vector(&self) -> Vec3<S> {
        Vec3([self.x, self.y, self.z])
    }

    pub fn to_array(&self) -> [S; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [S; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(&self) -> S {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn dot(&self, o: &Self) -> S {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn scale(&self, k: S) -> Self {
        Self::new(self.w * k, self.x * k, self.y * k, self.z * k)
    }

    /// Rotation matrix of a unit quaternion.
    pub fn to_rotation(&self) -> Mat3<S> {
        let Self { w, x, y, z } = *self;
        let one = S::one();
        let two = S::cst(2.0);
        Mat3([
            [
                one - two * (y * y + z * z),
                two * (x * y - w * z),
                two * (x * z + w * y),
            ],
            [
                two * (x * y + w * z),
                one - two * (x * x + z * z),
                two * (y * z - w * x),
            ],
            [
                two * (x * z - w * y),
                two * (y * z + w * x),
                one - two * (x * x + y * y),
            ],
        ])
    }

    /// `Rz(ψ)·Ry(θ)` as a quaternion.
    pub fn from_zy(psi: S, theta: S) -> Self {
        let (sp, cp) = (psi * 0.5).sin_cos();
        let (st, ct) = (theta * 0.5).sin_cos();
        Self::new(cp * ct, -(sp * st), cp * st, sp * ct)
    }

    pub fn re(&self) -> Quaternion<f64> {
        Quaternion::new(self.w.re(), self.x.re(), self.y.re(), self.z.re())
    }
}

impl Quaternion<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Unit quaternion of a rotation matrix, using whichever of the four
    /// ratio forms has the largest leading square.
    pub fn from_rotation(r: &Mat3<f64>) -> Self {
        let m = &r.0;
        let tr = m[0][0] + m[1][1] + m[2][2];
        let cands = [
            1.0 + tr,
            1.0 + m[0][0] - m[1][1] - m[2][2],
            1.0 - m[0][0] + m[1][1] - m[2][2],
            1.0 - m[0][0] - m[1][1] + m[2][2],
        ];
        let best = (0..4)
            .max_by(|&a, &b| cands[a].total_cmp(&cands[b]))
            .unwrap_or(0);
        let s = 0.5 * cands[best].sqrt();
        let f = 0.25 / s;
        let q = match best {
            0 => Self::new(
                s,
                (m[2][1] - m[1][2]) * f,
                (m[0][2] - m[2][0]) * f,
                (m[1][0] - m[0][1]) * f,
            ),
            1 => Self::new(
                (m[2][1] - m[1][2]) * f,
                s,
                (m[0][1] + m[1][0]) * f,
                (m[0][2] + m[2][0]) * f,
            ),
            2 => Self::new(
                (m[0][2] - m[2][0]) * f,
                (m[0][1] + m[1][0]) * f,
                s,
                (m[1][2] + m[2][1]) * f,
            ),
            _ => Self::new(
                (m[1][0] - m[0][1]) * f,
                (m[0][2] + m[2][0]) * f,
                (m[1][2] + m[2][1]) * f,
                s,
            ),
        };
        q.scale(1.0 / q.norm())
    }

    pub fn lift<const N: usize>(&self) -> Quaternion<MultiDual<N>> {
        Quaternion::new(
            MultiDual::constant(self.w),
            MultiDual::constant(self.x),
            MultiDual::constant(self.y),
            MultiDual::constant(self.z),
        )
    }
}

impl<const N: usize> Quaternion<MultiDual<N>> {
    pub fn derivative(&self, k: usize) -> Quaternion<f64> {
        Quaternion::new(
            self.w.derivatives()[k],
            self.x.derivatives()[k],
            self.y.derivatives()[k],
            self.z.derivatives()[k],
        )
    }
}

impl<S: Scalar> Mul for Quaternion<S> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl<S: Scalar> Add for Quaternion<S> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Self::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl<S: Scalar> Sub for Quaternion<S> {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Self::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl<S: Scalar> Neg for Quaternion<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// `real + ε₀ dual` with `ε₀² = 0`. Over `MultiDual` entries this is the
/// HMD quaternion; ε and ε₀ commute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualQuaternion<S = f64> {
    pub real: Quaternion<S>,
    pub dual: Quaternion<S>,
}

pub type HmdQuaternion<const N: usize> = DualQuaternion<MultiDual<N>>;

impl<S: Scalar> DualQuaternion<S> {
    pub fn new(real: Quaternion<S>, dual: Quaternion<S>) -> Self {
        Self { real, dual }
    }

    pub fn identity() -> Self {
        Self::new(Quaternion::identity(), Quaternion::zero())
    }

    /// `(1 + ε₀ ½ r) q`.
    pub fn from_translation_rotation(r: Vec3<S>, q: Quaternion<S>) -> Self {
        Self::new(q, (Quaternion::pure(r) * q).scale(S::cst(0.5)))
    }

    pub fn translation(t: Vec3<S>) -> Self {
        Self::from_translation_rotation(t, Quaternion::identity())
    }

    /// Classical conjugate of both parts.
    pub fn conjugate(&self) -> Self {
        Self::new(self.real.conj(), self.dual.conj())
    }

    pub fn scale(&self, k: S) -> Self {
        Self::new(self.real.scale(k), self.dual.scale(k))
    }

    /// Translation encoded by a unit dual quaternion: `t = 2 D q*`.
    pub fn translation_part(&self) -> Vec3<S> {
        (self.dual * self.real.conj()).scale(S::cst(2.0)).vector()
    }

    /// `[x₀..x₃, y₀..y₃]`.
    pub fn to_array(&self) -> [S; 8] {
        let r = self.real.to_array();
        let d = self.dual.to_array();
        [r[0], r[1], r[2], r[3], d[0], d[1], d[2], d[3]]
    }

    pub fn from_array(a: [S; 8]) -> Self {
        Self::new(
            Quaternion::new(a[0], a[1], a[2], a[3]),
            Quaternion::new(a[4], a[5], a[6], a[7]),
        )
    }

    pub fn re(&self) -> DualQuaternion<f64> {
        DualQuaternion::new(self.real.re(), self.dual.re())
    }
}

impl<S: Scalar> Mul for DualQuaternion<S> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Self::new(self.real * b.real, self.real * b.dual + self.dual * b.real)
    }
}

impl<S: Scalar> Add for DualQuaternion<S> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Self::new(self.real + b.real, self.dual + b.dual)
    }
}

impl<S: Scalar> Sub for DualQuaternion<S> {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Self::new(self.real - b.real, self.dual - b.dual)
    }
}

impl<S: Scalar> Neg for DualQuaternion<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.real, -self.dual)
    }
}

impl DualQuaternion<f64> {
    pub fn max_abs(&self) -> f64 {
        self.real.max_abs().max(self.dual.max_abs())
    }

    /// Study conditions: unit real part and `x·y = 0`, both within `tol`.
    pub fn is_unit(&self, tol: f64) -> bool {
        (self.real.norm_sq() - 1.0).abs() <= tol && self.real.dot(&self.dual).abs() <= tol
    }

    pub fn from_pose(p: &Pose) -> Result<Self, QuatError> {
        let p = Pose::new(p.r, p.t)?;
        let q = Quaternion::from_rotation(&p.r);
        let q = if q.w < 0.0 { -q } else { q };
        Ok(Self::from_translation_rotation(p.t, q))
    }

    /// Normalizes (projective scale out), then reads rotation and translation.
    pub fn to_pose(&self) -> Result<Pose, QuatError> {
        let n = self.real.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(QuatError::ZeroReal);
        }
        let u = self.scale(1.0 / n);
        Ok(Pose {
            r: u.real.to_rotation(),
            t: u.translation_part(),
        })
    }

    /// Same displacement up to the projective sign.
    pub fn same_displacement(&self, o: &Self, tol: f64) -> bool {
        (*self - *o).max_abs() <= tol || (*self + *o).max_abs() <= tol
    }

    pub fn lift<const N: usize>(&self) -> HmdQuaternion<N> {
        DualQuaternion::new(self.real.lift(), self.dual.lift())
    }
}

/// `(1 + ε₀ ½ r̂) q̂` truncated in ε at the jet order and in ε₀ at one.
pub fn hmd_compose<const N: usize>(
    r: Vec3<MultiDual<N>>,
    q: Quaternion<MultiDual<N>>,
) -> HmdQuaternion<N> {
    DualQuaternion::from_translation_rotation(r, q)
}

impl<const N: usize> HmdQuaternion<N> {
    /// k-th time derivative of every Study parameter.
    pub fn derivative(&self, k: usize) -> DualQuaternion<f64> {
        DualQuaternion::new(self.real.derivative(k), self.dual.derivative(k))
    }

    pub fn derivative_stack(&self) -> Vec<DualQuaternion<f64>> {
        (0..N).map(|k| self.derivative(k)).collect()
    }

    pub fn from_stack(stack: &[DualQuaternion<f64>]) -> Self {
        assert!(stack.len() <= N, "stack deeper than jet order");
        let mut out = [MultiDual::constant(0.0); 8];
        for (i, o) in out.iter_mut().enumerate() {
            let mut d = [0.0; N];
            for (k, q) in stack.iter().enumerate() {
                d[k] = q.to_array()[i];
            }
            *o = MultiDual::from_derivatives(d);
        }
        DualQuaternion::from_array(out)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Derivatives of `Q = (1 + ε₀ ½ r) q` from the stacks of its factors, by
/// the Leibniz rule: `Q^(n) = q^(n) + ε₀ ½ Σ C(n,k) r^(k) q^(n−k)`.
pub fn dq_derivative_stack(r: &[Vec3<f64>], q: &[Quaternion<f64>]) -> Vec<DualQuaternion<f64>> {
    let n = r.len().min(q.len());
    (0..n)
        .map(|m| {
            let mut d = Quaternion::zero();
            for k in 0..=m {
                d = d + (Quaternion::pure(r[k]) * q[m - k]).scale(0.5 * binomial(m, k));
            }
            DualQuaternion::new(q[m], d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multidual::Jet3;
    use crate::se3::rot_zy;

    #[test]
    fn hamilton_units() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let k = Quaternion::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, Quaternion::new(-1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn identity_pose() {
        let q = DualQuaternion::from_pose(&Pose::identity()).unwrap();
        assert_eq!(q, DualQuaternion::identity());
        let p = DualQuaternion::<f64>::identity().to_pose().unwrap();
        assert_eq!(p, Pose::identity());
    }

    #[test]
    fn half_turn_about_z_uses_another_ratio() {
        let r = rot_zy(std::f64::consts::PI, 0.0);
        let q = Quaternion::from_rotation(&r);
        assert!((q.z.abs() - 1.0).abs() < 1e-15);
        assert!((q.to_rotation() - r).max_abs() < 1e-15);
    }

    #[test]
    fn zy_quaternion_matches_matrix() {
        let (psi, th) = (0.4, -1.1);
        let q = Quaternion::from_zy(psi, th);
        assert!((q.to_rotation() - rot_zy(psi, th)).max_abs() < 1e-15);
    }

    #[test]
    fn projective_scale_is_ignored() {
        let p = Pose::new(rot_zy(0.3, 0.2), Vec3([1.0, -2.0, 3.0])).unwrap();
        let q = DualQuaternion::from_pose(&p).unwrap();
        let back = q.scale(2.5).to_pose().unwrap();
        assert!((back.r - p.r).max_abs() < 1e-15);
        assert!((back.t - p.t).max_abs() < 1e-14);
    }

    #[test]
    fn translating_along_x_at_unit_rate() {
        let r = Vec3([
            Jet3::variable(0.0, &[1.0]),
            Jet3::constant(0.0),
            Jet3::constant(0.0),
        ]);
        let q = hmd_compose(r, Quaternion::identity());
        let d1 = q.derivative(1);
        assert_eq!(d1.dual, Quaternion::new(0.0, 0.5, 0.0, 0.0));
        assert_eq!(d1.real, Quaternion::zero());
        let leib = dq_derivative_stack(
            &[Vec3::zero(), Vec3([1.0, 0.0, 0.0])],
            &[Quaternion::identity(), Quaternion::zero()],
        );
        assert_eq!(leib[1], d1);
    }
}
