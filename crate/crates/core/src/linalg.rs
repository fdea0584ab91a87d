//! Fixed 3-vectors and 3×3 matrices over any [`Scalar`].
//!
//! Everything the robot needs is three-dimensional, so these stay on the
//! stack and work unchanged on multidual entries.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::multidual::{MultiDual, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3<S = f64>(pub [S; 3]);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat3<S = f64>(pub [[S; 3]; 3]);

impl<S: Scalar> Vec3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Self([x, y, z])
    }

    pub fn zero() -> Self {
        Self([S::zero(); 3])
    }

    pub fn dot(&self, o: &Self) -> S {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Self([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    pub fn scale(&self, k: S) -> Self {
        Self(self.0.map(|v| v * k))
    }

    pub fn re(&self) -> Vec3<f64> {
        Vec3(self.0.map(|v| v.re()))
    }

    pub fn map<T>(&self, f: impl Fn(S) -> T) -> Vec3<T> {
        Vec3([f(self.0[0]), f(self.0[1]), f(self.0[2])])
    }
}

impl Vec3<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn lift<const N: usize>(&self) -> Vec3<MultiDual<N>> {
        self.map(MultiDual::constant)
    }
}

impl<const N: usize> Vec3<MultiDual<N>> {
    /// Jet vector from a derivative stack `[x, ẋ, ẍ, …]`.
    pub fn from_stack(stack: &[Vec3<f64>]) -> Self {
        assert!(stack.len() <= N, "stack deeper than jet order");
        let mut out = [MultiDual::constant(0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            let mut d = [0.0; N];
            for (k, v) in stack.iter().enumerate() {
                d[k] = v.0[i];
            }
            *o = MultiDual::from_derivatives(d);
        }
        Self(out)
    }

    /// k-th derivative of every entry.
    pub fn derivative(&self, k: usize) -> Vec3<f64> {
        self.map(|v| v.derivatives()[k])
    }
}

impl<S: Scalar> Add for Vec3<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl<S: Scalar> Sub for Vec3<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl<S: Scalar> Neg for Vec3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|v| -v))
    }
}

impl<S> Index<usize> for Vec3<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S> IndexMut<usize> for Vec3<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.0[i]
    }
}

impl<S: Scalar> Mat3<S> {
    pub fn identity() -> Self {
        let (o, z) = (S::one(), S::zero());
        Self([[o, z, z], [z, o, z], [z, z, o]])
    }

    pub fn zero() -> Self {
        Self([[S::zero(); 3]; 3])
    }

    pub fn from_cols(a: Vec3<S>, b: Vec3<S>, c: Vec3<S>) -> Self {
        Self([[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]])
    }

    pub fn col(&self, j: usize) -> Vec3<S> {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn mul_vec(&self, v: &Vec3<S>) -> Vec3<S> {
        let m = &self.0;
        Vec3([
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ])
    }

    pub fn matmul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] =
                    self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j] + self.0[i][2] * o.0[2][j];
            }
        }
        out
    }

    pub fn scale(&self, k: S) -> Self {
        Self(self.0.map(|r| r.map(|v| v * k)))
    }

    pub fn det(&self) -> S {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    fn adjugate(&self) -> Self {
        let m = &self.0;
        let c = |a: usize, b: usize, c: usize, d: usize| m[a][b] * m[c][d] - m[a][d] * m[c][b];
        Self([
            [c(1, 1, 2, 2), -c(0, 1, 2, 2), c(0, 1, 1, 2)],
            [-c(1, 0, 2, 2), c(0, 0, 2, 2), -c(0, 0, 1, 2)],
            [c(1, 0, 2, 1), -c(0, 0, 2, 1), c(0, 0, 1, 1)],
        ])
    }

    /// Inverse via the adjugate. `None` when the real part of the
    /// determinant is zero or its magnitude falls below `tol` relative to
    /// the entry scale cubed.
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        let d = self.det();
        let scale = self.re().max_abs().max(f64::MIN_POSITIVE);
        if d.re().abs() <= tol * scale * scale * scale || !d.re().is_finite() {
            return None;
        }
        let inv = S::one() / d;
        Some(self.adjugate().scale(inv))
    }

    pub fn re(&self) -> Mat3<f64> {
        Mat3(self.0.map(|r| r.map(|v| v.re())))
    }

    pub fn map<T>(&self, f: impl Fn(S) -> T) -> Mat3<T> {
        let g = |r: [S; 3]| [f(r[0]), f(r[1]), f(r[2])];
        Mat3([g(self.0[0]), g(self.0[1]), g(self.0[2])])
    }
}

impl Mat3<f64> {
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    pub fn lift<const N: usize>(&self) -> Mat3<MultiDual<N>> {
        self.map(MultiDual::constant)
    }

    pub fn skew(w: &Vec3<f64>) -> Self {
        Self([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])
    }
}

impl<const N: usize> Mat3<MultiDual<N>> {
    pub fn derivative(&self, k: usize) -> Mat3<f64> {
        self.map(|v| v.derivatives()[k])
    }
}

impl<S: Scalar> Add for Mat3<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[i][j] + o.0[i][j];
            }
        }
        out
    }
}

impl<S: Scalar> Sub for Mat3<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[i][j] - o.0[i][j];
            }
        }
        out
    }
}

impl<S: Scalar> Neg for Mat3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|v| -v)
    }
}

impl<S: Scalar> Mul for Mat3<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.matmul(&o)
    }
}

impl<S: Scalar> Mul<Vec3<S>> for Mat3<S> {
    type Output = Vec3<S>;
    fn mul(self, v: Vec3<S>) -> Vec3<S> {
        self.mul_vec(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_rotation_is_transpose() {
        let (s, c) = 0.3f64.sin_cos();
        let r = Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]);
        let inv = r.inverse(1e-12).unwrap();
        assert!((inv - r.transpose()).max_abs() < 1e-15);
        assert!(Mat3::<f64>::zero().inverse(1e-12).is_none());
    }

    #[test]
    fn cross_product_is_orthogonal() {
        let a = Vec3([1.0, 2.0, 3.0]);
        let b = Vec3([-0.5, 4.0, 1.0]);
        let c = a.cross(&b);
        assert!(c.dot(&a).abs() < 1e-14 && c.dot(&b).abs() < 1e-14);
    }
}
