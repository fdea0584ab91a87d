//! Truncated multidual numbers.
//!
//! A `MultiDual<N>` holds the first `N` Taylor coefficients of a scalar
//! function of time, `c[k] = f^(k)(t) / k!`, so the order is `N - 1` and
//! `ε^N = 0`. Evaluating an expression on multidual inputs carries the full
//! derivative stack through it (forward-mode AD to order `N - 1`).
//!
//! Orders are a type parameter: mixing jets of different order does not
//! compile. The operators `/` and the infallible lifts panic on a zero
//! real part or a domain violation, since those signal a modeling bug;
//! use [`MultiDual::checked_div`] and [`MultiDual::lift`] for the fallible
//! versions.

mod matrix;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use thiserror::Error;

pub use matrix::MultiDualMatrix;

/// Jet through first derivatives.
pub type Jet1 = MultiDual<2>;
/// Jet through second derivatives.
pub type Jet2 = MultiDual<3>;
/// Jet through third derivatives (jerk). The default working order.
pub type Jet3 = MultiDual<4>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MultiDualError {
    #[error("non-invertible multidual: real part is zero")]
    NonInvertible,
    #[error("lift domain: {function} undefined or not differentiable at real part {value}")]
    LiftDomain { function: &'static str, value: f64 },
    #[error("derivative order {k} exceeds jet order {order}")]
    OrderOutOfRange { k: usize, order: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

const FACT: [f64; 13] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
];

pub(crate) fn factorial(k: usize) -> f64 {
    FACT.get(k)
        .copied()
        .unwrap_or_else(|| (1..=k).map(|i| i as f64).product())
}

/// Elementary functions accepted by [`MultiDual::lift`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Sin,
    Cos,
    Tan,
    Sqrt,
    Exp,
    Atan,
    Pow(f64),
}

impl Elementary {
    fn name(self) -> &'static str {
        match self {
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Tan => "tan",
            Elementary::Sqrt => "sqrt",
            Elementary::Exp => "exp",
            Elementary::Atan => "atan",
            Elementary::Pow(_) => "pow",
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
pub struct MultiDual<const N: usize> {
    c: [f64; N],
}

impl<const N: usize> fmt::Debug for MultiDual<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiDual{:?}", self.c)
    }
}

impl<const N: usize> Default for MultiDual<N> {
    fn default() -> Self {
        Self::constant(0.0)
    }
}

impl<const N: usize> MultiDual<N> {
    pub const ORDER: usize = N - 1;

    pub fn constant(x: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = x;
        Self { c }
    }

    /// Jet of a trajectory with value `value` and time derivatives
    /// `derivatives[0] = f'`, `derivatives[1] = f''`, ... Missing orders are zero.
    ///
    /// Panics if more derivatives are given than the order can hold.
    pub fn variable(value: f64, derivatives: &[f64]) -> Self {
        assert!(
            derivatives.len() < N,
            "{} derivatives given to a jet of order {}",
            derivatives.len(),
            N - 1
        );
        let mut c = [0.0; N];
        c[0] = value;
        for (k, d) in derivatives.iter().enumerate() {
            c[k + 1] = d / factorial(k + 1);
        }
        Self { c }
    }

    /// Jet from a full derivative stack `[f, f', f'', ...]` (length `N`).
    pub fn from_derivatives(stack: [f64; N]) -> Self {
        let mut c = stack;
        for (k, ck) in c.iter_mut().enumerate() {
            *ck /= factorial(k);
        }
        Self { c }
    }

    pub fn from_coeffs(c: [f64; N]) -> Self {
        Self { c }
    }

    pub fn coeffs(&self) -> &[f64; N] {
        &self.c
    }

    pub fn order(&self) -> usize {
        N - 1
    }

    pub fn re(&self) -> f64 {
        self.c[0]
    }

    /// k-th time derivative, `k! · c[k]`.
    pub fn derivative(&self, k: usize) -> Result<f64, MultiDualError> {
        if k >= N {
            return Err(MultiDualError::OrderOutOfRange { k, order: N - 1 });
        }
        Ok(factorial(k) * self.c[k])
    }

    /// All derivatives `[f, f', f'', ...]`.
    pub fn derivatives(&self) -> [f64; N] {
        let mut d = self.c;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk *= factorial(k);
        }
        d
    }

    /// The nilpotent part `x - x₀`.
    pub fn infinitesimal(&self) -> Self {
        let mut c = self.c;
        c[0] = 0.0;
        Self { c }
    }

    /// Time derivative of the jet, shifted down one order. The top
    /// coefficient is unknown at this order and set to zero, so only
    /// coefficients below `N - 1` are meaningful.
    pub fn shift_derivative(&self) -> Self {
        let mut c = [0.0; N];
        for k in 0..N - 1 {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Self { c }
    }

    /// Antiderivative with constant term `x0`: turns a velocity jet into
    /// the position jet one order up (the top coefficient of `self` drops).
    pub fn integrate(&self, x0: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = x0;
        for k in 1..N {
            c[k] = self.c[k - 1] / k as f64;
        }
        Self { c }
    }

    pub fn checked_recip(&self) -> Result<Self, MultiDualError> {
        Self::constant(1.0).checked_div(self)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, MultiDualError> {
        let b0 = rhs.c[0];
        if b0 == 0.0 {
            return Err(MultiDualError::NonInvertible);
        }
        let mut c = [0.0; N];
        c[0] = self.c[0] / b0;
        for k in 1..N {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= rhs.c[j] * c[k - j];
            }
            c[k] = acc / b0;
        }
        Ok(Self { c })
    }

    /// `Σ h^(k)(x₀)/k! · Δ^k` with `Δ = x - x₀`, given `h^(k)(x₀)` for all k.
    fn compose(&self, h: [f64; N]) -> Self {
        let delta = self.infinitesimal();
        let mut out = Self::constant(h[0]);
        let mut pow = Self::constant(1.0);
        for (k, hk) in h.iter().enumerate().skip(1) {
            pow *= delta;
            out += pow * (hk / factorial(k));
        }
        out
    }

    /// Lift an elementary function, checking its domain at the real part.
    pub fn lift(f: Elementary, x: &Self) -> Result<Self, MultiDualError> {
        let x0 = x.c[0];
        let bad = || MultiDualError::LiftDomain {
            function: f.name(),
            value: x0,
        };
        if !x0.is_finite() {
            return Err(bad());
        }
        match f {
            Elementary::Sin => Ok(x.sin()),
            Elementary::Cos => Ok(x.cos()),
            Elementary::Exp => Ok(x.exp()),
            Elementary::Atan => Ok(x.atan()),
            Elementary::Tan => {
                if x0.cos() == 0.0 {
                    return Err(bad());
                }
                Ok(x.tan())
            }
            Elementary::Sqrt => {
                if x0 < 0.0 || (x0 == 0.0 && N > 1) {
                    return Err(bad());
                }
                Ok(x.sqrt())
            }
            Elementary::Pow(p) => {
                let integer = p.fract() == 0.0;
                if (!integer && x0 <= 0.0 && N > 1)
                    || (p < 0.0 && x0 == 0.0)
                    || (!integer && x0 < 0.0)
                {
                    return Err(bad());
                }
                Ok(x.powf(p))
            }
        }
    }

    /// Two-argument arctangent lift, differentiated directly through
    /// `dθ = (x dy − y dx)/(x² + y²)`.
    pub fn lift_atan2(y: &Self, x: &Self) -> Result<Self, MultiDualError> {
        if (y.c[0] == 0.0 && x.c[0] == 0.0) || !y.c[0].is_finite() || !x.c[0].is_finite() {
            return Err(MultiDualError::LiftDomain {
                function: "atan2",
                value: y.c[0].hypot(x.c[0]),
            });
        }
        Ok(y.atan2(*x))
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let (s, c) = (self.c[0].sin(), self.c[0].cos());
        let mut hs = [0.0; N];
        let mut hc = [0.0; N];
        let cycle_s = [s, c, -s, -c];
        let cycle_c = [c, -s, -c, s];
        for k in 0..N {
            hs[k] = cycle_s[k % 4];
            hc[k] = cycle_c[k % 4];
        }
        (self.compose(hs), self.compose(hc))
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    pub fn tan(self) -> Self {
        let (s, c) = self.sin_cos();
        s / c
    }

    pub fn exp(self) -> Self {
        let e = self.c[0].exp();
        self.compose([e; N])
    }

    /// Real power via the falling-factorial derivatives of `x^p`.
    pub fn powf(self, p: f64) -> Self {
        let x0 = self.c[0];
        if p.fract() == 0.0 && p.abs() <= 16.0 {
            return self.powi(p as i32);
        }
        let mut h = [0.0; N];
        let mut coef = 1.0;
        for (k, hk) in h.iter_mut().enumerate() {
            *hk = coef * x0.powf(p - k as f64);
            coef *= p - k as f64;
        }
        self.compose(h)
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 {
            Self::constant(1.0) / self
        } else {
            self
        };
        let mut e = n.unsigned_abs();
        let mut acc = Self::constant(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn sqrt(self) -> Self {
        let x0 = self.c[0];
        assert!(
            x0 > 0.0 || (N == 1 && x0 == 0.0),
            "lift domain: sqrt at real part {x0}"
        );
        let r = x0.sqrt();
        // Taylor coefficients of sqrt by the self-convolution recurrence
        // s² = x, which keeps c[0] bit-identical to f64::sqrt.
        let mut c = [0.0; N];
        c[0] = r;
        for k in 1..N {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= c[j] * c[k - j];
            }
            c[k] = acc / (2.0 * r);
        }
        Self { c }
    }

    pub fn atan(self) -> Self {
        let w = self.shift_derivative() / (self * self + 1.0);
        w.integrate(self.c[0].atan())
    }

    pub fn atan2(self, x: Self) -> Self {
        let y = self;
        let num = x * y.shift_derivative() - y * x.shift_derivative();
        let den = x * x + y * y;
        (num / den).integrate(y.c[0].atan2(x.c[0]))
    }
}

impl<const N: usize> From<f64> for MultiDual<N> {
    fn from(x: f64) -> Self {
        Self::constant(x)
    }
}

impl<const N: usize> Add for MultiDual<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl<const N: usize> Sub for MultiDual<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] -= rhs.c[k];
        }
        self
    }
}

impl<const N: usize> Mul for MultiDual<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [0.0; N];
        for k in 0..N {
            let mut acc = self.c[0] * rhs.c[k];
            for i in 1..=k {
                acc += self.c[i] * rhs.c[k - i];
            }
            c[k] = acc;
        }
        Self { c }
    }
}

impl<const N: usize> Div for MultiDual<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        match self.checked_div(&rhs) {
            Ok(q) => q,
            Err(e) => panic!("{e}"),
        }
    }
}

impl<const N: usize> Neg for MultiDual<N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for ck in &mut self.c {
            *ck = -*ck;
        }
        self
    }
}

impl<const N: usize> Add<f64> for MultiDual<N> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.c[0] += rhs;
        self
    }
}

impl<const N: usize> Sub<f64> for MultiDual<N> {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.c[0] -= rhs;
        self
    }
}

impl<const N: usize> Mul<f64> for MultiDual<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for ck in &mut self.c {
            *ck *= rhs;
        }
        self
    }
}

impl<const N: usize> Div<f64> for MultiDual<N> {
    type Output = Self;
    fn div(mut self, rhs: f64) -> Self {
        for ck in &mut self.c {
            *ck /= rhs;
        }
        self
    }
}

impl<const N: usize> Mul<MultiDual<N>> for f64 {
    type Output = MultiDual<N>;
    fn mul(self, rhs: MultiDual<N>) -> MultiDual<N> {
        rhs * self
    }
}

impl<const N: usize> Add<MultiDual<N>> for f64 {
    type Output = MultiDual<N>;
    fn add(self, rhs: MultiDual<N>) -> MultiDual<N> {
        rhs + self
    }
}

impl<const N: usize> Sub<MultiDual<N>> for f64 {
    type Output = MultiDual<N>;
    fn sub(self, rhs: MultiDual<N>) -> MultiDual<N> {
        -rhs + self
    }
}

impl<const N: usize> AddAssign for MultiDual<N> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const N: usize> SubAssign for MultiDual<N> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const N: usize> MulAssign for MultiDual<N> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

/// Numbers the kinematic closed forms are written over: plain `f64` and
/// every `MultiDual<N>`. Writing a formula once against this trait gives
/// both its value and, on jets, its derivative stack.
pub trait Scalar:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
{
    fn cst(x: f64) -> Self;
    fn re(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn tan(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn atan(self) -> Self;
    fn atan2(self, x: Self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn powf(self, p: f64) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }

    fn one() -> Self {
        Self::cst(1.0)
    }
}

// Transcendentals go through libm: the std intrinsics let the optimizer
// fuse sin/cos into sincos at some call sites only, and the two disagree
// in the last bit, which would make identical closed forms round
// differently depending on inlining.
impl Scalar for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn re(&self) -> f64 {
        *self
    }
    fn sin(self) -> Self {
        libm::sin(self)
    }
    fn cos(self) -> Self {
        libm::cos(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        libm::sincos(self)
    }
    fn tan(self) -> Self {
        libm::tan(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        libm::exp(self)
    }
    fn atan(self) -> Self {
        libm::atan(self)
    }
    fn atan2(self, x: Self) -> Self {
        libm::atan2(self, x)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn powf(self, p: f64) -> Self {
        libm::pow(self, p)
    }
}

impl<const N: usize> Scalar for MultiDual<N> {
    fn cst(x: f64) -> Self {
        Self::constant(x)
    }
    fn re(&self) -> f64 {
        self.c[0]
    }
    fn sin(self) -> Self {
        MultiDual::sin(self)
    }
    fn cos(self) -> Self {
        MultiDual::cos(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        MultiDual::sin_cos(self)
    }
    fn tan(self) -> Self {
        MultiDual::tan(self)
    }
    fn sqrt(self) -> Self {
        MultiDual::sqrt(self)
    }
    fn exp(self) -> Self {
        MultiDual::exp(self)
    }
    fn atan(self) -> Self {
        MultiDual::atan(self)
    }
    fn atan2(self, x: Self) -> Self {
        MultiDual::atan2(self, x)
    }
    fn powi(self, n: i32) -> Self {
        MultiDual::powi(self, n)
    }
    fn powf(self, p: f64) -> Self {
        MultiDual::powf(self, p)
    }
}
