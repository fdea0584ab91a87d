//! Time derivatives of the Jacobian entries for the classical
//! (differentiation) algorithms.
//!
//! A [`Rate`] is a quantity together with its first three time derivatives.
//! The rules below are the hand-derived product, quotient and chain rules
//! up to third order; nothing here is evaluated by numeric differencing.

use std::ops::{Add, Mul, Neg, Sub};

use super::jacobian::Level;
use super::RobotGeometry;
use crate::linalg::{Mat3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rate(pub [f64; 4]);

impl Rate {
    pub fn constant(v: f64) -> Self {
        Rate([v, 0.0, 0.0, 0.0])
    }

    /// Component `i` of a derivative stack; missing orders are zero.
    pub fn from_stack(stack: &[Vec3<f64>], i: usize) -> Self {
        let mut r = [0.0; 4];
        for (k, v) in stack.iter().take(4).enumerate() {
            r[k] = v[i];
        }
        Rate(r)
    }

    pub fn stack3(stack: &[Vec3<f64>]) -> [Rate; 3] {
        [0, 1, 2].map(|i| Rate::from_stack(stack, i))
    }

    pub fn v(&self) -> f64 {
        self.0[0]
    }

    pub fn scale(self, k: f64) -> Self {
        Rate(self.0.map(|x| x * k))
    }

    /// Keep orders below `n`; zero the rest.
    pub fn truncate(mut self, n: usize) -> Self {
        for x in self.0.iter_mut().skip(n) {
            *x = 0.0;
        }
        self
    }

    /// `(sin a, cos a)` with
    /// s' = c a', s'' = −s a'² + c a'', s''' = −c a'³ − 3 s a' a'' + c a''',
    /// and the mirrored forms for cosine.
    pub fn sin_cos(self) -> (Rate, Rate) {
        let [a, a1, a2, a3] = self.0;
        let (s, c) = (a.sin(), a.cos());
        let a1s = a1 * a1;
        let sin = Rate([
            s,
            c * a1,
            -s * a1s + c * a2,
            -c * a1s * a1 - 3.0 * s * a1 * a2 + c * a3,
        ]);
        let cos = Rate([
            c,
            -s * a1,
            -c * a1s - s * a2,
            s * a1s * a1 - 3.0 * c * a1 * a2 - s * a3,
        ]);
        (sin, cos)
    }

    /// `1/v`: r' = −v'/v², r'' = 2v'²/v³ − v''/v², r''' = −6v'³/v⁴ + 6v'v''/v³ − v'''/v².
    pub fn recip(self) -> Rate {
        let [v, v1, v2, v3] = self.0;
        let r = 1.0 / v;
        let r2 = r * r;
        let r3 = r2 * r;
        Rate([
            r,
            -v1 * r2,
            2.0 * v1 * v1 * r3 - v2 * r2,
            -6.0 * v1 * v1 * v1 * r3 * r + 6.0 * v1 * v2 * r3 - v3 * r2,
        ])
    }

    /// `√v` from s² = v: s' = v'/(2s), s'' = (v'' − 2s'²)/(2s), s''' = (v''' − 6s's'')/(2s).
    pub fn sqrt(self) -> Rate {
        let [v, v1, v2, v3] = self.0;
        let s = v.sqrt();
        let s1 = v1 / (2.0 * s);
        let s2 = (v2 - 2.0 * s1 * s1) / (2.0 * s);
        let s3 = (v3 - 6.0 * s1 * s2) / (2.0 * s);
        Rate([s, s1, s2, s3])
    }

    /// `2·atan(u)` with a' = 1/(1+u²), a'' = −2u/(1+u²)², a''' = (6u² − 2)/(1+u²)³
    /// composed by Faà di Bruno.
    pub fn twice_atan(self) -> Rate {
        let [u, u1, u2, u3] = self.0;
        let w = 1.0 / (1.0 + u * u);
        let da = w;
        let dda = -2.0 * u * w * w;
        let ddda = (6.0 * u * u - 2.0) * w * w * w;
        Rate([
            2.0 * u.atan(),
            2.0 * da * u1,
            2.0 * (dda * u1 * u1 + da * u2),
            2.0 * (ddda * u1 * u1 * u1 + 3.0 * dda * u1 * u2 + da * u3),
        ])
    }
}

impl Add for Rate {
    type Output = Rate;
    fn add(self, o: Rate) -> Rate {
        Rate([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }
}

impl Sub for Rate {
    type Output = Rate;
    fn sub(self, o: Rate) -> Rate {
        Rate([
            self.0[0] - o.0[0],
            self.0[1] - o.0[1],
            self.0[2] - o.0[2],
            self.0[3] - o.0[3],
        ])
    }
}

impl Neg for Rate {
    type Output = Rate;
    fn neg(self) -> Rate {
        self.scale(-1.0)
    }
}

/// Leibniz: (fg)' = f'g + fg', (fg)'' = f''g + 2f'g' + fg'',
/// (fg)''' = f'''g + 3f''g' + 3f'g'' + fg'''.
impl Mul for Rate {
    type Output = Rate;
    fn mul(self, o: Rate) -> Rate {
        let [f, f1, f2, f3] = self.0;
        let [g, g1, g2, g3] = o.0;
        Rate([
            f * g,
            f1 * g + f * g1,
            f2 * g + 2.0 * f1 * g1 + f * g2,
            f3 * g + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f * g3,
        ])
    }
}

impl Add<f64> for Rate {
    type Output = Rate;
    fn add(mut self, k: f64) -> Rate {
        self.0[0] += k;
        self
    }
}

impl Sub<f64> for Rate {
    type Output = Rate;
    fn sub(mut self, k: f64) -> Rate {
        self.0[0] -= k;
        self
    }
}

impl Mul<f64> for Rate {
    type Output = Rate;
    fn mul(self, k: f64) -> Rate {
        self.scale(k)
    }
}

/// Matrix of rates → `[M, Ṁ, M̈, M⃛]`.
pub fn split(m: [[Rate; 3]; 3]) -> [Mat3<f64>; 4] {
    let mut out = [Mat3::<f64>::zero(); 4];
    for (k, o) in out.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                o.0[i][j] = m[i][j].0[k];
            }
        }
    }
    out
}

/// Vector of rates → `[v, v̇, v̈, v⃛]`.
pub fn split_vec(v: [Rate; 3]) -> [Vec3<f64>; 4] {
    let mut out = [Vec3::<f64>::zero(); 4];
    for (k, o) in out.iter_mut().enumerate() {
        for i in 0..3 {
            o.0[i] = v[i].0[k];
        }
    }
    out
}

/// `u(ψ, θ) = (cψ cθ, sψ cθ, −sθ)` with its rates.
pub fn direction_rates(psi: Rate, theta: Rate) -> [Rate; 3] {
    let (sp, cp) = psi.sin_cos();
    let (st, ct) = theta.sin_cos();
    [cp * ct, sp * ct, -st]
}

/// Rates of `Rz(ψ)·Ry(θ)`.
pub fn rot_zy_rates(psi: Rate, theta: Rate) -> [Mat3<f64>; 4] {
    let (sp, cp) = psi.sin_cos();
    let (st, ct) = theta.sin_cos();
    split([
        [cp * ct, -sp, cp * st],
        [sp * ct, cp, sp * st],
        [-st, Rate::default(), ct],
    ])
}

/// Rates of `ρ ↦ (ρ₂ sin ρ₃ − l₀, ρ₁, ρ₂ cos ρ₃)`.
pub fn rho_to_p_rates(rho: &[Rate; 3], g: &RobotGeometry) -> [Vec3<f64>; 4] {
    let (s, c) = rho[2].sin_cos();
    split_vec([rho[1] * s - g.l0, rho[0], rho[1] * c])
}

/// Rates of `k·u(ψ, θ)`.
pub fn scaled_direction_rates(psi: Rate, theta: Rate, k: Rate) -> [Vec3<f64>; 4] {
    let u = direction_rates(psi, theta);
    split_vec(u.map(|c| k * c))
}

/// Rates of `∂(k·u)/∂(ψ, θ, k)`.
pub fn m_rates(psi: Rate, theta: Rate, k: Rate) -> [Mat3<f64>; 4] {
    let (sp, cp) = psi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let z = Rate::default();
    split([
        [-(k * sp * ct), -(k * cp * st), cp * ct],
        [k * cp * ct, -(k * sp * st), sp * ct],
        [z, -(k * ct), -st],
    ])
}

/// Rates of `∂P/∂ρ`.
pub fn g_rates(rho: &[Rate; 3]) -> [Mat3<f64>; 4] {
    let (s, c) = rho[2].sin_cos();
    let (o, z) = (Rate::constant(1.0), Rate::default());
    split([[z, s, rho[1] * c], [o, z, z], [z, c, -(rho[1] * s)]])
}

/// Rates of A and B for the ρ−q relations.
pub fn rho_q_rates(
    g: &RobotGeometry,
    rho: &[Rate; 3],
    q: &[Rate; 3],
) -> ([Mat3<f64>; 4], [Mat3<f64>; 4]) {
    let d = (q[1] - q[0]).scale(0.5);
    let dd = d * d;
    let l1p = (-dd + g.l1 * g.l1).sqrt();
    let l3p = (-dd + g.l3 * g.l3).sqrt();
    let (sr, cr) = rho[2].sin_cos();
    let (s3, c3) = q[2].sin_cos();
    let u = l3p - s3 * g.l2 + l1p * sr;
    let w = c3 * g.l2 - l1p * cr;
    let f3_rho3 = l1p * (u * cr + w * sr) * 2.0;
    let f3_d = -(d * u * l3p.recip()) * 2.0 + d * (w * cr - u * sr) * l1p.recip() * 2.0;
    let f3_q3 = -((u * c3 + w * s3) * (2.0 * g.l2));
    let e = rho[1] - g.l4;
    let (o, z) = (Rate::constant(1.0), Rate::default());
    let h = Rate::constant(0.5);
    let a = split([[o, z, z], [z, e * 2.0, z], [z, z, f3_rho3]]);
    let b = split([[-h, -h, z], [-d, d, z], [-(f3_d * 0.5), f3_d * 0.5, f3_q3]]);
    (a, b)
}

/// Rates of `(A, B)` for a level along stacks of x and q.
pub fn level_rates(
    level: Level,
    g: &RobotGeometry,
    x: &[Vec3<f64>],
    q: &[Vec3<f64>],
) -> ([Mat3<f64>; 4], [Mat3<f64>; 4]) {
    let ident = [Mat3::identity(), Mat3::zero(), Mat3::zero(), Mat3::zero()];
    let neg = |m: [Mat3<f64>; 4]| m.map(|x| -x);
    match level {
        Level::RcmE => {
            let [p, t, l] = Rate::stack3(q);
            (ident, neg(m_rates(p, t, l)))
        }
        Level::RcmP => {
            let [p, t, l] = Rate::stack3(x);
            (neg(m_rates(p, t, l - g.l)), ident)
        }
        Level::PRho => (ident, neg(g_rates(&Rate::stack3(q)))),
        Level::RhoQ => rho_q_rates(g, &Rate::stack3(x), &Rate::stack3(q)),
    }
}
