//! Shared numerical kernels.

pub mod dd;
pub mod fit;
pub mod par;
pub mod poly;
pub mod quad;
pub mod rational;

pub use poly::Poly;
pub use rational::Rational;

use num_complex::Complex64 as C;
use std::f64::consts::TAU;

/// Values beyond this modulus are treated as the point at infinity.
pub const SPHERE_INF: f64 = 1e12;

pub const INF: C = C::new(f64::INFINITY, 0.0);

pub fn is_inf(z: C) -> bool {
    !z.re.is_finite() || !z.im.is_finite() || z.norm() > SPHERE_INF
}

/// `t` reduced into `[0, 1)`.
pub fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// `t` reduced into `(-1/2, 1/2]`.
pub fn wrap_signed(t: f64) -> f64 {
    let r = wrap(t);
    if r > 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// `e^{2πit}`.
pub fn turn(t: f64) -> C {
    let (s, c) = (TAU * wrap(t)).sin_cos();
    C::new(c, s)
}

/// Angle of `z` in turns, in `[0, 1)`.
pub fn angle_of(z: C) -> f64 {
    wrap(z.im.atan2(z.re) / TAU)
}

/// `e^{2πix} - 1`, accurate for small `x`.
pub fn turn_minus_one(x: f64) -> C {
    let s = (std::f64::consts::PI * x).sin();
    C::new(-2.0 * s * s, (TAU * x).sin())
}

/// Euclidean chord length of an arc of `len` turns.
pub fn chord(len: f64) -> f64 {
    2.0 * (std::f64::consts::PI * len.abs().min(0.5)).sin()
}
