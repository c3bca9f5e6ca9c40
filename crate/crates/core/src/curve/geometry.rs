//! The polynomial `F(x, y) = (x² − 1)(y² − 1)`, its level sets, and base paths.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn hamiltonian(x: C64, y: C64) -> C64 {
    (x * x - 1.0) * (y * y - 1.0)
}

/// `(F_x, F_y)`.
pub fn gradient(x: C64, y: C64) -> (C64, C64) {
    (2.0 * x * (y * y - 1.0), 2.0 * y * (x * x - 1.0))
}

/// The two solutions `w` of `(u² − 1)(w² − 1) = t` for fixed `u`; the problem is symmetric in `x`, `y`.
pub fn partner_roots(u: C64, t: C64) -> [C64; 2] {
    let w = (1.0 + t / (u * u - 1.0)).sqrt();
    [w, -w]
}

/// Newton steps on `w ↦ (u² − 1)(w² − 1) − t`.
pub fn polish(u: C64, w: C64, t: C64) -> C64 {
    let mut w = w;
    let a = u * u - 1.0;
    for _ in 0..2 {
        let g = a * (w * w - 1.0) - t;
        let dg = 2.0 * w * a;
        if dg.norm() == 0.0 {
            break;
        }
        w -= g / dg;
    }
    w
}

/// Root of the level equation nearest to `guess`, with the distance ratio to the other root.
pub fn nearest_partner(u: C64, t: C64, guess: C64) -> (C64, f64) {
    let [r1, r2] = partner_roots(u, t);
    let (d1, d2) = ((r1 - guess).norm(), (r2 - guess).norm());
    let (near, dn, df) = if d1 <= d2 { (r1, d1, d2) } else { (r2, d2, d1) };
    let ratio = if dn == 0.0 { f64::INFINITY } else { df / dn };
    (polish(u, near, t), ratio)
}

/// Which coordinate parametrizes a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    OverX,
    OverY,
}

impl Chart {
    /// `(independent, dependent)` into `(x, y)`.
    pub fn to_xy(self, u: C64, w: C64) -> (C64, C64) {
        match self {
            Chart::OverX => (u, w),
            Chart::OverY => (w, u),
        }
    }

    /// `(x, y)` into `(independent, dependent)`.
    pub fn from_xy(self, x: C64, y: C64) -> (C64, C64) {
        match self {
            Chart::OverX => (x, y),
            Chart::OverY => (y, x),
        }
    }
}

/// Path of the independent coordinate, `s ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BasePath {
    Line {
        from: C64,
        to: C64,
    },
    /// `center + radius·e^{i(θ₀ + sweep·s)}`.
    Arc {
        center: C64,
        radius: f64,
        theta0: f64,
        sweep: f64,
    },
}

impl BasePath {
    pub fn at(&self, s: f64) -> (C64, C64) {
        match *self {
            BasePath::Line { from, to } => (from + (to - from) * s, to - from),
            BasePath::Arc {
                center,
                radius,
                theta0,
                sweep,
            } => {
                let e = C64::from_polar(radius, theta0 + sweep * s);
                (center + e, C64::i() * sweep * e)
            }
        }
    }

    /// Full counterclockwise (`sign > 0`) or clockwise circle starting at angle `theta0`.
    pub fn circle(center: C64, radius: f64, theta0: f64, sign: f64) -> Self {
        BasePath::Arc {
            center,
            radius,
            theta0,
            sweep: TAU * sign.signum(),
        }
    }
}

/// A point of `{F = t}` with its residual `|F(x, y) − t|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: C64,
    pub y: C64,
    pub t: C64,
    pub residual: f64,
}

impl CurvePoint {
    pub fn new(x: C64, y: C64, t: C64) -> Self {
        CurvePoint {
            x,
            y,
            t,
            residual: (hamiltonian(x, y) - t).norm(),
        }
    }

    pub fn distance(&self, o: &CurvePoint) -> f64 {
        (self.x - o.x).norm().max((self.y - o.y).norm())
    }
}

/// Residual bound every constructed point must meet.
pub fn residual_bound(t: C64) -> f64 {
    1e-13 * t.norm().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_solve_level_equation() {
        let t = c(0.36, 0.1);
        for u in [c(0.3, 0.0), c(1.2, -0.4), c(-0.7, 0.2)] {
            for w in partner_roots(u, t) {
                let p = CurvePoint::new(u, polish(u, w, t), t);
                assert!(p.residual <= residual_bound(t));
            }
        }
        let (w, ratio) = nearest_partner(c(0.0, 0.0), c(0.36, 0.0), c(0.7, 0.0));
        assert!((w - c(0.8, 0.0)).norm() < 1e-15);
        assert!(ratio > 4.0);
    }

    #[test]
    fn circle_derivative() {
        let p = BasePath::circle(c(1.0, 0.0), 0.3, std::f64::consts::PI, 1.0);
        let (z, dz) = p.at(0.0);
        assert!((z - c(0.7, 0.0)).norm() < 1e-15);
        assert!((dz - c(0.0, -0.3 * TAU)).norm() < 1e-14);
    }
}
