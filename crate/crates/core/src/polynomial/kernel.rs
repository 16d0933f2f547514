use serde::{Deserialize, Serialize};

use super::{factorial, Polynomial};

/// Which truncated-power kernel a measure is integrated against.
///
/// * `Plus`:  `(x-u)^n_+ / n!`, supported on `u < x`.
/// * `Minus`: `(-1)^(n+1) [-(x-u)]^n_+ / n!`, supported on `u > x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    /// Kernel value for a point mass at `u`. For `n = 0` the jump at `u = x`
    /// follows the right-continuous convention.
    pub fn kernel(self, x: f64, u: f64, n: usize) -> f64 {
        match self {
            Side::Plus => {
                if n == 0 {
                    if u <= x { 1.0 } else { 0.0 }
                } else if u < x {
                    (x - u).powi(n as i32) / factorial(n)
                } else {
                    0.0
                }
            }
            Side::Minus => {
                let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
                if n == 0 {
                    if u > x { -1.0 } else { 0.0 }
                } else if u > x {
                    sign * (u - x).powi(n as i32) / factorial(n)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Closed-form `∫_c^d K(x, u) ρ(u) du` for the kernel of the given side and
/// order `n`, with `ρ` a polynomial density on the piece `[c, d]`.
pub fn kernel_moment(density: &Polynomial, piece: (f64, f64), x: f64, n: usize, side: Side) -> f64 {
    kernel_moment_with_magnitude(density, piece, x, n, side).0
}

/// As [`kernel_moment`], also returning the same integral with every
/// coefficient replaced by its absolute value (a rounding-error scale).
pub fn kernel_moment_with_magnitude(
    density: &Polynomial,
    piece: (f64, f64),
    x: f64,
    n: usize,
    side: Side,
) -> (f64, f64) {
    let (c, d) = piece;
    // Substitute t = |x - u| so the truncated power becomes t^n on [t0, t1].
    let (t0, t1, local, sign) = match side {
        Side::Plus => {
            let upper = d.min(x);
            if upper <= c {
                return (0.0, 0.0);
            }
            (x - upper, x - c, density.shifted(x, -1.0), 1.0)
        }
        Side::Minus => {
            let lower = c.max(x);
            if lower >= d {
                return (0.0, 0.0);
            }
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            (lower - x, d - x, density.shifted(x, 1.0), sign)
        }
    };
    let mut value = 0.0;
    let mut magnitude = 0.0;
    for (j, &g) in local.coeffs().iter().enumerate() {
        let p = (n + j + 1) as i32;
        let span = (t1.powi(p) - t0.powi(p)) / p as f64;
        value += g * span;
        magnitude += g.abs() * span;
    }
    let norm = factorial(n);
    (sign * value / norm, magnitude / norm)
}
