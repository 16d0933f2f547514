use serde::Serialize;

use crate::error::{Error, Result};

/// A finite open interval `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    a: f64,
    b: f64,
}

impl Domain {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "domain endpoints must be finite, got ({a}, {b})"
            )));
        }
        if a >= b {
            return Err(Error::InvalidInput(format!(
                "domain must satisfy a < b, got ({a}, {b})"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// Open-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }

    pub fn check_contains(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                a: self.a,
                b: self.b,
            })
        }
    }

    /// Endpoints agree up to the location tolerance.
    pub fn same_as(&self, other: &Domain) -> bool {
        locations_equal(self.a, other.a) && locations_equal(self.b, other.b)
    }

    pub fn check_same(&self, other: &Domain) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::DomainMismatch(self.a, self.b, other.a, other.b))
        }
    }

    /// The mirrored interval `(-b, -a)`.
    pub fn reflected(&self) -> Domain {
        Domain {
            a: -self.b,
            b: -self.a,
        }
    }

    /// `count` Chebyshev points of the first kind, increasing, strictly inside.
    pub fn chebyshev_nodes(&self, count: usize) -> Vec<f64> {
        let mid = self.midpoint();
        let half = 0.5 * self.width();
        (0..count)
            .rev()
            .map(|i| {
                let theta = std::f64::consts::PI * (2 * i + 1) as f64 / (2 * count) as f64;
                mid + half * theta.cos()
            })
            .collect()
    }

    /// `count` equally spaced points strictly inside the interval.
    pub fn interior_grid(&self, count: usize) -> Vec<f64> {
        let h = self.width() / (count + 1) as f64;
        (1..=count).map(|i| self.a + h * i as f64).collect()
    }
}

/// Two locations are the same point iff `|Δ| ≤ 1e-12 · max(1, |loc|)`.
pub fn locations_equal(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * 1f64.max(x.abs()).max(y.abs())
}
