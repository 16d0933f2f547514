use serde::Serialize;

use super::Polynomial;
use crate::domain::locations_equal;
use crate::error::{Error, Result};

/// Piecewise polynomial on `[b_0, b_m)`: piece `i` is valid on
/// `[b_i, b_{i+1})` and the function is zero outside `[b_0, b_m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewisePoly {
    breakpoints: Vec<f64>,
    pieces: Vec<Polynomial>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Polynomial>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidInput("piecewise polynomial needs at least one piece".into()));
        }
        if breakpoints.len() != pieces.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "{} pieces need {} breakpoints, got {}",
                pieces.len(),
                pieces.len() + 1,
                breakpoints.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInput("breakpoints must be finite".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
        }
        if pieces.iter().any(|p| p.coeffs().iter().any(|c| !c.is_finite())) {
            return Err(Error::InvalidInput("piece coefficients must be finite".into()));
        }
        Ok(Self { breakpoints, pieces })
    }

    /// Single polynomial on `[c, d)`.
    pub fn single(c: f64, d: f64, p: Polynomial) -> Result<Self> {
        Self::new(vec![c, d], vec![p])
    }

    /// Assemble from `(c, d, p)` segments sorted by `c` with disjoint
    /// interiors; gaps become zero pieces, zero or empty segments are dropped,
    /// and neighbouring equal pieces are merged. `None` when nothing is left.
    pub(crate) fn from_segments(segments: Vec<(f64, f64, Polynomial)>) -> Option<Self> {
        let mut bps: Vec<f64> = Vec::new();
        let mut pieces: Vec<Polynomial> = Vec::new();
        for (c, d, p) in segments {
            if !(d > c) || locations_equal(c, d) {
                continue;
            }
            match bps.last().copied() {
                None => {
                    if p.is_zero() {
                        continue;
                    }
                    bps.push(c);
                }
                Some(last) => {
                    if !locations_equal(last, c) && c > last {
                        pieces.push(Polynomial::zero());
                        bps.push(c);
                    }
                }
            }
            if pieces.last().is_some_and(|q| pieces_equal(q, &p)) {
                *bps.last_mut().unwrap() = d;
            } else {
                pieces.push(p);
                bps.push(d);
            }
        }
        while pieces.last().is_some_and(|p| p.is_zero()) {
            pieces.pop();
            bps.pop();
        }
        if pieces.is_empty() {
            return None;
        }
        Some(Self {
            breakpoints: bps,
            pieces,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    /// `(start, end, polynomial)` for every piece.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, &Polynomial)> + '_ {
        self.pieces
            .iter()
            .enumerate()
            .map(move |(i, p)| (self.breakpoints[i], self.breakpoints[i + 1], p))
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x >= hi {
            return 0.0;
        }
        let i = self.breakpoints.partition_point(|&b| b <= x) - 1;
        self.pieces[i].eval(x)
    }

    /// `∫` of the function over `(-∞, x]`.
    pub fn integral_to(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (c, d, p) in self.segments() {
            if x <= c {
                break;
            }
            acc += p.integrate(c, d.min(x));
        }
        acc
    }

    pub fn total_integral(&self) -> f64 {
        self.segments().map(|(c, d, p)| p.integrate(c, d)).sum()
    }

    /// Restriction to `(-∞, s)` and `[s, ∞)`.
    pub fn split_at(&self, s: f64) -> (Option<Self>, Option<Self>) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (c, d, p) in self.segments() {
            if d <= s {
                left.push((c, d, p.clone()));
            } else if c >= s {
                right.push((c, d, p.clone()));
            } else {
                left.push((c, s, p.clone()));
                right.push((s, d, p.clone()));
            }
        }
        (Self::from_segments(left), Self::from_segments(right))
    }

    pub fn scale(&self, factor: f64) -> Option<Self> {
        Self::from_segments(self.segments().map(|(c, d, p)| (c, d, p.scale(factor))).collect())
    }
}

/// Common refinement of two optional piecewise polynomials: the union of
/// breakpoints (nearly coincident ones merged), with each function's
/// polynomial on every cell (zero where it is not defined).
pub(crate) fn refine(
    f: Option<&PiecewisePoly>,
    g: Option<&PiecewisePoly>,
) -> Vec<(f64, f64, Polynomial, Polynomial)> {
    let mut cuts: Vec<f64> = f
        .iter()
        .chain(g.iter())
        .flat_map(|p| p.breakpoints().iter().copied())
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| locations_equal(*x, *y));
    let piece_at = |p: Option<&PiecewisePoly>, mid: f64| -> Polynomial {
        match p {
            Some(p) => {
                let (lo, hi) = p.support();
                if mid < lo || mid >= hi {
                    Polynomial::zero()
                } else {
                    let i = p.breakpoints().partition_point(|&b| b <= mid) - 1;
                    p.pieces()[i].clone()
                }
            }
            None => Polynomial::zero(),
        }
    };
    cuts.windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            (w[0], w[1], piece_at(f, mid), piece_at(g, mid))
        })
        .collect()
}

fn pieces_equal(p: &Polynomial, q: &Polynomial) -> bool {
    let len = p.coeffs().len().max(q.coeffs().len());
    let scale = 1f64.max(p.max_abs_coeff()).max(q.max_abs_coeff());
    (0..len).all(|i| (p.coeff(i) - q.coeff(i)).abs() <= 1e-12 * scale)
}
