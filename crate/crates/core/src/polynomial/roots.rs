use super::Polynomial;
use crate::error::{Error, Result};

/// Absolute tolerance for nonnegativity decisions.
pub const POLY_EPS: f64 = 1e-12;

/// Sign changes of `p` inside `[c, d]`, sorted.
///
/// Works down the derivative cascade: the critical points of `p` split
/// `[c, d]` into monotone runs, and each run holds at most one root, found
/// by bisection. Roots of even multiplicity show up only as critical points
/// and are not reported here; [`minimum_on`] accounts for them.
pub fn real_roots_in(p: &Polynomial, c: f64, d: f64) -> Vec<f64> {
    if p.is_zero() || p.degree() == 0 || c > d {
        return Vec::new();
    }
    if p.degree() == 1 {
        let r = -p.coeff(0) / p.coeff(1);
        return if r >= c && r <= d { vec![r] } else { Vec::new() };
    }
    let mut fences = vec![c];
    fences.extend(real_roots_in(&p.derivative(), c, d));
    fences.push(d);

    let mut roots: Vec<f64> = Vec::new();
    for w in fences.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (p.eval(lo), p.eval(hi));
        let r = if flo == 0.0 {
            Some(lo)
        } else if fhi == 0.0 {
            Some(hi)
        } else if flo.signum() != fhi.signum() {
            Some(bisect(p, lo, hi, flo))
        } else {
            None
        };
        if let Some(r) = r {
            if roots.last().map_or(true, |&last| r > last) {
                roots.push(r);
            }
        }
    }
    roots
}

fn bisect(p: &Polynomial, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let lo_sign = flo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(argmin, min)` of `p` over `[c, d]`, from endpoints and critical points.
pub fn minimum_on(p: &Polynomial, c: f64, d: f64) -> (f64, f64) {
    let mut best = (c, p.eval(c));
    let mut consider = |x: f64| {
        let v = p.eval(x);
        if v < best.1 {
            best = (x, v);
        }
    };
    consider(d);
    for x in real_roots_in(&p.derivative(), c, d) {
        consider(x);
    }
    best
}

/// `p(x) ≥ -POLY_EPS` for every `x` in `[c, d]`.
pub fn is_nonnegative_on(p: &Polynomial, c: f64, d: f64) -> Result<bool> {
    is_nonnegative_on_with(p, c, d, POLY_EPS)
}

pub fn is_nonnegative_on_with(p: &Polynomial, c: f64, d: f64, eps: f64) -> Result<bool> {
    if !(c < d) || !c.is_finite() || !d.is_finite() {
        return Err(Error::InvalidInput(format!(
            "degenerate interval [{c}, {d}]"
        )));
    }
    Ok(minimum_on(p, c, d).1 >= -eps)
}
