use serde::Serialize;

use super::{NConvexFn, SpectralForm};
use crate::domain::locations_equal;
use crate::measure::{Atom, Continuity, Measure};

/// Sign behaviour of `f^(n)` on `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    /// `f^(n)` changes sign.
    A,
    /// `f^(n) ≥ 0`.
    B,
    /// `f^(n) ≤ 0`.
    C,
}

/// `(f^(n)(a+), f^(n)(b-), scale)`.
fn end_limits(form: &SpectralForm) -> (f64, f64, f64) {
    let c = form.leading_term();
    let minus = form.mu_minus().total_mass();
    let plus = form.mu_plus().total_mass();
    (c - minus, c + plus, c.abs() + minus + plus)
}

pub(super) fn classify(form: &SpectralForm) -> Case {
    let (lo, hi, scale) = end_limits(form);
    let tiny = 1e-12 * scale;
    if lo >= -tiny {
        Case::B
    } else if hi <= tiny {
        Case::C
    } else {
        Case::A
    }
}

/// Rewrite a form with the canonical anchor: `ξ = a` in case B, `ξ = b` in
/// case C, and in case A the smallest `ξ` with `f^(n)(ξ+) ≥ 0`, splitting an
/// atom at `ξ` so that `f^(n)(ξ-) ≤ 0 ≤ f^(n)(ξ+)`.
pub fn canonicalize(form: &SpectralForm) -> NConvexFn {
    let domain = form.domain();
    let f = NConvexFn::new(form.clone());
    let mu = f.convexity_measure().clone();
    let zero = Measure::zero(domain);
    let (xi, minus, plus) = match classify(form) {
        Case::B => (domain.start(), zero, mu),
        Case::C => (domain.end(), mu, zero),
        Case::A => split_at_sign_change(&mu, -end_limits(form).0),
    };
    let unchanged = locations_equal(xi, form.xi())
        && minus.approx_eq(form.mu_minus())
        && plus.approx_eq(form.mu_plus());
    if unchanged {
        return f;
    }
    let fitted = SpectralForm::fit_split(form.order(), xi, minus, plus, |x| form.evaluate(x))
        .expect("canonical split of a valid form is valid");
    NConvexFn::new(fitted)
}

/// Put mass `target` (strictly less than the total) on the minus side,
/// taking it from the left.
fn split_at_sign_change(mu: &Measure, target: f64) -> (f64, Measure, Measure) {
    let domain = mu.domain();
    let threshold = target * (1.0 - 1e-14);
    let (mut lo, mut hi) = (domain.start(), domain.end());
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mu.cumulative(mid, Continuity::Right) >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut xi = hi;
    let atom = mu.atoms().iter().find(|a| locations_equal(a.location, xi)).copied();
    if let Some(at) = atom {
        xi = at.location;
    }
    let (below, rest) = mu.split_at_open(xi);
    let Some(at) = atom else {
        return (xi, below, rest);
    };
    let partial = (target - below.total_mass()).clamp(0.0, at.mass);
    if partial == 0.0 {
        return (xi, below, rest);
    }
    let minus_atoms: Vec<Atom> = below
        .atoms()
        .iter()
        .copied()
        .chain(std::iter::once(Atom::new(xi, partial)))
        .collect();
    let plus_atoms: Vec<Atom> = rest
        .atoms()
        .iter()
        .map(|a| {
            if a.location == xi {
                Atom::new(xi, a.mass - partial)
            } else {
                *a
            }
        })
        .collect();
    (xi, below.with_atoms(minus_atoms), rest.with_atoms(plus_atoms))
}
