//! Relative `n`-convexity `f ⪰_n g` (`f - g` is `n`-convex), its equivalent
//! criteria, the lattice it induces, and strong `n`-convexity.

use serde::Serialize;

use crate::domain::locations_equal;
use crate::error::{Error, Result};
use crate::measure::{common_refinement, Continuity, Decision, Measure};
use crate::oracle::{check_difference, OracleConfig, Verdict};
use crate::polynomial::{is_nonnegative_on, minimum_on, piecewise_refine, Polynomial, POLY_EPS};
use crate::spectral::{NConvexFn, SpectralForm};

/// `f ⪰_n g`, decided on convexity measures: `μ^g ≤ μ^f`.
pub fn relative_convex(f: &NConvexFn, g: &NConvexFn) -> Result<Decision> {
    f.check_compatible(g)?;
    g.convexity_measure().leq(f.convexity_measure())
}

/// Outcome of the Radon–Nikodym criterion `dμ^g / dμ^f ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RatioCriterion {
    /// `μ^g` has a part singular to `μ^f`; the derivative does not exist.
    NotApplicable,
    Holds { max_ratio: f64 },
    Fails { max_ratio: f64 },
}

impl RatioCriterion {
    pub fn decision(&self) -> Option<bool> {
        match self {
            RatioCriterion::NotApplicable => None,
            RatioCriterion::Holds { .. } => Some(true),
            RatioCriterion::Fails { .. } => Some(false),
        }
    }
}

/// The four equivalent forms of `f ⪰_n g`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriteriaReport {
    pub relative: Decision,
    /// a) sampled divided differences of `f - g`.
    pub oracle: Verdict,
    /// b) `μ^f ≥ μ^g`.
    pub measures: Decision,
    /// c) `f^(n+1) ≥ g^(n+1)` in the distributional sense: jumps of the
    /// `n`-th derivatives, densities, Cantor parts.
    pub derivatives: Decision,
    /// d) `dμ^g / dμ^f ≤ 1`.
    pub radon_nikodym: RatioCriterion,
}

/// Evaluate all four criteria; fails with [`Error::Inconsistent`] if any
/// applicable criterion disagrees with the measure order and with
/// [`Error::Undecidable`] if the order cannot be decided.
pub fn criteria_report(f: &NConvexFn, g: &NConvexFn, config: &OracleConfig) -> Result<CriteriaReport> {
    let relative = relative_convex(f, g)?;
    if relative == Decision::Undecidable {
        return Err(Error::Undecidable(
            "Cantor parts of the two convexity measures are not aligned".into(),
        ));
    }
    let oracle = check_difference(f, g, config)?;
    let measures = g.convexity_measure().leq(f.convexity_measure())?;
    let derivatives = derivative_criterion(f, g);
    let radon_nikodym = ratio_criterion(f.convexity_measure(), g.convexity_measure());

    let expected = relative.is_true();
    let mut disagreements = Vec::new();
    if oracle.passed != expected {
        disagreements.push("a) divided differences");
    }
    if measures != relative {
        disagreements.push("b) measures");
    }
    if derivatives != relative {
        disagreements.push("c) derivatives");
    }
    if radon_nikodym.decision().is_some_and(|d| d != expected) {
        disagreements.push("d) Radon-Nikodym");
    }
    if !disagreements.is_empty() {
        return Err(Error::Inconsistent(format!(
            "criteria disagree with f ⪰_n g = {relative}: {}",
            disagreements.join(", ")
        )));
    }
    Ok(CriteriaReport {
        relative,
        oracle,
        measures,
        derivatives,
        radon_nikodym,
    })
}

fn derivative_criterion(f: &NConvexFn, g: &NConvexFn) -> Decision {
    let n = f.order();
    let (mf, mg) = (f.convexity_measure(), g.convexity_measure());
    let scale = 1e-11 * (1.0 + mf.total_mass() + mg.total_mass() + f.form().leading_term().abs() + g.form().leading_term().abs());
    let jump = |h: &NConvexFn, u: f64| -> f64 {
        h.derivative(n, u, Continuity::Right).unwrap_or(0.0) - h.derivative(n, u, Continuity::Left).unwrap_or(0.0)
    };
    let jumps_ok = mf
        .atoms()
        .iter()
        .chain(mg.atoms())
        .all(|at| jump(f, at.location) >= jump(g, at.location) - scale);
    let densities_ok = piecewise_refine(mf.density(), mg.density())
        .into_iter()
        .all(|(c, d, p, q)| minimum_on(&(&p - &q), c, d).1 >= -POLY_EPS);
    let singular = match common_refinement(mf.singular(), mg.singular()) {
        Ok(cells) => Decision::from_bool(cells.iter().all(|c| c.second <= c.first * (1.0 + 1e-12))),
        Err(_) => Decision::Undecidable,
    };
    Decision::from_bool(jumps_ok)
        .and(Decision::from_bool(densities_ok))
        .and(singular)
}

fn ratio_criterion(mf: &Measure, mg: &Measure) -> RatioCriterion {
    let mut max_ratio: f64 = 0.0;
    let mut holds = true;
    for at in mg.atoms() {
        let Some(base) = mf.atoms().iter().find(|b| locations_equal(b.location, at.location)) else {
            return RatioCriterion::NotApplicable;
        };
        let r = at.mass / base.mass;
        max_ratio = max_ratio.max(r);
        holds &= r <= 1.0 + 1e-12;
    }
    for (c, d, pf, pg) in piecewise_refine(mf.density(), mg.density()) {
        if pg.is_zero() {
            continue;
        }
        if pf.is_zero() {
            return RatioCriterion::NotApplicable;
        }
        for i in 0..=64 {
            let x = c + (d - c) * (i as f64 + 0.5) / 65.0;
            let base = pf.eval(x);
            if base > 0.0 {
                max_ratio = max_ratio.max(pg.eval(x) / base);
            }
        }
        holds &= is_nonnegative_on(&(&pf - &pg), c, d).unwrap_or(true);
    }
    match common_refinement(mf.singular(), mg.singular()) {
        Ok(cells) => {
            for cell in cells.iter().filter(|c| c.second > 0.0) {
                if cell.first <= 0.0 {
                    return RatioCriterion::NotApplicable;
                }
                let r = cell.second / cell.first;
                max_ratio = max_ratio.max(r);
                holds &= r <= 1.0 + 1e-12;
            }
        }
        Err(_) => return RatioCriterion::NotApplicable,
    }
    if holds {
        RatioCriterion::Holds { max_ratio }
    } else {
        RatioCriterion::Fails { max_ratio }
    }
}

/// The function with convexity measure `mu`, anchored at the midpoint of
/// the domain, with `Q = 0`.
fn from_measure(n: usize, mu: &Measure) -> Result<NConvexFn> {
    let xi = mu.domain().midpoint();
    SpectralForm::from_measure(n, mu, xi, Polynomial::zero()).map(NConvexFn::new)
}

/// Least upper bound for `⪰_n` (modulo `Π_n`) among functions whose
/// convexity measures are representable here.
pub fn lattice_max(f: &NConvexFn, g: &NConvexFn) -> Result<NConvexFn> {
    f.check_compatible(g)?;
    from_measure(f.order(), &f.convexity_measure().join(g.convexity_measure())?)
}

/// Greatest lower bound for `⪰_n` (modulo `Π_n`) within the representable
/// class.
pub fn lattice_min(f: &NConvexFn, g: &NConvexFn) -> Result<NConvexFn> {
    f.check_compatible(g)?;
    from_measure(f.order(), &f.convexity_measure().meet(g.convexity_measure())?)
}

/// `w = g + ½ (f - g)`, which sits between `f` and `g` whenever `f ⪰_n g`.
pub fn interleave(f: &NConvexFn, g: &NConvexFn) -> Result<NConvexFn> {
    f.scaled(0.5)?.sum(&g.scaled(0.5)?)
}

/// Verdicts of `f ⪰_n g` restricted to the continuous, singular and pure
/// point parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartsComparison {
    pub cont: Decision,
    pub sing: Decision,
    pub pp: Decision,
}

impl PartsComparison {
    pub fn all(&self) -> Decision {
        self.cont.and(self.sing).and(self.pp)
    }
}

pub fn compare_by_parts(f: &NConvexFn, g: &NConvexFn) -> Result<PartsComparison> {
    f.check_compatible(g)?;
    let (fc, fs, fp) = f.lebesgue_parts();
    let (gc, gs, gp) = g.lebesgue_parts();
    Ok(PartsComparison {
        cont: relative_convex(&fc, &gc)?,
        sing: relative_convex(&fs, &gs)?,
        pp: relative_convex(&fp, &gp)?,
    })
}

/// Essential infimum of the density of the convexity measure over the whole
/// domain; zero unless the density covers it.
pub fn strong_modulus(f: &NConvexFn) -> f64 {
    let Some(rho) = f.convexity_measure().density() else {
        return 0.0;
    };
    let (lo, hi) = rho.support();
    let dom = f.domain();
    if !locations_equal(lo, dom.start()) && lo > dom.start()
        || !locations_equal(hi, dom.end()) && hi < dom.end()
    {
        return 0.0;
    }
    rho.segments()
        .map(|(c, d, p)| minimum_on(p, c, d).1)
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
}

/// `f ⪰_n c · x^(n+1) / (n+1)!`, i.e. `f^(n+1) ≥ c` almost everywhere.
pub fn is_strongly_convex(f: &NConvexFn, c: f64) -> Result<bool> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidInput(format!("modulus must be positive, got {c}")));
    }
    Ok(strong_modulus(f) >= c * (1.0 - 1e-12))
}
