//! Nonnegative measures on a finite interval stored as three exact parts:
//! point masses, a piecewise-polynomial density, and scaled Cantor measures.

mod cantor;
mod distribution;

use serde::{Serialize, Serializer};

pub use cantor::{cantor_cdf, common_refinement, mass_near_cut, truncated_moment, AlignedCell, CantorPart};
pub use distribution::{Continuity, DistributionFn};

use crate::domain::{locations_equal, Domain};
use crate::error::{Error, Result};
use crate::polynomial::{
    is_nonnegative_on, is_nonnegative_on_with, kernel_moment_with_magnitude, real_roots_in,
    PiecewisePoly, Polynomial, Side, POLY_EPS,
};
use crate::polynomial::piecewise_refine as refine;

/// Largest density piece degree accepted.
pub const MAX_DENSITY_DEGREE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(location: f64, mass: f64) -> Self {
        Self { location, mass }
    }
}

/// Three-valued answer for questions the representation may not settle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    True,
    False,
    Undecidable,
}

impl Decision {
    pub fn is_true(self) -> bool {
        self == Decision::True
    }

    pub fn from_bool(b: bool) -> Self {
        if b { Decision::True } else { Decision::False }
    }

    /// Conjunction: any `False` wins, then any `Undecidable`.
    pub fn and(self, other: Decision) -> Decision {
        match (self, other) {
            (Decision::False, _) | (_, Decision::False) => Decision::False,
            (Decision::Undecidable, _) | (_, Decision::Undecidable) => Decision::Undecidable,
            _ => Decision::True,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::True => "true",
            Decision::False => "false",
            Decision::Undecidable => "undecidable",
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Decision {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    domain: Domain,
    atoms: Vec<Atom>,
    density: Option<PiecewisePoly>,
    singular: Vec<CantorPart>,
}

impl Measure {
    pub fn zero(domain: Domain) -> Self {
        Self {
            domain,
            atoms: Vec::new(),
            density: None,
            singular: Vec::new(),
        }
    }

    /// Validate and normalize the three parts.
    pub fn new(
        domain: Domain,
        atoms: Vec<Atom>,
        density: Option<PiecewisePoly>,
        singular: Vec<CantorPart>,
    ) -> Result<Self> {
        let (a, b) = (domain.start(), domain.end());
        for at in &atoms {
            if !at.location.is_finite() || !at.mass.is_finite() {
                return Err(Error::InvalidInput("atom location and mass must be finite".into()));
            }
            if !domain.contains(at.location) {
                return Err(Error::InvalidInput(format!(
                    "atom at {} lies outside ({a}, {b})",
                    at.location
                )));
            }
            if at.mass < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "atom at {} has negative mass {}",
                    at.location, at.mass
                )));
            }
        }
        if let Some(rho) = &density {
            let (lo, hi) = rho.support();
            if (lo < a && !locations_equal(lo, a)) || (hi > b && !locations_equal(hi, b)) {
                return Err(Error::InvalidInput(format!(
                    "density support [{lo}, {hi}] exceeds ({a}, {b})"
                )));
            }
            for (c, d, p) in rho.segments() {
                if p.degree() > MAX_DENSITY_DEGREE {
                    return Err(Error::InvalidInput(format!(
                        "density piece on [{c}, {d}] has degree {} > {MAX_DENSITY_DEGREE}",
                        p.degree()
                    )));
                }
                if !is_nonnegative_on(p, c, d)? {
                    return Err(Error::InvalidInput(format!(
                        "density piece on [{c}, {d}] takes negative values"
                    )));
                }
            }
        }
        let mut parts = singular.clone();
        parts.sort_by(|x, y| x.start.total_cmp(&y.start));
        for p in &parts {
            if !(p.start.is_finite() && p.end.is_finite() && p.mass.is_finite()) {
                return Err(Error::InvalidInput("Cantor part fields must be finite".into()));
            }
            if !(p.start < p.end) {
                return Err(Error::InvalidInput(format!(
                    "Cantor part needs start < end, got [{}, {}]",
                    p.start, p.end
                )));
            }
            if p.start < a || p.end > b {
                return Err(Error::InvalidInput(format!(
                    "Cantor part [{}, {}] exceeds [{a}, {b}]",
                    p.start, p.end
                )));
            }
            if p.mass < 0.0 {
                return Err(Error::InvalidInput("Cantor part mass must be nonnegative".into()));
            }
        }
        if parts.windows(2).any(|w| w[1].start < w[0].end) {
            return Err(Error::InvalidInput("Cantor part intervals must be disjoint".into()));
        }
        Ok(Self::from_parts(domain, atoms, density, parts))
    }

    /// Normalizing constructor without validation, for results of operations
    /// on already valid measures.
    pub(crate) fn from_parts(
        domain: Domain,
        mut atoms: Vec<Atom>,
        density: Option<PiecewisePoly>,
        singular: Vec<CantorPart>,
    ) -> Self {
        atoms.retain(|at| at.mass > 0.0);
        atoms.sort_by(|x, y| x.location.total_cmp(&y.location));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for at in atoms {
            match merged.last_mut() {
                Some(last) if locations_equal(last.location, at.location) => last.mass += at.mass,
                _ => merged.push(at),
            }
        }
        let density = density.and_then(|rho| {
            PiecewisePoly::from_segments(rho.segments().map(|(c, d, p)| (c, d, p.clone())).collect())
        });
        Self {
            domain,
            atoms: merged,
            density,
            singular: cantor::normalize(singular),
        }
    }

    /// Same density and singular part, atoms replaced.
    pub(crate) fn with_atoms(&self, atoms: Vec<Atom>) -> Measure {
        Measure::from_parts(self.domain, atoms, self.density.clone(), self.singular.clone())
    }

    pub fn atom(domain: Domain, location: f64, mass: f64) -> Result<Self> {
        Self::new(domain, vec![Atom::new(location, mass)], None, Vec::new())
    }

    pub fn with_density(domain: Domain, density: PiecewisePoly) -> Result<Self> {
        Self::new(domain, Vec::new(), Some(density), Vec::new())
    }

    /// Constant density `value` on `[c, d)`.
    pub fn uniform(domain: Domain, c: f64, d: f64, value: f64) -> Result<Self> {
        Self::with_density(domain, PiecewisePoly::single(c, d, Polynomial::constant(value))?)
    }

    pub fn cantor(domain: Domain, c: f64, d: f64, mass: f64) -> Result<Self> {
        Self::new(domain, Vec::new(), None, vec![CantorPart::new(c, d, mass)])
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&PiecewisePoly> {
        self.density.as_ref()
    }

    pub fn singular(&self) -> &[CantorPart] {
        &self.singular
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.density.is_none() && self.singular.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>()
            + self.density.as_ref().map_or(0.0, PiecewisePoly::total_integral)
            + self.singular.iter().map(|p| p.mass).sum::<f64>()
    }

    /// `μ((a, x])` (right) or `μ((a, x))` (left).
    pub fn cumulative(&self, x: f64, continuity: Continuity) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .take_while(|at| match continuity {
                Continuity::Right => at.location <= x,
                Continuity::Left => at.location < x,
            })
            .map(|at| at.mass)
            .sum();
        let dens = self.density.as_ref().map_or(0.0, |rho| rho.integral_to(x));
        let sing: f64 = self.singular.iter().map(|p| p.cumulative(x)).sum();
        atoms + dens + sing
    }

    /// The signed cumulative mass anchored at `anchor`.
    pub fn cdf(&self, anchor: f64, continuity: Continuity) -> DistributionFn {
        DistributionFn::new(self.clone(), anchor, continuity)
    }

    /// Smallest closed interval containing every part, `None` for zero.
    pub fn support_hull(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for at in &self.atoms {
            lo = lo.min(at.location);
            hi = hi.max(at.location);
        }
        if let Some(rho) = &self.density {
            let (c, d) = rho.support();
            lo = lo.min(c);
            hi = hi.max(d);
        }
        for p in &self.singular {
            lo = lo.min(p.start);
            hi = hi.max(p.end);
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Atom locations, density breakpoints and Cantor endpoints.
    pub fn feature_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.atoms.iter().map(|a| a.location).collect();
        if let Some(rho) = &self.density {
            pts.extend_from_slice(rho.breakpoints());
        }
        for p in &self.singular {
            pts.push(p.start);
            pts.push(p.end);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|x, y| locations_equal(*x, *y));
        pts
    }

    /// `∫ K(x, u) μ(du)` for the kernel of order `k` on the given side, and the
    /// integral of `|K|` against the absolute values involved (a rounding
    /// scale). For `k = 0` a point mass at `u = x` counts according to
    /// `continuity`.
    pub fn kernel_integral(&self, x: f64, k: usize, side: Side, continuity: Continuity) -> (f64, f64) {
        let mut value = 0.0;
        let mut magnitude = 0.0;
        for at in &self.atoms {
            let kv = if k == 0 {
                let on = match (side, continuity) {
                    (Side::Plus, Continuity::Right) => at.location <= x,
                    (Side::Plus, Continuity::Left) => at.location < x,
                    (Side::Minus, Continuity::Right) => at.location > x,
                    (Side::Minus, Continuity::Left) => at.location >= x,
                };
                match (on, side) {
                    (false, _) => 0.0,
                    (true, Side::Plus) => 1.0,
                    (true, Side::Minus) => -1.0,
                }
            } else {
                side.kernel(x, at.location, k)
            };
            value += at.mass * kv;
            magnitude += (at.mass * kv).abs();
        }
        if let Some(rho) = &self.density {
            for (c, d, p) in rho.segments() {
                let (v, m) = kernel_moment_with_magnitude(p, (c, d), x, k, side);
                value += v;
                magnitude += m;
            }
        }
        for part in &self.singular {
            let (v, m) = part.kernel_integral(x, k, side);
            value += v;
            magnitude += m;
        }
        (value, magnitude)
    }

    pub fn add(&self, other: &Measure) -> Result<Measure> {
        self.domain.check_same(&other.domain)?;
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let density = match (&self.density, &other.density) {
            (None, None) => None,
            (f, g) => PiecewisePoly::from_segments(
                refine(f.as_ref(), g.as_ref())
                    .into_iter()
                    .map(|(c, d, p, q)| (c, d, &p + &q))
                    .collect(),
            ),
        };
        let mut singular = self.singular.clone();
        singular.extend_from_slice(&other.singular);
        Ok(Measure::from_parts(self.domain, atoms, density, singular))
    }

    /// `c · μ` for `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<Measure> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::InvalidInput(format!("measure scale must be finite and ≥ 0, got {c}")));
        }
        let atoms = self.atoms.iter().map(|a| Atom::new(a.location, c * a.mass)).collect();
        let density = self.density.as_ref().and_then(|rho| rho.scale(c));
        let singular = self
            .singular
            .iter()
            .map(|p| CantorPart::new(p.start, p.end, c * p.mass))
            .collect();
        Ok(Measure::from_parts(self.domain, atoms, density, singular))
    }

    /// Restrictions to `(a, s]` and `(s, b)`.
    pub fn split_at(&self, s: f64) -> (Measure, Measure) {
        self.split(s, Continuity::Right)
    }

    /// Restrictions to `(a, s)` and `[s, b)`.
    pub fn split_at_open(&self, s: f64) -> (Measure, Measure) {
        self.split(s, Continuity::Left)
    }

    fn split(&self, s: f64, continuity: Continuity) -> (Measure, Measure) {
        let (la, ra): (Vec<Atom>, Vec<Atom>) = self.atoms.iter().partition(|at| match continuity {
            Continuity::Right => at.location <= s,
            Continuity::Left => at.location < s,
        });
        let (ld, rd) = match &self.density {
            Some(rho) => rho.split_at(s),
            None => (None, None),
        };
        let mut ls = Vec::new();
        let mut rs = Vec::new();
        for p in &self.singular {
            let (l, r) = cantor::split_at(p, s);
            ls.extend(l);
            rs.extend(r);
        }
        (
            Measure::from_parts(self.domain, la, ld, ls),
            Measure::from_parts(self.domain, ra, rd, rs),
        )
    }

    /// `self ≤ other`, decided part by part.
    pub fn leq(&self, other: &Measure) -> Result<Decision> {
        self.domain.check_same(&other.domain)?;
        let atoms_ok = self.atoms.iter().all(|at| {
            other.atoms.iter().any(|bt| {
                locations_equal(at.location, bt.location)
                    && bt.mass >= at.mass - 1e-12 * at.mass.max(1.0)
            })
        });
        let density_ok = refine(self.density.as_ref(), other.density.as_ref())
            .into_iter()
            .all(|(c, d, p, q)| is_nonnegative_on(&(&q - &p), c, d).unwrap_or(true));
        let singular = match common_refinement(&self.singular, &other.singular) {
            Ok(cells) => Decision::from_bool(
                cells
                    .iter()
                    .all(|cell| cell.first <= cell.second + 1e-12 * cell.first.max(1.0)),
            ),
            Err(_) => Decision::Undecidable,
        };
        Ok(Decision::from_bool(atoms_ok)
            .and(Decision::from_bool(density_ok))
            .and(singular))
    }

    /// Least upper bound: atom-wise, pointwise and cylinder-wise maxima.
    pub fn join(&self, other: &Measure) -> Result<Measure> {
        self.lattice(other, true)
    }

    /// Greatest lower bound: atom-wise, pointwise and cylinder-wise minima.
    pub fn meet(&self, other: &Measure) -> Result<Measure> {
        self.lattice(other, false)
    }

    fn lattice(&self, other: &Measure, upper: bool) -> Result<Measure> {
        self.domain.check_same(&other.domain)?;
        let pick = |x: f64, y: f64| if upper { x.max(y) } else { x.min(y) };

        let mut locations: Vec<f64> = self
            .atoms
            .iter()
            .chain(&other.atoms)
            .map(|a| a.location)
            .collect();
        locations.sort_by(f64::total_cmp);
        locations.dedup_by(|x, y| locations_equal(*x, *y));
        let mass_at = |m: &Measure, loc: f64| {
            m.atoms
                .iter()
                .find(|a| locations_equal(a.location, loc))
                .map_or(0.0, |a| a.mass)
        };
        let atoms = locations
            .into_iter()
            .map(|loc| Atom::new(loc, pick(mass_at(self, loc), mass_at(other, loc))))
            .collect();

        let mut segments = Vec::new();
        for (c, d, p, q) in refine(self.density.as_ref(), other.density.as_ref()) {
            let diff = &p - &q;
            let mut cuts = vec![c];
            cuts.extend(real_roots_in(&diff, c, d).into_iter().filter(|r| *r > c && *r < d));
            cuts.push(d);
            for w in cuts.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                let p_wins = (diff.eval(mid) >= 0.0) == upper;
                segments.push((w[0], w[1], if p_wins { p.clone() } else { q.clone() }));
            }
        }
        let density = PiecewisePoly::from_segments(segments);

        let singular = common_refinement(&self.singular, &other.singular)?
            .into_iter()
            .map(|cell| CantorPart::new(cell.start, cell.end, pick(cell.first, cell.second)))
            .collect();
        Ok(Measure::from_parts(self.domain, atoms, density, singular))
    }

    /// `(continuous, singular, pure point)` parts.
    pub fn lebesgue_split(&self) -> (Measure, Measure, Measure) {
        let d = self.domain;
        (
            Measure::from_parts(d, Vec::new(), self.density.clone(), Vec::new()),
            Measure::from_parts(d, Vec::new(), None, self.singular.clone()),
            Measure::from_parts(d, self.atoms.clone(), None, Vec::new()),
        )
    }

    /// Part-by-part equality up to rounding: co-located atoms of equal mass,
    /// densities agreeing on every refined cell, Cantor masses agreeing on a
    /// common cylinder refinement.
    pub fn approx_eq(&self, other: &Measure) -> bool {
        if !self.domain.same_as(&other.domain) || self.atoms.len() != other.atoms.len() {
            return false;
        }
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * 1f64.max(x.abs()).max(y.abs());
        let atoms_eq = self.atoms.iter().zip(&other.atoms).all(|(p, q)| {
            locations_equal(p.location, q.location) && close(p.mass, q.mass)
        });
        let density_eq = refine(self.density.as_ref(), other.density.as_ref())
            .into_iter()
            .all(|(c, d, p, q)| {
                let eps = POLY_EPS * 1f64.max(p.max_abs_coeff()).max(q.max_abs_coeff());
                let diff = &p - &q;
                is_nonnegative_on_with(&diff, c, d, eps).unwrap_or(true)
                    && is_nonnegative_on_with(&-&diff, c, d, eps).unwrap_or(true)
            });
        let singular_eq = match common_refinement(&self.singular, &other.singular) {
            Ok(cells) => cells.iter().all(|c| close(c.first, c.second)),
            Err(_) => false,
        };
        atoms_eq && density_eq && singular_eq
    }
}
