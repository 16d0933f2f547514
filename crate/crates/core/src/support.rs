//! Support polynomials of `(l_1, …, l_k)`-type: `p ∈ Π_n` touching `f` at
//! `x_j` with multiplicity `l_j`, so that `f - p` has sign
//! `(-1)^(n+1-(l_1+…+l_j))` between `x_j` and `x_{j+1}`.
//!
//! `p` is the Hermite interpolant of the right derivatives of `f`; the sign
//! chain is then verified on a grid rather than assumed.

use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::measure::{Continuity, Decision};
use crate::order::relative_convex;
use crate::polynomial::{hermite_interpolate, HermiteNode, Polynomial};
use crate::spectral::NConvexFn;

/// Grid points per interval.
const GRID: usize = 300;
/// Half-width of the excluded band around each node, relative to `b - a`.
const BAND: f64 = 1e-8;
/// Allowed violation relative to the sampled magnitude of `f` and `p`.
const SIGN_TOL: f64 = 1e-8;
/// Allowed node mismatch relative to the same magnitude.
const NODE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportSpec {
    nodes: Vec<f64>,
    multiplicities: Vec<usize>,
}

impl SupportSpec {
    /// Nodes must be strictly increasing and inside the open domain, with
    /// multiplicities `≥ 1` summing to `n + 1`.
    pub fn new(n: usize, domain: Domain, nodes: Vec<(f64, usize)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("support needs at least one node".into()));
        }
        let total: usize = nodes.iter().map(|(_, l)| l).sum();
        if total != n + 1 {
            return Err(Error::ArityMismatch {
                expected: n + 1,
                got: total,
            });
        }
        if nodes.iter().any(|(_, l)| *l == 0) {
            return Err(Error::InvalidInput("multiplicities must be at least 1".into()));
        }
        for (x, _) in &nodes {
            domain.check_contains(*x)?;
        }
        if nodes.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::InvalidInput("support nodes must be strictly increasing".into()));
        }
        let (nodes, multiplicities) = nodes.into_iter().unzip();
        Ok(Self {
            nodes,
            multiplicities,
        })
    }

    /// Parse `"x:l,x:l,…"`.
    pub fn parse_nodes(text: &str) -> Result<Vec<(f64, usize)>> {
        text.split(',')
            .map(|item| {
                let (x, l) = item.trim().split_once(':').ok_or_else(|| {
                    Error::InvalidInput(format!("node `{item}` is not of the form x:l"))
                })?;
                let x: f64 = x
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad node location `{x}`")))?;
                let l: usize = l
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad multiplicity `{l}`")))?;
                Ok((x, l))
            })
            .collect()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Expected sign of `f - p` on `I_j` for `j = 0..=k`.
    pub fn expected_signs(&self, n: usize) -> Vec<i8> {
        let mut acc = 0;
        let mut signs = vec![sign_for(n + 1)];
        for l in &self.multiplicities {
            acc += l;
            signs.push(sign_for(n + 1 - acc));
        }
        signs
    }
}

fn sign_for(power: usize) -> i8 {
    if power % 2 == 0 { 1 } else { -1 }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalCheck {
    pub start: f64,
    pub end: f64,
    pub expected_sign: i8,
    pub passed: bool,
    /// Largest `-(sign · (f - p))` seen, zero if none negative.
    pub violation: f64,
    /// Where the largest violation occurred.
    pub witness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportResult {
    pub p: Polynomial,
    pub intervals: Vec<IntervalCheck>,
    /// `max_j |f(x_j) - p(x_j)|`.
    pub node_residual: f64,
    pub max_violation: f64,
    /// Largest `|f|`, `|p|` on the grid; tolerances are relative to it.
    pub scale: f64,
    /// `p ≤ f` to the right of the last node.
    pub below_right_of_last: bool,
    /// `f - p` keeps its sign across every node of even multiplicity.
    pub even_nodes_same_side: bool,
    pub passed: bool,
}

fn verify<H, D>(h: H, deriv: D, n: usize, domain: Domain, spec: &SupportSpec) -> Result<SupportResult>
where
    H: Fn(f64) -> Result<f64>,
    D: Fn(usize, f64) -> Result<f64>,
{
    let hermite = spec
        .nodes
        .iter()
        .zip(&spec.multiplicities)
        .map(|(&x, &l)| Ok(HermiteNode::new(x, (0..l).map(|i| deriv(i, x)).collect::<Result<Vec<_>>>()?)))
        .collect::<Result<Vec<_>>>()?;
    let p = hermite_interpolate(&hermite, n)?;

    let band = BAND * domain.width();
    let mut cuts = vec![domain.start()];
    cuts.extend_from_slice(&spec.nodes);
    cuts.push(domain.end());
    let signs = spec.expected_signs(n);

    let mut samples: Vec<Vec<(f64, f64, f64)>> = Vec::new();
    let mut scale: f64 = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0] + band, w[1] - band);
        let mut pts = Vec::with_capacity(GRID);
        if lo < hi {
            for i in 0..GRID {
                let x = lo + (hi - lo) * i as f64 / (GRID - 1) as f64;
                let (hv, pv) = (h(x)?, p.eval(x));
                scale = scale.max(hv.abs()).max(pv.abs());
                pts.push((x, hv, pv));
            }
        }
        samples.push(pts);
    }
    let mut node_residual: f64 = 0.0;
    for &x in &spec.nodes {
        let hv = h(x)?;
        scale = scale.max(hv.abs());
        node_residual = node_residual.max((hv - p.eval(x)).abs());
    }

    let tol = SIGN_TOL * scale;
    let intervals: Vec<IntervalCheck> = samples
        .iter()
        .enumerate()
        .map(|(j, pts)| {
            let s = signs[j] as f64;
            let mut violation: f64 = 0.0;
            let mut witness = None;
            for &(x, hv, pv) in pts {
                let v = -s * (hv - pv);
                if v > violation {
                    violation = v;
                    witness = Some(x);
                }
            }
            IntervalCheck {
                start: cuts[j],
                end: cuts[j + 1],
                expected_sign: signs[j],
                passed: violation <= tol,
                violation,
                witness,
            }
        })
        .collect();
    let max_violation = intervals.iter().map(|c| c.violation).fold(0.0, f64::max);
    let below_right_of_last = intervals.last().is_some_and(|c| c.passed);
    let even_nodes_same_side = spec
        .multiplicities
        .iter()
        .enumerate()
        .filter(|(_, l)| *l % 2 == 0)
        .all(|(j, _)| intervals[j].passed && intervals[j + 1].passed);
    let passed = intervals.iter().all(|c| c.passed) && node_residual <= NODE_TOL * scale.max(f64::MIN_POSITIVE);
    Ok(SupportResult {
        p,
        intervals,
        node_residual,
        max_violation,
        scale,
        below_right_of_last,
        even_nodes_same_side,
        passed: passed || (scale == 0.0 && node_residual == 0.0),
    })
}

pub fn support_polynomial(f: &NConvexFn, spec: &SupportSpec) -> Result<SupportResult> {
    verify(
        |x| f.evaluate(x),
        |m, x| f.derivative(m, x, Continuity::Right),
        f.order(),
        f.domain(),
        spec,
    )
}

/// Support of `f - g`; `g + p` then supports `f` relative to `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeSupport {
    pub result: SupportResult,
    pub g_plus_p: NConvexFn,
}

pub fn relative_support(f: &NConvexFn, g: &NConvexFn, spec: &SupportSpec) -> Result<RelativeSupport> {
    match relative_convex(f, g)? {
        Decision::True => {}
        other => {
            return Err(Error::Precondition(format!(
                "relative support needs f ⪰_n g, which is {other}"
            )))
        }
    }
    let result = verify(
        |x| Ok(f.evaluate(x)? - g.evaluate(x)?),
        |m, x| Ok(f.derivative(m, x, Continuity::Right)? - g.derivative(m, x, Continuity::Right)?),
        f.order(),
        f.domain(),
        spec,
    )?;
    let g_plus_p = g.plus_polynomial(&result.p)?;
    Ok(RelativeSupport { result, g_plus_p })
}
