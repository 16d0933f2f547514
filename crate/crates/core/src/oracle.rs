//! Brute-force convexity checks straight from the definitions: divided
//! differences of order `n + 1` must be nonnegative, and so must iterated
//! forward differences of multiply monotone functions.
//!
//! Nothing here looks at a spectral form; the checks only evaluate the
//! function, which is what makes them usable as independent ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::polynomial::binomial;
use crate::spectral::NConvexFn;

/// Newton triangle: `columns[k][i] = f[x_i, …, x_{i+k}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DividedDifferenceTable {
    nodes: Vec<f64>,
    columns: Vec<Vec<f64>>,
}

impl DividedDifferenceTable {
    pub fn new(nodes: &[f64], values: &[f64]) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidInput("divided differences need at least one node".into()));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput(
                "divided-difference nodes must be strictly increasing".into(),
            ));
        }
        let mut columns = vec![values.to_vec()];
        for k in 1..nodes.len() {
            let prev = &columns[k - 1];
            let next = (0..nodes.len() - k)
                .map(|i| (prev[i + 1] - prev[i]) / (nodes[i + k] - nodes[i]))
                .collect();
            columns.push(next);
        }
        Ok(Self {
            nodes: nodes.to_vec(),
            columns,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn column(&self, k: usize) -> &[f64] {
        &self.columns[k]
    }

    /// `f[x_0, …, x_m]`.
    pub fn top(&self) -> f64 {
        self.columns.last().unwrap()[0]
    }
}

/// Relative rounding allowance per unit of [`divided_difference_scale`].
pub const ROUNDING: f64 = 1024.0 * f64::EPSILON;

/// Top entry of the Newton triangle; needs at least two nodes.
pub fn divided_difference(points: &[f64], values: &[f64]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidInput("divided differences need at least two points".into()));
    }
    Ok(DividedDifferenceTable::new(points, values)?.top())
}

/// The rounding scale of `f[x_0, …, x_m]` computed from values whose own
/// rounding scales are `magnitudes`: `Σ |m_i| / |w'(x_i)|`, with `w` the
/// node polynomial. This is the size of the terms in the explicit
/// (Lagrange) formula for the divided difference.
pub fn divided_difference_scale(points: &[f64], magnitudes: &[f64]) -> f64 {
    points
        .iter()
        .zip(magnitudes)
        .enumerate()
        .map(|(i, (&xi, &mi))| {
            let w: f64 = points
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &xj)| (xi - xj).abs())
                .product();
            mi.abs() / w
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    pub divided_difference: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub trials: usize,
    /// Smallest observed divided difference relative to its threshold.
    pub worst_ratio: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    /// Points around which some node sets are clustered (atoms,
    /// breakpoints, anchors).
    pub hints: Vec<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            trials: 500,
            tol: 1e-9,
            seed: 0,
            hints: Vec::new(),
        }
    }
}

/// Draw `count` strictly increasing points inside `domain`, cycling between
/// uniform draws, Chebyshev nodes of a random subinterval, and clusters
/// around a hint.
fn sample_points(rng: &mut ChaCha8Rng, domain: Domain, count: usize, trial: usize, hints: &[f64]) -> Vec<f64> {
    let (a, b) = (domain.start(), domain.end());
    let width = b - a;
    let margin = 1e-9 * width;
    let clamp = |x: f64| x.clamp(a + margin, b - margin);
    loop {
        let mode = if hints.is_empty() { trial % 2 } else { trial % 3 };
        let mut pts: Vec<f64> = match mode {
            0 => (0..count).map(|_| rng.random_range(a..b)).collect(),
            1 => {
                let u = rng.random_range(a..b);
                let v = rng.random_range(a..b);
                let sub = Domain::new(u.min(v), u.max(v)).unwrap_or(domain);
                sub.chebyshev_nodes(count)
            }
            _ => {
                let h = hints[rng.random_range(0..hints.len())];
                let w = width * 10f64.powf(-rng.random_range(0.5..4.0));
                (0..count).map(|_| clamp(h + rng.random_range(-w..w))).collect()
            }
        };
        pts.sort_by(f64::total_cmp);
        let spread = pts.last().unwrap() - pts[0];
        if pts.windows(2).all(|p| p[1] - p[0] > 1e-6 * spread.max(1e-300))
            && pts.iter().all(|x| domain.contains(*x))
        {
            return pts;
        }
    }
}

/// Sample divided differences of order `n + 1` of `f`, which returns each
/// value together with its rounding scale. A trial fails when the divided
/// difference is below `-(tol · max |f(x_i)| + ROUNDING · Σ m_i / |w'(x_i)|)`:
/// the first term is the tolerance proper, the second bounds the rounding
/// error of the divided difference (see [`divided_difference_scale`]).
pub fn check_n_convex_with<F>(f: F, n: usize, domain: Domain, config: &OracleConfig) -> Result<Verdict>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    run_trials(
        |pts| Ok(pts.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?.into_iter().unzip()),
        n,
        domain,
        config,
    )
}

/// [`check_n_convex_with`] for a plain function; every value of a node set
/// gets the largest `|f|` sampled on that set as its magnitude.
pub fn check_n_convex<F>(f: F, n: usize, domain: Domain, config: &OracleConfig) -> Result<Verdict>
where
    F: Fn(f64) -> Result<f64>,
{
    run_trials(
        |pts| {
            let values = pts.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
            let top = values.iter().fold(0f64, |m, v| m.max(v.abs()));
            Ok((values, vec![top; pts.len()]))
        },
        n,
        domain,
        config,
    )
}

fn run_trials<F>(sample: F, n: usize, domain: Domain, config: &OracleConfig) -> Result<Verdict>
where
    F: Fn(&[f64]) -> Result<(Vec<f64>, Vec<f64>)>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let hints: Vec<f64> = config.hints.iter().copied().filter(|h| domain.contains(*h)).collect();
    let mut worst = f64::INFINITY;
    for trial in 0..config.trials {
        let pts = sample_points(&mut rng, domain, n + 2, trial, &hints);
        let (values, mags) = sample(&pts)?;
        let dd = divided_difference(&pts, &values)?;
        let sup = values.iter().fold(0f64, |m, v| m.max(v.abs()));
        let threshold = -(config.tol * sup + ROUNDING * divided_difference_scale(&pts, &mags));
        if threshold < 0.0 {
            worst = worst.min(dd / -threshold);
        }
        if dd < threshold {
            return Ok(Verdict {
                passed: false,
                trials: trial + 1,
                worst_ratio: worst,
                witness: Some(Witness {
                    points: pts,
                    values,
                    divided_difference: dd,
                    threshold,
                }),
            });
        }
    }
    Ok(Verdict {
        passed: true,
        trials: config.trials,
        worst_ratio: if worst.is_finite() { worst } else { 0.0 },
        witness: None,
    })
}

/// Check the spectral function `f` with its exact rounding magnitudes and
/// the features of its convexity measure as hints.
pub fn check_function(f: &NConvexFn, config: &OracleConfig) -> Result<Verdict> {
    let mut config = config.clone();
    config.hints.extend(f.convexity_measure().feature_points());
    config.hints.push(f.form().xi());
    check_n_convex_with(|x| f.evaluate_with_magnitude(x), f.order(), f.domain(), &config)
}

/// Check that `f - g` is `n`-convex.
pub fn check_difference(f: &NConvexFn, g: &NConvexFn, config: &OracleConfig) -> Result<Verdict> {
    f.check_compatible(g)?;
    let mut config = config.clone();
    config.hints.extend(f.convexity_measure().feature_points());
    config.hints.extend(g.convexity_measure().feature_points());
    check_n_convex_with(
        |x| {
            let (fv, fm) = f.evaluate_with_magnitude(x)?;
            let (gv, gm) = g.evaluate_with_magnitude(x)?;
            Ok((fv - gv, fm + gm))
        },
        f.order(),
        f.domain(),
        &config,
    )
}

/// Evaluation points of a difference expansion with their integer weights,
/// sorted by point. Offsets are accumulated by repeated addition in step
/// order, so equal steps always produce identical points.
fn difference_stencil(x: f64, steps: &[f64]) -> Vec<(f64, i64)> {
    let k = steps.len();
    let mut terms: Vec<(f64, i64)> = (0u64..1 << k)
        .map(|mask| {
            let mut offset = 0.0;
            for (i, h) in steps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    offset += h;
                }
            }
            let sign = if (k - mask.count_ones() as usize) % 2 == 0 { 1 } else { -1 };
            (x + offset, sign)
        })
        .collect();
    terms.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut merged: Vec<(f64, i64)> = Vec::with_capacity(terms.len());
    for (p, w) in terms {
        match merged.last_mut() {
            Some(last) if last.0 == p => last.1 += w,
            _ => merged.push((p, w)),
        }
    }
    merged.retain(|t| t.1 != 0);
    merged
}

fn apply_stencil<F>(f: F, domain: Domain, stencil: &[(f64, i64)]) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut acc = 0.0;
    for &(p, w) in stencil {
        domain.check_contains(p)?;
        acc += w as f64 * f(p)?;
    }
    Ok(acc)
}

/// Difference value together with `Σ |weight · f(point)|`.
pub(crate) fn iterated_diff_with_scale<F>(f: F, domain: Domain, x: f64, steps: &[f64]) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut acc = 0.0;
    let mut scale = 0.0;
    for (p, w) in difference_stencil(x, steps) {
        domain.check_contains(p)?;
        let term = w as f64 * f(p)?;
        acc += term;
        scale += term.abs();
    }
    Ok((acc, scale))
}

/// `Δ_{h_k} ⋯ Δ_{h_1} f(x)` with `Δ_h f(x) = f(x + h) - f(x)`.
pub fn iterated_diff<F>(f: F, domain: Domain, x: f64, steps: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    apply_stencil(f, domain, &difference_stencil(x, steps))
}

/// `(Δ_h)^k f(x) = Σ_j (-1)^(k-j) C(k, j) f(x + j h)`.
pub fn equal_step_diff<F>(f: F, domain: Domain, x: f64, h: f64, k: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut stencil: Vec<(f64, i64)> = (0..=k)
        .map(|j| {
            let mut offset = 0.0;
            for _ in 0..j {
                offset += h;
            }
            let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
            (x + offset, sign * binomial(k, j) as i64)
        })
        .collect();
    stencil.sort_by(|p, q| p.0.total_cmp(&q.0));
    apply_stencil(f, domain, &stencil)
}
