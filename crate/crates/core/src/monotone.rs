//! Multiply monotone functions: construction from a measure `β`, the
//! difference-operator test, and the split of an `n`-convex function into
//! two `(n+1)`-times monotone parts and a polynomial.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::measure::{mass_near_cut, Continuity, Measure};
use crate::oracle::iterated_diff_with_scale;
use crate::polynomial::{factorial, Polynomial, Side};
use crate::spectral::{canonicalize, Case, NConvexFn, SpectralForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
}

/// `f(x) = ∫ (x-u)^(n-1)_+ / (n-1)! β(du)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiMonotone {
    beta: Measure,
    n: usize,
}

pub fn monotone_from_beta(beta: Measure, n: usize) -> Result<MultiMonotone> {
    if n == 0 {
        return Err(Error::InvalidInput("monotonicity order must be at least 1".into()));
    }
    Ok(MultiMonotone { beta, n })
}

impl MultiMonotone {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.beta.domain()
    }

    pub fn beta(&self) -> &Measure {
        &self.beta
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.derivative(0, x)
    }

    /// `f^(m)(x)` for `m < n`; `f^(n-1)` is the right-continuous cumulative
    /// mass of `β`.
    pub fn derivative(&self, m: usize, x: f64) -> Result<f64> {
        if m >= self.n {
            return Err(Error::Unsupported(format!(
                "derivative of order {m} of a {}-times monotone function",
                self.n
            )));
        }
        self.domain().check_contains(x)?;
        Ok(self
            .beta
            .kernel_integral(x, self.n - 1 - m, Side::Plus, Continuity::Right)
            .0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneConfig {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for MonotoneConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            tol: 1e-9,
            seed: 0,
        }
    }
}

/// A violated inequality: `k = 0` for `f(x) < 0`, otherwise the order of
/// the difference. `steps` are in the original orientation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneWitness {
    pub k: usize,
    pub x: f64,
    pub steps: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneVerdict {
    pub passed: bool,
    pub checks: usize,
    pub witness: Option<MonotoneWitness>,
}

/// Test `f ≥ 0` on `grid` and `Δ_{h_k} ⋯ Δ_{h_1} f(x) ≥ 0` for `k = 1..n`
/// over random positive steps, plus the equal-step variant, each to
/// `-tol · Σ |terms|`. The non-increasing direction is tested on
/// `y ↦ f(-y)` over the mirrored domain and grid.
pub fn check_multimonotone<F>(
    f: F,
    domain: Domain,
    n: usize,
    direction: Direction,
    grid: &[f64],
    config: &MonotoneConfig,
) -> Result<MonotoneVerdict>
where
    F: Fn(f64) -> Result<f64>,
{
    if grid.is_empty() {
        return Err(Error::InvalidInput("monotonicity check needs a nonempty grid".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("monotonicity order must be at least 1".into()));
    }
    match direction {
        Direction::Nondecreasing => check_nondecreasing(&f, domain, n, grid, config, 1.0),
        Direction::Nonincreasing => {
            let mirrored: Vec<f64> = grid.iter().map(|x| -x).collect();
            check_nondecreasing(&|y: f64| f(-y), domain.reflected(), n, &mirrored, config, -1.0)
        }
    }
}

fn check_nondecreasing<F>(
    f: &F,
    domain: Domain,
    n: usize,
    grid: &[f64],
    config: &MonotoneConfig,
    orientation: f64,
) -> Result<MonotoneVerdict>
where
    F: Fn(f64) -> Result<f64>,
{
    for &x in grid {
        domain.check_contains(x)?;
    }
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let sup = values.iter().fold(0f64, |m, v| m.max(v.abs()));
    let mut checks = 0;
    for (&x, &v) in grid.iter().zip(&values) {
        checks += 1;
        if v < -config.tol * sup {
            return Ok(failed(checks, 0, orientation * x, Vec::new(), v));
        }
    }

    let half = 0.5 * domain.width();
    let roomy: Vec<(f64, f64)> = grid
        .iter()
        .map(|&x| (x, half.min(domain.end() - x) * (1.0 - 1e-9)))
        .filter(|&(_, room)| room > 0.0)
        .collect();
    if roomy.is_empty() {
        return Err(Error::InvalidInput("no grid point leaves room for forward steps".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for trial in 0..config.trials {
        let (x, room) = roomy[rng.random_range(0..roomy.len())];
        let k = 1 + trial % n;
        let total = room * rng.random_range(0.05..1.0);
        let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
        let wsum: f64 = weights.iter().sum();
        let steps: Vec<f64> = weights.iter().map(|w| total * w / wsum).collect();
        let equal = vec![total / k as f64; k];
        for s in [steps, equal] {
            checks += 1;
            let (value, scale) = iterated_diff_with_scale(f, domain, x, &s)?;
            if value < -config.tol * scale {
                let s = s.iter().map(|h| orientation * h).collect();
                return Ok(failed(checks, k, orientation * x, s, value));
            }
        }
    }
    Ok(MonotoneVerdict {
        passed: true,
        checks,
        witness: None,
    })
}

fn failed(checks: usize, k: usize, x: f64, steps: Vec<f64>, value: f64) -> MonotoneVerdict {
    MonotoneVerdict {
        passed: false,
        checks,
        witness: Some(MonotoneWitness { k, x, steps, value }),
    }
}

/// `f = M1 + M2 + Q` with `M1 = Ψ₋` and `M2 = Ψ₊` of the canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub xi: f64,
    pub case: Case,
    /// `(-1)^(n+1) M1` is `(n+1)`-times monotone non-increasing on `(a, ξ)`.
    pub m1: NConvexFn,
    /// `(n+1)`-times monotone non-decreasing on `(ξ, b)`.
    pub m2: NConvexFn,
    pub q: Polynomial,
}

impl Decomposition {
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        Ok(self.m1.evaluate(x)? + self.m2.evaluate(x)? + self.q.eval(x))
    }

    pub fn order(&self) -> usize {
        self.m1.order()
    }

    /// `n! q_n`.
    pub fn leading(&self) -> f64 {
        factorial(self.order()) * self.q.coeff(self.order())
    }

    /// `c_n ≥ 0` if only `M2` is present, `≤ 0` if only `M1`, `= 0` if both,
    /// each up to `tol` relative to the total convexity mass. A Cantor part
    /// cut at `ξ` leaves a cylinder of unresolved mass there, which may sit on
    /// the wrong side; its mass is added to the slack.
    pub fn sign_conditions_hold(&self, tol: f64) -> bool {
        let m1 = self.m1.convexity_measure();
        let m2 = self.m2.convexity_measure();
        let unresolved: f64 = m1
            .singular()
            .iter()
            .chain(m2.singular())
            .map(|p| mass_near_cut(p, self.xi))
            .sum();
        let slack = tol * (m1.total_mass() + m2.total_mass()).max(1.0) + unresolved;
        let c = self.leading();
        match (m1.is_zero(), m2.is_zero()) {
            (true, false) => c >= -slack,
            (false, true) => c <= slack,
            (false, false) => c.abs() <= slack,
            (true, true) => true,
        }
    }
    /// Check `(-1)^(n+1) M1` as `(n+1)`-monotone non-increasing on `(a, ξ)`
    /// and `M2` as `(n+1)`-monotone non-decreasing on `(ξ, b)`, using the
    /// grid points on each side. A part is skipped (`None`) if it is zero or
    /// its side holds no grid point.
    pub fn check_parts(
        &self,
        grid: &[f64],
        config: &MonotoneConfig,
    ) -> Result<(Option<MonotoneVerdict>, Option<MonotoneVerdict>)> {
        let n = self.order();
        let dom = self.m1.domain();
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        let left: Vec<f64> = grid.iter().copied().filter(|&x| x < self.xi).collect();
        let right: Vec<f64> = grid.iter().copied().filter(|&x| x > self.xi).collect();
        let m1 = if left.is_empty() || self.m1.convexity_measure().is_zero() {
            None
        } else {
            let sub = Domain::new(dom.start(), self.xi)?;
            let f = |x: f64| Ok(sign * self.m1.evaluate(x)?);
            Some(check_multimonotone(f, sub, n + 1, Direction::Nonincreasing, &left, config)?)
        };
        let m2 = if right.is_empty() || self.m2.convexity_measure().is_zero() {
            None
        } else {
            let sub = Domain::new(self.xi, dom.end())?;
            let f = |x: f64| self.m2.evaluate(x);
            Some(check_multimonotone(f, sub, n + 1, Direction::Nondecreasing, &right, config)?)
        };
        Ok((m1, m2))
    }
}

pub fn decompose_multimonotone(f: &NConvexFn) -> Decomposition {
    let canonical = canonicalize(f.form());
    let form = canonical.form();
    let zero = Measure::zero(form.domain());
    let part = |minus: &Measure, plus: &Measure| {
        NConvexFn::new(
            SpectralForm::new(form.order(), form.xi(), minus.clone(), plus.clone(), Polynomial::zero())
                .expect("parts of a valid form are valid"),
        )
    };
    Decomposition {
        xi: form.xi(),
        case: canonical.classify(),
        m1: part(form.mu_minus(), &zero),
        m2: part(&zero, form.mu_plus()),
        q: form.poly().clone(),
    }
}

/// Continuous `n`-Wright-convex split: the multiply monotone decomposition
/// with the additive polynomial-function part `P ≡ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct WrightDecomposition {
    pub parts: Decomposition,
    pub p: Polynomial,
}

pub fn wright_decompose_continuous(f: &NConvexFn) -> WrightDecomposition {
    WrightDecomposition {
        parts: decompose_multimonotone(f),
        p: Polynomial::zero(),
    }
}
