//! The spectral representation of an `n`-convex function:
//!
//! `f(x) = ∫ K₋(x, u) μ₋(du) + ∫ K₊(x, u) μ₊(du) + Q(x)`
//!
//! with `K₊(x, u) = (x-u)^n_+ / n!`, `K₋(x, u) = (-1)^(n+1) [-(x-u)]^n_+ / n!`,
//! `μ₋` living on `(a, ξ]` and `μ₊` on `[ξ, b)`.
//!
//! Since `K₊ - K₋ = (x-u)^n / n!`, moving mass between the two measures only
//! changes `f` by a polynomial of degree `n`; that is what makes
//! re-anchoring and canonicalization possible.

mod canonical;

pub use canonical::{canonicalize, Case};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::measure::{Continuity, DistributionFn, Measure};
use crate::polynomial::{factorial, hermite_interpolate, HermiteNode, Polynomial, Side};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralForm {
    n: usize,
    domain: Domain,
    xi: f64,
    mu_minus: Measure,
    mu_plus: Measure,
    q: Polynomial,
}

impl SpectralForm {
    /// Validates the order, the anchor, the support of each measure relative
    /// to `ξ`, and the degree of `Q`.
    pub fn new(n: usize, xi: f64, mu_minus: Measure, mu_plus: Measure, q: Polynomial) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("order must be at least 1".into()));
        }
        let domain = mu_minus.domain();
        domain.check_same(&mu_plus.domain())?;
        let (a, b) = (domain.start(), domain.end());
        if !xi.is_finite() || xi < a || xi > b {
            return Err(Error::InvalidInput(format!("xi = {xi} must lie in [{a}, {b}]")));
        }
        if q.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("polynomial coefficients must be finite".into()));
        }
        if !q.is_zero() && q.degree() > n {
            return Err(Error::InvalidInput(format!(
                "polynomial has degree {} > order {n}",
                q.degree()
            )));
        }
        // Cylinders produced by splitting a Cantor part at ξ may overhang it by
        // a rounding-scale sliver.
        let slack = 1e-9 * domain.width();
        if let Some((_, hi)) = mu_minus.support_hull() {
            if hi > xi + slack {
                return Err(Error::InvalidInput(format!(
                    "mu_minus reaches {hi}, beyond xi = {xi}"
                )));
            }
        }
        if let Some((lo, _)) = mu_plus.support_hull() {
            if lo < xi - slack {
                return Err(Error::InvalidInput(format!(
                    "mu_plus starts at {lo}, before xi = {xi}"
                )));
            }
        }
        Ok(Self {
            n,
            domain,
            xi,
            mu_minus,
            mu_plus,
            q,
        })
    }

    /// Split `measure` at `xi` (mass at `xi` goes to the minus side).
    pub fn from_measure(n: usize, measure: &Measure, xi: f64, q: Polynomial) -> Result<Self> {
        let (minus, plus) = measure.split_at(xi);
        Self::new(n, xi, minus, plus, q)
    }

    /// Split `measure` at `xi` and choose `Q` so that the form agrees with
    /// `target` at `n + 1` Chebyshev nodes. When `target - Ψ` is a polynomial
    /// of degree `≤ n` the form reproduces `target` exactly.
    pub(crate) fn fit_polynomial(
        n: usize,
        measure: &Measure,
        xi: f64,
        target: impl Fn(f64) -> Result<f64>,
    ) -> Result<Self> {
        let (minus, plus) = measure.split_at(xi);
        Self::fit_split(n, xi, minus, plus, target)
    }

    pub(crate) fn fit_split(
        n: usize,
        xi: f64,
        minus: Measure,
        plus: Measure,
        target: impl Fn(f64) -> Result<f64>,
    ) -> Result<Self> {
        let bare = Self::new(n, xi, minus, plus, Polynomial::zero())?;
        let nodes = bare
            .domain
            .chebyshev_nodes(n + 1)
            .into_iter()
            .map(|x| Ok(HermiteNode::new(x, vec![target(x)? - bare.evaluate(x)?])))
            .collect::<Result<Vec<_>>>()?;
        let q = hermite_interpolate(&nodes, n)?;
        Ok(Self { q, ..bare })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn mu_minus(&self) -> &Measure {
        &self.mu_minus
    }

    pub fn mu_plus(&self) -> &Measure {
        &self.mu_plus
    }

    pub fn poly(&self) -> &Polynomial {
        &self.q
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.derivative(0, x, Continuity::Right)
    }

    /// Value together with the sum of absolute values of all contributing
    /// terms, a scale for the rounding error of the value.
    pub fn evaluate_with_magnitude(&self, x: f64) -> Result<(f64, f64)> {
        self.derivative_with_magnitude(0, x, Continuity::Right)
    }

    /// `f^(m)(x)` for `m ≤ n`; for `m = n` the one-sided value selected by
    /// `side`, otherwise `side` is irrelevant.
    pub fn derivative(&self, m: usize, x: f64, side: Continuity) -> Result<f64> {
        Ok(self.derivative_with_magnitude(m, x, side)?.0)
    }

    fn derivative_with_magnitude(&self, m: usize, x: f64, side: Continuity) -> Result<(f64, f64)> {
        if m > self.n {
            return Err(Error::Unsupported(format!(
                "derivative of order {m} > {} exists only almost everywhere",
                self.n
            )));
        }
        self.domain.check_contains(x)?;
        let k = self.n - m;
        let (vm, am) = self.mu_minus.kernel_integral(x, k, Side::Minus, side);
        let (vp, ap) = self.mu_plus.kernel_integral(x, k, Side::Plus, side);
        let dq = self.q.nth_derivative(m);
        Ok((vm + vp + dq.eval(x), am + ap + dq.eval_abs(x)))
    }

    /// `n! q_n`, the constant part of `f^(n)`.
    pub fn leading_term(&self) -> f64 {
        factorial(self.n) * self.q.coeff(self.n)
    }

    /// `μ₋ + μ₊`.
    pub fn convexity_measure(&self) -> Measure {
        self.mu_minus
            .add(&self.mu_plus)
            .expect("spectral measures share a domain")
    }
}

/// An `n`-convex function held through its spectral form.
#[derive(Debug, Clone, PartialEq)]
pub struct NConvexFn {
    form: SpectralForm,
    measure: Measure,
}

impl NConvexFn {
    pub fn new(form: SpectralForm) -> Self {
        let measure = form.convexity_measure();
        Self { form, measure }
    }

    pub fn form(&self) -> &SpectralForm {
        &self.form
    }

    pub fn into_form(self) -> SpectralForm {
        self.form
    }

    pub fn order(&self) -> usize {
        self.form.n
    }

    pub fn domain(&self) -> Domain {
        self.form.domain
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.form.evaluate(x)
    }

    pub fn evaluate_with_magnitude(&self, x: f64) -> Result<(f64, f64)> {
        self.form.evaluate_with_magnitude(x)
    }

    pub fn derivative(&self, m: usize, x: f64, side: Continuity) -> Result<f64> {
        self.form.derivative(m, x, side)
    }

    /// The measure of `n`-th order convexity `μ₋ + μ₊`.
    pub fn convexity_measure(&self) -> &Measure {
        &self.measure
    }

    /// Cumulative convexity measure anchored at `ξ`; `f^(n)` differs from it
    /// by a constant.
    pub fn distribution(&self) -> DistributionFn {
        self.measure.cdf(self.form.xi, Continuity::Right)
    }

    pub fn classify(&self) -> Case {
        canonical::classify(&self.form)
    }

    /// The same function written with anchor `xi` (mass at `xi` on the minus
    /// side).
    pub fn re_anchor(&self, xi: f64) -> Result<SpectralForm> {
        self.domain().check_contains(xi).map_err(|_| {
            Error::InvalidInput(format!(
                "new anchor {xi} must lie strictly inside ({}, {})",
                self.domain().start(),
                self.domain().end()
            ))
        })?;
        SpectralForm::fit_polynomial(self.order(), &self.measure, xi, |x| self.evaluate(x))
    }

    /// Equality of convexity measures, i.e. `f - g ∈ Π_n`.
    pub fn mod_pi_n_equal(&self, other: &NConvexFn) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.measure.approx_eq(&other.measure))
    }

    pub(crate) fn check_compatible(&self, other: &NConvexFn) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        self.domain().check_same(&other.domain())
    }

    /// `(f_cont, f_sing, f_pp)` built from the corresponding parts of both
    /// spectral measures; `Q` goes to the continuous part.
    pub fn lebesgue_parts(&self) -> (NConvexFn, NConvexFn, NConvexFn) {
        let f = &self.form;
        let (mc, ms, mp) = f.mu_minus.lebesgue_split();
        let (pc, ps, pp) = f.mu_plus.lebesgue_split();
        let build = |minus, plus, q| {
            NConvexFn::new(SpectralForm {
                mu_minus: minus,
                mu_plus: plus,
                q,
                ..f.clone()
            })
        };
        (
            build(mc, pc, f.q.clone()),
            build(ms, ps, Polynomial::zero()),
            build(mp, pp, Polynomial::zero()),
        )
    }

    /// `f + g`.
    pub fn sum(&self, other: &NConvexFn) -> Result<NConvexFn> {
        self.check_compatible(other)?;
        let (f, g) = (&self.form, &other.form);
        if f.xi == g.xi {
            let form = SpectralForm {
                mu_minus: f.mu_minus.add(&g.mu_minus)?,
                mu_plus: f.mu_plus.add(&g.mu_plus)?,
                q: &f.q + &g.q,
                ..f.clone()
            };
            return Ok(NConvexFn::new(form));
        }
        let total = self.measure.add(&other.measure)?;
        let xi = self.interior_anchor();
        let form = SpectralForm::fit_polynomial(f.n, &total, xi, |x| {
            Ok(self.evaluate(x)? + other.evaluate(x)?)
        })?;
        Ok(NConvexFn::new(form))
    }

    /// `c · f` for `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<NConvexFn> {
        let f = &self.form;
        Ok(NConvexFn::new(SpectralForm {
            mu_minus: f.mu_minus.scaled(c)?,
            mu_plus: f.mu_plus.scaled(c)?,
            q: f.q.scale(c),
            ..f.clone()
        }))
    }

    /// `f + p` for a polynomial `p` of degree `≤ n`.
    pub fn plus_polynomial(&self, p: &Polynomial) -> Result<NConvexFn> {
        let f = &self.form;
        SpectralForm::new(f.n, f.xi, f.mu_minus.clone(), f.mu_plus.clone(), &f.q + p).map(NConvexFn::new)
    }

    /// The anchor if it lies inside the domain, else the midpoint.
    pub(crate) fn interior_anchor(&self) -> f64 {
        if self.domain().contains(self.form.xi) {
            self.form.xi
        } else {
            self.domain().midpoint()
        }
    }
}
