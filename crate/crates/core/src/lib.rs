//! Higher-order convex functions represented through their spectral measures.
//!
//! A function `f` on a finite open interval `(a, b)` is convex of order `n`
//! when all of its divided differences of order `n + 1` are nonnegative.
//! Every such function can be written as
//!
//! ```text
//! f(x) = ∫_(a,ξ] (-1)^(n+1) [-(x-u)]^n_+ / n! μ₋(du)
//!      + ∫_[ξ,b)            (x-u)^n_+  / n! μ₊(du) + Q(x)
//! ```
//!
//! with two nonnegative measures `μ₋`, `μ₊` and a polynomial `Q` of degree at
//! most `n`. This crate stores that data exactly ([`SpectralForm`]) and builds
//! the rest of the calculus on top of it:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`polynomial`] | polynomials, piecewise densities, root isolation, Hermite interpolation, kernel moments |
//! | [`measure`] | atoms + piecewise-polynomial density + Cantor parts; ordering and lattice operations |
//! | [`spectral`] | evaluation, one-sided derivatives, classification, canonical form, re-anchoring |
//! | [`monotone`] | multiply monotone functions and the two-part monotone decomposition |
//! | [`order`] | relative convexity, its equivalent criteria, lattice of functions, strong convexity |
//! | [`support`] | support polynomials of prescribed multiplicity type |
//! | [`oracle`] | brute-force divided-difference and difference-operator checks |
//! | [`document`] | the `.ncx` JSON document format used by the command-line tool |
//!
//! ```
//! use nconvex::{Domain, Measure, SpectralForm, NConvexFn, Polynomial};
//!
//! // |x| on (-1, 1): one unit atom on each side of ξ = 0.
//! let dom = Domain::new(-1.0, 1.0).unwrap();
//! let atom = Measure::atom(dom, 0.0, 1.0).unwrap();
//! let form = SpectralForm::new(1, 0.0, atom.clone(), atom, Polynomial::zero()).unwrap();
//! let f = NConvexFn::new(form);
//! assert_eq!(f.evaluate(0.5).unwrap(), 0.5);
//! assert_eq!(f.evaluate(-0.25).unwrap(), 0.25);
//! ```

pub mod cli;
pub mod document;
mod domain;
mod error;
pub mod measure;
pub mod monotone;
pub mod oracle;
pub mod order;
pub mod polynomial;
pub mod spectral;
pub mod support;

pub use domain::Domain;
pub use error::{Error, Result};
pub use measure::{Atom, CantorPart, Continuity, Decision, DistributionFn, Measure};
pub use polynomial::{PiecewisePoly, Polynomial, Side};
pub use spectral::{canonicalize, Case, NConvexFn, SpectralForm};
