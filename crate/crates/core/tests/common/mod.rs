//! Random spectral forms and pairs shared by the integration tests.
#![allow(dead_code)]

pub mod golden;

use nconvex::{Atom, CantorPart, Domain, Measure, NConvexFn, PiecewisePoly, Polynomial, SpectralForm};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_domain(rng: &mut ChaCha8Rng) -> Domain {
    let a = rng.random_range(-2.0..0.5);
    let w = rng.random_range(0.5..3.0);
    Domain::new(a, a + w).unwrap()
}

/// A point well inside the domain.
pub fn interior(rng: &mut ChaCha8Rng, d: Domain) -> f64 {
    d.start() + d.width() * rng.random_range(0.05..0.95)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A polynomial of degree ≤ 3, nonnegative on `[c, d]` because its
/// Bernstein coefficients are.
pub fn bernstein_piece(rng: &mut ChaCha8Rng, c: f64, d: f64, lo: f64) -> Polynomial {
    let deg = rng.random_range(0..=3usize);
    let t = Polynomial::new(vec![0.0, 1.0]);
    let one_minus_t = Polynomial::new(vec![1.0, -1.0]);
    let mut p = Polynomial::zero();
    for k in 0..=deg {
        let b = rng.random_range(lo..lo + 2.0);
        let mut term = Polynomial::constant(b * binomial(deg, k));
        for _ in 0..k {
            term = &term * &t;
        }
        for _ in k..deg {
            term = &term * &one_minus_t;
        }
        p = &p + &term;
    }
    let w = d - c;
    p.shifted(-c / w, 1.0 / w)
}

/// Piecewise density on `pieces` subintervals of `[c, d]` from a jittered
/// even partition; some pieces are zero so the density may have gaps.
pub fn random_density(rng: &mut ChaCha8Rng, c: f64, d: f64, pieces: usize) -> Option<PiecewisePoly> {
    if pieces == 0 {
        return None;
    }
    let step = (d - c) / pieces as f64;
    let bps: Vec<f64> = (0..=pieces)
        .map(|i| match i {
            0 => c,
            i if i == pieces => d,
            i => c + step * (i as f64 + rng.random_range(-0.3..0.3)),
        })
        .collect();
    let polys = bps
        .windows(2)
        .map(|w| {
            if rng.random_bool(0.2) {
                Polynomial::zero()
            } else {
                bernstein_piece(rng, w[0], w[1], 0.0)
            }
        })
        .collect();
    Some(PiecewisePoly::new(bps, polys).unwrap())
}

/// Subinterval of the domain at least `0.3` of its width long.
pub fn random_span(rng: &mut ChaCha8Rng, d: Domain) -> (f64, f64) {
    let len = d.width() * rng.random_range(0.3..0.9);
    let c = d.start() + (d.width() - len) * rng.random_range(0.02..0.98);
    (c, c + len)
}

pub fn random_cantor(rng: &mut ChaCha8Rng, d: Domain) -> CantorPart {
    let c = interior(rng, d);
    let e = interior(rng, d);
    let (c, e) = if c < e { (c, e) } else { (e, c) };
    let e = if e - c < 0.05 * d.width() { c + 0.05 * d.width() } else { e };
    CantorPart::new(c, e.min(d.end() - 1e-3 * d.width()), rng.random_range(0.2..1.5))
}

pub fn random_atoms(rng: &mut ChaCha8Rng, d: Domain, count: usize) -> Vec<Atom> {
    (0..count).map(|_| Atom::new(interior(rng, d), rng.random_range(0.05..2.0))).collect()
}

/// 0–4 atoms, 0–3 density pieces, 0–1 Cantor part.
pub fn random_measure(rng: &mut ChaCha8Rng, d: Domain) -> Measure {
    let count = rng.random_range(0..=4);
    let atoms = random_atoms(rng, d, count);
    let (c, e) = random_span(rng, d);
    let pieces = rng.random_range(0..=3);
    let density = random_density(rng, c, e, pieces);
    let cantor = if rng.random_bool(0.4) { vec![random_cantor(rng, d)] } else { Vec::new() };
    Measure::new(d, atoms, density, cantor).unwrap()
}

pub fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> Polynomial {
    Polynomial::new((0..=n).map(|_| rng.random_range(-1.0..1.0)).collect())
}

/// Anchor anywhere in `[a, b]`, endpoints included now and then.
pub fn random_anchor(rng: &mut ChaCha8Rng, d: Domain) -> f64 {
    match rng.random_range(0..10) {
        0 => d.start(),
        1 => d.end(),
        _ => interior(rng, d),
    }
}

pub fn form_from(rng: &mut ChaCha8Rng, n: usize, mu: &Measure) -> NConvexFn {
    let d = mu.domain();
    let xi = random_anchor(rng, d);
    NConvexFn::new(SpectralForm::from_measure(n, mu, xi, random_poly(rng, n)).unwrap())
}

pub fn random_form(rng: &mut ChaCha8Rng) -> NConvexFn {
    let n = rng.random_range(1..=4);
    let d = random_domain(rng);
    let mu = random_measure(rng, d);
    form_from(rng, n, &mu)
}

/// Extra mass that does not touch a Cantor part other than the base one.
fn extra_measure(rng: &mut ChaCha8Rng, d: Domain, base: &Measure) -> Measure {
    let count = rng.random_range(0..=2);
    let atoms = random_atoms(rng, d, count);
    let (c, e) = random_span(rng, d);
    let pieces = rng.random_range(0..=2);
    let density = random_density(rng, c, e, pieces);
    let cantor = match base.singular().first() {
        Some(part) if rng.random_bool(0.5) => {
            let child = part.children()[rng.random_range(0..2)];
            vec![CantorPart::new(child.start, child.end, rng.random_range(0.1..1.0))]
        }
        _ => Vec::new(),
    };
    Measure::new(d, atoms, density, cantor).unwrap()
}

/// `(f, g)` with `f ⪰_n g` by construction: `μ^f = μ^g + extra`.
pub fn comparable_pair(rng: &mut ChaCha8Rng) -> (NConvexFn, NConvexFn) {
    let n = rng.random_range(1..=4);
    let d = random_domain(rng);
    let mg = random_measure(rng, d);
    let extra = extra_measure(rng, d, &mg);
    let mf = mg.add(&extra).unwrap();
    (form_from(rng, n, &mf), form_from(rng, n, &mg))
}

/// `(f, g)` with `f ⋡_n g`: `μ^g` carries a salient piece that `μ^f`
/// lacks (an atom, a density bump or extra Cantor mass).
pub fn incomparable_pair(rng: &mut ChaCha8Rng) -> (NConvexFn, NConvexFn) {
    let n = rng.random_range(1..=4);
    let d = random_domain(rng);
    let base = random_measure(rng, d);
    let kind = if base.singular().is_empty() { rng.random_range(0..2) } else { rng.random_range(0..3) };
    let salient = match kind {
        0 => Measure::atom(d, interior(rng, d), rng.random_range(0.5..2.0)).unwrap(),
        1 => {
            let c = d.start() + d.width() * rng.random_range(0.05..0.7);
            let e = c + d.width() * rng.random_range(0.15..0.25);
            let p = bernstein_piece(rng, c, e, 0.5);
            Measure::with_density(d, PiecewisePoly::single(c, e, p).unwrap()).unwrap()
        }
        _ => {
            let part = base.singular()[0];
            Measure::cantor(d, part.start, part.end, 0.5 * part.mass).unwrap()
        }
    };
    // f may get extra atoms, but never density or Cantor mass that could
    // cover the salient piece.
    let count = rng.random_range(0..=2);
    let extra = Measure::new(d, random_atoms(rng, d, count), None, Vec::new()).unwrap();
    let mf = base.add(&extra).unwrap();
    let mg = base.add(&salient).unwrap();
    (form_from(rng, n, &mf), form_from(rng, n, &mg))
}

/// Points at which to compare two functions.
pub fn grid(d: Domain) -> Vec<f64> {
    d.interior_grid(101)
}

pub fn max_abs_on(d: Domain, f: impl Fn(f64) -> f64) -> f64 {
    grid(d).into_iter().map(|x| f(x).abs()).fold(0.0, f64::max)
}

/// Two unrelated forms on a shared domain and order; Cantor parts are left
/// out so that every comparison is decidable.
pub fn independent_pair(rng: &mut ChaCha8Rng) -> (NConvexFn, NConvexFn) {
    let n = rng.random_range(1..=4);
    let d = random_domain(rng);
    let strip = |rng: &mut ChaCha8Rng| {
        let mu = random_measure(rng, d);
        Measure::new(d, mu.atoms().to_vec(), mu.density().cloned(), Vec::new()).unwrap()
    };
    let (mf, mg) = (strip(rng), strip(rng));
    (form_from(rng, n, &mf), form_from(rng, n, &mg))
}

/// Random valid support type: `k ≤ n + 1` increasing interior nodes with
/// multiplicities summing to `n + 1`.
pub fn random_support_nodes(rng: &mut ChaCha8Rng, n: usize, d: Domain) -> Vec<(f64, usize)> {
    let k = rng.random_range(1..=n + 1);
    let mut cuts: Vec<usize> = Vec::new();
    while cuts.len() < k - 1 {
        let c = rng.random_range(1..=n);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort();
    let mut mults = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n + 1)) {
        mults.push(c - prev);
        prev = c;
    }
    // one node per slot of an even partition keeps the nodes apart
    let slot = d.width() / k as f64;
    let xs = (0..k).map(|i| d.start() + slot * (i as f64 + rng.random_range(0.1..0.9)));
    xs.zip(mults).collect()
}

/// The `2^level` cylinders of a Cantor part as `(midpoint, mass)`.
pub fn cylinders(part: &CantorPart, level: u32) -> Vec<(f64, f64)> {
    let mut cells = vec![(part.start, part.end)];
    for _ in 0..level {
        cells = cells
            .into_iter()
            .flat_map(|(c, d)| {
                let w = (d - c) / 3.0;
                [(c, c + w), (d - w, d)]
            })
            .collect();
    }
    let m = part.mass / cells.len() as f64;
    cells.into_iter().map(|(c, d)| (0.5 * (c + d), m)).collect()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `K₊(x, u)` or `K₋(x, u)` of order `n`, written out directly.
pub fn kernel(plus: bool, x: f64, u: f64, n: usize) -> f64 {
    let t = if plus { x - u } else { u - x };
    if t <= 0.0 {
        return 0.0;
    }
    let sign = if plus || n % 2 == 1 { 1.0 } else { -1.0 };
    sign * t.powi(n as i32) / factorial(n)
}

/// Composite 5-point Gauss–Legendre on `[c, d]`.
pub fn gauss(f: &dyn Fn(f64) -> f64, c: f64, d: f64, panels: usize) -> f64 {
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (d - c) / panels as f64;
    (0..panels)
        .map(|k| {
            let mid = c + h * (k as f64 + 0.5);
            NODES.iter().zip(WEIGHTS).map(|(t, w)| w * f(mid + 0.5 * h * t)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `∫ K(x, u) dμ(u)` by brute force: atoms summed, densities by quadrature
/// split at `x`, Cantor parts as sums over `2^level` cylinders.
pub fn direct_integral(mu: &Measure, plus: bool, x: f64, n: usize, level: u32) -> f64 {
    let mut total: f64 = mu.atoms().iter().map(|a| a.mass * kernel(plus, x, a.location, n)).sum();
    if let Some(rho) = mu.density() {
        for (c, d, p) in rho.segments() {
            let f = |u: f64| kernel(plus, x, u, n) * p.eval(u);
            if c < x && x < d {
                total += gauss(&f, c, x, 8) + gauss(&f, x, d, 8);
            } else {
                total += gauss(&f, c, d, 8);
            }
        }
    }
    for part in mu.singular() {
        total += cylinders(part, level).iter().map(|&(u, m)| m * kernel(plus, x, u, n)).sum::<f64>();
    }
    total
}

/// `f(x)` from the spectral form by brute force.
pub fn direct_evaluate(form: &SpectralForm, x: f64, level: u32) -> f64 {
    let n = form.order();
    direct_integral(form.mu_minus(), false, x, n, level)
        + direct_integral(form.mu_plus(), true, x, n, level)
        + form.poly().eval(x)
}

/// Forms without Cantor parts, so every comparison is decidable.
pub fn plain_measure(rng: &mut ChaCha8Rng, d: Domain) -> Measure {
    let mu = random_measure(rng, d);
    Measure::new(d, mu.atoms().to_vec(), mu.density().cloned(), Vec::new()).unwrap()
}
