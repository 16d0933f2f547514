//! The standard Cantor measure, affinely mapped onto `[start, end]` and
//! scaled to a given mass.
//!
//! Everything here leans on self-similarity: the Cantor measure `C` on
//! `[0, 1]` is `½ C∘S₀⁻¹ + ½ C∘S₂⁻¹` with `S₀(v) = v/3`, `S₂(v) = v/3 + 2/3`.
//! Cylinders (the images of `[0, 1]` under compositions of `S₀`, `S₂`) are
//! again scaled Cantor measures, which is what makes splitting at a point
//! and aligned comparisons exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::{binomial, factorial, Side};

/// Depth of the ternary expansions used for evaluation.
const EVAL_DEPTH: usize = 64;
/// A split stops descending once the cylinder containing the split point is
/// narrower than this multiple of the location scale; below it, subdivision
/// rounding would blur cylinder identities. The undivided remainder carries
/// at most about `2^-23` of the part's mass.
const SPLIT_RESOLUTION: f64 = 1e-11;
/// Upper bound on cylinder splits when aligning two families of parts.
const REFINE_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CantorPart {
    pub start: f64,
    pub end: f64,
    pub mass: f64,
}

impl CantorPart {
    pub fn new(start: f64, end: f64, mass: f64) -> Self {
        Self { start, end, mass }
    }

    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    fn local(&self, x: f64) -> f64 {
        (x - self.start) / self.width()
    }

    /// Mass of `(-∞, x]`.
    pub fn cumulative(&self, x: f64) -> f64 {
        self.mass * cantor_cdf(self.local(x))
    }

    /// The two first-level cylinders, each carrying half the mass.
    pub fn children(&self) -> [CantorPart; 2] {
        let third = self.width() / 3.0;
        let half = 0.5 * self.mass;
        [
            CantorPart::new(self.start, self.start + third, half),
            CantorPart::new(self.end - third, self.end, half),
        ]
    }

    pub fn same_interval(&self, other: &CantorPart) -> bool {
        let w = self.width().min(other.width());
        endpoints_equal(self.start, other.start, w) && endpoints_equal(self.end, other.end, w)
    }

    fn overlaps(&self, other: &CantorPart) -> bool {
        let lo = self.start.max(other.start);
        let hi = self.end.min(other.end);
        lo < hi && !endpoints_equal(lo, hi, self.width().min(other.width()))
    }

    /// `∫ K(x, u) dμ(u)` for the truncated-power kernel of order `k`, with the
    /// magnitude of the integrand's absolute value alongside.
    pub fn kernel_integral(&self, x: f64, k: usize, side: Side) -> (f64, f64) {
        let w = self.width();
        let t = self.local(x);
        let norm = self.mass * w.powi(k as i32) / factorial(k);
        let v = match side {
            Side::Plus => norm * truncated_moment(k, t),
            Side::Minus => {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                sign * norm * truncated_moment(k, 1.0 - t)
            }
        };
        (v, v.abs())
    }

    /// Raw moment `∫ u^j dμ(u)`.
    pub fn moment(&self, j: usize) -> f64 {
        // u = center + w (v - 1/2)
        let center = 0.5 * (self.start + self.end);
        let w = self.width();
        let central = central_moments(j);
        let mut acc = 0.0;
        for i in (0..=j).step_by(2) {
            acc += binomial(j, i) * center.powi((j - i) as i32) * w.powi(i as i32) * central[i];
        }
        self.mass * acc
    }
}

/// The Cantor function on `[0, 1]`, clamped outside.
pub fn cantor_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let mut t = t;
    let mut acc = 0.0;
    let mut scale = 0.5;
    for _ in 0..EVAL_DEPTH {
        let t3 = 3.0 * t;
        if t3 < 1.0 {
            t = t3;
        } else if t3 <= 2.0 {
            return acc + scale;
        } else {
            acc += scale;
            t = t3 - 2.0;
        }
        scale *= 0.5;
    }
    acc
}

/// Central moments `∫ (v - ½)^i dC(v)` for `i ≤ j`; odd ones vanish.
fn central_moments(j: usize) -> Vec<f64> {
    let mut m = vec![0.0; j + 1];
    m[0] = 1.0;
    for p in (2..=j).step_by(2) {
        // v - ½ = (v' - ½)/3 ∓ 1/3 on the two halves.
        let mut acc = 0.0;
        for i in (0..p).step_by(2) {
            acc += binomial(p, i) * 3f64.powi(-(i as i32)) * m[i] * 3f64.powi(-((p - i) as i32));
        }
        m[p] = acc / (1.0 - 3f64.powi(-(p as i32)));
    }
    m
}

/// `J_k(t) = ∫ (t - v)^k_+ dC(v)` on the standard Cantor measure.
///
/// For `t` inside `(0, 1)` the identity
/// `J_k(t) = ½ 3^{-k} (J_k(3t) + J_k(3t - 2))` leaves at most one branch
/// that is neither zero nor a full polynomial moment, so the recursion is a
/// loop down the ternary digits of `t`.
pub fn truncated_moment(k: usize, t: f64) -> f64 {
    let central = central_moments(k);
    let full = |t: f64| -> f64 {
        let s = t - 0.5;
        let mut acc = 0.0;
        for i in (0..=k).step_by(2) {
            acc += binomial(k, i) * s.powi((k - i) as i32) * central[i];
        }
        acc
    };
    let shrink = 0.5 * 3f64.powi(-(k as i32));
    let mut t = t;
    let mut scale = 1.0;
    let mut acc = 0.0;
    for _ in 0..EVAL_DEPTH {
        if t <= 0.0 {
            return acc;
        }
        if t >= 1.0 {
            return acc + scale * full(t);
        }
        scale *= shrink;
        let t3 = 3.0 * t;
        if t3 <= 1.0 {
            t = t3;
        } else if t3 <= 2.0 {
            return acc + scale * full(t3);
        } else {
            acc += scale * full(t3);
            t = t3 - 2.0;
        }
    }
    acc
}

/// Mass of `part` within the resolution window of [`split_at`] around the
/// cut `s`. The cylinder left straddling `s` lies inside this window, so this
/// bounds the mass that may end up on the wrong side of the cut.
pub fn mass_near_cut(part: &CantorPart, s: f64) -> f64 {
    let r = 2.0 * SPLIT_RESOLUTION * 1f64.max(s.abs());
    (part.cumulative(s + r) - part.cumulative(s - r)).max(0.0)
}

/// Restriction of `part` to `(-∞, s]` and `(s, ∞)` as finite lists of
/// cylinders.
pub fn split_at(part: &CantorPart, s: f64) -> (Vec<CantorPart>, Vec<CantorPart>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut cur = *part;
    let floor = SPLIT_RESOLUTION * 1f64.max(s.abs());
    while cur.width() > floor {
        if cur.end <= s {
            left.push(cur);
            return (left, right);
        }
        if cur.start >= s {
            right.push(cur);
            return (left, right);
        }
        let [l, r] = cur.children();
        if s <= l.end {
            right.push(r);
            cur = l;
        } else if s >= r.start {
            left.push(l);
            cur = r;
        } else {
            left.push(l);
            right.push(r);
            return (left, right);
        }
    }
    if cur.end <= s || (cur.start < s && 0.5 * (cur.start + cur.end) <= s) {
        left.push(cur);
    } else {
        right.push(cur);
    }
    (left, right)
}

/// Sort, drop empty parts, add masses on identical intervals, refine nested
/// parts into disjoint cylinders and merge sibling cylinders of equal mass
/// back into their parent. Overlapping parts outside a common cylinder tree
/// are kept as they are.
pub fn normalize(parts: Vec<CantorPart>) -> Vec<CantorPart> {
    let parts: Vec<CantorPart> = parts.into_iter().filter(|p| p.mass > 0.0).collect();
    let mut merged = merge_identical(parts);
    let mut splits = 0usize;
    'refine: while splits < REFINE_LIMIT {
        for i in 0..merged.len() {
            for j in i + 1..merged.len() {
                let (x, y) = (merged[i], merged[j]);
                if !x.overlaps(&y) || x.same_interval(&y) {
                    continue;
                }
                let (wx, wy) = (x.width(), y.width());
                if (wx - wy).abs() <= 1e-9 * wx.max(wy) {
                    continue;
                }
                let k = if wx > wy { i } else { j };
                let [l, r] = merged[k].children();
                merged[k] = l;
                merged.push(r);
                merged = merge_identical(merged);
                splits += 1;
                continue 'refine;
            }
        }
        break;
    }
    let mut changed = true;
    while changed {
        changed = false;
        let mut out: Vec<CantorPart> = Vec::with_capacity(merged.len());
        for p in merged {
            if let Some(last) = out.last() {
                if are_siblings(last, &p) {
                    let parent = CantorPart::new(last.start, p.end, last.mass + p.mass);
                    out.pop();
                    out.push(parent);
                    changed = true;
                    continue;
                }
            }
            out.push(p);
        }
        merged = out;
    }
    merged
}

fn merge_identical(mut parts: Vec<CantorPart>) -> Vec<CantorPart> {
    parts.sort_by(|x, y| x.start.total_cmp(&y.start).then(y.end.total_cmp(&x.end)));
    let mut merged: Vec<CantorPart> = Vec::with_capacity(parts.len());
    for p in parts {
        match merged.last_mut() {
            Some(last) if last.same_interval(&p) => last.mass += p.mass,
            _ => merged.push(p),
        }
    }
    merged
}

/// Endpoint equality for cylinders of width `w`: the usual location
/// tolerance, tightened for narrow cylinders but never below the rounding
/// left behind by repeated subdivision.
fn endpoints_equal(x: f64, y: f64, w: f64) -> bool {
    let scale = 1f64.max(x.abs()).max(y.abs());
    let tol = (1e-12 * scale).min(1e-3 * w).max(64.0 * f64::EPSILON * scale);
    (x - y).abs() <= tol
}

fn are_siblings(l: &CantorPart, r: &CantorPart) -> bool {
    let w = l.width();
    let scale = 1f64.max(l.start.abs()).max(r.end.abs());
    let tol = 1e-9 * w + 64.0 * f64::EPSILON * scale;
    (w - r.width()).abs() <= tol
        && (r.start - l.end - w).abs() <= tol
        && (l.mass - r.mass).abs() <= 1e-12 * l.mass.max(r.mass)
}

/// One cell of a common refinement: an interval with the mass each family
/// puts on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedCell {
    pub start: f64,
    pub end: f64,
    pub first: f64,
    pub second: f64,
}

/// Express two families of Cantor parts over one family of pairwise
/// interior-disjoint cylinders. Fails with [`Error::Undecidable`] when two
/// overlapping parts do not sit in a common cylinder tree.
pub fn common_refinement(xs: &[CantorPart], ys: &[CantorPart]) -> Result<Vec<AlignedCell>> {
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    let mut splits = 0usize;
    loop {
        let clash = xs.iter().enumerate().find_map(|(i, x)| {
            ys.iter()
                .position(|y| x.overlaps(y) && !x.same_interval(y))
                .map(|j| (i, j))
        });
        let Some((i, j)) = clash else { break };
        let (wx, wy) = (xs[i].width(), ys[j].width());
        if (wx - wy).abs() <= 1e-9 * wx.max(wy) + 64.0 * f64::EPSILON * xs[i].end.abs().max(1.0) {
            return Err(Error::Undecidable(format!(
                "Cantor parts on [{}, {}] and [{}, {}] overlap without alignment",
                xs[i].start, xs[i].end, ys[j].start, ys[j].end
            )));
        }
        splits += 1;
        if splits > REFINE_LIMIT {
            return Err(Error::Undecidable(format!(
                "Cantor parts on [{}, {}] and [{}, {}] are not cylinder-aligned",
                xs[i].start, xs[i].end, ys[j].start, ys[j].end
            )));
        }
        let (list, k) = if wx > wy { (&mut xs, i) } else { (&mut ys, j) };
        let [l, r] = list[k].children();
        list[k] = l;
        list.insert(k + 1, r);
    }

    let mut cells: Vec<AlignedCell> = Vec::new();
    let mut used = vec![false; ys.len()];
    for x in &xs {
        let second = match ys.iter().position(|y| y.same_interval(x)) {
            Some(j) => {
                used[j] = true;
                ys[j].mass
            }
            None => 0.0,
        };
        cells.push(AlignedCell {
            start: x.start,
            end: x.end,
            first: x.mass,
            second,
        });
    }
    for (y, _) in ys.iter().zip(&used).filter(|(_, u)| !**u) {
        cells.push(AlignedCell {
            start: y.start,
            end: y.end,
            first: 0.0,
            second: y.mass,
        });
    }
    cells.sort_by(|p, q| p.start.total_cmp(&q.start));
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::locations_equal;

    #[test]
    fn cantor_function_values() {
        assert!((cantor_cdf(1.0 / 3.0) - 0.5).abs() < 1e-12);
        assert!((cantor_cdf(2.0 / 3.0) - 0.5).abs() < 1e-12);
        assert!((cantor_cdf(0.25) - 1.0 / 3.0).abs() < 1e-12);
        assert!((cantor_cdf(0.75) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(cantor_cdf(-1.0), 0.0);
        assert_eq!(cantor_cdf(2.0), 1.0);
    }

    #[test]
    fn variance_is_one_eighth() {
        assert!((central_moments(2)[2] - 0.125).abs() < 1e-15);
        let p = CantorPart::new(0.0, 1.0, 1.0);
        assert!((p.moment(1) - 0.5).abs() < 1e-15);
        assert!((p.moment(2) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn truncated_moment_order_zero_is_cdf() {
        for &t in &[0.1, 0.2, 0.5, 0.7, 0.9] {
            assert!((truncated_moment(0, t) - cantor_cdf(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn truncated_moment_at_one_is_full() {
        // ∫ (1 - v) dC = 1/2
        assert!((truncated_moment(1, 1.0) - 0.5).abs() < 1e-15);
        // Only the left half, mass ½ with mean 1/6, lies below ½.
        assert!((truncated_moment(1, 0.5) - 0.5 * (0.5 - 1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn split_and_normalize_round_trip() {
        let p = CantorPart::new(0.0, 1.0, 1.0);
        for &s in &[0.1, 1.0 / 3.0, 0.5, 0.61803, 0.9] {
            let (l, r) = split_at(&p, s);
            let left_mass: f64 = l.iter().map(|c| c.mass).sum();
            assert!((left_mass - cantor_cdf(s)).abs() < 1e-6, "s = {s}");
            assert!(l.iter().all(|c| c.start < s));
            let mut all = l;
            all.extend(r);
            let back = normalize(all);
            assert_eq!(back.len(), 1, "s = {s}: {back:?}");
            assert!(back[0].same_interval(&p));
            assert!((back[0].mass - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn refinement_of_nested_cylinders() {
        let big = [CantorPart::new(0.0, 1.0, 1.0)];
        let small = [CantorPart::new(2.0 / 3.0, 7.0 / 9.0, 1.0)];
        let cells = common_refinement(&big, &small).unwrap();
        let hit = cells
            .iter()
            .find(|c| locations_equal(c.start, 2.0 / 3.0) && locations_equal(c.end, 7.0 / 9.0))
            .unwrap();
        assert!((hit.first - 0.25).abs() < 1e-15);
        assert_eq!(hit.second, 1.0);
    }

    #[test]
    fn refinement_of_misaligned_parts_is_undecidable() {
        let a = [CantorPart::new(0.0, 1.0, 1.0)];
        let b = [CantorPart::new(0.0, 0.9, 2.0)];
        assert!(matches!(common_refinement(&a, &b), Err(Error::Undecidable(_))));
    }

    #[test]
    fn part_inside_gap_is_disjoint() {
        let a = [CantorPart::new(0.0, 1.0, 1.0)];
        let b = [CantorPart::new(0.4, 0.5, 1.0)];
        let cells = common_refinement(&a, &b).unwrap();
        assert!(cells.iter().all(|c| c.first == 0.0 || c.second == 0.0));
    }

    #[test]
    fn nested_parts_become_disjoint() {
        let parent = CantorPart::new(0.0, 1.0, 1.0);
        let [left, _] = parent.children();
        let parts = normalize(vec![parent, CantorPart::new(left.start, left.end, 0.25)]);
        assert_eq!(parts.len(), 2);
        assert!((parts[0].mass - 0.75).abs() < 1e-15 && (parts[1].mass - 0.5).abs() < 1e-15);
        assert!(parts[0].end <= parts[1].start);
    }

    #[test]
    fn split_error_stays_within_the_cut_window() {
        // narrow parts keep more levels of mass near the cut
        let part = CantorPart::new(0.7077716370655027, 0.7225836303529386, 0.0379);
        for i in 0..200 {
            let s = part.start + part.width() * (i as f64 + 0.37) / 200.0;
            let (left, _) = split_at(&part, s);
            let kept: f64 = left.iter().map(|p| p.mass).sum();
            assert!((kept - part.cumulative(s)).abs() <= mass_near_cut(&part, s) + 1e-15);
        }
    }
}
