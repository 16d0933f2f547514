mod common;

use common::*;
use nconvex::measure::{cantor_cdf, truncated_moment};
use nconvex::{CantorPart, Continuity, Decision, Measure, Side};
use proptest::prelude::*;

fn sum_cdf(mu: &Measure, x: f64, c: Continuity) -> f64 {
    mu.cumulative(x, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leq_is_a_partial_order(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let d = random_domain(&mut rng);
        let a = random_measure(&mut rng, d);
        let b = a.add(&plain_measure(&mut rng, d)).unwrap();
        let c = b.add(&plain_measure(&mut rng, d)).unwrap();
        prop_assert_eq!(a.leq(&a).unwrap(), Decision::True);
        prop_assert_eq!(a.leq(&b).unwrap(), Decision::True);
        prop_assert_eq!(b.leq(&c).unwrap(), Decision::True);
        prop_assert_eq!(a.leq(&c).unwrap(), Decision::True);
        let other = random_measure(&mut rng, d);
        if let (Ok(Decision::True), Ok(Decision::True)) = (a.leq(&other), other.leq(&a)) {
            prop_assert!(a.approx_eq(&other));
        }
        if !b.approx_eq(&a) {
            prop_assert_eq!(b.leq(&a).unwrap(), Decision::False);
        }
    }

    #[test]
    fn join_and_meet_absorb(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let d = random_domain(&mut rng);
        let mu = plain_measure(&mut rng, d);
        let nu = plain_measure(&mut rng, d);
        prop_assert!(mu.meet(&mu.join(&nu).unwrap()).unwrap().approx_eq(&mu));
        prop_assert!(mu.join(&mu.meet(&nu).unwrap()).unwrap().approx_eq(&mu));
        let join = mu.join(&nu).unwrap();
        let meet = mu.meet(&nu).unwrap();
        prop_assert!(mu.leq(&join).unwrap().is_true() && nu.leq(&join).unwrap().is_true());
        prop_assert!(meet.leq(&mu).unwrap().is_true() && meet.leq(&nu).unwrap().is_true());
    }

    #[test]
    fn lebesgue_parts_are_pure_and_re_add(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let d = random_domain(&mut rng);
        let mu = random_measure(&mut rng, d);
        let (cont, sing, pp) = mu.lebesgue_split();
        prop_assert!(cont.atoms().is_empty() && cont.singular().is_empty());
        prop_assert!(sing.atoms().is_empty() && sing.density().is_none());
        prop_assert!(pp.density().is_none() && pp.singular().is_empty());
        let total = cont.add(&sing).unwrap().add(&pp).unwrap();
        prop_assert!(total.approx_eq(&mu));
    }

    #[test]
    fn cumulative_is_additive(seed in any::<u64>(), t in 0.0..1.0f64, left in any::<bool>()) {
        let mut rng = rng(seed);
        let d = random_domain(&mut rng);
        let mu = random_measure(&mut rng, d);
        let nu = random_measure(&mut rng, d);
        let Ok(sum) = mu.add(&nu) else { return Ok(()) };
        let x = d.start() + t * d.width();
        let c = if left { Continuity::Left } else { Continuity::Right };
        let lhs = sum_cdf(&sum, x, c);
        let rhs = sum_cdf(&mu, x, c) + sum_cdf(&nu, x, c);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn cantor_cdf_is_self_similar(t in 0.0..1.0f64) {
        let c = cantor_cdf(t);
        prop_assert!((cantor_cdf(t / 3.0) - 0.5 * c).abs() < 1e-12);
        prop_assert!((cantor_cdf(2.0 / 3.0 + t / 3.0) - 0.5 - 0.5 * c).abs() < 1e-12);
    }

    #[test]
    fn truncated_moments_match_cylinder_sums(t in 0.0..1.0f64, k in 0usize..=4) {
        // cylinders of width 3^-14 straddle t in at most one place
        let part = CantorPart::new(0.0, 1.0, 1.0);
        let sum: f64 = cylinders(&part, 14).iter().filter(|(u, _)| *u <= t).map(|(u, m)| m * (t - u).powi(k as i32)).sum();
        prop_assert!((truncated_moment(k, t) - sum).abs() <= 2f64.powi(-13), "{} vs {sum}", truncated_moment(k, t));
    }

    #[test]
    fn cantor_kernel_integral_matches_cylinder_sums(
        c in -1.0..1.0f64,
        w in 0.2..2.0f64,
        x in -1.5..3.5f64,
        k in 1usize..=4,
        plus in any::<bool>(),
    ) {
        let part = CantorPart::new(c, c + w, 1.3);
        let side = if plus { Side::Plus } else { Side::Minus };
        let (v, _) = part.kernel_integral(x, k, side);
        let coarse: f64 = cylinders(&part, 10).iter().map(|&(u, m)| m * kernel(plus, x, u, k)).sum();
        let fine: f64 = cylinders(&part, 13).iter().map(|&(u, m)| m * kernel(plus, x, u, k)).sum();
        let scale = 1.3 * (w + (x - c).abs()).powi(k as i32);
        // the cylinder sums converge to the exact value
        prop_assert!((v - fine).abs() <= 1e-5 * scale, "{v} vs {fine}");
        prop_assert!((v - fine).abs() <= (v - coarse).abs() + 1e-12 * scale);
    }
}

#[test]
fn split_keeps_cantor_mass() {
    let d = nconvex::Domain::new(-1.0, 2.0).unwrap();
    let mu = Measure::cantor(d, 0.0, 1.0, 1.0).unwrap();
    for s in [0.1, 0.25, 1.0 / 3.0, 0.5, 0.8] {
        let (l, r) = mu.split_at(s);
        assert!((l.total_mass() + r.total_mass() - 1.0).abs() < 1e-12);
        assert!((l.total_mass() - cantor_cdf(s)).abs() < 1e-6);
    }
}
