mod common;

use common::*;
use nconvex::support::{relative_support, support_polynomial, SupportResult, SupportSpec};
use nconvex::{Domain, Error};
use proptest::prelude::*;

/// Sign of `h - p` on 300 points per interval away from the nodes.
fn observed_chain_holds(h: &dyn Fn(f64) -> f64, d: Domain, spec: &SupportSpec, r: &SupportResult, n: usize) -> bool {
    let mut edges = vec![d.start()];
    edges.extend_from_slice(spec.nodes());
    edges.push(d.end());
    let signs = spec.expected_signs(n);
    let mut sup: f64 = 1.0;
    let mut samples = Vec::new();
    for (j, w) in edges.windows(2).enumerate() {
        let band = 1e-8 * (w[1] - w[0]);
        for i in 0..300 {
            let x = w[0] + band + (w[1] - w[0] - 2.0 * band) * i as f64 / 299.0;
            if d.contains(x) {
                let (hv, pv) = (h(x), r.p.eval(x));
                sup = sup.max(hv.abs()).max(pv.abs());
                samples.push((signs[j], hv - pv));
            }
        }
    }
    samples.iter().all(|&(s, v)| f64::from(s) * v >= -1e-8 * sup)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn passing_results_have_the_sign_chain(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = random_form(&mut rng);
        let n = f.order();
        let spec = SupportSpec::new(n, f.domain(), random_support_nodes(&mut rng, n, f.domain())).unwrap();
        let r = support_polynomial(&f, &spec).unwrap();
        for &x in spec.nodes() {
            let v = f.evaluate(x).unwrap();
            prop_assert!((v - r.p.eval(x)).abs() <= 1e-9 * v.abs().max(1.0));
        }
        let h = |x: f64| f.evaluate(x).unwrap();
        if r.passed {
            prop_assert!(observed_chain_holds(&h, f.domain(), &spec, &r, n));
        } else {
            prop_assert!(r.intervals.iter().any(|c| c.witness.is_some()) || r.node_residual > 0.0);
        }
    }

    #[test]
    fn interpolation_crosses_alternately(seed in any::<u64>()) {
        // all multiplicities one: plain interpolation at n + 1 points
        let mut rng = rng(seed);
        let f = random_form(&mut rng);
        let n = f.order();
        let d = f.domain();
        let slot = d.width() / (n + 1) as f64;
        let nodes = (0..=n).map(|i| (d.start() + slot * (i as f64 + 0.5), 1)).collect();
        let spec = SupportSpec::new(n, d, nodes).unwrap();
        let signs = spec.expected_signs(n);
        prop_assert!(signs.windows(2).all(|w| w[0] == -w[1]));
        prop_assert_eq!(*signs.last().unwrap(), 1);
        let r = support_polynomial(&f, &spec).unwrap();
        let h = |x: f64| f.evaluate(x).unwrap();
        prop_assert!(r.passed);
        prop_assert!(observed_chain_holds(&h, d, &spec, &r, n));
    }

    #[test]
    fn relative_support_on_comparable_pairs(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (f, g) = comparable_pair(&mut rng);
        let n = f.order();
        let spec = SupportSpec::new(n, f.domain(), random_support_nodes(&mut rng, n, f.domain())).unwrap();
        let rel = relative_support(&f, &g, &spec).unwrap();
        prop_assert!(rel.result.passed);
        for &x in spec.nodes() {
            let (u, v) = (f.evaluate(x).unwrap(), rel.g_plus_p.evaluate(x).unwrap());
            prop_assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0));
        }
        let h = |x: f64| f.evaluate(x).unwrap() - g.evaluate(x).unwrap();
        prop_assert!(observed_chain_holds(&h, f.domain(), &spec, &rel.result, n));
        // reversing a strict comparison breaks the precondition
        if !f.mod_pi_n_equal(&g).unwrap() {
            prop_assert!(matches!(relative_support(&g, &f, &spec), Err(Error::Precondition(_))));
        }
    }
}

#[test]
fn identical_functions_need_no_polynomial() {
    let mut rng = rng(3);
    let f = random_form(&mut rng);
    let n = f.order();
    let spec = SupportSpec::new(n, f.domain(), random_support_nodes(&mut rng, n, f.domain())).unwrap();
    let rel = relative_support(&f, &f, &spec).unwrap();
    assert!(rel.result.passed);
    assert!(rel.result.p.max_abs_coeff() <= 1e-12);
}
