use super::Polynomial;
use crate::error::{Error, Result};

/// One interpolation node: `values[i]` is the prescribed `i`-th derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteNode {
    pub x: f64,
    pub values: Vec<f64>,
}

impl HermiteNode {
    pub fn new(x: f64, values: Vec<f64>) -> Self {
        Self { x, values }
    }
}

/// The unique polynomial of degree at most `degree` matching every
/// prescribed derivative, built from the confluent divided-difference table.
pub fn hermite_interpolate(nodes: &[HermiteNode], degree: usize) -> Result<Polynomial> {
    let total: usize = nodes.iter().map(|n| n.values.len()).sum();
    if total != degree + 1 {
        return Err(Error::ArityMismatch {
            expected: degree + 1,
            got: total,
        });
    }
    for node in nodes {
        if node.values.is_empty() {
            return Err(Error::InvalidInput(format!(
                "node {} carries no values",
                node.x
            )));
        }
        if !node.x.is_finite() || node.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite interpolation data".into()));
        }
    }
    for w in nodes.windows(2) {
        if !(w[0].x < w[1].x) {
            return Err(Error::InvalidInput(format!(
                "nodes must be strictly increasing, got {} then {}",
                w[0].x, w[1].x
            )));
        }
    }

    // z: node sequence with repetition; owner[i]: index of the node z[i] came from.
    let mut z = Vec::with_capacity(total);
    let mut owner = Vec::with_capacity(total);
    for (j, node) in nodes.iter().enumerate() {
        for _ in 0..node.values.len() {
            z.push(node.x);
            owner.push(j);
        }
    }

    let mut column: Vec<f64> = owner.iter().map(|&j| nodes[j].values[0]).collect();
    let mut newton = vec![column[0]];
    let mut inv_fact = 1.0;
    for order in 1..total {
        inv_fact /= order as f64;
        let next: Vec<f64> = (order..total)
            .map(|i| {
                let k = i - order;
                if owner[i] == owner[i - order] {
                    nodes[owner[i]].values[order] * inv_fact
                } else {
                    (column[k + 1] - column[k]) / (z[i] - z[i - order])
                }
            })
            .collect();
        newton.push(next[0]);
        column = next;
    }

    let mut p = Polynomial::constant(newton[total - 1]);
    for k in (0..total - 1).rev() {
        let factor = Polynomial::new(vec![-z[k], 1.0]);
        p = &(&p * &factor) + &Polynomial::constant(newton[k]);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_from_tangent_and_value() {
        let nodes = [
            HermiteNode::new(0.0, vec![0.0, 0.0]),
            HermiteNode::new(1.0, vec![1.0]),
        ];
        let p = hermite_interpolate(&nodes, 2).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(p.coeff(0).abs() < 1e-15);
        assert!(p.coeff(1).abs() < 1e-15);
        assert!((p.coeff(2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_value_is_constant() {
        let p = hermite_interpolate(&[HermiteNode::new(0.0, vec![5.0])], 0).unwrap();
        assert_eq!(p, Polynomial::constant(5.0));
    }

    #[test]
    fn arity_mismatch() {
        let nodes = [HermiteNode::new(0.0, vec![1.0, 2.0])];
        assert_eq!(
            hermite_interpolate(&nodes, 2),
            Err(Error::ArityMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn duplicate_nodes_rejected() {
        let nodes = [
            HermiteNode::new(0.5, vec![1.0]),
            HermiteNode::new(0.5, vec![2.0]),
        ];
        assert!(matches!(
            hermite_interpolate(&nodes, 1),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn second_derivative_condition() {
        // p(1) = 2, p'(1) = 3, p''(1) = 4 => 2 + 3(x-1) + 2(x-1)^2
        let p = hermite_interpolate(&[HermiteNode::new(1.0, vec![2.0, 3.0, 4.0])], 2).unwrap();
        assert!((p.eval(2.0) - 7.0).abs() < 1e-12);
        assert!((p.derivative().eval(1.0) - 3.0).abs() < 1e-12);
        assert!((p.nth_derivative(2).eval(1.0) - 4.0).abs() < 1e-12);
    }
}
