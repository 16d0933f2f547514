use serde::{Deserialize, Serialize};

use super::Measure;

/// One-sided continuity convention for cumulative masses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Continuity {
    Left,
    Right,
}

/// Signed cumulative mass of a measure counted from an anchor `ξ`.
///
/// Right-continuous: `G(x) = μ((ξ, x])` for `x ≥ ξ` and `-μ((x, ξ])` below.
/// Left-continuous: `G(x) = μ([ξ, x))` and `-μ([x, ξ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionFn {
    measure: Measure,
    anchor: f64,
    continuity: Continuity,
}

impl DistributionFn {
    pub(crate) fn new(measure: Measure, anchor: f64, continuity: Continuity) -> Self {
        Self {
            measure,
            anchor,
            continuity,
        }
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        // Both branches of the definition reduce to one difference of
        // cumulative masses from the left end of the domain.
        self.measure.cumulative(x, self.continuity) - self.measure.cumulative(self.anchor, self.continuity)
    }
}
