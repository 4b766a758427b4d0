use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds used when classifying finite pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Bound on `max |FᴴF - kI|` for the orthogonal kind.
    pub unitarity: f64,
    /// Condition numbers at or above this are treated as singular.
    pub max_condition: f64,
    /// Smallest admissible lower frame constant.
    pub frame_lower: f64,
    /// Bound on character sums for mutual orthogonality.
    pub orthogonality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitarity: 1e-10,
            max_condition: 1e12,
            frame_lower: 1e-12,
            orthogonality: 1e-10,
        }
    }
}

impl Tolerances {
    /// Overrides the unitarity and orthogonality tolerances. Must lie in `(0, 1e-3)`.
    pub fn with_override(tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1e-3) {
            return Err(Error::InvalidArgument(format!(
                "tolerance override {tol} outside (0, 1e-3)"
            )));
        }
        Ok(Tolerances {
            unitarity: tol,
            orthogonality: tol,
            ..Tolerances::default()
        })
    }
}
