use std::fmt;

use serde::{Deserialize, Serialize};

/// Strength of an exponential system, ordered from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    None,
    Bessel,
    Frame,
    RieszBasis,
    OrthogonalBasis,
}

impl PairKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::None => "none",
            PairKind::Bessel => "bessel",
            PairKind::Frame => "frame",
            PairKind::RieszBasis => "riesz-basis",
            PairKind::OrthogonalBasis => "orthogonal-basis",
        }
    }

    pub fn is_basis(self) -> bool {
        self >= PairKind::RieszBasis
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PairKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "none" => Ok(PairKind::None),
            "bessel" => Ok(PairKind::Bessel),
            "frame" => Ok(PairKind::Frame),
            "riesz" | "riesz-basis" => Ok(PairKind::RieszBasis),
            "orthogonal" | "orthogonal-basis" => Ok(PairKind::OrthogonalBasis),
            other => Err(crate::Error::InvalidArgument(format!("unknown kind {other:?}"))),
        }
    }
}
