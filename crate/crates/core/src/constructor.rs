//! Combining a continuous pair `(Ω₁, Λ₁)` with a finite pair `(A, J)`.
//!
//! The combined pair is `(Ω₁ + A, Λ₁ + J/N)`. Each combination records the
//! hypotheses it relied on; a failed hypothesis does not abort, the result
//! carries kind [`PairKind::None`] and names the failing check so that the
//! pair can still be inspected numerically.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::domains::{minkowski_translate, root_of_unity_condition, shift_spectrum, BoxDomain, Spectrum};
use crate::error::{Error, Result};
use crate::finite::{classify_finite_pair, FiniteClassification, FiniteSet};
use crate::kind::PairKind;
use crate::rational::{to_f64, Rational};
use crate::tolerance::Tolerances;

pub const CHECK_DIMENSION: &str = "dimension";
pub const CHECK_BASE_KIND: &str = "base-kind";
pub const CHECK_CARDINALITY: &str = "cardinality";
pub const CHECK_FINITE_KIND: &str = "finite-kind";
pub const CHECK_DISJOINTNESS: &str = "disjointness";
pub const CHECK_DISTINCT_SPECTRUM: &str = "distinct-spectrum";
pub const CHECK_ROOT_OF_UNITY: &str = "root-of-unity";

/// Constants are reported for unnormalized exponentials `e_λ(x) = e^{2πiλ·x}`;
/// an orthogonal base pair therefore has `α = β = |Ω₁|`.
pub const CONSTANTS_CONVENTION: &str =
    "unnormalized exponentials; orthogonal base pairs default to alpha = beta = |Omega_1|; finite constants use counting measure";

/// A domain, a spectrum and the claimed strength of `E(Λ)` on `L²(Ω)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousPair {
    pub domain: BoxDomain,
    pub spectrum: Spectrum,
    pub kind: PairKind,
    pub lower: f64,
    pub upper: f64,
}

impl ContinuousPair {
    pub fn new(domain: BoxDomain, spectrum: Spectrum, kind: PairKind, lower: f64, upper: f64) -> Result<Self> {
        if domain.dimension() != spectrum.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "domain dimension {} and spectrum dimension {}",
                domain.dimension(),
                spectrum.dimension()
            )));
        }
        if !(lower <= upper) || lower < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "constants must satisfy 0 <= lower <= upper, got ({lower}, {upper})"
            )));
        }
        if kind >= PairKind::Frame && lower <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "a {kind} needs a positive lower constant"
            )));
        }
        Ok(ContinuousPair {
            domain,
            spectrum,
            kind,
            lower,
            upper,
        })
    }

    /// An orthogonal pair with `α = β = |Ω|`.
    pub fn orthogonal(domain: BoxDomain, spectrum: Spectrum) -> Result<Self> {
        let m = to_f64(&domain.measure());
        ContinuousPair::new(domain, spectrum, PairKind::OrthogonalBasis, m, m)
    }

    /// `([0,1)^d, Z^d)`.
    pub fn unit_cube(dimension: usize) -> Self {
        ContinuousPair::orthogonal(BoxDomain::unit_cube(dimension), Spectrum::integer_lattice(dimension))
            .expect("unit cube pair is valid")
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl HypothesisCheck {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        HypothesisCheck {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedPairResult {
    /// Kind that was requested.
    pub target: PairKind,
    /// Kind that was established; `none` if any hypothesis failed.
    pub kind: PairKind,
    /// The combined pair, absent only when the domain or spectrum could not be formed.
    pub pair: Option<ContinuousPair>,
    pub predicted_lower: Option<f64>,
    pub predicted_upper: Option<f64>,
    pub finite: Option<FiniteClassification>,
    pub hypotheses: Vec<HypothesisCheck>,
    pub convention: String,
}

impl CombinedPairResult {
    pub fn succeeded(&self) -> bool {
        self.hypotheses.iter().all(|h| h.passed)
    }

    pub fn failed_checks(&self) -> Vec<&HypothesisCheck> {
        self.hypotheses.iter().filter(|h| !h.passed).collect()
    }

    pub fn check(&self, name: &str) -> Option<&HypothesisCheck> {
        self.hypotheses.iter().find(|h| h.name == name)
    }
}

/// Frame combination: `(Ω₁+A, Λ₁+J/N)` with constants `(α·c, β·C)`.
pub fn combine_frame(base: &ContinuousPair, a: &FiniteSet, j: &FiniteSet) -> CombinedPairResult {
    combine(base, a, j, PairKind::Frame, &Tolerances::default())
}

/// Riesz combination: needs a Riesz base pair and an invertible square evaluation matrix.
pub fn combine_riesz(base: &ContinuousPair, a: &FiniteSet, j: &FiniteSet) -> CombinedPairResult {
    combine(base, a, j, PairKind::RieszBasis, &Tolerances::default())
}

/// Orthogonal combination: needs orthogonal bases on both sides.
pub fn combine_orthogonal(base: &ContinuousPair, a: &FiniteSet, j: &FiniteSet) -> CombinedPairResult {
    combine(base, a, j, PairKind::OrthogonalBasis, &Tolerances::default())
}

/// Shared implementation of the three combinations. `target` must be at
/// least [`PairKind::Frame`].
pub fn combine(
    base: &ContinuousPair,
    a: &FiniteSet,
    j: &FiniteSet,
    target: PairKind,
    tol: &Tolerances,
) -> CombinedPairResult {
    let target = target.max(PairKind::Frame);
    let mut checks = Vec::new();
    let mut result = CombinedPairResult {
        target,
        kind: PairKind::None,
        pair: None,
        predicted_lower: None,
        predicted_upper: None,
        finite: None,
        hypotheses: Vec::new(),
        convention: CONSTANTS_CONVENTION.to_string(),
    };

    let d = base.dimension();
    let dims_ok = a.dimension() == d && j.dimension() == d && a.modulus() == j.modulus();
    checks.push(HypothesisCheck::new(
        CHECK_DIMENSION,
        dims_ok,
        format!(
            "base in R^{d}, A in Z_{}^{}, J in Z_{}^{}",
            a.modulus(),
            a.dimension(),
            j.modulus(),
            j.dimension()
        ),
    ));
    if !dims_ok {
        result.hypotheses = checks;
        return result;
    }

    checks.push(HypothesisCheck::new(
        CHECK_BASE_KIND,
        base.kind >= target && base.lower > 0.0,
        format!("base pair is {} with constants ({}, {})", base.kind, base.lower, base.upper),
    ));

    let cardinality_ok = if target >= PairKind::RieszBasis {
        j.len() == a.len()
    } else {
        j.len() >= a.len()
    };
    let relation = if target >= PairKind::RieszBasis { "#J = #A" } else { "#J >= #A" };
    checks.push(HypothesisCheck::new(
        CHECK_CARDINALITY,
        cardinality_ok,
        format!("{relation} required; #A = {}, #J = {}", a.len(), j.len()),
    ));

    let finite = classify_finite_pair(a, j, tol).ok();
    match &finite {
        Some(c) => checks.push(HypothesisCheck::new(
            CHECK_FINITE_KIND,
            c.kind >= target,
            format!(
                "finite pair is {} (c = {:.6}, C = {:.6}, condition number {})",
                c.kind, c.lower_constant, c.upper_constant, c.condition_number
            ),
        )),
        None => checks.push(HypothesisCheck::new(
            CHECK_FINITE_KIND,
            false,
            "finite pair could not be classified (#J < #A)",
        )),
    }

    let domain = minkowski_translate(&base.domain, a);
    checks.push(match &domain {
        Ok(_) => HypothesisCheck::new(CHECK_DISJOINTNESS, true, "translates of the base domain are disjoint"),
        Err(e) => HypothesisCheck::new(CHECK_DISJOINTNESS, false, e.to_string()),
    });

    let spectrum = shift_spectrum(&base.spectrum, j, j.modulus());
    checks.push(match &spectrum {
        Ok(_) => HypothesisCheck::new(CHECK_DISTINCT_SPECTRUM, true, "shifted spectra are distinct"),
        Err(e) => HypothesisCheck::new(CHECK_DISTINCT_SPECTRUM, false, e.to_string()),
    });

    let roots = root_of_unity_condition(&base.spectrum, a).unwrap_or(false);
    checks.push(HypothesisCheck::new(
        CHECK_ROOT_OF_UNITY,
        roots,
        if roots {
            "e^{2 pi i lambda.a} = 1 for all lambda in the base spectrum and a in A".to_string()
        } else {
            "root-of-unity condition failed: some lambda.a is not an integer".to_string()
        },
    ));

    let passed = checks.iter().all(|h| h.passed);
    if let Some(c) = &finite {
        result.predicted_lower = Some(base.lower * c.lower_constant);
        result.predicted_upper = Some(base.upper * c.upper_constant);
    }
    if passed {
        result.kind = target;
    }
    if let (Ok(domain), Ok(spectrum)) = (domain, spectrum) {
        let (lower, upper) = match (passed, result.predicted_lower, result.predicted_upper) {
            (true, Some(l), Some(u)) => (l, u),
            // only the unconditional Bessel bound survives
            _ => (0.0, base.upper * (a.len() * j.len()) as f64),
        };
        result.pair = Some(ContinuousPair {
            domain,
            spectrum,
            kind: result.kind,
            lower,
            upper,
        });
    }
    result.finite = finite;
    result.hypotheses = checks;
    result
}

/// Rational-shift variant: `Λ = Λ₁ + B` with `B ⊂ Q^d ∩ [0,1)^d` and integer
/// `A ⊂ Z^d_{≥0}`. Picks the smallest `N` with `NB ⊂ Z^d` and `N` larger than
/// every coordinate of `A`, then combines `(A, NB)` in `Z_N^d`.
pub fn combine_rational_shifts(
    base: &ContinuousPair,
    a_points: &[Vec<i64>],
    b: &[Vec<Rational>],
    target: PairKind,
) -> Result<CombinedPairResult> {
    let d = base.dimension();
    if b.iter().any(|v| v.len() != d) || a_points.iter().any(|p| p.len() != d) {
        return Err(Error::DimensionMismatch("shift or translate of the wrong dimension".into()));
    }
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if b.iter().flatten().any(|x| *x < zero || *x >= one) {
        return Err(Error::InvalidArgument("rational shifts must lie in [0, 1)^d".into()));
    }
    if a_points.iter().flatten().any(|&x| x < 0) {
        return Err(Error::InvalidArgument("translates must have nonnegative coordinates".into()));
    }
    let lcm = b.iter().flatten().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let max_a = a_points.iter().flatten().copied().max().unwrap_or(0);
    let n = lcm * (max_a / lcm + 1);
    let j_points: Vec<Vec<i64>> = b
        .iter()
        .map(|v| v.iter().map(|x| (x * Rational::from_integer(n)).to_integer()).collect())
        .collect();
    let a = FiniteSet::new(n as u64, d, a_points.to_vec())?;
    let j = FiniteSet::new(n as u64, d, j_points)?;
    Ok(combine(base, &a, &j, target, &Tolerances::default()))
}

/// Cartesian product of two orthogonal pairs.
pub fn cartesian_product(p1: &ContinuousPair, p2: &ContinuousPair) -> Result<ContinuousPair> {
    if p1.kind != PairKind::OrthogonalBasis || p2.kind != PairKind::OrthogonalBasis {
        return Err(Error::Unsupported(format!(
            "products are only supported for orthogonal pairs (got {} and {})",
            p1.kind, p2.kind
        )));
    }
    let domain = p1.domain.product(&p2.domain);
    let spectrum = p1.spectrum.product(&p2.spectrum);
    ContinuousPair::new(
        domain,
        spectrum,
        PairKind::OrthogonalBasis,
        p1.lower * p2.lower,
        p1.upper * p2.upper,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub base_complete: bool,
    pub finite_complete: bool,
    pub disjoint: bool,
    pub root_of_unity: bool,
    /// All of the above: `E(Λ)` is complete in `L²(Ω)`.
    pub applies: bool,
}

/// Completeness transfer: a complete base system, an injective evaluation
/// matrix, disjoint translates and the root-of-unity condition.
pub fn check_completeness_hypotheses(base: &ContinuousPair, a: &FiniteSet, j: &FiniteSet) -> CompletenessReport {
    let tol = Tolerances::default();
    let base_complete = base.kind >= PairKind::Frame;
    let finite_complete = classify_finite_pair(a, j, &tol)
        .map(|c| c.lower_constant > tol.frame_lower)
        .unwrap_or(false);
    let disjoint = minkowski_translate(&base.domain, a).is_ok();
    let root_of_unity = root_of_unity_condition(&base.spectrum, a).unwrap_or(false);
    CompletenessReport {
        base_complete,
        finite_complete,
        disjoint,
        root_of_unity,
        applies: base_complete && finite_complete && disjoint && root_of_unity,
    }
}

/// Synthesis-side Bessel constants for `E(Λ₁ + J)` on `Ω₁ + A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselBound {
    /// Bessel constant `C` of the base system.
    pub base_constant: f64,
    /// `C·♯J`: bounds `‖Σ c e_λ‖²` over each single translate `Ω₁ + a`.
    pub refined: f64,
    /// `♯A·♯J·C`: bounds the norm over the whole union.
    pub coarse: f64,
    /// With `♯A = 1` and a tight base frame the combined frame is tight.
    pub tight_frame: bool,
}

pub fn bessel_constant(base: &ContinuousPair, a: &FiniteSet, j: &FiniteSet) -> BesselBound {
    let c = base.upper;
    let (na, nj) = (a.len() as f64, j.len() as f64);
    BesselBound {
        base_constant: c,
        refined: c * nj,
        coarse: na * nj * c,
        tight_frame: a.len() == 1,
    }
}
