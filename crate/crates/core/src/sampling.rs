//! Sampling on `Λ = Z + J/N` for signals whose Fourier transform lives on
//! `Ω = [0,1) + A` (one dimension).
//!
//! Fourier convention: `f(t) = ∫ f̂(ξ) e^{2πiξt} dξ`. The reconstruction sum
//! uses `e^{-2πiλξ}`, the sign that makes `(♯J)⁻¹ Σ f(λ) e^{-2πiλξ}` converge
//! to `f̂(ξ)` under this convention.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domains::{minkowski_translate, BoxDomain};
use crate::error::{Error, Result};
use crate::finite::{symbol_of_set, FiniteSet};
use crate::rational::{exponential_integral, int, to_f64, Rational};

/// One term `coefficient · e^{2πiτξ}` of `f̂` on a box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralTerm {
    pub coefficient: Complex64,
    pub frequency: Rational,
}

impl SpectralTerm {
    pub fn constant(value: f64) -> Self {
        SpectralTerm {
            coefficient: Complex64::new(value, 0.0),
            frequency: int(0),
        }
    }
}

/// A Paley–Wiener signal given by `f̂`, a finite exponential sum on each box
/// of its supporting domain and zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct BandlimitedSignal {
    domain: BoxDomain,
    terms: Vec<Vec<SpectralTerm>>,
}

impl BandlimitedSignal {
    pub fn new(domain: BoxDomain, terms: Vec<Vec<SpectralTerm>>) -> Result<Self> {
        if domain.dimension() != 1 {
            return Err(Error::Unsupported("sampling is implemented for d = 1 only".into()));
        }
        if terms.len() != domain.boxes().len() {
            return Err(Error::Shape(format!(
                "{} term lists for {} boxes",
                terms.len(),
                domain.boxes().len()
            )));
        }
        Ok(BandlimitedSignal { domain, terms })
    }

    /// `f̂ = χ_Ω`.
    pub fn indicator(domain: BoxDomain) -> Result<Self> {
        let terms = vec![vec![SpectralTerm::constant(1.0)]; domain.boxes().len()];
        BandlimitedSignal::new(domain, terms)
    }

    pub fn zero(domain: BoxDomain) -> Result<Self> {
        let terms = vec![Vec::new(); domain.boxes().len()];
        BandlimitedSignal::new(domain, terms)
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    /// `f̂(ξ)`, zero off the domain.
    pub fn fourier_transform(&self, xi: f64) -> Complex64 {
        self.domain
            .boxes()
            .iter()
            .zip(&self.terms)
            .find(|(b, _)| b.contains(&[xi]))
            .map(|(_, terms)| {
                terms
                    .iter()
                    .map(|t| t.coefficient * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * to_f64(&t.frequency) * xi))
                    .sum()
            })
            .unwrap_or_default()
    }

    /// `f(t) = ∫_Ω f̂(ξ) e^{2πiξt} dξ` in closed form.
    pub fn evaluate(&self, t: &Rational) -> Complex64 {
        self.domain
            .boxes()
            .iter()
            .zip(&self.terms)
            .map(|(b, terms)| {
                terms
                    .iter()
                    .map(|term| term.coefficient * exponential_integral(&b.lo()[0], &b.hi()[0], &(term.frequency + t)))
                    .sum::<Complex64>()
            })
            .sum()
    }
}

/// Sampling points `{-M, …, M} + J/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePattern {
    shifts: Vec<Rational>,
    truncation: u32,
}

impl SamplePattern {
    pub fn new(shifts: Vec<Rational>, truncation: u32) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::InvalidArgument("a sample pattern needs at least one shift".into()));
        }
        for (i, s) in shifts.iter().enumerate() {
            if *s < int(0) || *s >= int(1) {
                return Err(Error::InvalidArgument(format!("shift {s} outside [0, 1)")));
            }
            if shifts[..i].contains(s) {
                return Err(Error::DuplicateSpectrum(s.to_string()));
            }
        }
        Ok(SamplePattern { shifts, truncation })
    }

    /// Shifts `j/N` for `j ∈ J ⊂ Z_N`.
    pub fn from_finite(j: &FiniteSet, truncation: u32) -> Result<Self> {
        if j.dimension() != 1 {
            return Err(Error::Unsupported("sampling is implemented for d = 1 only".into()));
        }
        let n = j.modulus() as i64;
        SamplePattern::new(j.points().iter().map(|p| Rational::new(p[0], n)).collect(), truncation)
    }

    pub fn shifts(&self) -> &[Rational] {
        &self.shifts
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Sorted sampling points.
    pub fn points(&self) -> Vec<Rational> {
        let m = self.truncation as i64;
        let mut pts: Vec<Rational> = (-m..=m)
            .flat_map(|n| self.shifts.iter().map(move |s| int(n) + s))
            .collect();
        pts.sort();
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub point: Rational,
    pub value: Complex64,
}

/// `f(λ)` at every pattern point.
pub fn sample_signal(f: &BandlimitedSignal, p: &SamplePattern) -> Vec<Sample> {
    p.points()
        .into_par_iter()
        .map(|point| Sample {
            value: f.evaluate(&point),
            point,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AliasCoefficient {
    pub k: i64,
    /// `χ̂_J(k)` as `[re, im]`.
    pub symbol: [f64; 2],
    /// Whether `k ∈ A - A` (differences taken in `Z`).
    pub in_difference_set: bool,
}

fn difference_set(a: &FiniteSet) -> Vec<i64> {
    let mut diffs: Vec<i64> = a
        .points()
        .iter()
        .flat_map(|p| a.points().iter().map(move |q| p[0] - q[0]))
        .collect();
    diffs.sort_unstable();
    diffs.dedup();
    diffs
}

fn require_line(a: &FiniteSet, j: &FiniteSet) -> Result<()> {
    if a.dimension() != 1 || j.dimension() != 1 {
        return Err(Error::Unsupported("alias analysis is implemented for d = 1 only".into()));
    }
    if a.modulus() != j.modulus() {
        return Err(Error::DimensionMismatch(format!(
            "A in Z_{} and J in Z_{}",
            a.modulus(),
            j.modulus()
        )));
    }
    Ok(())
}

/// `χ̂_J(k)` for every `k` in range, flagging `k ∈ A - A`.
pub fn alias_coefficients(a: &FiniteSet, j: &FiniteSet, k_range: RangeInclusive<i64>) -> Result<Vec<AliasCoefficient>> {
    require_line(a, j)?;
    let diffs = difference_set(a);
    Ok(k_range
        .map(|k| {
            let z = symbol_of_set(j, &[k]);
            AliasCoefficient {
                k,
                symbol: [z.re, z.im],
                in_difference_set: diffs.binary_search(&k).is_ok(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AliasViolation {
    pub k: i64,
    pub case: String,
    pub detail: String,
}

/// Outcome of checking that every aliasing term `χ̂_J(k) f̂(ξ - k)`, `k ≠ 0`, vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AliasReport {
    pub modulus: u64,
    pub k_min: i64,
    pub k_max: i64,
    /// `χ̂_J(0) = ♯J`.
    pub case_one: bool,
    /// `χ̂_J(k) = 0` for `k ∈ (A - A) \ {0}`.
    pub case_two_a: bool,
    /// `|Ω ∩ (Ω + k)| = 0` for `k ∉ A - A`.
    pub case_two_b: bool,
    pub coefficients: Vec<AliasCoefficient>,
    pub violations: Vec<AliasViolation>,
}

impl AliasReport {
    pub fn passed(&self) -> bool {
        self.case_one && self.case_two_a && self.case_two_b
    }
}

pub fn verify_alias_cancellation(a: &FiniteSet, j: &FiniteSet, k_range: RangeInclusive<i64>) -> Result<AliasReport> {
    const SYMBOL_ZERO: f64 = 1e-10;
    let coefficients = alias_coefficients(a, j, k_range.clone())?;
    let omega = minkowski_translate(&BoxDomain::unit_cube(1), a)?;
    let mut violations = Vec::new();
    let mut report = AliasReport {
        modulus: a.modulus(),
        k_min: *k_range.start(),
        k_max: *k_range.end(),
        case_one: true,
        case_two_a: true,
        case_two_b: true,
        coefficients: Vec::new(),
        violations: Vec::new(),
    };

    // exact: every term of χ̂_J(0) is the exact constant 1
    let at_zero = symbol_of_set(j, &[0]);
    if at_zero != Complex64::new(j.len() as f64, 0.0) {
        report.case_one = false;
        violations.push(AliasViolation {
            k: 0,
            case: "I".into(),
            detail: format!("symbol at 0 is {at_zero}, expected {}", j.len()),
        });
    }

    for c in coefficients.iter().filter(|c| c.k != 0) {
        if c.in_difference_set {
            let modulus = Complex64::new(c.symbol[0], c.symbol[1]).norm();
            if modulus >= SYMBOL_ZERO {
                report.case_two_a = false;
                violations.push(AliasViolation {
                    k: c.k,
                    case: "II(a)".into(),
                    detail: format!("|symbol| = {modulus:.3e} at a difference of A"),
                });
            }
        } else {
            let overlap = omega.overlap_measure(&omega.translate(&[int(c.k)]));
            if overlap != int(0) {
                report.case_two_b = false;
                violations.push(AliasViolation {
                    k: c.k,
                    case: "II(b)".into(),
                    detail: format!("domain overlaps its translate by {overlap}"),
                });
            }
        }
    }
    report.coefficients = coefficients;
    report.violations = violations;
    Ok(report)
}

/// `f̂_M(ξ) = (♯J)⁻¹ Σ_λ f(λ) e^{-2πiλξ}` at each evaluation point.
pub fn reconstruct_spectrum(
    samples: &[Sample],
    p: &SamplePattern,
    j: &FiniteSet,
    eval_points: &[f64],
) -> Result<Vec<Complex64>> {
    if p.shifts().len() != j.len() {
        return Err(Error::Shape(format!(
            "pattern has {} shifts but #J = {}",
            p.shifts().len(),
            j.len()
        )));
    }
    let expected = p.points();
    if samples.len() != expected.len() || samples.iter().zip(&expected).any(|(s, x)| s.point != *x) {
        return Err(Error::Shape(format!(
            "{} samples do not match the {} pattern points",
            samples.len(),
            expected.len()
        )));
    }
    let scale = 1.0 / j.len() as f64;
    let nodes: Vec<(f64, Complex64)> = samples.iter().map(|s| (to_f64(&s.point), s.value)).collect();
    Ok(eval_points
        .par_iter()
        .map(|&xi| {
            nodes
                .iter()
                .map(|(lambda, v)| v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * lambda * xi))
                .sum::<Complex64>()
                * scale
        })
        .collect())
}

/// Relative discrete L² error of a reconstruction against `f̂` on the same points.
pub fn relative_error(f: &BandlimitedSignal, eval_points: &[f64], estimate: &[Complex64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (&xi, est) in eval_points.iter().zip(estimate) {
        let truth = f.fourier_transform(xi);
        num += (est - truth).norm_sqr();
        den += truth.norm_sqr();
    }
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// `count` midpoints spread evenly over the boxes of a one-dimensional domain.
pub fn midpoint_grid(domain: &BoxDomain, count: usize) -> Vec<f64> {
    let boxes = domain.boxes();
    let per_box = (count / boxes.len()).max(1);
    boxes
        .iter()
        .flat_map(|b| {
            let (lo, hi) = (to_f64(&b.lo()[0]), to_f64(&b.hi()[0]));
            (0..per_box).map(move |i| lo + (hi - lo) * (i as f64 + 0.5) / per_box as f64)
        })
        .collect()
}
