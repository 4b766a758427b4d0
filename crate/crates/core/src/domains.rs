//! Exact rational geometry for the continuous side: unions of half-open
//! boxes, lattices with rational shifts, Minkowski translates.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::FiniteSet;
use crate::rational::{
    self, dot_int, format_vector, int, invert, is_integer, mat_vec, mat_vec_int, to_f64,
    Rational, RationalMatrix,
};

/// Half-open box `[lo_1, hi_1) × … × [lo_d, hi_d)` with rational corners.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBox")]
pub struct RationalBox {
    #[serde(with = "rational::serde_rational::vec")]
    lo: Vec<Rational>,
    #[serde(with = "rational::serde_rational::vec")]
    hi: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawBox {
    #[serde(with = "rational::serde_rational::vec")]
    lo: Vec<Rational>,
    #[serde(with = "rational::serde_rational::vec")]
    hi: Vec<Rational>,
}

impl TryFrom<RawBox> for RationalBox {
    type Error = Error;

    fn try_from(raw: RawBox) -> Result<Self> {
        RationalBox::new(raw.lo, raw.hi)
    }
}

impl RationalBox {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidDomain(format!(
                "corner dimensions {} and {} differ or are zero",
                lo.len(),
                hi.len()
            )));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l >= h) {
            return Err(Error::InvalidDomain(format!(
                "empty box {} to {}",
                format_vector(&lo),
                format_vector(&hi)
            )));
        }
        Ok(RationalBox { lo, hi })
    }

    /// `[0, 1)^d`
    pub fn unit(dimension: usize) -> Self {
        RationalBox {
            lo: vec![int(0); dimension],
            hi: vec![int(1); dimension],
        }
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> Rational {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    pub fn translate(&self, v: &[Rational]) -> Self {
        RationalBox {
            lo: self.lo.iter().zip(v).map(|(x, t)| x + t).collect(),
            hi: self.hi.iter().zip(v).map(|(x, t)| x + t).collect(),
        }
    }

    pub fn intersection_volume(&self, other: &RationalBox) -> Rational {
        let mut vol = int(1);
        for k in 0..self.dimension() {
            let lo = self.lo[k].max(other.lo[k]);
            let hi = self.hi[k].min(other.hi[k]);
            if hi <= lo {
                return Rational::zero();
            }
            vol *= hi - lo;
        }
        vol
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(x)
            .all(|((l, h), &t)| to_f64(l) <= t && t < to_f64(h))
    }

    pub fn product(&self, other: &RationalBox) -> RationalBox {
        RationalBox {
            lo: self.lo.iter().chain(&other.lo).copied().collect(),
            hi: self.hi.iter().chain(&other.hi).copied().collect(),
        }
    }
}

/// Finite union of boxes whose pairwise intersections have measure zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain")]
pub struct BoxDomain {
    #[serde(rename = "d")]
    dimension: usize,
    boxes: Vec<RationalBox>,
}

#[derive(Deserialize)]
struct RawDomain {
    #[serde(rename = "d")]
    dimension: usize,
    boxes: Vec<RationalBox>,
}

impl TryFrom<RawDomain> for BoxDomain {
    type Error = Error;

    fn try_from(raw: RawDomain) -> Result<Self> {
        BoxDomain::new(raw.dimension, raw.boxes)
    }
}

impl BoxDomain {
    pub fn new(dimension: usize, boxes: Vec<RationalBox>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidDomain("dimension must be positive".into()));
        }
        if boxes.is_empty() {
            return Err(Error::InvalidDomain("domain needs at least one box".into()));
        }
        if let Some(b) = boxes.iter().find(|b| b.dimension() != dimension) {
            return Err(Error::InvalidDomain(format!(
                "box of dimension {} in a {dimension}-dimensional domain",
                b.dimension()
            )));
        }
        for (i, b) in boxes.iter().enumerate() {
            for c in &boxes[i + 1..] {
                if !b.intersection_volume(c).is_zero() {
                    return Err(Error::InvalidDomain(format!(
                        "boxes {} and {} overlap in positive measure",
                        format_vector(b.lo()),
                        format_vector(c.lo())
                    )));
                }
            }
        }
        Ok(BoxDomain { dimension, boxes })
    }

    pub fn from_box(b: RationalBox) -> Self {
        BoxDomain {
            dimension: b.dimension(),
            boxes: vec![b],
        }
    }

    /// `[0, 1)^d`
    pub fn unit_cube(dimension: usize) -> Self {
        BoxDomain::from_box(RationalBox::unit(dimension))
    }

    /// One-dimensional `[lo, hi)`.
    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(BoxDomain::from_box(RationalBox::new(vec![lo], vec![hi])?))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn boxes(&self) -> &[RationalBox] {
        &self.boxes
    }

    pub fn measure(&self) -> Rational {
        self.boxes.iter().map(RationalBox::volume).sum()
    }

    pub fn translate(&self, v: &[Rational]) -> BoxDomain {
        BoxDomain {
            dimension: self.dimension,
            boxes: self.boxes.iter().map(|b| b.translate(v)).collect(),
        }
    }

    /// `|self ∩ other|` in exact arithmetic.
    pub fn overlap_measure(&self, other: &BoxDomain) -> Rational {
        self.boxes
            .iter()
            .flat_map(|b| other.boxes.iter().map(move |c| b.intersection_volume(c)))
            .sum()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.boxes.iter().any(|b| b.contains(x))
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &BoxDomain) -> BoxDomain {
        BoxDomain {
            dimension: self.dimension + other.dimension,
            boxes: self
                .boxes
                .iter()
                .flat_map(|b| other.boxes.iter().map(move |c| b.product(c)))
                .collect(),
        }
    }
}

fn int_vector(p: &[i64]) -> Vec<Rational> {
    p.iter().map(|&x| int(x)).collect()
}

/// `Ω₁ + A`: the union of `base + a` for `a ∈ A`, requiring the translates
/// to be pairwise disjoint up to measure zero.
pub fn minkowski_translate(base: &BoxDomain, a: &FiniteSet) -> Result<BoxDomain> {
    if base.dimension != a.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "domain of dimension {} translated by points of dimension {}",
            base.dimension,
            a.dimension()
        )));
    }
    let copies: Vec<BoxDomain> = a
        .points()
        .iter()
        .map(|p| base.translate(&int_vector(p)))
        .collect();
    for (i, first) in copies.iter().enumerate() {
        for (k, second) in copies.iter().enumerate().skip(i + 1) {
            if !first.overlap_measure(second).is_zero() {
                return Err(Error::Overlap {
                    first: a.points()[i].clone(),
                    second: a.points()[k].clone(),
                });
            }
        }
    }
    Ok(BoxDomain {
        dimension: base.dimension,
        boxes: copies.into_iter().flat_map(|c| c.boxes).collect(),
    })
}

/// A lattice `B·Z^d` plus finitely many rational shifts.
///
/// The basis matrix is stored by rows; its columns are the lattice
/// generators. Shifts are stored reduced to the half-open fundamental
/// parallelepiped of the basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum")]
pub struct Spectrum {
    #[serde(with = "rational::serde_rational::matrix")]
    basis: RationalMatrix,
    #[serde(with = "rational::serde_rational::matrix")]
    shifts: Vec<Vec<Rational>>,
    #[serde(rename = "radius", default, skip_serializing_if = "Option::is_none")]
    truncation_radius: Option<f64>,
    #[serde(skip)]
    inverse: RationalMatrix,
}

#[derive(Deserialize)]
struct RawSpectrum {
    #[serde(with = "rational::serde_rational::matrix")]
    basis: RationalMatrix,
    #[serde(with = "rational::serde_rational::matrix")]
    shifts: Vec<Vec<Rational>>,
    #[serde(rename = "radius", default)]
    truncation_radius: Option<f64>,
}

impl TryFrom<RawSpectrum> for Spectrum {
    type Error = Error;

    fn try_from(raw: RawSpectrum) -> Result<Self> {
        let mut s = Spectrum::new(raw.basis, raw.shifts)?;
        if let Some(r) = raw.truncation_radius {
            s = s.with_truncation_radius(r)?;
        }
        Ok(s)
    }
}

/// A spectrum point together with the index of the shift class it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub point: Vec<Rational>,
    pub shift_index: usize,
    pub lattice_coordinates: Vec<i64>,
}

impl Spectrum {
    /// Validates an invertible basis and shifts that are distinct modulo the lattice.
    pub fn new(basis: RationalMatrix, shifts: Vec<Vec<Rational>>) -> Result<Self> {
        let d = basis.len();
        if d == 0 || basis.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidSpectrum("basis must be a nonempty square matrix".into()));
        }
        let inverse = invert(&basis)
            .ok_or_else(|| Error::InvalidSpectrum("lattice basis is singular".into()))?;
        if shifts.is_empty() {
            return Err(Error::InvalidSpectrum("at least one shift is required".into()));
        }
        let mut spectrum = Spectrum {
            basis,
            shifts: Vec::with_capacity(shifts.len()),
            truncation_radius: None,
            inverse,
        };
        for s in shifts {
            if s.len() != d {
                return Err(Error::InvalidSpectrum(format!(
                    "shift {} has the wrong dimension",
                    format_vector(&s)
                )));
            }
            let reduced = spectrum.reduce(&s);
            if spectrum.shifts.contains(&reduced) {
                return Err(Error::DuplicateSpectrum(format_vector(&s)));
            }
            spectrum.shifts.push(reduced);
        }
        Ok(spectrum)
    }

    /// `Z^d`
    pub fn integer_lattice(dimension: usize) -> Self {
        Spectrum::scaled_lattice(dimension, int(1))
    }

    /// `scale · Z^d` with the single shift `0`.
    pub fn scaled_lattice(dimension: usize, scale: Rational) -> Self {
        let basis = (0..dimension)
            .map(|i| {
                (0..dimension)
                    .map(|k| if i == k { scale } else { int(0) })
                    .collect()
            })
            .collect();
        Spectrum::new(basis, vec![vec![int(0); dimension]]).expect("scaled identity is invertible")
    }

    pub fn with_truncation_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "truncation radius {radius} must be positive"
            )));
        }
        self.truncation_radius = Some(radius);
        Ok(self)
    }

    pub fn truncation_radius(&self) -> Option<f64> {
        self.truncation_radius
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn shifts(&self) -> &[Vec<Rational>] {
        &self.shifts
    }

    /// Columns of the basis matrix.
    pub fn generators(&self) -> Vec<Vec<Rational>> {
        let d = self.dimension();
        (0..d).map(|c| (0..d).map(|r| self.basis[r][c]).collect()).collect()
    }

    /// `vol(Λ₁) = |det B|`.
    pub fn covolume(&self) -> Rational {
        rational::determinant(&self.basis).abs()
    }

    /// Representative of `v` modulo the lattice in the fundamental parallelepiped.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let coords = mat_vec(&self.inverse, v);
        let frac: Vec<Rational> = coords.iter().map(rational::fract).collect();
        mat_vec(&self.basis, &frac)
    }

    /// Whether `v` belongs to the lattice part.
    pub fn in_lattice(&self, v: &[Rational]) -> bool {
        mat_vec(&self.inverse, v).iter().all(is_integer)
    }

    /// Every point `B n + shift` with `‖·‖∞ ≤ radius`, each tagged with its shift.
    /// Sorted lexicographically.
    pub fn enumerate_indexed(&self, radius: f64) -> Vec<SpectrumPoint> {
        let d = self.dimension();
        let mut out = Vec::new();
        if !(radius >= 0.0) {
            return out;
        }
        for (idx, shift) in self.shifts.iter().enumerate() {
            // |n_i| ≤ Σ_k |B⁻¹_ik| (radius + |shift_k|)
            let bounds: Vec<i64> = (0..d)
                .map(|i| {
                    let b: f64 = (0..d)
                        .map(|k| to_f64(&self.inverse[i][k].abs()) * (radius + to_f64(&shift[k].abs())))
                        .sum();
                    b.ceil() as i64 + 1
                })
                .collect();
            for n in lattice_box(&bounds) {
                let offset = mat_vec_int(&self.basis, &n);
                let point: Vec<Rational> = offset.iter().zip(shift).map(|(x, s)| x + s).collect();
                if point.iter().all(|x| to_f64(&x.abs()) <= radius) {
                    out.push(SpectrumPoint {
                        point,
                        shift_index: idx,
                        lattice_coordinates: n,
                    });
                }
            }
        }
        out.sort_by(|p, q| cmp_vectors(&p.point, &q.point));
        out
    }

    /// Every point `B n + shift` with `max |n_i| ≤ n_max`, sorted lexicographically.
    pub fn enumerate_by_index(&self, n_max: i64) -> Vec<SpectrumPoint> {
        let bounds = vec![n_max; self.dimension()];
        let mut out: Vec<SpectrumPoint> = self
            .shifts
            .iter()
            .enumerate()
            .flat_map(|(idx, shift)| {
                lattice_box(&bounds).into_iter().map(move |n| {
                    let offset = mat_vec_int(&self.basis, &n);
                    SpectrumPoint {
                        point: offset.iter().zip(shift).map(|(x, s)| x + s).collect(),
                        shift_index: idx,
                        lattice_coordinates: n,
                    }
                })
            })
            .collect();
        out.sort_by(|p, q| cmp_vectors(&p.point, &q.point));
        out
    }

    /// Cartesian product: block-diagonal basis and concatenated shifts.
    pub fn product(&self, other: &Spectrum) -> Spectrum {
        let (d1, d2) = (self.dimension(), other.dimension());
        let basis: RationalMatrix = (0..d1 + d2)
            .map(|r| {
                (0..d1 + d2)
                    .map(|c| match (r < d1, c < d1) {
                        (true, true) => self.basis[r][c],
                        (false, false) => other.basis[r - d1][c - d1],
                        _ => int(0),
                    })
                    .collect()
            })
            .collect();
        let shifts = self
            .shifts
            .iter()
            .flat_map(|s| {
                other
                    .shifts
                    .iter()
                    .map(move |t| s.iter().chain(t).copied().collect())
            })
            .collect();
        Spectrum::new(basis, shifts).expect("product of valid spectra is valid")
    }
}

fn lattice_box(bounds: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-b..=b).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn cmp_vectors(u: &[Rational], v: &[Rational]) -> Ordering {
    u.iter().cmp(v.iter())
}

/// `Λ₁ + J/N`.
pub fn shift_spectrum(base: &Spectrum, j: &FiniteSet, n: u64) -> Result<Spectrum> {
    if base.dimension() != j.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum of dimension {} shifted by points of dimension {}",
            base.dimension(),
            j.dimension()
        )));
    }
    if n != j.modulus() {
        return Err(Error::DimensionMismatch(format!(
            "shift denominator {n} differs from the modulus {} of J",
            j.modulus()
        )));
    }
    let n = n as i64;
    let shifts: Vec<Vec<Rational>> = base
        .shifts
        .iter()
        .flat_map(|s| {
            j.points().iter().map(move |p| {
                s.iter()
                    .zip(p)
                    .map(|(x, &q)| x + Rational::new(q, n))
                    .collect()
            })
        })
        .collect();
    let mut out = Spectrum::new(base.basis.clone(), shifts)?;
    out.truncation_radius = base.truncation_radius;
    Ok(out)
}

/// All points of `s` with `‖λ‖∞ ≤ radius`, lexicographically sorted.
pub fn enumerate_spectrum(s: &Spectrum, radius: f64) -> Vec<Vec<Rational>> {
    s.enumerate_indexed(radius)
        .into_iter()
        .map(|p| p.point)
        .collect()
}

/// `e^{2πi λ₁·a} = 1` for all `λ₁ ∈ Λ₁`, `a ∈ A`, decided exactly: every
/// generator and every shift must have an integer inner product with every `a`.
pub fn root_of_unity_condition(s: &Spectrum, a: &FiniteSet) -> Result<bool> {
    if s.dimension() != a.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum of dimension {} against points of dimension {}",
            s.dimension(),
            a.dimension()
        )));
    }
    let vectors: Vec<Vec<Rational>> = s.generators().into_iter().chain(s.shifts.clone()).collect();
    Ok(a.points()
        .iter()
        .all(|p| vectors.iter().all(|v| is_integer(&dot_int(v, p)))))
}
