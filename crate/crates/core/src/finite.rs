//! Finite pairs `(A, J)` in `Z_N^d` and their evaluation matrices.
//!
//! The evaluation matrix has one row per point of `J` and one column per
//! point of `A`, with entry `ω^{j·a}` for `ω = e^{-2πi/N}`. Constants are
//! reported under counting measure on `A` and `J`, so an orthogonal pair of
//! size `k` satisfies `FᴴF = kI` and has lower = upper = `k`.

use std::collections::HashSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kind::PairKind;
use crate::linalg::{self, CMatrix};
use crate::rational::root_of_unity;
use crate::tolerance::Tolerances;

/// A nonempty set of distinct points in `{0, …, N-1}^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFiniteSet")]
pub struct FiniteSet {
    #[serde(rename = "N")]
    modulus: u64,
    #[serde(rename = "d")]
    dimension: usize,
    points: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawFiniteSet {
    #[serde(rename = "N")]
    modulus: u64,
    #[serde(rename = "d")]
    dimension: usize,
    points: Vec<Vec<i64>>,
}

impl TryFrom<RawFiniteSet> for FiniteSet {
    type Error = Error;

    fn try_from(raw: RawFiniteSet) -> Result<Self> {
        FiniteSet::new(raw.modulus, raw.dimension, raw.points)
    }
}

impl FiniteSet {
    /// Validates coordinates in `[0, N)` and pairwise distinctness.
    pub fn new(modulus: u64, dimension: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidFiniteSet("modulus must be positive".into()));
        }
        if dimension == 0 {
            return Err(Error::InvalidFiniteSet("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidFiniteSet("set must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for p in &points {
            if p.len() != dimension {
                return Err(Error::InvalidFiniteSet(format!(
                    "point {p:?} does not have dimension {dimension}"
                )));
            }
            if p.iter().any(|&x| x < 0 || x as u64 >= modulus) {
                return Err(Error::InvalidFiniteSet(format!(
                    "point {p:?} has a coordinate outside [0, {modulus})"
                )));
            }
            if !seen.insert(p.clone()) {
                return Err(Error::InvalidFiniteSet(format!("duplicate point {p:?}")));
            }
        }
        Ok(FiniteSet {
            modulus,
            dimension,
            points,
        })
    }

    /// Reduces every coordinate mod `N` first; duplicates after reduction are still rejected.
    pub fn from_residues(modulus: u64, dimension: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidFiniteSet("modulus must be positive".into()));
        }
        let n = modulus as i64;
        let reduced = points
            .into_iter()
            .map(|p| p.into_iter().map(|x| x.mod_floor(&n)).collect())
            .collect();
        FiniteSet::new(modulus, dimension, reduced)
    }

    /// One-dimensional set from scalar residues.
    pub fn line(modulus: u64, values: &[i64]) -> Result<Self> {
        FiniteSet::new(modulus, 1, values.iter().map(|&v| vec![v]).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `A + t` reduced mod `N`.
    pub fn translate(&self, t: &[i64]) -> Result<Self> {
        let shifted = self
            .points
            .iter()
            .map(|p| p.iter().zip(t).map(|(x, y)| x + y).collect())
            .collect();
        FiniteSet::from_residues(self.modulus, self.dimension, shifted)
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.iter().any(|q| q == p)
    }

    fn check_compatible(&self, other: &FiniteSet) -> Result<()> {
        if self.modulus != other.modulus || self.dimension != other.dimension {
            return Err(Error::DimensionMismatch(format!(
                "Z_{}^{} versus Z_{}^{}",
                self.modulus, self.dimension, other.modulus, other.dimension
            )));
        }
        Ok(())
    }
}

pub(crate) fn int_dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// The `♯J × ♯A` matrix `[ω^{j_s·a_r}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationMatrix {
    pub entries: CMatrix,
    pub modulus: u64,
    pub rows: Vec<Vec<i64>>,
    pub columns: Vec<Vec<i64>>,
}

impl EvaluationMatrix {
    /// The primitive root `ω = e^{-2πi/N}`.
    pub fn omega(&self) -> Complex64 {
        root_of_unity(1, self.modulus)
    }

    pub fn is_square(&self) -> bool {
        self.entries.nrows() == self.entries.ncols()
    }

    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        linalg::to_pairs(&self.entries)
    }
}

pub fn build_evaluation_matrix(a: &FiniteSet, j: &FiniteSet) -> Result<EvaluationMatrix> {
    a.check_compatible(j)?;
    let n = a.modulus;
    let entries = DMatrix::from_fn(j.len(), a.len(), |s, r| {
        root_of_unity(int_dot(&j.points[s], &a.points[r]), n)
    });
    Ok(EvaluationMatrix {
        entries,
        modulus: n,
        rows: j.points.clone(),
        columns: a.points.clone(),
    })
}

/// Kind and counting-measure frame constants of a finite pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteClassification {
    pub kind: PairKind,
    pub lower_constant: f64,
    pub upper_constant: f64,
    /// `σ_max / σ_min`; infinite (serialized as `null`) for rank-deficient matrices.
    #[serde(serialize_with = "ser_condition", deserialize_with = "de_condition")]
    pub condition_number: f64,
    pub singular_values: Vec<f64>,
    /// `max |FᴴF - ♯J·I|`.
    pub unitarity_defect: f64,
}

fn ser_condition<S: Serializer>(c: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if c.is_finite() {
        s.serialize_some(c)
    } else {
        s.serialize_none()
    }
}

fn de_condition<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

pub fn classify_finite_pair(
    a: &FiniteSet,
    j: &FiniteSet,
    tol: &Tolerances,
) -> Result<FiniteClassification> {
    a.check_compatible(j)?;
    if j.len() < a.len() {
        return Err(Error::InsufficientSpectrum {
            domain: a.len(),
            spectrum: j.len(),
        });
    }
    let f = build_evaluation_matrix(a, j)?;
    Ok(classify_matrix(&f, tol))
}

pub(crate) fn classify_matrix(f: &EvaluationMatrix, tol: &Tolerances) -> FiniteClassification {
    let sv = linalg::singular_values(&f.entries);
    let s_max = sv.first().copied().unwrap_or(0.0);
    let s_min = sv.last().copied().unwrap_or(0.0);
    let condition_number = if s_min > 0.0 && s_max / s_min < f64::MAX {
        s_max / s_min
    } else {
        f64::INFINITY
    };
    let unitarity_defect = linalg::gram_deviation(&f.entries, f.entries.nrows() as f64);
    let lower = s_min * s_min;
    let upper = s_max * s_max;
    let square = f.is_square();
    let kind = if square && unitarity_defect < tol.unitarity {
        PairKind::OrthogonalBasis
    } else if square && condition_number < tol.max_condition {
        PairKind::RieszBasis
    } else if lower > tol.frame_lower {
        PairKind::Frame
    } else {
        PairKind::None
    };
    FiniteClassification {
        kind,
        lower_constant: lower,
        upper_constant: upper.max(lower),
        condition_number,
        singular_values: sv,
        unitarity_defect,
    }
}

/// `⟨E_j, E_{j′}⟩_{ℓ²(A)} = Σ_{a∈A} e^{2πi (j−j′)·a/N}` vanishes for every distinct `j, j′ ∈ J`.
pub fn check_mutual_orthogonality(a: &FiniteSet, j: &FiniteSet) -> Result<bool> {
    a.check_compatible(j)?;
    let tol = Tolerances::default().orthogonality;
    for (s, js) in j.points.iter().enumerate() {
        for jt in &j.points[s + 1..] {
            let diff: Vec<i64> = js.iter().zip(jt).map(|(x, y)| x - y).collect();
            let sum = character_sum(a, &diff);
            if sum.norm() >= tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Σ_{a∈A} e^{2πi k·a/N}`.
pub fn character_sum(a: &FiniteSet, k: &[i64]) -> Complex64 {
    a.points
        .iter()
        .map(|p| root_of_unity(-int_dot(k, p), a.modulus))
        .sum()
}

/// Swaps the roles of `A` and `J`. Only defined for basis pairs.
pub fn transpose_pair(a: &FiniteSet, j: &FiniteSet) -> Result<(FiniteSet, FiniteSet)> {
    let class = classify_finite_pair(a, j, &Tolerances::default())?;
    if !class.kind.is_basis() {
        return Err(Error::SymmetryUndefined {
            kind: class.kind.to_string(),
            domain: a.len(),
            spectrum: j.len(),
        });
    }
    Ok((j.clone(), a.clone()))
}

/// The symbol `χ̂_J(k) = Σ_{j∈J} e^{-2πi j·k/N}` at an integer argument.
pub fn symbol_of_set(j: &FiniteSet, k: &[i64]) -> Complex64 {
    j.points
        .iter()
        .map(|p| root_of_unity(int_dot(p, k), j.modulus))
        .sum()
}

/// JSON report for a classified pair, including the evaluation matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteReport {
    #[serde(rename = "A")]
    pub a: FiniteSet,
    #[serde(rename = "J")]
    pub j: FiniteSet,
    #[serde(flatten)]
    pub classification: FiniteClassification,
    pub mutually_orthogonal: bool,
    /// Row-major `[re, im]` pairs, rows indexed by `J`.
    pub evaluation_matrix: Vec<Vec<[f64; 2]>>,
}

pub fn finite_report(a: &FiniteSet, j: &FiniteSet, tol: &Tolerances) -> Result<FiniteReport> {
    let classification = classify_finite_pair(a, j, tol)?;
    let matrix = build_evaluation_matrix(a, j)?;
    Ok(FiniteReport {
        a: a.clone(),
        j: j.clone(),
        classification,
        mutually_orthogonal: check_mutual_orthogonality(a, j)?,
        evaluation_matrix: matrix.to_pairs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: u64, v: &[i64]) -> FiniteSet {
        FiniteSet::line(n, v).unwrap()
    }

    fn close(z: Complex64, re: f64, im: f64) -> bool {
        (z - Complex64::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn evaluation_matrix_examples() {
        let f = build_evaluation_matrix(&line(4, &[0, 2]), &line(4, &[0, 1])).unwrap();
        let e = &f.entries;
        assert!(close(e[(0, 0)], 1.0, 0.0) && close(e[(0, 1)], 1.0, 0.0));
        assert!(close(e[(1, 0)], 1.0, 0.0) && close(e[(1, 1)], -1.0, 0.0));

        let f = build_evaluation_matrix(&line(6, &[0, 3]), &line(6, &[0, 1])).unwrap();
        assert!(close(f.entries[(1, 1)], -1.0, 0.0));

        for n in 1..8 {
            let f = build_evaluation_matrix(&line(n, &[0]), &line(n, &[0])).unwrap();
            assert_eq!(f.entries.shape(), (1, 1));
            assert!(close(f.entries[(0, 0)], 1.0, 0.0));
        }
    }

    #[test]
    fn omega_is_primitive_root() {
        let f = build_evaluation_matrix(&line(4, &[1]), &line(4, &[1])).unwrap();
        assert!(close(f.omega(), 0.0, -1.0));
        assert!(close(f.entries[(0, 0)], 0.0, -1.0));
    }

    #[test]
    fn entries_are_unimodular() {
        let a = FiniteSet::new(5, 2, vec![vec![0, 1], vec![3, 4], vec![2, 2]]).unwrap();
        let j = FiniteSet::new(5, 2, vec![vec![1, 1], vec![4, 0], vec![0, 3]]).unwrap();
        let f = build_evaluation_matrix(&a, &j).unwrap();
        assert!(f.entries.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn mismatched_sets_rejected() {
        let err = build_evaluation_matrix(&line(4, &[0]), &line(5, &[0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
        let planar = FiniteSet::new(4, 2, vec![vec![0, 0]]).unwrap();
        assert!(build_evaluation_matrix(&line(4, &[0]), &planar).is_err());
    }

    #[test]
    fn invalid_sets_rejected() {
        assert!(FiniteSet::line(3, &[0, 0]).is_err());
        assert!(FiniteSet::line(3, &[3]).is_err());
        assert!(FiniteSet::line(3, &[-1]).is_err());
        assert!(FiniteSet::line(3, &[]).is_err());
        assert!(FiniteSet::from_residues(3, 1, vec![vec![1], vec![4]]).is_err());
        assert_eq!(
            FiniteSet::from_residues(4, 1, vec![vec![-1], vec![6]]).unwrap(),
            line(4, &[3, 2])
        );
    }

    #[test]
    fn classify_examples() {
        let tol = Tolerances::default();
        let c = classify_finite_pair(&line(4, &[0, 2]), &line(4, &[0, 1]), &tol).unwrap();
        assert_eq!(c.kind, PairKind::OrthogonalBasis);
        assert!((c.lower_constant - 2.0).abs() < 1e-10);
        assert!((c.upper_constant - 2.0).abs() < 1e-10);
        assert!((c.condition_number - 1.0).abs() < 1e-10);

        let c = classify_finite_pair(&line(6, &[0, 3]), &line(6, &[0, 1]), &tol).unwrap();
        assert_eq!(c.kind, PairKind::OrthogonalBasis);

        // N=5: invertible but not unitary
        let c = classify_finite_pair(&line(5, &[0, 2]), &line(5, &[0, 1]), &tol).unwrap();
        assert_eq!(c.kind, PairKind::RieszBasis);
        assert!(c.lower_constant > 0.0 && c.lower_constant < 2.0);

        // equal columns: rank one
        let c = classify_finite_pair(&line(4, &[0, 2]), &line(4, &[0, 2]), &tol).unwrap();
        assert_eq!(c.kind, PairKind::None);
        assert!(c.condition_number.is_infinite());
    }

    #[test]
    fn classify_frame_with_more_rows() {
        let tol = Tolerances::default();
        let c = classify_finite_pair(&line(5, &[0, 2]), &line(5, &[0, 1, 3]), &tol).unwrap();
        assert_eq!(c.kind, PairKind::Frame);
        assert!(c.lower_constant <= c.upper_constant);
    }

    #[test]
    fn classify_needs_enough_spectrum() {
        let err = classify_finite_pair(&line(4, &[0, 1]), &line(4, &[0]), &Tolerances::default())
            .unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientSpectrum {
                domain: 2,
                spectrum: 1
            }
        );
    }

    #[test]
    fn mutual_orthogonality_examples() {
        assert!(check_mutual_orthogonality(&line(4, &[0, 2]), &line(4, &[0, 1])).unwrap());
        assert!(!check_mutual_orthogonality(&line(4, &[0, 1]), &line(4, &[0, 1])).unwrap());
        assert!(check_mutual_orthogonality(&line(7, &[0, 1, 5]), &line(7, &[3])).unwrap());
    }

    #[test]
    fn transpose_examples() {
        let (a, j) = (line(4, &[0, 2]), line(4, &[0, 1]));
        let (ta, tj) = transpose_pair(&a, &j).unwrap();
        assert_eq!((&ta, &tj), (&j, &a));
        let tol = Tolerances::default();
        assert_eq!(
            classify_finite_pair(&ta, &tj, &tol).unwrap().kind,
            PairKind::OrthogonalBasis
        );

        let single = line(3, &[0]);
        assert_eq!(
            transpose_pair(&single, &single).unwrap(),
            (single.clone(), single.clone())
        );

        let (a, j) = (line(6, &[0, 3]), line(6, &[0, 1]));
        let (ta, tj) = transpose_pair(&a, &j).unwrap();
        assert_eq!(
            classify_finite_pair(&ta, &tj, &tol).unwrap().kind,
            PairKind::OrthogonalBasis
        );

        let err = transpose_pair(&line(5, &[0, 2]), &line(5, &[0, 1, 3])).unwrap_err();
        assert!(matches!(err, Error::SymmetryUndefined { .. }));
    }

    #[test]
    fn symbol_examples() {
        let j = line(4, &[0, 1]);
        assert!(symbol_of_set(&j, &[2]).norm() < 1e-15);
        assert_eq!(symbol_of_set(&j, &[0]), Complex64::new(2.0, 0.0));
        assert!(symbol_of_set(&line(6, &[0, 3]), &[3]).norm() < 1e-15);
    }

    #[test]
    fn report_serializes_condition_as_null_when_singular() {
        let r = finite_report(&line(4, &[0, 2]), &line(4, &[0, 2]), &Tolerances::default())
            .unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["condition_number"].is_null());
        assert_eq!(json["kind"], "none");
        let back: FiniteReport = serde_json::from_value(json).unwrap();
        assert!(back.classification.condition_number.is_infinite());
    }
}
