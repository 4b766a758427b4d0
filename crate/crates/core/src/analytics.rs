//! Exact-formula inner products of exponentials over box domains, truncated
//! Gram matrices and the explicit biorthogonal dual of a combined Riesz basis.
//!
//! Nothing here uses quadrature: every `∫ e^{2πi t·x}` over a box is evaluated
//! from its antiderivative with the phase reduced in rational arithmetic.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domains::{minkowski_translate, shift_spectrum, BoxDomain, Spectrum, SpectrumPoint};
use crate::error::{Error, Result};
use crate::finite::{build_evaluation_matrix, classify_finite_pair, FiniteSet};
use crate::linalg::{self, CMatrix};
use crate::rational::{exponential_integral, to_f64, Rational};
use crate::tolerance::Tolerances;

/// `⟨e_λ, e_μ⟩_{L²(Ω)} = ∫_Ω e^{2πi(λ-μ)·x} dx`.
pub fn exp_inner_product(dom: &BoxDomain, lambda: &[Rational], mu: &[Rational]) -> Complex64 {
    let t: Vec<Rational> = lambda.iter().zip(mu).map(|(l, m)| l - m).collect();
    dom.boxes()
        .iter()
        .map(|b| {
            (0..t.len())
                .map(|k| exponential_integral(&b.lo()[k], &b.hi()[k], &t[k]))
                .product::<Complex64>()
        })
        .sum()
}

/// `e^{2πi λ·x}` at a floating-point location.
pub fn exponential(lambda: &[Rational], x: &[f64]) -> Complex64 {
    let phase: f64 = lambda.iter().zip(x).map(|(l, xi)| to_f64(l) * xi).sum();
    Complex64::from_polar(1.0, 2.0 * PI * phase)
}

/// Truncated Gram matrix `[⟨e_λ, e_μ⟩]` indexed by an enumerated spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub points: Vec<Vec<Rational>>,
    pub entries: CMatrix,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in 0..n {
                if i != k {
                    worst = worst.max(self.entries[(i, k)].norm());
                }
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.entries)
    }

    /// `max |G - c·I|`.
    pub fn deviation_from_scalar(&self, c: f64) -> f64 {
        linalg::scalar_deviation(&self.entries, c)
    }
}

pub fn gram_from_points(dom: &BoxDomain, points: Vec<Vec<Rational>>) -> GramMatrix {
    let n = points.len();
    let upper: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|k| exp_inner_product(dom, &points[i], &points[k])).collect())
        .collect();
    let mut entries = DMatrix::zeros(n, n);
    for (i, row) in upper.iter().enumerate() {
        for (offset, value) in row.iter().enumerate() {
            let k = i + offset;
            entries[(i, k)] = *value;
            entries[(k, i)] = value.conj();
        }
    }
    GramMatrix { points, entries }
}

/// Gram matrix of every spectrum point with `‖λ‖∞ ≤ radius`.
pub fn build_gram(dom: &BoxDomain, spec: &Spectrum, radius: f64) -> Result<GramMatrix> {
    check_dimensions(dom, spec)?;
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }
    let points = crate::domains::enumerate_spectrum(spec, radius);
    if points.is_empty() {
        return Err(Error::EmptySpectrum(radius));
    }
    Ok(gram_from_points(dom, points))
}

fn check_dimensions(dom: &BoxDomain, spec: &Spectrum) -> Result<()> {
    if dom.dimension() != spec.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "domain dimension {} and spectrum dimension {}",
            dom.dimension(),
            spec.dimension()
        )));
    }
    Ok(())
}

/// Extreme Gram eigenvalues at one truncation radius. These are estimates of
/// the Riesz constants, not certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundEstimate {
    pub radius: f64,
    pub points: usize,
    pub lower: f64,
    pub upper: f64,
}

pub fn estimate_frame_bounds(dom: &BoxDomain, spec: &Spectrum, radii: &[f64]) -> Result<Vec<FrameBoundEstimate>> {
    if radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    radii
        .iter()
        .map(|&radius| {
            let gram = build_gram(dom, spec, radius)?;
            let eig = gram.eigenvalues();
            Ok(FrameBoundEstimate {
                radius,
                points: gram.len(),
                lower: eig[0],
                upper: eig[eig.len() - 1],
            })
        })
        .collect()
}

/// `G = k·F⁻¹`, so that `G[r][s] = G_{j_s}(a_r)`.
pub fn finite_dual(a: &FiniteSet, j: &FiniteSet) -> Result<CMatrix> {
    let f = build_evaluation_matrix(a, j)?;
    if !f.is_square() {
        return Err(Error::Shape(format!(
            "evaluation matrix is {}x{}, a dual needs a square matrix",
            f.entries.nrows(),
            f.entries.ncols()
        )));
    }
    let class = classify_finite_pair(a, j, &Tolerances::default())?;
    if class.condition_number >= Tolerances::default().max_condition {
        return Err(Error::NonInvertible(class.condition_number));
    }
    let inv = linalg::inverse(&f.entries).ok_or(Error::NonInvertible(class.condition_number))?;
    Ok(inv * Complex64::new(a.len() as f64, 0.0))
}

/// `c[r][s] = k·(F⁻¹)[r][s]·ω^{a_r·j_s}`: the multiplier of `e_{λ+j_s/N}` on `Ω₁ + a_r`.
pub fn dual_piece_coefficients(a: &FiniteSet, j: &FiniteSet) -> Result<CMatrix> {
    let g = finite_dual(a, j)?;
    let f = build_evaluation_matrix(a, j)?;
    let k = a.len();
    Ok(DMatrix::from_fn(k, k, |r, s| g[(r, s)] * f.entries[(s, r)]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualBasis {
    pub finite_dual: CMatrix,
    pub piece_coefficients: CMatrix,
}

impl DualBasis {
    pub fn new(a: &FiniteSet, j: &FiniteSet) -> Result<Self> {
        Ok(DualBasis {
            finite_dual: finite_dual(a, j)?,
            piece_coefficients: dual_piece_coefficients(a, j)?,
        })
    }

    /// Every piece coefficient equals 1, i.e. `g_λ = e_λ`.
    pub fn is_self_dual(&self) -> bool {
        self.piece_coefficients.iter().all(|c| (c - Complex64::new(1.0, 0.0)).norm() < 1e-10)
    }

    /// `max |(1/k) Σ_r G[r][s]·conj(E_{j_s'}(a_r)) - δ_{ss'}|`, with `conj(E_j(a)) = F[j][a]`.
    pub fn finite_defect(&self, a: &FiniteSet, j: &FiniteSet) -> Result<f64> {
        let f = build_evaluation_matrix(a, j)?;
        let k = a.len() as f64;
        let product = &f.entries * &self.finite_dual / Complex64::new(k, 0.0);
        Ok(linalg::scalar_deviation(&product, 1.0))
    }
}

/// The combined Riesz basis `E(Λ₁ + J/N)` on `Ω₁ + A` with its dual
/// `g_{λ+j_s/N} = e_{λ+j_s/N}·c[r][s]` on each translate `Ω₁ + a_r`.
#[derive(Debug, Clone)]
pub struct DualSystem {
    base_domain: BoxDomain,
    pieces: Vec<BoxDomain>,
    domain: BoxDomain,
    spectrum: Spectrum,
    j_len: usize,
    dual: DualBasis,
}

impl DualSystem {
    pub fn new(base_domain: &BoxDomain, base_spectrum: &Spectrum, a: &FiniteSet, j: &FiniteSet) -> Result<Self> {
        check_dimensions(base_domain, base_spectrum)?;
        let dual = DualBasis::new(a, j)?;
        let domain = minkowski_translate(base_domain, a)?;
        let spectrum = shift_spectrum(base_spectrum, j, j.modulus())?;
        let pieces = a
            .points()
            .iter()
            .map(|p| {
                let v: Vec<Rational> = p.iter().map(|&x| Rational::from_integer(x)).collect();
                base_domain.translate(&v)
            })
            .collect();
        Ok(DualSystem {
            base_domain: base_domain.clone(),
            pieces,
            domain,
            spectrum,
            j_len: j.len(),
            dual,
        })
    }

    pub fn base_domain(&self) -> &BoxDomain {
        &self.base_domain
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dual(&self) -> &DualBasis {
        &self.dual
    }

    /// Enumerated points of the combined spectrum, in `enumerate_spectrum` order.
    pub fn points(&self, radius: f64) -> Vec<SpectrumPoint> {
        self.spectrum.enumerate_indexed(radius)
    }

    /// Index `s` of the shift `j_s/N` that `p` carries.
    fn column(&self, p: &SpectrumPoint) -> usize {
        // combined shifts are ordered base shift first, then J
        p.shift_index % self.j_len
    }

    /// `⟨g_μ, e_ν⟩_{L²(Ω)}`.
    pub fn dual_inner_product(&self, mu: &SpectrumPoint, nu: &[Rational]) -> Complex64 {
        let s = self.column(mu);
        self.pieces
            .iter()
            .enumerate()
            .map(|(r, piece)| self.dual.piece_coefficients[(r, s)] * exp_inner_product(piece, &mu.point, nu))
            .sum()
    }

    /// `g_μ(x)`; zero outside `Ω`.
    pub fn evaluate_dual(&self, mu: &SpectrumPoint, x: &[f64]) -> Complex64 {
        let s = self.column(mu);
        match self.pieces.iter().position(|piece| piece.contains(x)) {
            Some(r) => self.dual.piece_coefficients[(r, s)] * exponential(&mu.point, x),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `max |⟨g_μ, e_ν⟩ - |Ω|δ_{μν}|` over all points within `radius`.
    pub fn biorthogonality_defect(&self, radius: f64) -> f64 {
        let points = self.points(radius);
        let measure = to_f64(&self.domain.measure());
        points
            .par_iter()
            .enumerate()
            .map(|(i, mu)| {
                points
                    .iter()
                    .enumerate()
                    .map(|(k, nu)| {
                        let target = if i == k { measure } else { 0.0 };
                        (self.dual_inner_product(mu, &nu.point) - target).norm()
                    })
                    .fold(0.0f64, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// `|Ω|⁻¹ Σ ⟨u, e_λ⟩ g_λ(x)` at each grid point, with coefficients
    /// ordered like [`DualSystem::points`] at the same radius.
    pub fn reconstruct(&self, coefficients: &[Complex64], radius: f64, grid: &[Vec<f64>]) -> Result<Vec<Complex64>> {
        let points = self.points(radius);
        if coefficients.len() != points.len() {
            return Err(Error::Shape(format!(
                "{} coefficients supplied for {} spectrum points",
                coefficients.len(),
                points.len()
            )));
        }
        if let Some(x) = grid.iter().find(|x| x.len() != self.domain.dimension()) {
            return Err(Error::Shape(format!("grid point of dimension {}", x.len())));
        }
        let scale = 1.0 / to_f64(&self.domain.measure());
        Ok(grid
            .par_iter()
            .map(|x| {
                points
                    .iter()
                    .zip(coefficients)
                    .map(|(p, c)| c * self.evaluate_dual(p, x))
                    .sum::<Complex64>()
                    * scale
            })
            .collect())
    }
}

/// Biorthogonality defect of the dual of `(Ω₁ + A, Λ₁ + J/N)` within `radius`.
pub fn verify_biorthogonality(
    base_domain: &BoxDomain,
    base_spectrum: &Spectrum,
    a: &FiniteSet,
    j: &FiniteSet,
    radius: f64,
) -> Result<f64> {
    Ok(DualSystem::new(base_domain, base_spectrum, a, j)?.biorthogonality_defect(radius))
}

/// Truncated dual expansion at grid points.
pub fn reconstruct_function(
    system: &DualSystem,
    coefficients: &[Complex64],
    radius: f64,
    grid: &[Vec<f64>],
) -> Result<Vec<Complex64>> {
    system.reconstruct(coefficients, radius, grid)
}

/// `⟨χ_D, e_λ⟩` for every point, usable as expansion coefficients.
pub fn indicator_coefficients(region: &BoxDomain, points: &[SpectrumPoint]) -> Vec<Complex64> {
    let zero = vec![Rational::from_integer(0); region.dimension()];
    points.iter().map(|p| exp_inner_product(region, &zero, &p.point)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn line(n: u64, v: &[i64]) -> FiniteSet {
        FiniteSet::line(n, v).unwrap()
    }

    fn unit() -> BoxDomain {
        BoxDomain::unit_cube(1)
    }

    fn figure_two() -> (BoxDomain, Spectrum) {
        let (a, j) = (line(4, &[0, 2]), line(4, &[0, 1]));
        (
            minkowski_translate(&unit(), &a).unwrap(),
            shift_spectrum(&Spectrum::integer_lattice(1), &j, 4).unwrap(),
        )
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(exp_inner_product(&unit(), &[rat(3, 7)], &[rat(3, 7)]), Complex64::new(1.0, 0.0));
        let (dom, _) = figure_two();
        assert!(exp_inner_product(&dom, &[int(0)], &[rat(1, 4)]).norm() < 1e-15);
        assert!(exp_inner_product(&unit(), &[int(1)], &[int(0)]).norm() < 1e-15);
    }

    #[test]
    fn inner_product_against_quadrature() {
        // midpoint rule oracle on [0,1) ∪ [2,3)
        let (dom, _) = figure_two();
        let t = 0.3f64;
        let n = 200_000;
        let mut sum = Complex64::new(0.0, 0.0);
        for start in [0.0, 2.0] {
            for i in 0..n {
                let x = start + (i as f64 + 0.5) / n as f64;
                sum += Complex64::from_polar(1.0, 2.0 * PI * t * x) / n as f64;
            }
        }
        let exact = exp_inner_product(&dom, &[rat(3, 10)], &[int(0)]);
        assert!((exact - sum).norm() < 1e-9);
    }

    #[test]
    fn gram_examples() {
        let (dom, spec) = figure_two();
        let g = build_gram(&dom, &spec, 2.0).unwrap();
        assert!(g.deviation_from_scalar(2.0) < 1e-10);

        let single = Spectrum::new(vec![vec![int(100)]], vec![vec![int(0)]]).unwrap();
        let g = build_gram(&dom, &single, 1.0).unwrap();
        assert_eq!(g.len(), 1);
        assert!((g.entries[(0, 0)].re - 2.0).abs() < 1e-12);

        let riesz = shift_spectrum(&Spectrum::integer_lattice(1), &line(5, &[0, 1]), 5).unwrap();
        let dom5 = minkowski_translate(&unit(), &line(5, &[0, 2])).unwrap();
        let g = build_gram(&dom5, &riesz, 3.0).unwrap();
        assert!(g.max_off_diagonal() > 0.1);
        assert!(g.eigenvalues()[0] > 0.0);

        let sparse = Spectrum::new(vec![vec![int(100)]], vec![vec![int(50)]]).unwrap();
        assert!(matches!(build_gram(&dom, &sparse, 1.0), Err(Error::EmptySpectrum(_))));
    }

    #[test]
    fn gram_is_hermitian_exactly() {
        let dom5 = minkowski_translate(&unit(), &line(5, &[0, 2])).unwrap();
        let riesz = shift_spectrum(&Spectrum::integer_lattice(1), &line(5, &[0, 1]), 5).unwrap();
        let g = build_gram(&dom5, &riesz, 2.0).unwrap();
        assert_eq!(g.entries.adjoint(), g.entries);
    }

    #[test]
    fn frame_bound_estimates() {
        let (dom, spec) = figure_two();
        let est = estimate_frame_bounds(&dom, &spec, &[1.0, 2.0, 4.0]).unwrap();
        for e in &est {
            assert!((e.lower - 2.0).abs() < 1e-9 && (e.upper - 2.0).abs() < 1e-9);
        }
        assert!(estimate_frame_bounds(&dom, &spec, &[]).unwrap().is_empty());
        assert!(estimate_frame_bounds(&dom, &spec, &[2.0, 1.0]).is_err());

        let dom5 = minkowski_translate(&unit(), &line(5, &[0, 2])).unwrap();
        let riesz = shift_spectrum(&Spectrum::integer_lattice(1), &line(5, &[0, 1]), 5).unwrap();
        let est = estimate_frame_bounds(&dom5, &riesz, &[4.0, 8.0]).unwrap();
        for e in &est {
            assert!(e.lower > 0.0 && e.lower < 2.0);
        }
        assert!((est[0].lower - est[1].lower).abs() < 0.1 * est[1].lower);
    }

    #[test]
    fn finite_dual_examples() {
        let g = finite_dual(&line(4, &[0, 2]), &line(4, &[0, 1])).unwrap();
        let expected = [[1.0, 1.0], [1.0, -1.0]];
        for r in 0..2 {
            for s in 0..2 {
                assert!((g[(r, s)] - Complex64::new(expected[r][s], 0.0)).norm() < 1e-12);
            }
        }
        let g = finite_dual(&line(7, &[0]), &line(7, &[0])).unwrap();
        assert!((g[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // a single nonzero character still has a trivial piece coefficient
        let c = dual_piece_coefficients(&line(7, &[3]), &line(7, &[5])).unwrap();
        assert!((c[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(matches!(
            finite_dual(&line(4, &[0, 2]), &line(4, &[0, 2])),
            Err(Error::NonInvertible(_))
        ));
    }

    #[test]
    fn finite_dual_matches_two_by_two_inverse() {
        // W = V⁻¹ via the adjugate, G = 2W
        let (a, j) = (
            FiniteSet::new(4, 2, vec![vec![0, 0], vec![2, 0]]).unwrap(),
            FiniteSet::new(4, 2, vec![vec![0, 0], vec![1, 0]]).unwrap(),
        );
        let v = build_evaluation_matrix(&a, &j).unwrap().entries;
        let det = v[(0, 0)] * v[(1, 1)] - v[(0, 1)] * v[(1, 0)];
        let w = [[v[(1, 1)] / det, -v[(0, 1)] / det], [-v[(1, 0)] / det, v[(0, 0)] / det]];
        let g = finite_dual(&a, &j).unwrap();
        for r in 0..2 {
            for s in 0..2 {
                assert!((g[(r, s)] - w[r][s] * 2.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn self_duality_matches_hadamard() {
        for n in 3..=8u64 {
            for a1 in 1..n as i64 {
                for j1 in 1..n as i64 {
                    let (a, j) = (line(n, &[0, a1]), line(n, &[0, j1]));
                    let class = classify_finite_pair(&a, &j, &Tolerances::default()).unwrap();
                    match DualBasis::new(&a, &j) {
                        Ok(d) => {
                            assert_eq!(d.is_self_dual(), class.kind == crate::PairKind::OrthogonalBasis);
                            assert!(d.finite_defect(&a, &j).unwrap() < 1e-10);
                        }
                        Err(_) => assert!(class.kind < crate::PairKind::RieszBasis),
                    }
                }
            }
        }
    }

    #[test]
    fn biorthogonality_examples() {
        let z = Spectrum::integer_lattice(1);
        assert!(verify_biorthogonality(&unit(), &z, &line(4, &[0, 2]), &line(4, &[0, 1]), 3.0).unwrap() < 1e-10);
        assert!(verify_biorthogonality(&unit(), &z, &line(5, &[0, 2]), &line(5, &[0, 1]), 2.0).unwrap() < 1e-8);
        assert!(verify_biorthogonality(&unit(), &z, &line(3, &[0]), &line(3, &[0]), 3.0).unwrap() < 1e-12);
    }

    #[test]
    fn biorthogonality_oracle_by_quadrature() {
        // independent check of one entry: ⟨g_μ, e_ν⟩ by midpoint rule
        let z = Spectrum::integer_lattice(1);
        let sys = DualSystem::new(&unit(), &z, &line(5, &[0, 2]), &line(5, &[0, 1])).unwrap();
        let pts = sys.points(1.0);
        let n = 100_000;
        for mu in &pts {
            for nu in &pts {
                let mut sum = Complex64::new(0.0, 0.0);
                for start in [0.0, 2.0] {
                    for i in 0..n {
                        let x = [start + (i as f64 + 0.5) / n as f64];
                        sum += sys.evaluate_dual(mu, &x) * exponential(&nu.point, &x).conj() / n as f64;
                    }
                }
                let target = if mu == nu { 2.0 } else { 0.0 };
                assert!((sum - target).norm() < 1e-6, "{:?} {:?} {sum}", mu.point, nu.point);
            }
        }
    }

    #[test]
    fn reconstruct_single_exponential() {
        let z = Spectrum::integer_lattice(1);
        let sys = DualSystem::new(&unit(), &z, &line(4, &[0, 2]), &line(4, &[0, 1])).unwrap();
        let pts = sys.points(2.0);
        let target = &pts[3];
        let coeffs: Vec<Complex64> = pts
            .iter()
            .map(|p| exp_inner_product(sys.domain(), &target.point, &p.point))
            .collect();
        let grid: Vec<Vec<f64>> = (0..64).map(|i| vec![3.0 * (i as f64 + 0.5) / 64.0]).collect();
        let values = sys.reconstruct(&coeffs, 2.0, &grid).unwrap();
        for (x, v) in grid.iter().zip(&values) {
            let expected = if sys.domain().contains(x) {
                exponential(&target.point, x)
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((v - expected).norm() < 1e-8);
        }
        let zeros = sys.reconstruct(&vec![Complex64::new(0.0, 0.0); pts.len()], 2.0, &grid).unwrap();
        assert!(zeros.iter().all(|v| v.norm() == 0.0));
        assert!(matches!(sys.reconstruct(&coeffs[1..], 2.0, &grid), Err(Error::Shape(_))));
    }

    #[test]
    fn indicator_reconstruction_error_decays() {
        let z = Spectrum::integer_lattice(1);
        let sys = DualSystem::new(&unit(), &z, &line(4, &[0, 2]), &line(4, &[0, 1])).unwrap();
        let region = BoxDomain::interval(int(2), int(3)).unwrap();
        let grid: Vec<Vec<f64>> = (0..512)
            .map(|i| {
                let t = (i as f64 + 0.5) / 256.0;
                vec![if t < 1.0 { t } else { t + 1.0 }]
            })
            .collect();
        let mut errors = Vec::new();
        for radius in [4.0, 8.0, 16.0, 32.0] {
            let pts = sys.points(radius);
            let coeffs = indicator_coefficients(&region, &pts);
            let values = sys.reconstruct(&coeffs, radius, &grid).unwrap();
            let err: f64 = grid
                .iter()
                .zip(&values)
                .map(|(x, v)| {
                    let truth = if region.contains(x) { 1.0 } else { 0.0 };
                    (v - truth).norm_sqr()
                })
                .sum::<f64>()
                / grid.len() as f64;
            errors.push(err.sqrt());
        }
        for w in errors.windows(2) {
            assert!(w[1] < w[0] * 1.05, "{errors:?}");
        }
        assert!(errors[3] < errors[0]);
    }
}
