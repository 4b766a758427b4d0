//! Thin wrappers over nalgebra's dense complex decompositions.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues whose magnitude falls below this are reported as exactly 0.
pub const EIGEN_ZERO: f64 = 1e-12;

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let svd = m.clone().svd(false, false);
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let eig = m.clone().symmetric_eigen();
    let mut values: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&v| if v.abs() < EIGEN_ZERO { 0.0 } else { v })
        .collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    m.clone().try_inverse()
}

/// `max |Mᴴ M - k I|` over all entries.
pub fn gram_deviation(m: &CMatrix, k: f64) -> f64 {
    scalar_deviation(&(m.adjoint() * m), k)
}

/// `max |M - k I|` over all entries of a square matrix.
pub fn scalar_deviation(m: &CMatrix, k: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for (idx, z) in m.iter().enumerate() {
        let (r, c) = (idx % m.nrows(), idx / m.nrows());
        let target = if r == c { k } else { 0.0 };
        worst = worst.max((z - Complex64::new(target, 0.0)).norm());
    }
    worst
}

/// Row-major `[re, im]` pairs for JSON output.
pub fn to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(nrows, ncols, |r, c| {
        let [re, im] = rows[r][c];
        Complex64::new(re, im)
    })
}
