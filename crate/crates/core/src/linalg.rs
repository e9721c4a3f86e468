//! Small dense complex-matrix helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn from_real_diagonal(diag: &[f64]) -> CMatrix {
    let n = diag.len();
    CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::new(diag[r], 0.0)
        } else {
            ZERO
        }
    })
}

/// Pauli matrices `[sigma_x, sigma_y, sigma_z]`.
pub fn pauli() -> [CMatrix; 3] {
    let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let y = CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]);
    let z = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
    [x, y, z]
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a CMatrix>) -> CMatrix {
    factors
        .into_iter()
        .fold(identity(1), |acc, f| acc.kronecker(f))
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for r in 0..n {
        for c in 0..n {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    acc
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entry of `a - a^dagger`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((a[(r, c)] - a[(c, r)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigvals_hermitian(a: &CMatrix) -> Vec<f64> {
    let eig = SymmetricEigen::new(hermitian_part(a));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigen-decomposition `a = V diag(w) V^dagger` of a Hermitian matrix.
pub fn eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(a));
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Negative eigenvalues (noise) are clamped to zero.
pub fn psd_sqrt(a: &CMatrix) -> CMatrix {
    let (w, v) = eigh(a);
    let n = w.len();
    let d = CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::new(w[r].max(0.0).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    &v * d * v.adjoint()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Outer product `|psi><psi|`.
pub fn projector(psi: &CVector) -> CMatrix {
    psi * psi.adjoint()
}

/// Determinant of a Hermitian matrix as the product of its eigenvalues.
pub fn det_hermitian(a: &CMatrix) -> f64 {
    eigvals_hermitian(a).iter().product()
}
