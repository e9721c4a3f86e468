//! Density matrices <-> coherence vectors, the star product, and the purity
//! and orthogonality conditions on coherence vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::su_basis::{BasisSet, StructureTensors};
use crate::tol::Tolerances;

/// `sqrt(N(N-1)/2)`, the coefficient of `n . lambda` in `N rho`.
pub fn coherence_constant(n: usize) -> f64 {
    let n = n as f64;
    (n * (n - 1.0) / 2.0).sqrt()
}

/// `sqrt(N/(2(N-1)))`, so that `n_i = factor * Tr(rho lambda_i)`.
pub fn extraction_factor(n: usize) -> f64 {
    let n = n as f64;
    (n / (2.0 * (n - 1.0))).sqrt()
}

/// Prefactor of the star product, `sqrt(N(N-1)/2) / (N-2)`.
pub fn star_constant(n: usize) -> Result<f64> {
    if n <= 2 {
        return Err(Error::StarUndefined);
    }
    Ok(coherence_constant(n) / (n as f64 - 2.0))
}

/// A Hermitian `N x N` matrix. The trace is not forced to one.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Accept `matrix` if it is square and Hermitian to
    /// `tol.herm * max(1, max|entry|)`.
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let scale = linalg::max_abs(&matrix).max(1.0);
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > tol.herm * scale {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self {
            matrix: linalg::hermitian_part(&matrix),
        })
    }

    /// Hermitian part of `matrix`; the caller guarantees it was Hermitian up to rounding.
    pub(crate) fn from_hermitian(matrix: CMatrix) -> Self {
        Self {
            matrix: linalg::hermitian_part(&matrix),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self {
            matrix: linalg::from_real_diagonal(diag),
        }
    }

    /// `|psi><psi|` (not normalized).
    pub fn projector(psi: &[Complex64]) -> Self {
        let v = linalg::CVector::from_column_slice(psi);
        Self::from_hermitian(linalg::projector(&v))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: linalg::identity(n).scale(1.0 / n as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvals_hermitian(&self.matrix)
    }

    /// `U rho U^dagger`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::from_hermitian(u * &self.matrix * u.adjoint())
    }

    /// Traces `Tr(A), Tr(A^2), ..., Tr(A^m)` by repeated dense multiplication.
    pub fn trace_powers(&self, m: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(m);
        let mut power = self.matrix.clone();
        for k in 1..=m {
            out.push(linalg::trace(&power).re);
            if k < m {
                power = &power * &self.matrix;
            }
        }
        out
    }
}

/// A real coherence vector of length `N^2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceState {
    dim: usize,
    n: Vec<f64>,
}

impl CoherenceState {
    pub fn new(dim: usize, n: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if n.len() != dim * dim - 1 {
            return Err(Error::InvalidLayout(format!(
                "coherence vector of length {} does not match N = {dim}",
                n.len()
            )));
        }
        Ok(Self { dim, n })
    }

    /// The maximally mixed state, `n = 0`.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            n: vec![0.0; dim * dim - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self) -> &[f64] {
        &self.n
    }

    pub fn into_vector(self) -> Vec<f64> {
        self.n
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.n, &self.n)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            n: self.n.iter().map(|x| x * factor).collect(),
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_basis_dim(basis: &BasisSet, dim: usize) -> Result<()> {
    if basis.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: dim,
        });
    }
    Ok(())
}

/// `n_i = sqrt(N/(2(N-1))) Tr(rho lambda_i)` for a trace-one Hermitian `rho`.
pub fn to_coherence(
    rho: &HermitianOperator,
    basis: &BasisSet,
    tol: &Tolerances,
) -> Result<CoherenceState> {
    check_basis_dim(basis, rho.dim())?;
    let tr = rho.trace();
    let scale = linalg::max_abs(rho.matrix()).max(1.0);
    if (tr - 1.0).abs() > tol.herm * scale {
        return Err(Error::Normalization(tr));
    }
    let factor = extraction_factor(rho.dim());
    let n = (0..basis.len())
        .map(|i| factor * basis.trace_with(rho.matrix(), i).re)
        .collect();
    Ok(CoherenceState {
        dim: rho.dim(),
        n,
    })
}

/// `rho = (1/N)(1 + sqrt(N(N-1)/2) n . lambda)`; trace one and Hermitian,
/// not necessarily positive.
pub fn from_coherence(state: &CoherenceState, basis: &BasisSet) -> Result<HermitianOperator> {
    check_basis_dim(basis, state.dim())?;
    if state.n.len() != basis.len() {
        return Err(Error::InvalidLayout(format!(
            "coherence vector of length {} for a basis of {} elements",
            state.n.len(),
            basis.len()
        )));
    }
    let n = state.dim();
    let c = coherence_constant(n);
    let scaled: Vec<f64> = state.n.iter().map(|x| x * c).collect();
    let m = (basis.combine(&scaled) + linalg::identity(n)).scale(1.0 / n as f64);
    Ok(HermitianOperator::from_hermitian(m))
}

/// `(a * b)_k = sqrt(N(N-1)/2)/(N-2) sum_ij d_ijk a_i b_j`. Undefined at `N = 2`.
pub fn star(a: &[f64], b: &[f64], tensors: &StructureTensors) -> Result<Vec<f64>> {
    let k = star_constant(tensors.dim())?;
    for v in [a, b] {
        if v.len() != tensors.len() {
            return Err(Error::DimensionMismatch {
                expected: tensors.len(),
                found: v.len(),
            });
        }
    }
    Ok(tensors.d_vec(a, b).into_iter().map(|x| k * x).collect())
}

/// Pure-state test: `|n.n - 1| <= tol` and, for `N >= 3`, `||n*n - n||_inf <= tol`.
pub fn is_pure(state: &CoherenceState, tensors: &StructureTensors, tol: f64) -> bool {
    if (state.norm_sq() - 1.0).abs() > tol {
        return false;
    }
    if state.dim() == 2 {
        return true;
    }
    match star(&state.n, &state.n, tensors) {
        Ok(s) => s
            .iter()
            .zip(&state.n)
            .all(|(x, y)| (x - y).abs() <= tol),
        Err(_) => false,
    }
}

/// Angle between two coherence vectors, `arccos(n1.n2 / (|n1||n2|))`.
pub fn mutual_angle(s1: &CoherenceState, s2: &CoherenceState) -> Result<f64> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.dim(),
            found: s2.dim(),
        });
    }
    let (a, b) = (s1.norm(), s2.norm());
    if a == 0.0 || b == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    let cos = (dot(&s1.n, &s2.n) / (a * b)).clamp(-1.0, 1.0);
    Ok(cos.acos())
}

/// Orthogonal pure states satisfy `n1.n2 = -1/(N-1)`.
pub fn are_orthogonal(s1: &CoherenceState, s2: &CoherenceState, tol: f64) -> bool {
    s1.dim() == s2.dim() && (dot(&s1.n, &s2.n) + 1.0 / (s1.dim() as f64 - 1.0)).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su_basis::{build_gellmann_basis, gellmann3_index, structure_constants};

    fn qutrit() -> (BasisSet, StructureTensors) {
        let b = build_gellmann_basis(3).unwrap();
        let t = structure_constants(&b, &Tolerances::default()).unwrap();
        (b, t)
    }

    #[test]
    fn maximally_mixed_has_zero_vector() {
        for n in 2..=5 {
            let b = build_gellmann_basis(n).unwrap();
            let s = to_coherence(&HermitianOperator::maximally_mixed(n), &b, &Default::default())
                .unwrap();
            assert!(s.norm() < 1e-15);
            let back = from_coherence(&CoherenceState::zero(n), &b).unwrap();
            assert!(linalg::max_abs_diff(back.matrix(), HermitianOperator::maximally_mixed(n).matrix()) < 1e-15);
        }
    }

    #[test]
    fn first_basis_projector() {
        let (b, _) = qutrit();
        let rho = HermitianOperator::from_real_diagonal(&[1.0, 0.0, 0.0]);
        let s = to_coherence(&rho, &b, &Default::default()).unwrap();
        let n = s.vector();
        assert!((n[gellmann3_index(3)] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((n[gellmann3_index(8)] - 0.5).abs() < 1e-15);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        let nonzero = n.iter().filter(|x| x.abs() > 1e-15).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn third_projector_from_lambda8() {
        let (b, _) = qutrit();
        let mut n = vec![0.0; 8];
        n[gellmann3_index(8)] = -1.0;
        let rho = from_coherence(&CoherenceState::new(3, n).unwrap(), &b).unwrap();
        let expect = linalg::from_real_diagonal(&[0.0, 0.0, 1.0]);
        assert!(linalg::max_abs_diff(rho.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn trace_and_hermiticity_errors() {
        let (b, _) = qutrit();
        let rho = HermitianOperator::from_real_diagonal(&[1.0, 1.0, 0.0]);
        assert_eq!(
            to_coherence(&rho, &b, &Default::default()).unwrap_err(),
            Error::Normalization(2.0)
        );
        let mut m = linalg::from_real_diagonal(&[0.5, 0.5, 0.0]);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(
            HermitianOperator::new(m, &Default::default()),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn length_mismatch_is_layout_error() {
        assert!(matches!(CoherenceState::new(3, vec![0.0; 3]), Err(Error::InvalidLayout(_))));
    }

    #[test]
    fn star_on_pure_state_and_lambda3() {
        let (b, t) = qutrit();
        let rho = HermitianOperator::from_real_diagonal(&[1.0, 0.0, 0.0]);
        let s = to_coherence(&rho, &b, &Default::default()).unwrap();
        let nn = star(s.vector(), s.vector(), &t).unwrap();
        for (x, y) in nn.iter().zip(s.vector()) {
            assert!((x - y).abs() < 1e-14);
        }
        let mut e3 = vec![0.0; 8];
        e3[gellmann3_index(3)] = 1.0;
        let sq = star(&e3, &e3, &t).unwrap();
        assert!((sq[gellmann3_index(8)] - 1.0).abs() < 1e-14);
        assert!(star(&[0.0; 8], &[0.0; 8], &t).unwrap().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn star_undefined_for_qubits() {
        let b = build_gellmann_basis(2).unwrap();
        let t = structure_constants(&b, &Default::default()).unwrap();
        assert_eq!(star(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &t).unwrap_err(), Error::StarUndefined);
        // the qubit purity test falls back to the norm alone
        let s = CoherenceState::new(2, vec![0.0, 0.0, 1.0]).unwrap();
        assert!(is_pure(&s, &t, 1e-12));
    }

    #[test]
    fn unit_lambda8_vector_is_not_pure() {
        // n along +lambda_8 has |n| = 1 but n*n = -n, and rho = diag(2/3, 2/3, -1/3)
        let (b, t) = qutrit();
        let mut n = vec![0.0; 8];
        n[gellmann3_index(8)] = 1.0;
        let s = CoherenceState::new(3, n).unwrap();
        assert!(!is_pure(&s, &t, 1e-9));
        let rho = from_coherence(&s, &b).unwrap();
        let ev = rho.eigenvalues();
        assert!((ev[0] + 1.0 / 3.0).abs() < 1e-14);
        assert!(!is_pure(&CoherenceState::zero(3), &t, 1e-9));
    }

    #[test]
    fn angles() {
        let (b, _) = qutrit();
        let s1 = to_coherence(&HermitianOperator::from_real_diagonal(&[1.0, 0.0, 0.0]), &b, &Default::default()).unwrap();
        let s2 = to_coherence(&HermitianOperator::from_real_diagonal(&[0.0, 1.0, 0.0]), &b, &Default::default()).unwrap();
        assert!((mutual_angle(&s1, &s2).unwrap().cos() + 0.5).abs() < 1e-14);
        assert!(are_orthogonal(&s1, &s2, 1e-12));
        assert!(mutual_angle(&s1, &s1).unwrap().abs() < 1e-7);
        assert_eq!(mutual_angle(&s1, &CoherenceState::zero(3)).unwrap_err(), Error::UndefinedAngle);

        let q = build_gellmann_basis(2).unwrap();
        let up = to_coherence(&HermitianOperator::from_real_diagonal(&[1.0, 0.0]), &q, &Default::default()).unwrap();
        let down = to_coherence(&HermitianOperator::from_real_diagonal(&[0.0, 1.0]), &q, &Default::default()).unwrap();
        assert!((mutual_angle(&up, &down).unwrap() - std::f64::consts::PI).abs() < 1e-7);
    }
}
