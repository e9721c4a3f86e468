//! Spin flip, two-qubit concurrence, and the three-qubit tangle identities.
//!
//! Qubit `A` is the most significant bit of the amplitude index.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coherence::HermitianOperator;
use crate::composite::{partial_trace, CompositeLayout};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::positivity::newton_symmetric_functions;
use crate::tol::Tolerances;

/// A normalized pure state of three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureTripartiteState {
    amplitudes: Vec<Complex64>,
}

impl PureTripartiteState {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 8 {
            return Err(Error::DimensionMismatch {
                expected: 8,
                found: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::Normalization(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize first, then construct. Fails only for the zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Normalization(0.0));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes)
    }

    /// `(|000> + |111>)/sqrt(2)`.
    pub fn ghz() -> Self {
        let mut a = vec![Complex64::new(0.0, 0.0); 8];
        a[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        a[7] = a[0];
        Self { amplitudes: a }
    }

    /// `(|001> + |010> + |100>)/sqrt(3)`.
    pub fn w() -> Self {
        let mut a = vec![Complex64::new(0.0, 0.0); 8];
        let v = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        a[1] = v;
        a[2] = v;
        a[4] = v;
        Self { amplitudes: a }
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(index: usize) -> Result<Self> {
        if index >= 8 {
            return Err(Error::Domain(format!("basis index {index} >= 8")));
        }
        let mut a = vec![Complex64::new(0.0, 0.0); 8];
        a[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: a })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn density(&self) -> HermitianOperator {
        HermitianOperator::projector(&self.amplitudes)
    }

    /// Reduced state on the listed qubits (0 = A, 1 = B, 2 = C).
    pub fn marginal(&self, keep: &[usize]) -> Result<HermitianOperator> {
        let layout = CompositeLayout::new(&[2, 2, 2])?;
        partial_trace(&self.density(), &layout, keep)
    }

    /// Relabel qubits: qubit `q` of `self` becomes qubit `perm[q]` of the result.
    pub fn permuted(&self, perm: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p >= 3 || seen[p] {
                return Err(Error::Domain(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); 8];
        for (idx, &amp) in self.amplitudes.iter().enumerate() {
            let bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
            let mut new_bits = [0; 3];
            for q in 0..3 {
                new_bits[perm[q]] = bits[q];
            }
            out[(new_bits[0] << 2) | (new_bits[1] << 1) | new_bits[2]] = amp;
        }
        Ok(Self { amplitudes: out })
    }

    /// `(U_A x U_B x U_C) |psi>` for 2x2 unitaries.
    pub fn apply_local(&self, u: [&CMatrix; 3]) -> Result<Self> {
        let full = linalg::kron_all(u);
        let v = full * linalg::CVector::from_column_slice(&self.amplitudes);
        Self::normalized(v.iter().copied().collect())
    }
}

fn check_two_qubit(rho: &HermitianOperator) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(())
}

fn sigma_yy() -> CMatrix {
    let y = &linalg::pauli()[1];
    linalg::kron(y, y)
}

/// `(s_y x s_y) conj(rho) (s_y x s_y)`.
pub fn spin_flip(rho: &HermitianOperator) -> Result<HermitianOperator> {
    check_two_qubit(rho)?;
    let yy = sigma_yy();
    HermitianOperator::new(&yy * rho.matrix().conjugate() * &yy, &Tolerances::default())
}

/// Square roots of the eigenvalues of `rho rho~`, largest first, together
/// with the derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceBound {
    pub lambdas: [f64; 4],
    /// `(l_1 - l_2)^2`; the squared concurrence when `rho` has rank at most two.
    pub concurrence_sq: f64,
    /// `Tr(rho rho~) = sum l_i^2`, an upper bound on `concurrence_sq`.
    pub trace_rho_rho_tilde: f64,
}

/// Spectrum of `rho rho~` through the Hermitian similar form
/// `sqrt(rho) rho~ sqrt(rho)`.
pub fn concurrence_squared_bound(rho: &HermitianOperator, tol: &Tolerances) -> Result<ConcurrenceBound> {
    check_two_qubit(rho)?;
    let min = rho.eigenvalues()[0];
    if min < -tol.pos {
        return Err(Error::Domain(format!(
            "state is not positive semidefinite (min eigenvalue {min:e})"
        )));
    }
    let tilde = spin_flip(rho)?;
    let root = linalg::psd_sqrt(rho.matrix());
    let sim = &root * tilde.matrix() * &root;
    let mut ev = linalg::eigvals_hermitian(&sim);
    ev.reverse();
    let mut lambdas = [0.0; 4];
    for (l, e) in lambdas.iter_mut().zip(&ev) {
        *l = e.max(0.0).sqrt();
    }
    Ok(ConcurrenceBound {
        lambdas,
        concurrence_sq: (lambdas[0] - lambdas[1]).powi(2),
        trace_rho_rho_tilde: linalg::trace_product(rho.matrix(), tilde.matrix()).re,
    })
}

fn bloch(rho: &HermitianOperator) -> [f64; 3] {
    let p = linalg::pauli();
    [0, 1, 2].map(|i| linalg::trace_product(rho.matrix(), &p[i]).re)
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Both sides of the pure-state trace identities, with bare Pauli
/// expectation vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchmidtResiduals {
    /// `n_AB . n_AB`.
    pub schmidt_lhs: f64,
    /// `1 + 2 n_C . n_C - n_A . n_A - n_B . n_B`.
    pub schmidt_rhs: f64,
    /// `Tr(rho_AB rho~_AB)`.
    pub det_lhs: f64,
    /// `2 (det rho_A + det rho_B - det rho_C)`.
    pub det_rhs: f64,
}

impl SchmidtResiduals {
    pub fn schmidt_residual(&self) -> f64 {
        (self.schmidt_lhs - self.schmidt_rhs).abs()
    }

    pub fn det_residual(&self) -> f64 {
        (self.det_lhs - self.det_rhs).abs()
    }
}

pub fn schmidt_trace_relation(psi: &PureTripartiteState) -> Result<SchmidtResiduals> {
    let rho_ab = psi.marginal(&[0, 1])?;
    let [ra, rb, rc] = [0, 1, 2].map(|q| psi.marginal(&[q]));
    let (ra, rb, rc) = (ra?, rb?, rc?);
    let p = linalg::pauli();
    let mut n_ab = Vec::with_capacity(9);
    for a in &p {
        for b in &p {
            n_ab.push(linalg::trace_product(rho_ab.matrix(), &linalg::kron(a, b)).re);
        }
    }
    let (na, nb, nc) = (bloch(&ra), bloch(&rb), bloch(&rc));
    let det = |r: &HermitianOperator| linalg::det_hermitian(r.matrix());
    let tilde = spin_flip(&rho_ab)?;
    Ok(SchmidtResiduals {
        schmidt_lhs: norm_sq(&n_ab),
        schmidt_rhs: 1.0 + 2.0 * norm_sq(&nc) - norm_sq(&na) - norm_sq(&nb),
        det_lhs: linalg::trace_product(rho_ab.matrix(), tilde.matrix()).re,
        det_rhs: 2.0 * (det(&ra) + det(&rb) - det(&rc)),
    })
}

/// Threshold below which a negative `S_2(rho rho~)` is reported as an error
/// rather than clamped.
pub const TANGLE_S2_FLOOR: f64 = -1e-9;

/// `4 sqrt(S_2(rho_AB rho~_AB))`, with `S_2` from the traces of the product.
pub fn three_tangle(psi: &PureTripartiteState) -> Result<f64> {
    let rho = psi.marginal(&[0, 1])?;
    let tilde = spin_flip(&rho)?;
    let m = rho.matrix() * tilde.matrix();
    let t1 = linalg::trace(&m);
    let t2 = linalg::trace_product(&m, &m);
    if t1.im.abs() > 1e-10 || t2.im.abs() > 1e-10 {
        return Err(Error::NumericalConsistency(format!(
            "complex traces of rho rho~: {t1}, {t2}"
        )));
    }
    let s2 = newton_symmetric_functions(&[t1.re, t2.re])?[1];
    if s2 < TANGLE_S2_FLOOR {
        return Err(Error::NumericalConsistency(format!(
            "S_2(rho rho~) = {s2:e} is negative"
        )));
    }
    Ok(4.0 * s2.max(0.0).sqrt())
}

/// Largest minus smallest tangle over the six qubit orderings.
pub fn tangle_permutation_spread(psi: &PureTripartiteState) -> Result<f64> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in PERMS {
        let t = three_tangle(&psi.permuted(p)?)?;
        lo = lo.min(t);
        hi = hi.max(t);
    }
    Ok(hi - lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CkwCheck {
    /// `C_AB^2 + C_AC^2`.
    pub lhs: f64,
    /// `4 det rho_A`.
    pub rhs: f64,
    pub holds: bool,
}

/// `C_AB^2 + C_AC^2 <= 4 det rho_A`. The marginals of a pure three-qubit
/// state have rank at most two, so `(l_1 - l_2)^2` is the squared concurrence.
pub fn ckw_inequality_check(psi: &PureTripartiteState) -> Result<CkwCheck> {
    let tol = Tolerances::default();
    let ab = concurrence_squared_bound(&psi.marginal(&[0, 1])?, &tol)?.concurrence_sq;
    let ac = concurrence_squared_bound(&psi.marginal(&[0, 2])?, &tol)?.concurrence_sq;
    let lhs = ab + ac;
    let rhs = 4.0 * linalg::det_hermitian(psi.marginal(&[0])?.matrix());
    Ok(CkwCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-9,
    })
}
