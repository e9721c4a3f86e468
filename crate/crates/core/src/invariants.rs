//! Trace invariants `Tr(rho^m)`, Casimir invariants and spectrum-degeneracy
//! diagnostics.
//!
//! `Tr(rho^m)` is available by two independent routes:
//!
//! - [`trace_power_adjoint`] multiplies `rho` with itself in the
//!   `(1, lambda_k)` decomposition using `f` and `d` directly;
//! - [`trace_power_closed`] expands `((1 + c A)/N)^m` binomially and evaluates
//!   each `Tr(A^k)`, `A = n . lambda`, as a fixed polynomial in a handful of
//!   `d`-tensor contractions of `n` (see [`symmetric_trace_contraction`]).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coherence::{self, dot, CoherenceState, HermitianOperator};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::su_basis::{build_gellmann_basis, structure_constants, BasisSet, StructureTensors};
use crate::tol::Tolerances;

/// Operator `scalar * 1 + sum_k vec_k lambda_k` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointElement {
    pub dim: usize,
    pub scalar: Complex64,
    pub vec: Vec<Complex64>,
}

impl AdjointElement {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            scalar: linalg::ONE,
            vec: vec![ZERO; dim * dim - 1],
        }
    }

    /// `rho = (1/N) 1 + (c/N) n . lambda`.
    pub fn from_state(state: &CoherenceState) -> Self {
        let n = state.dim();
        let c = coherence::coherence_constant(n) / n as f64;
        Self {
            dim: n,
            scalar: Complex64::new(1.0 / n as f64, 0.0),
            vec: state
                .vector()
                .iter()
                .map(|&x| Complex64::new(c * x, 0.0))
                .collect(),
        }
    }

    /// Dense matrix in the given basis.
    pub fn to_matrix(&self, basis: &BasisSet) -> CMatrix {
        let mut m = linalg::identity(self.dim) * self.scalar;
        for (k, &a) in self.vec.iter().enumerate() {
            if a != ZERO {
                m += basis.element(k) * a;
            }
        }
        m
    }

    /// `Tr` of the represented operator, `N * scalar`.
    pub fn trace(&self) -> Complex64 {
        self.scalar * self.dim as f64
    }
}

/// Product of two adjoint elements via
/// `l_i l_j = (2/N) delta_ij + (d_ijk + i f_ijk) l_k`.
pub fn adjoint_multiply(
    x: &AdjointElement,
    y: &AdjointElement,
    tensors: &StructureTensors,
) -> Result<AdjointElement> {
    if x.dim != y.dim || x.dim != tensors.dim() {
        return Err(Error::DimensionMismatch {
            expected: tensors.dim(),
            found: if x.dim != tensors.dim() { x.dim } else { y.dim },
        });
    }
    let bilinear: Complex64 = x.vec.iter().zip(&y.vec).map(|(a, b)| a * b).sum();
    let scalar = x.scalar * y.scalar + bilinear * (2.0 / x.dim as f64);
    let mut vec = tensors.product_vec(&x.vec, &y.vec);
    for (k, v) in vec.iter_mut().enumerate() {
        *v += x.scalar * y.vec[k] + y.scalar * x.vec[k];
    }
    Ok(AdjointElement {
        dim: x.dim,
        scalar,
        vec,
    })
}

/// `Tr(rho^m)` by repeated adjoint multiplication.
pub fn trace_power_adjoint(
    state: &CoherenceState,
    m: usize,
    tensors: &StructureTensors,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::UnsupportedOrder(0));
    }
    let rho = AdjointElement::from_state(state);
    let mut power = rho.clone();
    for _ in 1..m {
        power = adjoint_multiply(&power, &rho, tensors)?;
    }
    let tr = power.trace();
    if tr.im.abs() > 1e-10 {
        return Err(Error::NumericalConsistency(format!(
            "Tr(rho^{m}) has imaginary part {:e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

/// The `d`-tensor contractions of `n` from which every `Tr((n.lambda)^k)`,
/// `k <= 9`, is assembled. With `v = d(n, n)` and `w = d(v, v)`
/// (`d(a, b)_k = d_ijk a_i b_j`):
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contractions {
    /// `n.n`
    pub nn: f64,
    /// `d(n, n, n) = v.n`
    pub dnnn: f64,
    /// `v.v`
    pub vv: f64,
    /// `d(v, v, n)`
    pub dvvn: f64,
    /// `d(v, v, v)`
    pub dvvv: f64,
    /// `d(w, v, n)`
    pub dwvn: f64,
    /// `w.w`
    pub ww: f64,
    /// `d(w, w, n)`
    pub dwwn: f64,
}

impl Contractions {
    pub fn new(n: &[f64], tensors: &StructureTensors) -> Self {
        let v = tensors.d_vec(n, n);
        let w = tensors.d_vec(&v, &v);
        Self {
            nn: dot(n, n),
            dnnn: dot(&v, n),
            vv: dot(&v, &v),
            dvvn: tensors.d_form(&v, &v, n),
            dvvv: tensors.d_form(&v, &v, &v),
            dwvn: tensors.d_form(&w, &v, n),
            ww: dot(&w, &w),
            dwwn: tensors.d_form(&w, &w, n),
        }
    }

    /// The single term built from `k - 2` chained `d` tensors, `k = 3..=9`.
    pub fn chain(&self, k: usize) -> Option<f64> {
        Some(match k {
            3 => self.dnnn,
            4 => self.vv,
            5 => self.dvvn,
            6 => self.dvvv,
            7 => self.dwvn,
            8 => self.ww,
            9 => self.dwwn,
            _ => return None,
        })
    }

    /// `T_k = Tr((n . lambda)^k)` for `k = 2..=9`.
    ///
    /// The terms follow the symmetrized traces of `k` basis elements
    /// contracted with `n`. Products of `delta`s give powers of `n.n`; every
    /// `delta` factor carries `2/N`, every closed `d` chain a leading `2`.
    pub fn symmetric_trace(&self, k: usize, dim: usize) -> Option<f64> {
        let n = dim as f64;
        let s = self.nn;
        let c = self.dnnn;
        Some(match k {
            2 => 2.0 * s,
            3 => 2.0 * c,
            4 => 4.0 / n * s * s + 2.0 * self.vv,
            5 => 8.0 / n * s * c + 2.0 * self.dvvn,
            6 => 8.0 / (n * n) * s.powi(3) + 12.0 / n * s * self.vv + 2.0 * self.dvvv,
            7 => {
                24.0 / (n * n) * s * s * c
                    + 12.0 / n * s * self.dvvn
                    + 4.0 / n * self.vv * c
                    + 2.0 * self.dwvn
            }
            8 => {
                16.0 / n.powi(3) * s.powi(4)
                    + 48.0 / (n * n) * s * s * self.vv
                    + 16.0 / n * s * self.dvvv
                    + 4.0 / n * self.vv * self.vv
                    + 2.0 * self.ww
            }
            9 => {
                64.0 / n.powi(3) * s.powi(3) * c
                    + 48.0 / (n * n) * s * s * self.dvvn
                    + 32.0 / (n * n) * s * self.vv * c
                    + 16.0 / n * s * self.dwvn
                    + 8.0 / n * self.vv * self.dvvn
                    + 2.0 * self.dwwn
            }
            _ => return None,
        })
    }
}

/// `T_k = Tr_sym(l_{i1} ... l_{ik}) n_{i1} ... n_{ik}` for `k = 2..=9`.
pub fn symmetric_trace_contraction(k: usize, n: &[f64], tensors: &StructureTensors) -> Result<f64> {
    if !(2..=9).contains(&k) {
        return Err(Error::UnsupportedOrder(k));
    }
    if n.len() != tensors.len() {
        return Err(Error::DimensionMismatch {
            expected: tensors.len(),
            found: n.len(),
        });
    }
    let c = Contractions::new(n, tensors);
    Ok(c.symmetric_trace(k, tensors.dim()).expect("k checked above"))
}

fn binomial(m: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// `Tr(rho^m) = N^-m sum_k C(m,k) c^k T_k`, `c = sqrt(N(N-1)/2)`, `m = 2..=9`.
pub fn trace_power_closed(
    state: &CoherenceState,
    m: usize,
    tensors: &StructureTensors,
) -> Result<f64> {
    if !(2..=9).contains(&m) {
        return Err(Error::UnsupportedOrder(m));
    }
    if state.dim() != tensors.dim() {
        return Err(Error::DimensionMismatch {
            expected: tensors.dim(),
            found: state.dim(),
        });
    }
    let dim = state.dim();
    let contr = Contractions::new(state.vector(), tensors);
    let c = coherence::coherence_constant(dim);
    let mut sum = dim as f64; // k = 0; the k = 1 term vanishes (traceless)
    for k in 2..=m {
        let t = contr.symmetric_trace(k, dim).expect("k <= 9");
        sum += binomial(m, k) * c.powi(k as i32) * t;
    }
    Ok(sum / (dim as f64).powi(m as i32))
}

/// Casimir invariant values `c_2..c_m` of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasimirSet {
    pub dim: usize,
    pub values: BTreeMap<usize, f64>,
}

impl CasimirSet {
    pub fn get(&self, m: usize) -> Option<f64> {
        self.values.get(&m).copied()
    }

    pub fn max_abs_diff(&self, other: &CasimirSet) -> f64 {
        self.values
            .iter()
            .map(|(k, v)| other.get(*k).map_or(f64::INFINITY, |w| (v - w).abs()))
            .fold(0.0, f64::max)
    }
}

/// Casimir invariants up to order `up_to`.
///
/// `c_2 = n.n`, `c_3 = (n*n).n`. For `m >= 4`, `c_m` is the pure `d`-chain
/// term of `T_m` rescaled by the star-product constant `K = sqrt(N(N-1)/2)/(N-2)`
/// once per `d`: `c_m = K^(m-2) chain_m`. With this normalization every
/// Casimir of a pure state equals one.
pub fn casimirs(
    state: &CoherenceState,
    tensors: &StructureTensors,
    up_to: usize,
) -> Result<CasimirSet> {
    let dim = state.dim();
    if !(2..=9).contains(&up_to) || up_to > dim {
        return Err(Error::UnsupportedOrder(up_to));
    }
    if dim != tensors.dim() {
        return Err(Error::DimensionMismatch {
            expected: tensors.dim(),
            found: dim,
        });
    }
    let contr = Contractions::new(state.vector(), tensors);
    let mut values = BTreeMap::new();
    values.insert(2, contr.nn);
    if up_to >= 3 {
        let k = coherence::star_constant(dim)?;
        for m in 3..=up_to {
            let chain = contr.chain(m).expect("m <= 9");
            values.insert(m, k.powi(m as i32 - 2) * chain);
        }
    }
    Ok(CasimirSet { dim, values })
}

/// Quadratic (`sum_a l_a l_a`) or cubic (`sum d_abc l_a l_b l_c`) Casimir
/// operator on the defining representation. The metric is taken as
/// `delta_ab`, which is proportional to the Killing form in this basis.
pub fn casimir_operator(
    m: usize,
    basis: &BasisSet,
    tensors: &StructureTensors,
) -> Result<HermitianOperator> {
    if basis.dim() != tensors.dim() {
        return Err(Error::DimensionMismatch {
            expected: tensors.dim(),
            found: basis.dim(),
        });
    }
    let dim = basis.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    match m {
        2 => {
            for l in basis.elements() {
                acc += l * l;
            }
        }
        3 => {
            for e in tensors.d_full() {
                acc += (basis.element(e.i) * basis.element(e.j) * basis.element(e.k)).scale(e.value);
            }
        }
        _ => return Err(Error::UnsupportedOrder(m)),
    }
    Ok(HermitianOperator::from_hermitian(acc))
}

/// Degeneracy pattern of a three-level spectrum read off `(c_2, c_3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy3 {
    ThreeFoldDegenerate,
    /// Degenerate pair above the third eigenvalue (`c_3 = -c_2^(3/2)`).
    TwoLargeOneSmall,
    /// Degenerate pair below the third eigenvalue (`c_3 = +c_2^(3/2)`).
    TwoSmallOneLarge,
    NonDegenerate,
}

pub fn classify_degeneracy_3(c2: f64, c3: f64, tol: f64) -> Result<Degeneracy3> {
    if c2 < -tol {
        return Err(Error::Domain(format!("quadratic Casimir {c2} is negative")));
    }
    if c2 <= tol {
        return Ok(Degeneracy3::ThreeFoldDegenerate);
    }
    let bound = c2.max(0.0).powf(1.5);
    Ok(if (c3 + bound).abs() <= tol {
        Degeneracy3::TwoLargeOneSmall
    } else if (c3 - bound).abs() <= tol {
        Degeneracy3::TwoSmallOneLarge
    } else {
        Degeneracy3::NonDegenerate
    })
}

/// Four-level degeneracy patterns recognisable from Casimir values alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy4 {
    /// Spectrum `(a, b, b, b)`: `c_i = (+-|n|)^i kappa_i`. Includes the fully
    /// degenerate spectrum.
    PatternABBB,
    /// Spectrum `(a, a, b, b)`: only `c_2` is nonzero.
    PatternAABB,
    Unresolved,
}

/// `kappa_i = c_i / |n|^i` for `i = 2, 3, 4`, evaluated on the reference
/// spectrum `(1, 0, 0, 0)`.
pub fn abbb_reference_constants() -> [f64; 3] {
    static CONSTANTS: OnceLock<[f64; 3]> = OnceLock::new();
    *CONSTANTS.get_or_init(|| {
        let tol = Tolerances::default();
        let basis = build_gellmann_basis(4).expect("N = 4 is valid");
        let tensors = structure_constants(&basis, &tol).expect("Gell-Mann basis is consistent");
        let rho = HermitianOperator::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0]);
        let state = coherence::to_coherence(&rho, &basis, &tol).expect("trace one");
        let cas = casimirs(&state, &tensors, 4).expect("order 4 at N = 4");
        let r = state.norm();
        [
            cas.get(2).unwrap() / r.powi(2),
            cas.get(3).unwrap() / r.powi(3),
            cas.get(4).unwrap() / r.powi(4),
        ]
    })
}

pub fn classify_degeneracy_4(casimirs: &CasimirSet, tol: f64) -> Result<Degeneracy4> {
    if casimirs.dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: casimirs.dim,
        });
    }
    let (c2, c3, c4) = match (casimirs.get(2), casimirs.get(3), casimirs.get(4)) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(Error::UnsupportedOrder(4)),
    };
    let [_, k3, k4] = abbb_reference_constants();
    let r = c2.max(0.0).sqrt();
    if (c3.abs() - k3 * r.powi(3)).abs() <= tol && (c4 - k4 * r.powi(4)).abs() <= tol {
        return Ok(Degeneracy4::PatternABBB);
    }
    if c2 > tol && c3.abs() <= tol && c4.abs() <= tol {
        return Ok(Degeneracy4::PatternAABB);
    }
    Ok(Degeneracy4::Unresolved)
}
