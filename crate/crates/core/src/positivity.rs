//! Characteristic-polynomial coefficients and the positivity gate.
//!
//! For a Hermitian `A` with eigenvalues `p_i`,
//! `det(A - x 1) = x^N - S_1 x^(N-1) + S_2 x^(N-2) - ... + (-1)^N S_N`
//! where `S_k` are the elementary symmetric polynomials of the `p_i`.
//! `A` is positive semidefinite iff every `S_k >= 0`, and the number of sign
//! changes in `(1, -S_1, S_2, -S_3, ...)` counts its positive eigenvalues.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::coherence::{self, dot, CoherenceState, HermitianOperator};
use crate::error::{Error, Result};
use crate::invariants::{trace_power_adjoint, Contractions};
use crate::su_basis::{build_gellmann_basis, BasisSet, StructureTensors};
use crate::tol::Tolerances;

/// Newton's identities: `S_k = (1/k) sum_{j=1..k} (-1)^(j-1) Tr(A^j) S_{k-j}`,
/// `S_0 = 1`. `traces[j - 1] = Tr(A^j)`.
pub fn newton_symmetric_functions(traces: &[f64]) -> Result<Vec<f64>> {
    if traces.is_empty() {
        return Err(Error::Domain("no trace powers given".into()));
    }
    let mut s = vec![1.0];
    for k in 1..=traces.len() {
        let mut acc = 0.0;
        for j in 1..=k {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * traces[j - 1] * s[k - j];
        }
        s.push(acc / k as f64);
    }
    s.remove(0);
    Ok(s)
}

/// `S_1..S_N` of a Hermitian operator from dense trace powers.
pub fn symmetric_functions(op: &HermitianOperator) -> Vec<f64> {
    newton_symmetric_functions(&op.trace_powers(op.dim())).expect("dim >= 1")
}

/// `S_1..S_N` of the operator a coherence vector represents, with the trace
/// powers taken by adjoint multiplication.
pub fn symmetric_functions_coherence(
    state: &CoherenceState,
    tensors: &StructureTensors,
) -> Result<Vec<f64>> {
    let traces = (1..=state.dim())
        .map(|m| trace_power_adjoint(state, m, tensors))
        .collect::<Result<Vec<_>>>()?;
    newton_symmetric_functions(&traces)
}

/// `(S_2, S_3, S_4)` in closed form from `n.n`, `(n*n).n` and `(n*n).(n*n)`.
///
/// The star-product constant is folded into the `(N-2)` prefactors so the
/// expressions stay finite at `N = 2` and `N = 3`; at those dimensions the
/// vanishing coefficients come out as exact zeros of the prefactor.
pub fn closed_s234(state: &CoherenceState, tensors: &StructureTensors) -> Result<(f64, f64, f64)> {
    if state.dim() != tensors.dim() {
        return Err(Error::DimensionMismatch {
            expected: tensors.dim(),
            found: state.dim(),
        });
    }
    let dim = state.dim() as f64;
    let c = coherence::coherence_constant(state.dim());
    let contr = Contractions::new(state.vector(), tensors);
    let nn = contr.nn;
    // (N-2) (n*n).n and (N-2)^2 (n*n).(n*n), free of the 1/(N-2) in the star product
    let cubic = c * contr.dnnn;
    let quartic = c * c * contr.vv;

    let s2 = (dim - 1.0) / (2.0 * dim) * (1.0 - nn);
    let s3 = (dim - 1.0) / (6.0 * dim * dim) * ((dim - 2.0) * (1.0 - 3.0 * nn) + 2.0 * cubic);
    let s4 = (dim - 1.0) / (24.0 * dim.powi(3))
        * ((dim - 2.0) * (dim - 3.0) * (1.0 - 6.0 * nn)
            + 8.0 * (dim - 3.0) * cubic
            + 3.0 * (dim - 1.0) * (dim - 2.0) * nn * nn
            - 6.0 * quartic);
    Ok((s2, s3, s4))
}

/// Outcome of the positivity gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PSD")]
    Psd,
    #[serde(rename = "NotPSD")]
    NotPsd,
    /// Positive semidefinite with at least one vanishing `S_k` (rank deficient).
    Boundary,
}

impl Verdict {
    pub fn is_psd(self) -> bool {
        !matches!(self, Verdict::NotPsd)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Psd => "PSD",
            Verdict::NotPsd => "NotPSD",
            Verdict::Boundary => "Boundary",
        })
    }
}

/// `S_1..S_N` with the sign-change count and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymFnSequence {
    pub dim: usize,
    #[serde(rename = "S")]
    pub s: Vec<f64>,
    pub sign_changes: usize,
    pub verdict: Verdict,
}

impl SymFnSequence {
    /// Number of positive eigenvalues (equal to the sign-change count).
    pub fn positive_eigenvalues(&self) -> usize {
        self.sign_changes
    }
}

/// Apply the gate with `eps = tol * max(1, max_k |S_k|)`. Coefficients within
/// `eps` of zero are treated as exact zeros and dropped before counting sign
/// changes of `(1, -S_1, S_2, ...)`.
pub fn positivity_verdict(s: &[f64], tol: f64) -> SymFnSequence {
    let scale = s.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let eps = tol * scale;
    let mut last_sign = 1.0f64;
    let mut sign_changes = 0;
    for (k, &sk) in s.iter().enumerate() {
        if sk.abs() <= eps {
            continue;
        }
        let signed = if k % 2 == 0 { -sk } else { sk };
        let sign = signed.signum();
        if sign != last_sign {
            sign_changes += 1;
            last_sign = sign;
        }
    }
    let verdict = if s.iter().any(|&x| x < -eps) {
        Verdict::NotPsd
    } else if s.iter().any(|&x| x.abs() <= eps) {
        Verdict::Boundary
    } else {
        Verdict::Psd
    };
    SymFnSequence {
        dim: s.len(),
        s: s.to_vec(),
        sign_changes,
        verdict,
    }
}

/// Gate on a Hermitian operator via dense trace powers.
pub fn check_operator(op: &HermitianOperator, tol: &Tolerances) -> SymFnSequence {
    positivity_verdict(&symmetric_functions(op), tol.pos)
}

/// Gate on a coherence vector via adjoint-route trace powers.
pub fn check_coherence(
    state: &CoherenceState,
    tensors: &StructureTensors,
    tol: &Tolerances,
) -> Result<SymFnSequence> {
    Ok(positivity_verdict(
        &symmetric_functions_coherence(state, tensors)?,
        tol.pos,
    ))
}

/// Affine map `n -> T n + t` on coherence vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    dim: usize,
    linear: DMatrix<f64>,
    translation: Vec<f64>,
}

impl AffineMap {
    pub fn new(dim: usize, linear: DMatrix<f64>, translation: Vec<f64>) -> Result<Self> {
        let len = dim * dim - 1;
        if linear.nrows() != len || linear.ncols() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: if linear.nrows() != len {
                    linear.nrows()
                } else {
                    linear.ncols()
                },
            });
        }
        if translation.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: translation.len(),
            });
        }
        Ok(Self {
            dim,
            linear,
            translation,
        })
    }

    /// `T = scale * 1`, `t = 0`.
    pub fn scaling(dim: usize, scale: f64) -> Self {
        let len = dim * dim - 1;
        Self {
            dim,
            linear: DMatrix::identity(len, len) * scale,
            translation: vec![0.0; len],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.linear
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }
}

/// `n' = T n + t`. The image is not guaranteed to be a valid state.
pub fn apply_affine_map(map: &AffineMap, state: &CoherenceState) -> Result<CoherenceState> {
    if map.dim != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim,
            found: state.dim(),
        });
    }
    let out = (0..map.translation.len())
        .map(|r| dot(map.linear.row(r).transpose().as_slice(), state.vector()) + map.translation[r])
        .collect();
    CoherenceState::new(state.dim(), out)
}

/// `rho -> (1/N)(b 1 - c n.lambda)`, returned as `(b, n')` with the image
/// equal to `b * (1/N)(1 + c n'.lambda)`, i.e. `n' = -n / b`. For
/// `b = N - 1` the image is `1 - rho`.
pub fn universal_inversion(state: &CoherenceState, b: f64) -> Result<(f64, CoherenceState)> {
    if b.is_nan() || b <= 0.0 {
        return Err(Error::Domain(format!("inversion weight b = {b} must be positive")));
    }
    Ok((b, state.scaled(-1.0 / b)))
}

/// The one-parameter family `(1/N)[1 + diag(a, ..., a, -(N-1) a)]`, positive
/// semidefinite for `-1 <= a <= 1/(N-1)`.
pub fn extremal_family(a: f64, n: usize) -> HermitianOperator {
    let mut diag = vec![a; n];
    diag[n - 1] = -(n as f64 - 1.0) * a;
    let diag: Vec<f64> = diag.iter().map(|x| (1.0 + x) / n as f64).collect();
    HermitianOperator::from_real_diagonal(&diag)
}

/// Closed positivity condition for the inverted extremal family:
/// eigenvalues `(b - a)/N` and `(b + (N-1) a)/N`, so `b >= max(a, (1-N) a)`.
pub fn inversion_bound_closed(a: f64, b: f64, n: usize, slack: f64) -> bool {
    b >= a.max((1.0 - n as f64) * a) - slack
}

/// Whether `(1/N)(b 1 - c n.lambda)` is positive semidefinite for the
/// extremal family at parameter `a`, decided by the `S_k` gate.
pub fn inversion_bound_check(a: f64, b: f64, n: usize) -> Result<bool> {
    inversion_bound_check_with(a, b, &build_gellmann_basis(n)?, &Tolerances::default())
}

/// [`inversion_bound_check`] with a caller-supplied basis.
pub fn inversion_bound_check_with(
    a: f64,
    b: f64,
    basis: &BasisSet,
    tol: &Tolerances,
) -> Result<bool> {
    let n = basis.dim();
    let upper = 1.0 / (n as f64 - 1.0);
    if !(-1.0 - 1e-12..=upper + 1e-12).contains(&a) {
        return Err(Error::Domain(format!(
            "a = {a} outside the positive range [-1, {upper}]"
        )));
    }
    let rho = extremal_family(a, n);
    let state = coherence::to_coherence(&rho, basis, tol)?;
    let (weight, image) = universal_inversion(&state, b)?;
    let op = coherence::from_coherence(&image, basis)?;
    let seq = check_operator(&op, tol);
    // positivity of b * op is that of op for b > 0
    debug_assert!(weight > 0.0);
    Ok(seq.verdict.is_psd())
}
