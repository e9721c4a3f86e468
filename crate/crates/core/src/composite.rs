//! Multi-subsystem structure: partial trace and transpose, correlation
//! blocks, local-unitary invariants and the two-qubit Werner family.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coherence::{self, CoherenceState, HermitianOperator};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::positivity::{self, SymFnSequence};
use crate::su_basis::{
    build_gellmann_basis, build_product_basis, gellmann_kinds, product_labels, BasisSet,
    StructureTensors,
};
use crate::tol::Tolerances;

/// Subsystem dimensions plus the map between product labels and flat
/// coherence indices.
///
/// A label is one entry per subsystem: `0` for the identity, otherwise the
/// 1-based index of the Gell-Mann element of that factor. Flat element `i`
/// of the product basis is `sqrt(2 / prod_s w_s) * (x_s g_s)` where `w_s` is
/// `Tr(g_s^2)` of the bare factor (`d_s` for the identity, `2` otherwise).
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeLayout {
    dims: Vec<usize>,
    total: usize,
    labels: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl CompositeLayout {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidLayout("empty subsystem list".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(d));
        }
        let labels = product_labels(dims);
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Ok(Self {
            dims: dims.to_vec(),
            total: dims.iter().product(),
            labels,
            index,
        })
    }

    pub fn two_qubit() -> Self {
        Self::new(&[2, 2]).expect("valid layout")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Number of non-identity labels, `total^2 - 1`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &[usize] {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &[usize]) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// The matching product basis (qubit and qutrit factors only).
    pub fn basis(&self) -> Result<BasisSet> {
        build_product_basis(&self.dims)
    }

    /// `n_i / Tr(rho g_label)`: the factor converting a bare expectation value
    /// of the unscaled tensor product into the flat normalized component.
    pub fn bare_factor(&self, i: usize) -> f64 {
        let w: f64 = self.labels[i]
            .iter()
            .zip(&self.dims)
            .map(|(&l, &d)| if l == 0 { d as f64 } else { 2.0 })
            .product();
        coherence::extraction_factor(self.total) * (2.0 / w).sqrt()
    }

    fn check_operator(&self, rho: &HermitianOperator) -> Result<()> {
        if rho.dim() != self.total {
            return Err(Error::DimensionMismatch {
                expected: self.total,
                found: rho.dim(),
            });
        }
        Ok(())
    }

    fn check_subsystem(&self, s: usize) -> Result<()> {
        if s >= self.dims.len() {
            return Err(Error::InvalidLayout(format!(
                "subsystem {s} out of range for {} subsystems",
                self.dims.len()
            )));
        }
        Ok(())
    }

    /// Row-major digits of a flat index.
    fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for s in (0..self.dims.len()).rev() {
            out[s] = idx % self.dims[s];
            idx /= self.dims[s];
        }
        out
    }

    fn flat(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }
}

/// Trace out every subsystem not listed in `keep`. The kept factors retain
/// their original order.
pub fn partial_trace(
    rho: &HermitianOperator,
    layout: &CompositeLayout,
    keep: &[usize],
) -> Result<HermitianOperator> {
    layout.check_operator(rho)?;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    for &s in &keep {
        layout.check_subsystem(s)?;
    }
    let kept_dims: Vec<usize> = keep.iter().map(|&s| layout.dims[s]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let mut out = CMatrix::zeros(out_dim, out_dim);
    let m = rho.matrix();
    let n = layout.total;
    let digits: Vec<Vec<usize>> = (0..n).map(|i| layout.digits(i)).collect();
    let reduced = |d: &[usize]| {
        keep.iter()
            .zip(&kept_dims)
            .fold(0, |acc, (&s, &dim)| acc * dim + d[s])
    };
    for r in 0..n {
        for c in 0..n {
            let (dr, dc) = (&digits[r], &digits[c]);
            let traced_equal = (0..layout.dims.len())
                .filter(|s| !keep.contains(s))
                .all(|s| dr[s] == dc[s]);
            if traced_equal {
                out[(reduced(dr), reduced(dc))] += m[(r, c)];
            }
        }
    }
    Ok(HermitianOperator::from_hermitian(out))
}

/// Transpose on one tensor factor. The result is Hermitian with the same
/// trace but need not be positive.
pub fn partial_transpose(
    rho: &HermitianOperator,
    layout: &CompositeLayout,
    subsystem: usize,
) -> Result<HermitianOperator> {
    layout.check_operator(rho)?;
    layout.check_subsystem(subsystem)?;
    let m = rho.matrix();
    let n = layout.total;
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut dr = layout.digits(r);
            let mut dc = layout.digits(c);
            std::mem::swap(&mut dr[subsystem], &mut dc[subsystem]);
            out[(layout.flat(&dr), layout.flat(&dc))] = m[(r, c)];
        }
    }
    Ok(HermitianOperator::from_hermitian(out))
}

/// Partial transpose in the product basis: components whose factor on
/// `subsystem` is an antisymmetric Gell-Mann element change sign. For two
/// qubits and subsystem 0 these are components 2, 10, 11 and 12 (1-based).
pub fn partial_transpose_coherence(
    state: &CoherenceState,
    layout: &CompositeLayout,
    subsystem: usize,
) -> Result<CoherenceState> {
    layout.check_subsystem(subsystem)?;
    if state.dim() != layout.total || state.vector().len() != layout.len() {
        return Err(Error::DimensionMismatch {
            expected: layout.total,
            found: state.dim(),
        });
    }
    let kinds = gellmann_kinds(layout.dims[subsystem]);
    let n = state
        .vector()
        .iter()
        .zip(&layout.labels)
        .map(|(&x, label)| {
            let l = label[subsystem];
            if l > 0 && kinds[l - 1].is_antisymmetric() {
                -x
            } else {
                x
            }
        })
        .collect();
    CoherenceState::new(state.dim(), n)
}

/// Bare expectation values of a bipartite state in the Gell-Mann bases of
/// each factor: `n_a[i] = Tr(rho g_i x 1)`, `n_b[j] = Tr(rho 1 x g_j)`,
/// `c[(i, j)] = Tr(rho g_i x g_j)`. For qubits these are Pauli expectations.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationBlock {
    pub dims: [usize; 2],
    pub n_a: Vec<f64>,
    pub n_b: Vec<f64>,
    pub c: DMatrix<f64>,
}

fn two_party(layout: &CompositeLayout) -> Result<[usize; 2]> {
    match layout.dims() {
        &[a, b] => Ok([a, b]),
        other => Err(Error::InvalidLayout(format!(
            "expected two subsystems, found {}",
            other.len()
        ))),
    }
}

pub fn extract_correlation(
    rho: &HermitianOperator,
    layout: &CompositeLayout,
) -> Result<CorrelationBlock> {
    layout.check_operator(rho)?;
    let [da, db] = two_party(layout)?;
    let ga = build_gellmann_basis(da)?;
    let gb = build_gellmann_basis(db)?;
    let (ia, ib) = (linalg::identity(da), linalg::identity(db));
    let m = rho.matrix();
    let expect = |op: &CMatrix| linalg::trace_product(m, op).re;
    let n_a = ga.elements().iter().map(|g| expect(&linalg::kron(g, &ib))).collect();
    let n_b = gb.elements().iter().map(|g| expect(&linalg::kron(&ia, g))).collect();
    let c = DMatrix::from_fn(ga.len(), gb.len(), |i, j| {
        expect(&linalg::kron(ga.element(i), gb.element(j)))
    });
    Ok(CorrelationBlock {
        dims: [da, db],
        n_a,
        n_b,
        c,
    })
}

impl CorrelationBlock {
    /// `rho = (1/(dA dB)) [1 + (dA/2) n_a.g x 1 + (dB/2) 1 x n_b.g + (dA dB/4) c_ij g_i x g_j]`.
    pub fn reconstruct(&self) -> Result<HermitianOperator> {
        let [da, db] = self.dims;
        let ga = build_gellmann_basis(da)?;
        let gb = build_gellmann_basis(db)?;
        let (fa, fb) = (da as f64, db as f64);
        let mut m = linalg::identity(da * db);
        m += linalg::kron(&ga.combine(&self.n_a), &linalg::identity(db)).scale(fa / 2.0);
        m += linalg::kron(&linalg::identity(da), &gb.combine(&self.n_b)).scale(fb / 2.0);
        for i in 0..ga.len() {
            let row: Vec<f64> = self.c.row(i).iter().copied().collect();
            m += linalg::kron(ga.element(i), &gb.combine(&row)).scale(fa * fb / 4.0);
        }
        Ok(HermitianOperator::from_hermitian(m.scale(1.0 / (fa * fb))))
    }

    /// The flat coherence vector in the product basis of `layout`.
    pub fn to_coherence(&self, layout: &CompositeLayout) -> Result<CoherenceState> {
        if two_party(layout)? != self.dims {
            return Err(Error::InvalidLayout("layout does not match block dims".into()));
        }
        let n = (0..layout.len())
            .map(|i| {
                let bare = match *layout.label(i) {
                    [a, 0] => self.n_a[a - 1],
                    [0, b] => self.n_b[b - 1],
                    [a, b] => self.c[(a - 1, b - 1)],
                    _ => unreachable!("two-party label"),
                };
                layout.bare_factor(i) * bare
            })
            .collect();
        CoherenceState::new(layout.total(), n)
    }
}

/// `sum_ij c_ij^2`, invariant under local unitaries.
pub fn local_invariant_quadratic(block: &CorrelationBlock) -> f64 {
    block.c.iter().map(|x| x * x).sum()
}

/// `sum d^A_ijk d^B_lmn c_il c_jm c_kn` with each factor's own d-tensor.
/// Identically zero when either factor is a qubit.
pub fn local_invariant_cubic(
    block: &CorrelationBlock,
    tensors_a: &StructureTensors,
    tensors_b: &StructureTensors,
) -> Result<f64> {
    let expected = [tensors_a.dim(), tensors_b.dim()];
    if expected != block.dims {
        return Err(Error::InvalidLayout(format!(
            "tensors for {expected:?} do not match block dims {:?}",
            block.dims
        )));
    }
    let c = &block.c;
    let mut acc = 0.0;
    for ea in tensors_a.d_full() {
        for eb in tensors_b.d_full() {
            acc += ea.value * eb.value * c[(ea.i, eb.i)] * c[(ea.j, eb.j)] * c[(ea.k, eb.k)];
        }
    }
    Ok(acc)
}

/// `det(c)` for a square correlation block. For qubit pairs this is the
/// nonvanishing cubic local invariant.
pub fn correlation_determinant(block: &CorrelationBlock) -> Result<f64> {
    if !block.c.is_square() {
        return Err(Error::InvalidLayout(format!(
            "correlation block is {}x{}",
            block.c.nrows(),
            block.c.ncols()
        )));
    }
    Ok(block.c.determinant())
}

fn singlet() -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(h, 0.0),
        Complex64::new(-h, 0.0),
        Complex64::new(0.0, 0.0),
    ]
}

fn check_werner(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("Werner parameter x = {x} outside [0, 1]")));
    }
    Ok(())
}

/// `((1 - x)/4) 1 + x |s><s|` with `|s>` the singlet.
pub fn werner_state(x: f64) -> Result<HermitianOperator> {
    check_werner(x)?;
    let s = HermitianOperator::projector(&singlet());
    let m = linalg::identity(4).scale((1.0 - x) / 4.0) + s.matrix().scale(x);
    HermitianOperator::new(m, &Tolerances::default())
}

/// Polynomial coefficients (ascending powers of `x`) of `(16 S_3, 256 S_4)`
/// for the Werner state and its partial transpose.
pub const WERNER_S3: [f64; 4] = [1.0, 0.0, -3.0, 2.0];
pub const WERNER_S4: [f64; 5] = [1.0, 0.0, -6.0, 8.0, -3.0];
pub const WERNER_S3_PT: [f64; 4] = [1.0, 0.0, -3.0, -2.0];
pub const WERNER_S4_PT: [f64; 5] = [1.0, 0.0, -6.0, -8.0, -3.0];

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Closed `(S_3, S_4)` for the Werner state (or its partial transpose).
pub fn werner_symfns(x: f64, transposed: bool) -> Result<(f64, f64)> {
    check_werner(x)?;
    let (p3, p4): (&[f64], &[f64]) = if transposed {
        (&WERNER_S3_PT, &WERNER_S4_PT)
    } else {
        (&WERNER_S3, &WERNER_S4)
    };
    Ok((horner(p3, x) / 16.0, horner(p4, x) / 256.0))
}

/// The same quantities through the generic route: build the state,
/// optionally transpose subsystem 0, and run the positivity gate.
pub fn werner_pipeline(x: f64, transposed: bool, tol: &Tolerances) -> Result<SymFnSequence> {
    let rho = werner_state(x)?;
    let rho = if transposed {
        partial_transpose(&rho, &CompositeLayout::two_qubit(), 0)?
    } else {
        rho
    };
    Ok(positivity::check_operator(&rho, tol))
}

/// Locate the PPT boundary of the Werner family by bisection on the sign of
/// `S_4` of the partial transpose (generic route).
pub fn werner_ppt_boundary(tol_x: f64) -> Result<f64> {
    let s4 = |x: f64| -> Result<f64> {
        Ok(werner_pipeline(x, true, &Tolerances::default())?.s[3])
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if s4(lo)? <= 0.0 || s4(hi)? >= 0.0 {
        return Err(Error::NumericalConsistency(
            "no sign change of S_4 on [0, 1]".into(),
        ));
    }
    while hi - lo > tol_x {
        let mid = 0.5 * (lo + hi);
        if s4(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
