//! Orthogonal traceless Hermitian bases and their `f`/`d` structure tensors.
//!
//! Every basis produced here obeys `Tr(lambda_i lambda_j) = 2 delta_ij`, so that
//!
//! ```text
//! lambda_i lambda_j = (2/N) delta_ij 1 + i f_ijk lambda_k + d_ijk lambda_k
//! ```
//!
//! with `f` totally antisymmetric and `d` totally symmetric. The tensors are
//! recovered from traces as `f_ijk = Tr([l_i, l_j] l_k) / (4i)` and
//! `d_ijk = Tr({l_i, l_j} l_k) / 4`.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::tol::Tolerances;

/// Position of the standard (interleaved) Gell-Mann matrices `lambda_1..lambda_8`
/// inside [`build_gellmann_basis`]`(3)`. Entry `m - 1` holds the index of `lambda_m`.
pub const GELLMANN3_STANDARD_ORDER: [usize; 8] = [0, 3, 6, 1, 4, 2, 5, 7];

/// Index of the standard Gell-Mann matrix `lambda_m` (1-based `m`) in the
/// grouped N = 3 ordering.
pub fn gellmann3_index(m: usize) -> usize {
    assert!((1..=8).contains(&m), "Gell-Mann label {m} out of range 1..=8");
    GELLMANN3_STANDARD_ORDER[m - 1]
}

/// Kind of a generalized Gell-Mann element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GellMannKind {
    /// `E_jk + E_kj`, `j < k`.
    Symmetric(usize, usize),
    /// `-i E_jk + i E_kj`, `j < k`.
    Antisymmetric(usize, usize),
    /// `sqrt(2/(m(m+1))) diag(1,..,1,-m,0,..)`, `1 <= m < N`.
    Diagonal(usize),
}

impl GellMannKind {
    /// Whether the element changes sign under transposition.
    pub fn is_antisymmetric(self) -> bool {
        matches!(self, GellMannKind::Antisymmetric(..))
    }
}

/// The generalized Gell-Mann labels for dimension `n`, in basis order.
pub fn gellmann_kinds(n: usize) -> Vec<GellMannKind> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| ((j + 1)..n).map(move |k| (j, k)))
        .collect();
    pairs
        .iter()
        .map(|&(j, k)| GellMannKind::Symmetric(j, k))
        .chain(pairs.iter().map(|&(j, k)| GellMannKind::Antisymmetric(j, k)))
        .chain((1..n).map(GellMannKind::Diagonal))
        .collect()
}

fn gellmann_matrix(n: usize, kind: GellMannKind) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    match kind {
        GellMannKind::Symmetric(j, k) => {
            m[(j, k)] = ONE;
            m[(k, j)] = ONE;
        }
        GellMannKind::Antisymmetric(j, k) => {
            m[(j, k)] = -linalg::I;
            m[(k, j)] = linalg::I;
        }
        GellMannKind::Diagonal(l) => {
            let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
            for r in 0..l {
                m[(r, r)] = Complex64::new(scale, 0.0);
            }
            m[(l, l)] = Complex64::new(-(l as f64) * scale, 0.0);
        }
    }
    m
}

type SparseEntries = Vec<(usize, usize, Complex64)>;

fn sparsify(m: &CMatrix) -> SparseEntries {
    let mut out = Vec::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            if v != ZERO {
                out.push((r, c, v));
            }
        }
    }
    out
}

/// An ordered family of `N^2 - 1` traceless Hermitian matrices with
/// `Tr(l_i l_j) = 2 delta_ij`.
#[derive(Debug, Clone)]
pub struct BasisSet {
    dim: usize,
    elements: Vec<CMatrix>,
    sparse: Vec<SparseEntries>,
    subsystem_dims: Vec<usize>,
    labels: Option<Vec<Vec<usize>>>,
}

impl BasisSet {
    /// Wrap arbitrary matrices, checking the basis invariants.
    pub fn from_elements(dim: usize, elements: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let basis = Self::new_unchecked(dim, elements, vec![dim], None);
        basis.validate(tol)?;
        Ok(basis)
    }

    fn new_unchecked(
        dim: usize,
        elements: Vec<CMatrix>,
        subsystem_dims: Vec<usize>,
        labels: Option<Vec<Vec<usize>>>,
    ) -> Self {
        let sparse = elements.iter().map(sparsify).collect();
        Self {
            dim,
            elements,
            sparse,
            subsystem_dims,
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of elements, `N^2 - 1`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &CMatrix {
        &self.elements[i]
    }

    /// Subsystem dimensions; a single entry for a non-composite basis.
    pub fn subsystem_dims(&self) -> &[usize] {
        &self.subsystem_dims
    }

    /// Product-basis labels: entry `i` lists, per subsystem, `0` for the
    /// identity or the 1-based Gell-Mann index of that factor.
    pub fn labels(&self) -> Option<&[Vec<usize>]> {
        self.labels.as_deref()
    }

    /// `Tr(m l_i)` using the sparsity of `l_i`.
    pub fn trace_with(&self, m: &CMatrix, i: usize) -> Complex64 {
        self.sparse[i]
            .iter()
            .map(|&(r, c, v)| v * m[(c, r)])
            .sum()
    }

    /// `sum_i coeffs_i l_i`.
    pub fn combine(&self, coeffs: &[f64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (entries, &a) in self.sparse.iter().zip(coeffs) {
            if a == 0.0 {
                continue;
            }
            for &(r, c, v) in entries {
                out[(r, c)] += v * a;
            }
        }
        out
    }

    /// Largest violation of hermiticity, tracelessness and trace
    /// orthonormality over all elements and pairs.
    pub fn invariant_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.elements.iter().enumerate() {
            worst = worst.max(linalg::hermitian_deviation(a));
            worst = worst.max(linalg::trace(a).norm());
            for j in i..self.len() {
                let expected = if i == j { 2.0 } else { 0.0 };
                let t = self.trace_with(a, j);
                worst = worst.max((t - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    /// Check element count, shapes and the trace-normalization invariants.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let expected = self.dim * self.dim - 1;
        if self.elements.len() != expected {
            return Err(Error::InconsistentBasis(format!(
                "expected {expected} elements, found {}",
                self.elements.len()
            )));
        }
        if let Some(bad) = self
            .elements
            .iter()
            .position(|m| m.nrows() != self.dim || m.ncols() != self.dim)
        {
            return Err(Error::InconsistentBasis(format!(
                "element {bad} is not {0}x{0}",
                self.dim
            )));
        }
        let v = self.invariant_violation();
        if v > tol.herm {
            return Err(Error::InconsistentBasis(format!(
                "hermiticity/orthonormality violated by {v:e}"
            )));
        }
        Ok(())
    }

    pub fn to_document(&self) -> BasisDocument {
        let elements = self
            .elements
            .iter()
            .map(|m| {
                let mut flat = Vec::with_capacity(self.dim * self.dim);
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        let z = m[(r, c)];
                        flat.push([z.re, z.im]);
                    }
                }
                flat
            })
            .collect();
        BasisDocument {
            dim: self.dim,
            elements,
        }
    }

    pub fn from_document(doc: &BasisDocument, tol: &Tolerances) -> Result<Self> {
        let n = doc.dim;
        let mut elements = Vec::with_capacity(doc.elements.len());
        for (idx, flat) in doc.elements.iter().enumerate() {
            if flat.len() != n * n {
                return Err(Error::InconsistentBasis(format!(
                    "element {idx} has {} entries, expected {}",
                    flat.len(),
                    n * n
                )));
            }
            elements.push(CMatrix::from_fn(n, n, |r, c| {
                let [re, im] = flat[r * n + c];
                Complex64::new(re, im)
            }));
        }
        Self::from_elements(n, elements, tol)
    }
}

/// JSON form of a basis: `{"dim": N, "elements": [[[re, im], ...], ...]}`,
/// each element flattened row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub dim: usize,
    pub elements: Vec<Vec<[f64; 2]>>,
}

/// Generalized Gell-Mann basis: symmetric off-diagonal pairs, antisymmetric
/// off-diagonal pairs, then the `N - 1` diagonal elements.
pub fn build_gellmann_basis(n: usize) -> Result<BasisSet> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let elements = gellmann_kinds(n)
        .into_iter()
        .map(|k| gellmann_matrix(n, k))
        .collect();
    let labels = (1..n * n).map(|i| vec![i]).collect();
    Ok(BasisSet::new_unchecked(n, elements, vec![n], Some(labels)))
}

/// Enumerate non-identity product labels grouped by support: first by the
/// number of non-identity factors, then by which subsystems carry them, then
/// lexicographically. For two qubits this is
/// `s_i x 1`, `1 x s_i`, `s_1 x s_i`, `s_2 x s_i`, `s_3 x s_i`.
pub fn product_labels(dims: &[usize]) -> Vec<Vec<usize>> {
    let k = dims.len();
    let mut supports: Vec<Vec<usize>> = (1u32..(1 << k))
        .map(|mask| (0..k).filter(|b| mask & (1 << b) != 0).collect())
        .collect();
    supports.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut out = Vec::new();
    for support in supports {
        let mut labels = vec![vec![0usize; k]];
        for &s in &support {
            let max = dims[s] * dims[s];
            labels = labels
                .into_iter()
                .flat_map(|l| {
                    (1..max).map(move |digit| {
                        let mut next = l.clone();
                        next[s] = digit;
                        next
                    })
                })
                .collect();
        }
        out.extend(labels);
    }
    out
}

/// Tensor-product basis `{l_{i1} x ... x l_{ik}}` over qubit/qutrit factors,
/// excluding the all-identity term, each scaled to `Tr(l^2) = 2`.
pub fn build_product_basis(dims: &[usize]) -> Result<BasisSet> {
    if dims.is_empty() {
        return Err(Error::InvalidLayout("empty subsystem list".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d != 2 && d != 3) {
        return Err(Error::InvalidLayout(format!(
            "subsystem dimension {d} unsupported (qubits and qutrits only)"
        )));
    }
    if dims.len() == 1 {
        return build_gellmann_basis(dims[0]);
    }
    let factors: Vec<Vec<CMatrix>> = dims
        .iter()
        .map(|&d| {
            let mut v = vec![linalg::identity(d)];
            v.extend(gellmann_kinds(d).into_iter().map(|k| gellmann_matrix(d, k)));
            v
        })
        .collect();
    let labels = product_labels(dims);
    let total: usize = dims.iter().product();
    let elements = labels
        .iter()
        .map(|label| {
            let norm: f64 = label
                .iter()
                .zip(dims)
                .map(|(&l, &d)| if l == 0 { d as f64 } else { 2.0 })
                .product();
            let m = linalg::kron_all(label.iter().zip(&factors).map(|(&l, f)| &f[l]));
            m.scale((2.0 / norm).sqrt())
        })
        .collect();
    Ok(BasisSet::new_unchecked(
        total,
        elements,
        dims.to_vec(),
        Some(labels),
    ))
}

/// One stored tensor component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// Sparse `f` (antisymmetric) and `d` (symmetric) tensors of a basis.
///
/// Canonical storage keeps `i < j < k` for `f` and `i <= j <= k` for `d`;
/// the expanded lists hold every nonzero permutation for contractions.
#[derive(Debug, Clone)]
pub struct StructureTensors {
    dim: usize,
    len: usize,
    f: Vec<TensorEntry>,
    d: Vec<TensorEntry>,
    f_full: Vec<TensorEntry>,
    d_full: Vec<TensorEntry>,
    f_lookup: HashMap<[usize; 3], f64>,
    d_lookup: HashMap<[usize; 3], f64>,
    /// Largest `|f_ijk + f_jik|`-type violation seen before symmetrizing.
    pub f_antisymmetry_violation: f64,
    /// Largest `|d_ijk - d_pi(ijk)|` violation seen before symmetrizing.
    pub d_symmetry_violation: f64,
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 2, 0],
    [2, 0, 1],
    [1, 0, 2],
    [0, 2, 1],
    [2, 1, 0],
];
const PERM_SIGN: [f64; 6] = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0];

fn sort3(i: usize, j: usize, k: usize) -> ([usize; 3], f64) {
    let mut a = [i, j, k];
    let mut sign = 1.0;
    if a[0] > a[1] {
        a.swap(0, 1);
        sign = -sign;
    }
    if a[1] > a[2] {
        a.swap(1, 2);
        sign = -sign;
    }
    if a[0] > a[1] {
        a.swap(0, 1);
        sign = -sign;
    }
    (a, sign)
}

fn expand(entries: &[TensorEntry], antisymmetric: bool) -> Vec<TensorEntry> {
    let mut out = Vec::new();
    for e in entries {
        let idx = [e.i, e.j, e.k];
        let mut seen: Vec<[usize; 3]> = Vec::with_capacity(6);
        for (p, sign) in PERMS.iter().zip(PERM_SIGN) {
            let t = [idx[p[0]], idx[p[1]], idx[p[2]]];
            if seen.contains(&t) {
                continue;
            }
            seen.push(t);
            let v = if antisymmetric { sign * e.value } else { e.value };
            out.push(TensorEntry {
                i: t[0],
                j: t[1],
                k: t[2],
                value: v,
            });
        }
    }
    out
}

/// Compute `f` and `d` from traces of the basis elements.
pub fn structure_constants(basis: &BasisSet, tol: &Tolerances) -> Result<StructureTensors> {
    basis.validate(tol)?;
    let n = basis.len();
    let dim = basis.dim();

    // t[i][j][k] = Tr(l_i l_j l_k)
    let mut t = vec![ZERO; n * n * n];
    let at = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    for i in 0..n {
        for j in 0..n {
            let mut prod = CMatrix::zeros(dim, dim);
            for &(r, c, v) in &basis.sparse[i] {
                for &(r2, c2, w) in &basis.sparse[j] {
                    if r2 == c {
                        prod[(r, c2)] += v * w;
                    }
                }
            }
            for k in 0..n {
                t[at(i, j, k)] = basis.trace_with(&prod, k);
            }
        }
    }

    let mut f_dense = vec![0.0; n * n * n];
    let mut d_dense = vec![0.0; n * n * n];
    let mut imag_residue: f64 = 0.0;
    let four_i = Complex64::new(0.0, 4.0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let comm = t[at(i, j, k)] - t[at(j, i, k)];
                let anti = t[at(i, j, k)] + t[at(j, i, k)];
                let f = comm / four_i;
                let d = anti / 4.0;
                imag_residue = imag_residue.max(f.im.abs()).max(d.im.abs());
                f_dense[at(i, j, k)] = f.re;
                d_dense[at(i, j, k)] = d.re;
            }
        }
    }
    if imag_residue > tol.herm {
        return Err(Error::InconsistentBasis(format!(
            "structure constants have imaginary residue {imag_residue:e}"
        )));
    }

    let mut f_viol: f64 = 0.0;
    let mut d_viol: f64 = 0.0;
    let mut f = Vec::new();
    let mut d = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let idx = [i, j, k];
                let base_f = f_dense[at(i, j, k)];
                let base_d = d_dense[at(i, j, k)];
                for (p, sign) in PERMS.iter().zip(PERM_SIGN) {
                    let (a, b, c) = (idx[p[0]], idx[p[1]], idx[p[2]]);
                    f_viol = f_viol.max((f_dense[at(a, b, c)] - sign * base_f).abs());
                    d_viol = d_viol.max((d_dense[at(a, b, c)] - base_d).abs());
                }
                if i < j && j < k && base_f.abs() > tol.tensor {
                    f.push(TensorEntry { i, j, k, value: base_f });
                }
                if base_d.abs() > tol.tensor {
                    d.push(TensorEntry { i, j, k, value: base_d });
                }
            }
        }
    }

    let f_full = expand(&f, true);
    let d_full = expand(&d, false);
    let f_lookup = f.iter().map(|e| ([e.i, e.j, e.k], e.value)).collect();
    let d_lookup = d.iter().map(|e| ([e.i, e.j, e.k], e.value)).collect();
    Ok(StructureTensors {
        dim,
        len: n,
        f,
        d,
        f_full,
        d_full,
        f_lookup,
        d_lookup,
        f_antisymmetry_violation: f_viol,
        d_symmetry_violation: d_viol,
    })
}

impl StructureTensors {
    /// Hilbert-space dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements, `N^2 - 1`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn f(&self, i: usize, j: usize, k: usize) -> f64 {
        let (key, sign) = sort3(i, j, k);
        self.f_lookup.get(&key).map_or(0.0, |v| sign * v)
    }

    pub fn d(&self, i: usize, j: usize, k: usize) -> f64 {
        let (key, _) = sort3(i, j, k);
        self.d_lookup.get(&key).copied().unwrap_or(0.0)
    }

    /// Canonical `f` entries, `i < j < k`.
    pub fn f_entries(&self) -> &[TensorEntry] {
        &self.f
    }

    /// Canonical `d` entries, `i <= j <= k`.
    pub fn d_entries(&self) -> &[TensorEntry] {
        &self.d
    }

    /// Every nonzero `f_ijk`, all index orders.
    pub fn f_full(&self) -> &[TensorEntry] {
        &self.f_full
    }

    /// Every nonzero `d_ijk`, all index orders.
    pub fn d_full(&self) -> &[TensorEntry] {
        &self.d_full
    }

    /// `w_k = sum_ij d_ijk a_i b_j`.
    pub fn d_vec(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len];
        for e in &self.d_full {
            out[e.k] += e.value * a[e.i] * b[e.j];
        }
        out
    }

    /// `sum_ijk d_ijk a_i b_j c_k`.
    pub fn d_form(&self, a: &[f64], b: &[f64], c: &[f64]) -> f64 {
        self.d_full
            .iter()
            .map(|e| e.value * a[e.i] * b[e.j] * c[e.k])
            .sum()
    }

    /// `sum_ijk f_ijk a_i b_j c_k`.
    pub fn f_form(&self, a: &[f64], b: &[f64], c: &[f64]) -> f64 {
        self.f_full
            .iter()
            .map(|e| e.value * a[e.i] * b[e.j] * c[e.k])
            .sum()
    }

    /// `w_k = sum_ij (d_ijk + i f_ijk) x_i y_j` for complex vectors.
    pub fn product_vec(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.len];
        for e in &self.d_full {
            out[e.k] += x[e.i] * y[e.j] * e.value;
        }
        for e in &self.f_full {
            out[e.k] += x[e.i] * y[e.j] * Complex64::new(0.0, e.value);
        }
        out
    }

    /// Max entry of `l_i l_j - [(2/N) delta_ij 1 + sum_k (i f_ijk + d_ijk) l_k]`
    /// over all pairs.
    pub fn reconstruction_residual(&self, basis: &BasisSet) -> f64 {
        let n = self.len;
        let mut coeffs: HashMap<(usize, usize), Vec<(usize, Complex64)>> = HashMap::new();
        for e in &self.d_full {
            coeffs
                .entry((e.i, e.j))
                .or_default()
                .push((e.k, Complex64::new(e.value, 0.0)));
        }
        for e in &self.f_full {
            coeffs
                .entry((e.i, e.j))
                .or_default()
                .push((e.k, Complex64::new(0.0, e.value)));
        }
        let ident = linalg::identity(self.dim);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut m = basis.element(i) * basis.element(j);
                if i == j {
                    m -= ident.scale(2.0 / self.dim as f64);
                }
                if let Some(list) = coeffs.get(&(i, j)) {
                    for &(k, c) in list {
                        for &(r, cc, v) in &basis.sparse[k] {
                            m[(r, cc)] -= c * v;
                        }
                    }
                }
                worst = worst.max(linalg::max_abs(&m));
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn rejects_dimension_below_two() {
        assert_eq!(build_gellmann_basis(1).unwrap_err(), Error::InvalidDimension(1));
        assert_eq!(build_gellmann_basis(0).unwrap_err(), Error::InvalidDimension(0));
    }

    #[test]
    fn qubit_basis_is_pauli() {
        let b = build_gellmann_basis(2).unwrap();
        for (e, s) in b.elements().iter().zip(linalg::pauli()) {
            assert!(linalg::max_abs_diff(e, &s) < 1e-15);
        }
    }

    #[test]
    fn qutrit_diagonal_elements() {
        let b = build_gellmann_basis(3).unwrap();
        let l3 = b.element(gellmann3_index(3));
        let l8 = b.element(gellmann3_index(8));
        let s3 = 1.0 / 3f64.sqrt();
        assert!(linalg::max_abs_diff(l3, &linalg::from_real_diagonal(&[1.0, -1.0, 0.0])) < 1e-15);
        assert!(
            linalg::max_abs_diff(l8, &linalg::from_real_diagonal(&[s3, s3, -2.0 * s3])) < 1e-15
        );
    }

    #[test]
    fn orthonormal_up_to_six() {
        for n in 2..=6 {
            let b = build_gellmann_basis(n).unwrap();
            assert_eq!(b.len(), n * n - 1);
            assert!(b.invariant_violation() < 1e-12, "N = {n}");
        }
    }

    #[test]
    fn two_qubit_ordering() {
        let b = build_product_basis(&[2, 2]).unwrap();
        assert_eq!(b.len(), 15);
        let [x, y, z] = linalg::pauli();
        let id = linalg::identity(2);
        let s = 1.0 / 2f64.sqrt();
        let expect = |i: usize| -> CMatrix {
            let p = [&x, &y, &z];
            let m = match i {
                1..=3 => linalg::kron(p[i - 1], &id),
                4..=6 => linalg::kron(&id, p[i - 4]),
                _ => linalg::kron(p[(i - 7) / 3], p[(i - 7) % 3]),
            };
            m.scale(s)
        };
        for i in 1..=15 {
            assert!(linalg::max_abs_diff(b.element(i - 1), &expect(i)) < 1e-15, "lambda_{i}");
        }
    }

    #[test]
    fn product_basis_rejects_bad_layouts() {
        assert!(matches!(build_product_basis(&[]), Err(Error::InvalidLayout(_))));
        assert!(matches!(build_product_basis(&[2, 4]), Err(Error::InvalidLayout(_))));
    }

    #[test]
    fn three_qubit_and_qubit_qutrit_bases() {
        let b = build_product_basis(&[2, 2, 2]).unwrap();
        assert_eq!(b.len(), 63);
        assert!(b.invariant_violation() < 1e-12);
        let b = build_product_basis(&[2, 3]).unwrap();
        assert_eq!(b.len(), 35);
        assert!(b.invariant_violation() < 1e-12);
    }

    #[test]
    fn pauli_structure_constants() {
        let b = build_gellmann_basis(2).unwrap();
        let t = structure_constants(&b, &tol()).unwrap();
        assert!(t.d_entries().is_empty());
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let eps = ((j as i64 - i as i64) * (k as i64 - i as i64) * (k as i64 - j as i64))
                        as f64
                        / 2.0;
                    assert!((t.f(i, j, k) - eps).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn qutrit_d_components() {
        let b = build_gellmann_basis(3).unwrap();
        let t = structure_constants(&b, &tol()).unwrap();
        let g = gellmann3_index;
        let s = 1.0 / 3f64.sqrt();
        assert!((t.d(g(1), g(1), g(8)) - s).abs() < 1e-14);
        assert!((t.d(g(2), g(2), g(8)) - s).abs() < 1e-14);
        assert!((t.d(g(3), g(3), g(8)) - s).abs() < 1e-14);
        assert!((t.d(g(8), g(8), g(8)) + s).abs() < 1e-14);
        // f_123 = 1 in the standard normalization
        assert!((t.f(g(1), g(2), g(3)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let mut els = build_gellmann_basis(2).unwrap().elements().to_vec();
        els[0] = els[0].scale(2.0);
        assert!(matches!(
            BasisSet::from_elements(2, els, &tol()),
            Err(Error::InconsistentBasis(_))
        ));
    }

    #[test]
    fn document_round_trip() {
        let b = build_gellmann_basis(3).unwrap();
        let doc = b.to_document();
        let text = serde_json::to_string(&doc).unwrap();
        let back: BasisDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let rebuilt = BasisSet::from_document(&back, &tol()).unwrap();
        for (a, b) in rebuilt.elements().iter().zip(b.elements()) {
            assert_eq!(a, b);
        }
    }
}
