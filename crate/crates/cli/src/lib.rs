//! File formats, reports and command logic behind the `blochvec` binary.
//!
//! All numerics are delegated to the `blochvec` library; this crate only
//! parses documents, dispatches, and shapes the results for output.

use std::collections::BTreeMap;
use std::path::Path;

use blochvec::coherence::{from_coherence, to_coherence};
use blochvec::composite::{werner_ppt_boundary, werner_symfns};
use blochvec::entanglement::{
    ckw_inequality_check, concurrence_squared_bound, tangle_permutation_spread, three_tangle,
    PureTripartiteState,
};
use blochvec::invariants::{
    casimirs, classify_degeneracy_3, classify_degeneracy_4, trace_power_adjoint,
    trace_power_closed,
};
use blochvec::linalg::CMatrix;
use blochvec::positivity::{self, apply_affine_map, universal_inversion, AffineMap, SymFnSequence, Verdict};
use blochvec::su_basis::{build_gellmann_basis, build_product_basis, structure_constants};
use blochvec::{BasisSet, CoherenceState, HermitianOperator, StructureTensors, Tolerances};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Library(#[from] blochvec::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// A state or operator on disk. Exactly one of `matrix`, `coherence` or
/// `ket` must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    /// Row-major entries as `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherence: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ket: Option<Vec<[f64; 2]>>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

/// An affine map `n -> T n + t` on coherence vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    #[serde(default = "default_version")]
    pub version: u32,
    pub dim: usize,
    #[serde(rename = "T")]
    pub linear: Vec<Vec<f64>>,
    pub t: Vec<f64>,
}

/// The parsed payload of a [`MatrixDocument`].
#[derive(Debug, Clone)]
pub enum Payload {
    Matrix(HermitianOperator),
    Coherence(CoherenceState),
    Ket(Vec<Complex64>),
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(CliError::Invalid(format!("unsupported format version {v}")));
    }
    Ok(())
}

impl MatrixDocument {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect();
        Self {
            version: FORMAT_VERSION,
            dim: Some(m.nrows()),
            dims: None,
            matrix: Some(rows),
            coherence: None,
            ket: None,
        }
    }

    pub fn from_coherence(state: &CoherenceState) -> Self {
        Self {
            version: FORMAT_VERSION,
            dim: Some(state.dim()),
            dims: None,
            matrix: None,
            coherence: Some(state.vector().to_vec()),
            ket: None,
        }
    }

    /// Declared dimension, reconciling `dim`, `dims` and the payload size.
    pub fn dimension(&self) -> Result<usize> {
        let from_payload = match (&self.matrix, &self.ket) {
            (Some(m), _) => Some(m.len()),
            (None, k) => k.as_ref().map(Vec::len),
        };
        let from_dims = self.dims.as_ref().map(|d| d.iter().product::<usize>());
        let candidates = [self.dim, from_dims, from_payload];
        let mut found: Option<usize> = None;
        for c in candidates.into_iter().flatten() {
            match found {
                Some(f) if f != c => {
                    return Err(CliError::Invalid(format!(
                        "inconsistent dimensions: {f} vs {c}"
                    )))
                }
                _ => found = Some(c),
            }
        }
        found.ok_or_else(|| CliError::Invalid("no dimension given".into()))
    }

    /// Subsystem layout, defaulting to a single system.
    pub fn layout(&self) -> Result<Vec<usize>> {
        let dim = self.dimension()?;
        Ok(self.dims.clone().unwrap_or_else(|| vec![dim]))
    }

    pub fn payload(&self, tol: &Tolerances) -> Result<Payload> {
        check_version(self.version)?;
        let present = [self.matrix.is_some(), self.coherence.is_some(), self.ket.is_some()]
            .iter()
            .filter(|&&p| p)
            .count();
        if present != 1 {
            return Err(CliError::Invalid(
                "exactly one of matrix, coherence, ket is required".into(),
            ));
        }
        let dim = self.dimension()?;
        if let Some(rows) = &self.matrix {
            if rows.iter().any(|r| r.len() != dim) {
                return Err(CliError::Invalid(format!("matrix is not {dim}x{dim}")));
            }
            let m = CMatrix::from_fn(dim, dim, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1]));
            return Ok(Payload::Matrix(HermitianOperator::new(m, tol)?));
        }
        if let Some(n) = &self.coherence {
            return Ok(Payload::Coherence(CoherenceState::new(dim, n.clone())?));
        }
        let ket = self.ket.as_ref().expect("one payload present");
        Ok(Payload::Ket(ket.iter().map(|p| Complex64::new(p[0], p[1])).collect()))
    }
}

/// The basis that coherence payloads refer to: a product basis when more
/// than one subsystem is declared, else generalized Gell-Mann.
pub fn basis_for(dims: &[usize]) -> Result<BasisSet> {
    Ok(if dims.len() > 1 {
        build_product_basis(dims)?
    } else {
        build_gellmann_basis(dims[0])?
    })
}

/// Both representations of a document's state.
pub struct Resolved {
    pub basis: BasisSet,
    pub tensors: StructureTensors,
    pub operator: HermitianOperator,
    pub state: Option<CoherenceState>,
}

pub fn resolve(doc: &MatrixDocument, tol: &Tolerances) -> Result<Resolved> {
    let basis = basis_for(&doc.layout()?)?;
    let tensors = structure_constants(&basis, tol)?;
    let (operator, state) = match doc.payload(tol)? {
        Payload::Matrix(op) => {
            // general Hermitian input is allowed; the vector only exists at trace one
            let state = to_coherence(&op, &basis, tol).ok();
            (op, state)
        }
        Payload::Coherence(s) => (from_coherence(&s, &basis)?, Some(s)),
        Payload::Ket(k) => {
            let norm: f64 = k.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(blochvec::Error::Normalization(norm).into());
            }
            let op = HermitianOperator::projector(&k);
            let s = to_coherence(&op, &basis, tol)?;
            (op, Some(s))
        }
    };
    Ok(Resolved {
        basis,
        tensors,
        operator,
        state,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub dim: usize,
    #[serde(rename = "S")]
    pub s: Vec<f64>,
    pub sign_changes: usize,
    pub positive_eigenvalues: usize,
    pub verdict: Verdict,
    /// Inversion weight `b` when the inverted operator was checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverted_with: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_agrees: Option<bool>,
}

impl CheckReport {
    fn new(op: &HermitianOperator, seq: SymFnSequence, verify: bool, tol: &Tolerances) -> Self {
        let (min_eigenvalue, eigen_agrees) = if verify {
            let ev = op.eigenvalues();
            let min = ev[0];
            let positive = ev.iter().filter(|&&e| e > tol.pos).count();
            let agrees = (min >= -tol.pos) == seq.verdict.is_psd() && positive == seq.sign_changes;
            (Some(min), Some(agrees))
        } else {
            (None, None)
        };
        Self {
            dim: seq.dim,
            positive_eigenvalues: seq.positive_eigenvalues(),
            s: seq.s,
            sign_changes: seq.sign_changes,
            verdict: seq.verdict,
            inverted_with: None,
            min_eigenvalue,
            eigen_agrees,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict.is_psd() {
            0
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    pub verify: bool,
    /// Check `(1/N)(b 1 - c n.lambda)` instead of the input.
    pub invert: Option<f64>,
}

pub fn run_check(doc: &MatrixDocument, opts: &CheckOptions, tol: &Tolerances) -> Result<CheckReport> {
    let r = resolve(doc, tol)?;
    let op = match opts.invert {
        None => r.operator,
        Some(b) => {
            let state = r.state.ok_or_else(|| {
                CliError::Invalid("inversion needs a trace-one input".into())
            })?;
            let (weight, image) = universal_inversion(&state, b)?;
            let m = from_coherence(&image, &r.basis)?.into_matrix().scale(weight);
            HermitianOperator::new(m, tol)?
        }
    };
    let seq = positivity::check_operator(&op, tol);
    let mut report = CheckReport::new(&op, seq, opts.verify, tol);
    report.inverted_with = opts.invert;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub m: usize,
    pub adjoint: f64,
    pub closed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub dim: usize,
    pub traces: Vec<TraceRow>,
    pub max_discrepancy: f64,
    pub casimirs: BTreeMap<usize, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<String>,
}

pub fn run_invariants(doc: &MatrixDocument, max_order: usize, tol: &Tolerances) -> Result<InvariantsReport> {
    if !(2..=9).contains(&max_order) {
        return Err(blochvec::Error::UnsupportedOrder(max_order).into());
    }
    let r = resolve(doc, tol)?;
    let state = r
        .state
        .ok_or_else(|| CliError::Invalid("invariants need a trace-one input".into()))?;
    let mut traces = Vec::new();
    let mut max_discrepancy: f64 = 0.0;
    for m in 2..=max_order {
        let adjoint = trace_power_adjoint(&state, m, &r.tensors)?;
        let closed = trace_power_closed(&state, m, &r.tensors)?;
        max_discrepancy = max_discrepancy.max((adjoint - closed).abs());
        traces.push(TraceRow { m, adjoint, closed });
    }
    let dim = state.dim();
    let cas = casimirs(&state, &r.tensors, max_order.min(dim))?;
    let degeneracy = match dim {
        3 => Some(format!(
            "{:?}",
            classify_degeneracy_3(cas.get(2).unwrap_or(0.0), cas.get(3).unwrap_or(0.0), tol.pos)?
        )),
        4 => {
            let full = casimirs(&state, &r.tensors, 4)?;
            Some(format!("{:?}", classify_degeneracy_4(&full, tol.pos)?))
        }
        _ => None,
    };
    Ok(InvariantsReport {
        dim,
        traces,
        max_discrepancy,
        casimirs: cas.values,
        degeneracy,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WernerRow {
    pub x: f64,
    pub s3: f64,
    pub s4: f64,
    pub s3_pt: f64,
    pub s4_pt: f64,
    pub ppt: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WernerReport {
    pub rows: Vec<WernerRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ppt_boundary: Option<f64>,
}

pub fn werner_row(x: f64, tol: &Tolerances) -> Result<WernerRow> {
    let (s3, s4) = werner_symfns(x, false)?;
    let (s3_pt, s4_pt) = werner_symfns(x, true)?;
    let ppt = blochvec::composite::werner_pipeline(x, true, tol)?.verdict.is_psd();
    Ok(WernerRow {
        x,
        s3,
        s4,
        s3_pt,
        s4_pt,
        ppt,
    })
}

pub fn run_werner(x: Option<f64>, sweep: Option<usize>, tol: &Tolerances) -> Result<WernerReport> {
    match (x, sweep) {
        (Some(x), None) => Ok(WernerReport {
            rows: vec![werner_row(x, tol)?],
            ppt_boundary: None,
        }),
        (None, Some(steps)) if steps >= 1 => {
            let rows = (0..=steps)
                .map(|k| werner_row(k as f64 / steps as f64, tol))
                .collect::<Result<Vec<_>>>()?;
            Ok(WernerReport {
                rows,
                ppt_boundary: Some(werner_ppt_boundary(1e-12)?),
            })
        }
        _ => Err(CliError::Invalid("give exactly one of --x or --sweep (>= 1)".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangleReport {
    pub tau: f64,
    pub concurrence_sq_ab: f64,
    pub concurrence_sq_ac: f64,
    pub ckw_lhs: f64,
    pub ckw_rhs: f64,
    pub ckw_holds: bool,
    pub permutation_spread: f64,
}

pub fn run_tangle(doc: &MatrixDocument, tol: &Tolerances) -> Result<TangleReport> {
    let ket = match doc.payload(tol)? {
        Payload::Ket(k) => k,
        _ => return Err(CliError::Invalid("tangle needs a ket payload".into())),
    };
    let psi = PureTripartiteState::new(ket)?;
    let ckw = ckw_inequality_check(&psi)?;
    Ok(TangleReport {
        tau: three_tangle(&psi)?,
        concurrence_sq_ab: concurrence_squared_bound(&psi.marginal(&[0, 1])?, tol)?.concurrence_sq,
        concurrence_sq_ac: concurrence_squared_bound(&psi.marginal(&[0, 2])?, tol)?.concurrence_sq,
        ckw_lhs: ckw.lhs,
        ckw_rhs: ckw.rhs,
        ckw_holds: ckw.holds,
        permutation_spread: tangle_permutation_spread(&psi)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapReport {
    pub image: Vec<f64>,
    pub check: CheckReport,
}

pub fn map_from_document(doc: &MapDocument) -> Result<AffineMap> {
    check_version(doc.version)?;
    let len = doc.dim * doc.dim - 1;
    if doc.linear.len() != len || doc.linear.iter().any(|r| r.len() != len) {
        return Err(CliError::Invalid(format!("T must be {len}x{len}")));
    }
    let linear = nalgebra_rows(&doc.linear);
    Ok(AffineMap::new(doc.dim, linear, doc.t.clone())?)
}

fn nalgebra_rows(rows: &[Vec<f64>]) -> blochvec::linalg::RMatrix {
    blochvec::linalg::RMatrix::from_fn(rows.len(), rows.len(), |r, c| rows[r][c])
}

pub fn run_map(map: &MapDocument, doc: &MatrixDocument, verify: bool, tol: &Tolerances) -> Result<MapReport> {
    let affine = map_from_document(map)?;
    let r = resolve(doc, tol)?;
    let state = r
        .state
        .ok_or_else(|| CliError::Invalid("map input must be trace one".into()))?;
    let image = apply_affine_map(&affine, &state)?;
    let op = from_coherence(&image, &r.basis)?;
    let seq = positivity::check_operator(&op, tol);
    Ok(MapReport {
        image: image.vector().to_vec(),
        check: CheckReport::new(&op, seq, verify, tol),
    })
}

/// The `-1` map (`n -> -n`) for dimension `dim`.
pub fn negation_map(dim: usize) -> MapDocument {
    let len = dim * dim - 1;
    MapDocument {
        version: FORMAT_VERSION,
        dim,
        linear: (0..len)
            .map(|r| (0..len).map(|c| if r == c { -1.0 } else { 0.0 }).collect())
            .collect(),
        t: vec![0.0; len],
    }
}
