#![allow(dead_code)]

use blochvec::entanglement::{spin_flip, PureTripartiteState};
use blochvec::linalg::{self, CMatrix};
use blochvec::sampling;
use blochvec::{Complex64, HermitianOperator, Tolerances};
use nalgebra::Schur;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Elementary symmetric polynomials e_1..e_n by expanding prod (1 + p_i x).
pub fn elementary(p: &[f64]) -> Vec<f64> {
    let mut e = vec![1.0];
    for &x in p {
        let mut next = vec![0.0; e.len() + 1];
        for (k, &v) in e.iter().enumerate() {
            next[k] += v;
            next[k + 1] += v * x;
        }
        e = next;
    }
    e.remove(0);
    e
}

pub fn power_sum(p: &[f64], m: usize) -> f64 {
    p.iter().map(|x| x.powi(m as i32)).sum()
}

/// The three-level example matrix, Hermitian part taken (the printed (1,3)
/// and (3,1) entries differ in the last digit).
pub fn three_level_example() -> HermitianOperator {
    let m = CMatrix::from_row_slice(
        3,
        3,
        &[
            c(0.15278, 0.0),
            c(0.036084, -0.06250),
            c(-0.072169, 0.12500),
            c(0.036084, 0.06250),
            c(0.23611, 0.0),
            c(-0.25, 0.0),
            c(-0.072168, -0.12500),
            c(-0.25, 0.0),
            c(0.61111, 0.0),
        ],
    );
    HermitianOperator::new(linalg::hermitian_part(&m), &Tolerances::default()).unwrap()
}

/// Wootters concurrence from the non-Hermitian product rho rho~ via a
/// complex Schur decomposition. Eigenvalues below a relative rank floor are
/// zeroed: rounding leaves ~1e-17 where rho rho~ is rank deficient, and its
/// square root would otherwise contribute ~1e-8.
pub fn wootters_concurrence(rho: &HermitianOperator) -> f64 {
    let tilde = spin_flip(rho).unwrap();
    let r = rho.matrix() * tilde.matrix();
    let ev = Schur::new(r).eigenvalues().expect("complex Schur");
    let top = ev.iter().map(|z| z.re).fold(0.0, f64::max);
    let floor = 1e-12 * top.max(f64::MIN_POSITIVE);
    let mut l: Vec<f64> = ev
        .iter()
        .map(|z| if z.re <= floor { 0.0 } else { z.re.sqrt() })
        .collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// `4 det rho_A - C_AB^2 - C_AC^2` with Wootters concurrences.
pub fn tangle_oracle(psi: &PureTripartiteState) -> f64 {
    let det_a = linalg::det_hermitian(psi.marginal(&[0]).unwrap().matrix());
    let cab = wootters_concurrence(&psi.marginal(&[0, 1]).unwrap());
    let cac = wootters_concurrence(&psi.marginal(&[0, 2]).unwrap());
    4.0 * det_a - cab * cab - cac * cac
}

pub fn random_tripartite(rng: &mut ChaCha8Rng) -> PureTripartiteState {
    PureTripartiteState::normalized(sampling::random_ket(rng, 8)).unwrap()
}

/// Two Haar-random orthogonal unit vectors.
pub fn orthogonal_pair(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let u = sampling::random_unitary(rng, n);
    let col = |k: usize| u.column(k).iter().copied().collect::<Vec<_>>();
    (col(0), col(1))
}

pub fn max_abs_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
