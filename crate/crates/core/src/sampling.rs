//! Random states, spectra and unitaries for property checks and sweeps.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::coherence::HermitianOperator;
use crate::linalg::{self, CMatrix};

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random unit vector in `C^n`.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar-random unitary via QR of a Ginibre matrix with the phases of
/// `R`'s diagonal absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..n {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { linalg::ONE };
        for row in 0..n {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// `U diag(spectrum) U^dagger` for a Haar-random `U`.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: &[f64]) -> HermitianOperator {
    let u = random_unitary(rng, spectrum.len());
    HermitianOperator::from_real_diagonal(spectrum).conjugate_by(&u)
}

/// Uniform (flat Dirichlet) probability vector of length `n`.
pub fn random_probabilities<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Random full-rank density matrix with a Haar-random eigenbasis.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator {
    let p = random_probabilities(rng, n);
    with_spectrum(rng, &p)
}

/// Haar-random pure state `|psi><psi|`.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator {
    HermitianOperator::projector(&random_ket(rng, n))
}

/// Random trace-one spectrum with at least one negative entry.
pub fn random_indefinite_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let mut e: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let shift = (1.0 - e.iter().sum::<f64>()) / n as f64;
        e.iter_mut().for_each(|x| *x += shift);
        if e.iter().any(|&x| x < 0.0) {
            return e;
        }
    }
}

/// Random trace-one Hermitian matrix; positive semidefinite when `psd`,
/// otherwise with at least one negative eigenvalue.
pub fn random_trace_one_hermitian<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    psd: bool,
) -> HermitianOperator {
    let spectrum = if psd {
        random_probabilities(rng, n)
    } else {
        random_indefinite_spectrum(rng, n)
    };
    with_spectrum(rng, &spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 1..=6 {
            let u = random_unitary(&mut rng, n);
            let prod = &u * u.adjoint();
            assert!(linalg::max_abs_diff(&prod, &linalg::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn density_matrix_is_valid() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        let rho = random_density_matrix(&mut rng, 4);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(rho.eigenvalues()[0] > 0.0);
        let bad = random_trace_one_hermitian(&mut rng, 4, false);
        assert!(bad.eigenvalues()[0] < 0.0);
        assert!((bad.trace() - 1.0).abs() < 1e-12);
    }
}
