mod common;

use blochvec::coherence::{dot, from_coherence, star, to_coherence};
use blochvec::composite::{
    extract_correlation, local_invariant_quadratic, partial_transpose,
    partial_transpose_coherence, CompositeLayout,
};
use blochvec::entanglement::{concurrence_squared_bound, three_tangle};
use blochvec::invariants::casimirs;
use blochvec::linalg;
use blochvec::positivity::{
    apply_affine_map, check_operator, closed_s234, newton_symmetric_functions,
    symmetric_functions, AffineMap,
};
use blochvec::sampling;
use blochvec::su_basis::{build_gellmann_basis, build_product_basis, structure_constants};
use blochvec::{BasisSet, Error, HermitianOperator, StructureTensors, Tolerances};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn gellmann(n: usize) -> (BasisSet, StructureTensors) {
    let b = build_gellmann_basis(n).unwrap();
    let t = structure_constants(&b, &Tolerances::default()).unwrap();
    (b, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coherence_round_trip(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = rng(seed);
        let (basis, _) = gellmann(n);
        let rho = sampling::random_density_matrix(&mut rng, n);
        let s = to_coherence(&rho, &basis, &Tolerances::default()).unwrap();
        prop_assert!(s.norm_sq() <= 1.0 + 1e-9);
        let back = from_coherence(&s, &basis).unwrap();
        prop_assert!(linalg::max_abs_diff(back.matrix(), rho.matrix()) < 1e-10);
    }

    #[test]
    fn product_basis_round_trip(seed in any::<u64>(), dims in prop::sample::select(vec![vec![2, 2], vec![2, 3], vec![3, 2], vec![2, 2, 2]])) {
        let mut rng = rng(seed);
        let basis = build_product_basis(&dims).unwrap();
        let rho = sampling::random_density_matrix(&mut rng, basis.dim());
        let s = to_coherence(&rho, &basis, &Tolerances::default()).unwrap();
        let back = from_coherence(&s, &basis).unwrap();
        prop_assert!(linalg::max_abs_diff(back.matrix(), rho.matrix()) < 1e-10);
    }

    #[test]
    fn star_product_commutes(seed in any::<u64>(), n in 3usize..=6) {
        let mut rng = rng(seed);
        let (_, t) = gellmann(n);
        let a: Vec<f64> = (0..n * n - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..n * n - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        let ab = star(&a, &b, &t).unwrap();
        let ba = star(&b, &a, &t).unwrap();
        prop_assert!(max_abs_vec(&ab, &ba) < 1e-13);
    }

    #[test]
    fn symfns_are_elementary_polynomials(seed in any::<u64>(), n in 2usize..=6, psd in any::<bool>()) {
        let mut rng = rng(seed);
        let rho = sampling::random_trace_one_hermitian(&mut rng, n, psd);
        let ev = rho.eigenvalues();
        let s = symmetric_functions(&rho);
        for (a, b) in s.iter().zip(elementary(&ev)) {
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
        // S_N is the determinant
        let det: f64 = ev.iter().product();
        prop_assert!((s[n - 1] - det).abs() < 1e-9);
    }

    #[test]
    fn symfns_unitarily_invariant(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = rng(seed);
        let rho = sampling::random_trace_one_hermitian(&mut rng, n, seed % 2 == 0);
        let u = sampling::random_unitary(&mut rng, n);
        let a = check_operator(&rho, &Tolerances::default());
        let b = check_operator(&rho.conjugate_by(&u), &Tolerances::default());
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.sign_changes, b.sign_changes);
        prop_assert!(max_abs_vec(&a.s, &b.s) < 1e-9);
    }

    #[test]
    fn closed_s234_matches_newton(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = rng(seed);
        let (basis, t) = gellmann(n);
        let rho = sampling::random_density_matrix(&mut rng, n);
        let s = to_coherence(&rho, &basis, &Tolerances::default()).unwrap();
        let newton = newton_symmetric_functions(&rho.trace_powers(n)).unwrap();
        let (s2, s3, s4) = closed_s234(&s, &t).unwrap();
        let at = |k: usize| newton.get(k).copied().unwrap_or(0.0);
        prop_assert!((s2 - at(1)).abs() < 1e-9);
        prop_assert!((s3 - at(2)).abs() < 1e-9);
        prop_assert!((s4 - at(3)).abs() < 1e-9);
        if n == 2 {
            prop_assert_eq!(s3, 0.0);
            prop_assert_eq!(s4, 0.0);
        }
        if n == 3 {
            prop_assert!(s4.abs() < 1e-15);
        }
    }

    #[test]
    fn casimirs_unitarily_invariant(seed in any::<u64>(), n in 3usize..=6) {
        let mut rng = rng(seed);
        let (basis, t) = gellmann(n);
        let tol = Tolerances::default();
        let rho = sampling::random_density_matrix(&mut rng, n);
        let u = sampling::random_unitary(&mut rng, n);
        let a = casimirs(&to_coherence(&rho, &basis, &tol).unwrap(), &t, n).unwrap();
        let b = casimirs(&to_coherence(&rho.conjugate_by(&u), &basis, &tol).unwrap(), &t, n).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-9);
    }

    #[test]
    fn partial_transpose_routes_agree(seed in any::<u64>(), dims in prop::sample::select(vec![vec![2, 2], vec![2, 3], vec![3, 2], vec![2, 2, 2]]), sub in 0usize..2) {
        let mut rng = rng(seed);
        let layout = CompositeLayout::new(&dims).unwrap();
        let basis = layout.basis().unwrap();
        let tol = Tolerances::default();
        let rho = sampling::random_density_matrix(&mut rng, layout.total());
        let s = to_coherence(&rho, &basis, &tol).unwrap();
        let via_vector = partial_transpose_coherence(&s, &layout, sub).unwrap();
        let via_matrix = to_coherence(&partial_transpose(&rho, &layout, sub).unwrap(), &basis, &tol).unwrap();
        prop_assert!(max_abs_vec(via_vector.vector(), via_matrix.vector()) < 1e-10);
    }

    #[test]
    fn global_quadratic_conservation(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let layout = CompositeLayout::two_qubit();
        let rho = sampling::random_density_matrix(&mut rng, 4);
        let u = sampling::random_unitary(&mut rng, 4);
        let total = |r: &HermitianOperator| {
            let b = extract_correlation(r, &layout).unwrap();
            dot(&b.n_a, &b.n_a) + dot(&b.n_b, &b.n_b) + local_invariant_quadratic(&b)
        };
        let purity = rho.trace_powers(2)[1];
        prop_assert!((total(&rho) - total(&rho.conjugate_by(&u))).abs() < 1e-9);
        prop_assert!((total(&rho) - (4.0 * purity - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn correlation_reconstructs(seed in any::<u64>(), dims in prop::sample::select(vec![[2usize, 2], [2, 3], [3, 3]])) {
        let mut rng = rng(seed);
        let layout = CompositeLayout::new(&dims).unwrap();
        let rho = sampling::random_density_matrix(&mut rng, layout.total());
        let block = extract_correlation(&rho, &layout).unwrap();
        prop_assert!(linalg::max_abs_diff(block.reconstruct().unwrap().matrix(), rho.matrix()) < 1e-10);
    }

    #[test]
    fn tangle_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let psi = random_tripartite(&mut rng);
        let us: Vec<_> = (0..3).map(|_| sampling::random_unitary(&mut rng, 2)).collect();
        let moved = psi.apply_local([&us[0], &us[1], &us[2]]).unwrap();
        let (a, b) = (three_tangle(&psi).unwrap(), three_tangle(&moved).unwrap());
        prop_assert!((a - b).abs() < 1e-8);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a));
    }

    #[test]
    fn concurrence_below_trace_bound(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let tol = Tolerances::default();
        let rho = if seed % 2 == 0 {
            sampling::random_density_matrix(&mut rng, 4)
        } else {
            random_tripartite(&mut rng).marginal(&[0, 1]).unwrap()
        };
        let b = concurrence_squared_bound(&rho, &tol).unwrap();
        prop_assert!(b.concurrence_sq <= b.trace_rho_rho_tilde + 1e-9);
        if seed % 2 == 1 {
            let oracle = wootters_concurrence(&rho);
            prop_assert!((b.concurrence_sq - oracle * oracle).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_map_is_neutral(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = rng(seed);
        let (basis, _) = gellmann(n);
        let s = to_coherence(&sampling::random_density_matrix(&mut rng, n), &basis, &Tolerances::default()).unwrap();
        prop_assert_eq!(apply_affine_map(&AffineMap::scaling(n, 1.0), &s).unwrap(), s);
    }
}

#[test]
fn basis_invariants_through_n6() {
    let tol = Tolerances::default();
    for n in 2..=6 {
        let (b, t) = gellmann(n);
        assert!(b.invariant_violation() < 1e-12);
        assert!(t.f_antisymmetry_violation <= 1e-12 && t.d_symmetry_violation <= 1e-12);
        assert!(t.reconstruction_residual(&b) <= 1e-10);
    }
    for dims in [vec![2, 2], vec![2, 3], vec![3, 2], vec![3, 3], vec![2, 2, 2]] {
        let b = build_product_basis(&dims).unwrap();
        let t = structure_constants(&b, &tol).unwrap();
        assert!(b.invariant_violation() < 1e-12, "{dims:?}");
        assert!(t.reconstruction_residual(&b) <= 1e-10, "{dims:?}");
    }
}

#[test]
fn su3_tables_in_standard_labels() {
    use blochvec::su_basis::gellmann3_index as g;
    let (_, t) = gellmann(3);
    let r3 = 3f64.sqrt();
    let f_table = [
        ((1, 2, 3), 1.0),
        ((1, 4, 7), 0.5),
        ((1, 5, 6), -0.5),
        ((2, 4, 6), 0.5),
        ((2, 5, 7), 0.5),
        ((3, 4, 5), 0.5),
        ((3, 6, 7), -0.5),
        ((4, 5, 8), r3 / 2.0),
        ((6, 7, 8), r3 / 2.0),
    ];
    for ((i, j, k), v) in f_table {
        assert!((t.f(g(i), g(j), g(k)) - v).abs() < 1e-12, "f_{i}{j}{k}");
    }
    let d_table = [
        ((1, 1, 8), 1.0 / r3),
        ((2, 2, 8), 1.0 / r3),
        ((3, 3, 8), 1.0 / r3),
        ((8, 8, 8), -1.0 / r3),
        ((4, 4, 8), -0.5 / r3),
        ((5, 5, 8), -0.5 / r3),
        ((6, 6, 8), -0.5 / r3),
        ((7, 7, 8), -0.5 / r3),
        ((1, 4, 6), 0.5),
        ((1, 5, 7), 0.5),
        ((2, 4, 7), -0.5),
        ((2, 5, 6), 0.5),
        ((3, 4, 4), 0.5),
        ((3, 5, 5), 0.5),
        ((3, 6, 6), -0.5),
        ((3, 7, 7), -0.5),
    ];
    for ((i, j, k), v) in d_table {
        assert!((t.d(g(i), g(j), g(k)) - v).abs() < 1e-12, "d_{i}{j}{k}");
    }
}

#[test]
fn trace_must_be_one_for_extraction() {
    let (b, _) = gellmann(3);
    let rho = HermitianOperator::from_real_diagonal(&[0.5, 0.5, 0.5]);
    assert!(matches!(
        to_coherence(&rho, &b, &Tolerances::default()),
        Err(Error::Normalization(_))
    ));
}
