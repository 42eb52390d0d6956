use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use sftlab_core::builtins;
use sftlab_core::code::Automorphism;
use sftlab_core::coding_range::{coding_range_profile, reverse_automorphism, w_values};
use sftlab_core::dimension::{alternative_ray, canonical_ray, refine_ray, theta, Beam, Ray};
use sftlab_core::rational::QMatrix;
use sftlab_core::spectra::{matrix_traces, mobius, net_traces, power_traces, verify_eb_failure, IntPolynomial};
use sftlab_core::{dimension_data, transpose_shift, EdgeId, EdgeShift, NonnegIntMatrix};

fn small_matrix(max_size: usize, max_entry: u64) -> impl Strategy<Value = NonnegIntMatrix> {
    (1..=max_size).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(0..=max_entry, n), n).prop_filter_map("zero matrix", |rows| NonnegIntMatrix::new(rows).ok())
    })
}

fn primitive_matrix() -> impl Strategy<Value = NonnegIntMatrix> {
    small_matrix(3, 3).prop_filter("primitive", |m| m.is_primitive())
}

fn char_poly_int(m: &NonnegIntMatrix) -> IntPolynomial {
    let cp = QMatrix::from_i64(&m.to_i64_rows()).char_poly();
    IntPolynomial::new(cp.iter().map(|c| c.to_integer().try_into().unwrap()).collect()).unwrap()
}

/// `σ^k` composed with a symbol permutation of the full shift.
fn permuted_shift_power(symbols: u64, perm: &[EdgeId], k: i64) -> Automorphism {
    let s = builtins::full_shift(symbols).unwrap();
    let p = builtins::symbol_permutation(s.clone(), perm).unwrap();
    let sigma = builtins::shift_map(s).unwrap();
    p.compose(&sigma.pow(k).unwrap()).unwrap()
}

fn perm_strategy() -> impl Strategy<Value = (u64, Vec<EdgeId>)> {
    (2u64..=3).prop_flat_map(|n| (Just(n), Just((0..n as EdgeId).collect::<Vec<_>>()).prop_shuffle()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn newton_traces_match_matrix_powers(m in small_matrix(4, 3)) {
        let p = char_poly_int(&m);
        prop_assert_eq!(power_traces(&p, 8), matrix_traces(&m, 8));
    }

    #[test]
    fn net_traces_of_matrices_are_nonnegative(m in small_matrix(4, 3)) {
        for t in net_traces(&matrix_traces(&m, 10)) {
            prop_assert!(t >= BigInt::from(0));
        }
    }

    #[test]
    fn mobius_sums_vanish(n in 1u64..500) {
        let s: i64 = (1..=n).filter(|d| n % d == 0).map(mobius).sum();
        prop_assert_eq!(s, i64::from(n == 1));
    }

    #[test]
    fn transpose_twice_is_identity(m in small_matrix(4, 2)) {
        let s = EdgeShift::new(m);
        let (t, b1) = transpose_shift(&s);
        let (tt, b2) = transpose_shift(&t);
        prop_assert_eq!(tt.matrix(), s.matrix());
        for e in 0..s.num_edges() {
            prop_assert_eq!(b2[b1[e] as usize] as usize, e);
        }
    }

    #[test]
    fn eb_gap_invariant_under_transpose_and_relabeling(m in primitive_matrix(), seed in any::<u64>()) {
        let n = m.size();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left((seed as usize) % n);
        if seed % 2 == 1 && n > 1 {
            perm.swap(0, n - 1);
        }
        let rows = m.rows();
        let relabeled: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| rows[perm[i]][perm[j]]).collect()).collect();
        let base = verify_eb_failure(&m, 1e-9).unwrap();
        let t = verify_eb_failure(&m.transpose(), 1e-9).unwrap();
        let r = verify_eb_failure(&NonnegIntMatrix::new(relabeled).unwrap(), 1e-9).unwrap();
        prop_assert!((base.gap - t.gap).abs() < 1e-7);
        prop_assert!((base.gap - r.gap).abs() < 1e-7);
        prop_assert_eq!(base.outcome, t.outcome);
    }

    #[test]
    fn theta_is_level_independent(idx in 0usize..4, alt in any::<bool>(), lvl in -3i64..3, depth in 0i64..4) {
        let shifts = [builtins::golden_mean(), builtins::matrix_b(), builtins::full_shift(2).unwrap(),
            Arc::new(EdgeShift::from_rows(vec![vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap())];
        let shift = &shifts[idx];
        let dim = dimension_data(shift).unwrap();
        for state in 0..shift.num_states() {
            let r = if alt { alternative_ray(shift, state) } else { canonical_ray(shift, state) };
            let Some(r) = r else { continue };
            let r = Ray { level: lvl, ..r };
            let t0 = theta(&Beam::single(r.clone()), shift, &dim);
            let refined = refine_ray(shift, &r, lvl + depth).unwrap();
            prop_assert_eq!(theta(&refined, shift, &dim), t0);
        }
    }

    #[test]
    fn permuted_shift_powers_have_exact_coding_ranges((n, perm) in perm_strategy(), k in -2i64..=2) {
        let auto = permuted_shift_power(n, &perm, k);
        for m in 1..=2u32 {
            let w = w_values(&auto, m).unwrap();
            prop_assert_eq!((w.minus, w.plus), (-k * m as i64, -k * m as i64));
        }
    }

    #[test]
    fn sum_inequalities_and_reverse_identity((n, perm) in perm_strategy(), k in -1i64..=1, use_perm in any::<bool>()) {
        let auto = if use_perm { permuted_shift_power(n, &perm, k) } else { permuted_shift_power(n, &(0..n as EdgeId).collect::<Vec<_>>(), k) };
        let p = coding_range_profile("p", &auto, 3, 5_000_000).unwrap();
        prop_assert!(p.invariant_failures().is_empty(), "{:?}", p.invariant_failures());
        let (_, rev) = reverse_automorphism(&auto).unwrap();
        for m in 1..=3u32 {
            let w = w_values(&auto, m).unwrap();
            let wr = w_values(&rev, m).unwrap();
            prop_assert!(w.minus + w.minus_inv <= 0);
            prop_assert!(w.plus + w.plus_inv >= 0);
            prop_assert_eq!(wr.minus, -w.plus);
        }
    }
}
