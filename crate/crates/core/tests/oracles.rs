use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use revsynth::bounds::{
    bound_report, circuits_count, concrete_l_bound, gluhov_floor, lower_bounds,
    nominal_upper_bounds, omega_size, to_f64, BoundsError,
};
use revsynth::synthesis::{choose_k, decompose_mct};
use revsynth::verify::{bfs_table, omega_gates, random_omega_circuit, BfsTable};
use revsynth::{Circuit, Gate, GateWeights, Permutation};

/// Gates with at most two controls, enumerated from raw (controls, target) masks.
fn enumerate_gates(n: u32) -> usize {
    let mut count = 0;
    for t in 0..n {
        for mask in 0u32..1 << n {
            if mask >> t & 1 == 0 && mask.count_ones() <= 2 {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn omega_size_matches_enumeration() {
    for n in 2..=8u32 {
        let size = omega_size(n as u64);
        assert_eq!(size as usize, enumerate_gates(n));
        assert_eq!(size as usize, omega_gates(n).len());
        assert_eq!(2 * size, (n * n * n - n * n + 2 * n) as u64);
    }
    let distinct: HashSet<Gate> = omega_gates(6).into_iter().collect();
    assert_eq!(distinct.len(), 96);
}

#[test]
fn circuits_count_is_geometric_sum() {
    for n in 2..=4u64 {
        let r = BigUint::from(omega_size(n));
        for s in 0..=3u32 {
            let sum: BigUint = (0..=s).map(|i| r.pow(i)).sum();
            assert_eq!(circuits_count(n, s).unwrap(), sum);
        }
    }
    assert_eq!(circuits_count(3, 2).unwrap(), BigUint::from(157u32));
}

#[test]
fn lower_bound_values() {
    let w = GateWeights::default();
    let b = lower_bounds(4, 0, &w).unwrap();
    assert_eq!(b.l, BigRational::from_integer(4.into()));
    assert_eq!(b.d, BigRational::from_integer(1.into()));

    let w15 = GateWeights::new(Rational64::from_integer(1), Rational64::from_integer(5)).unwrap();
    let b = lower_bounds(4, 4, &w15).unwrap();
    assert_eq!(b.w, BigRational::new(20.into(), 9.into()));

    // Non-power-of-two n + q: compare against floating point, rounded down.
    for (n, q) in [(5u64, 0u64), (6, 1), (10, 3), (20, 0)] {
        let b = lower_bounds(n, q, &w).unwrap();
        let (nf, tf) = (n as f64, (n + q) as f64);
        let l = 2f64.powi(n as i32) * (nf - 2.0) / (3.0 * tf.log2()) - nf / 3.0;
        let got = to_f64(&b.l);
        assert!(
            got <= l + 1e-9 && (l - got).abs() < 1e-9 * l.abs().max(1.0),
            "n={n} q={q}"
        );
        // d·(n+q) ≤ l + n/3.
        let lhs = &b.d * BigRational::from_integer(((n + q) as i64).into());
        assert!(lhs <= &b.l + BigRational::new((n as i64).into(), 3.into()));
    }
}

#[test]
fn concrete_budget_values() {
    assert_eq!(concrete_l_bound(4, 4).unwrap(), BigInt::from(4944));
    assert_eq!(concrete_l_bound(5, 4).unwrap(), BigInt::from(8480));
    assert_eq!(concrete_l_bound(10, 4).unwrap(), BigInt::from(249744));
    assert!(matches!(
        concrete_l_bound(4, 16),
        Err(BoundsError::GroupSize { .. })
    ));
    assert!(matches!(
        concrete_l_bound(6, 6),
        Err(BoundsError::GroupSize { .. })
    ));
}

#[test]
fn nominal_upper_values() {
    let w = GateWeights::default();
    let one = Rational64::from_integer(1);
    let b = nominal_upper_bounds(4, one, &w).unwrap();
    // Denominator 1; ε(4) = 1/6 + (8/3)·(2·1/4).
    let eps = 1.0 / 6.0 + 8.0 / 3.0 * 0.5;
    assert!((to_f64(&b.l) - 3.0 * 4.0 * 256.0 * (1.0 + eps)).abs() < 1e-6);
    let b16 = nominal_upper_bounds(16, one, &w).unwrap();
    let base = 16.0 * 2f64.powi(20) / 2.0;
    assert!(to_f64(&b16.l) > 3.0 * base);
    assert!(matches!(
        nominal_upper_bounds(8, Rational64::from_integer(4), &w),
        Err(BoundsError::NonPositiveDenominator { .. })
    ));
}

#[test]
fn gluhov_floor_values() {
    assert_eq!(gluhov_floor(2).unwrap(), 3);
    assert_eq!(gluhov_floor(3).unwrap(), 5);
    assert_eq!(gluhov_floor(4).unwrap(), 9);
    let r = BigUint::from(12u32);
    assert!(r.pow(4) < BigUint::from(40320u32) && BigUint::from(40320u32) <= r.pow(5));
}

#[test]
fn report_fields() {
    let r = bound_report(
        4,
        0,
        Rational64::from_integer(2),
        GateWeights::default(),
        None,
    )
    .unwrap();
    assert_eq!(r.budget, Some((4, BigInt::from(4944))));
    assert!(r.nominal_upper.is_none());
    assert!(r.lower.d <= r.lower.l && r.n0_caveat);
    assert_eq!(r.omega_size, 28);
    let r = bound_report(
        6,
        2,
        Rational64::from_integer(1),
        GateWeights::default(),
        None,
    )
    .unwrap();
    assert!(r.budget.is_none() && r.nominal_upper.is_none());
}

#[test]
fn choose_k_matches_float_formula() {
    let two = Rational64::from_integer(2);
    for e in 2..=40u32 {
        let n = 1u64 << e;
        let m = e as f64 - (e as f64).log2() - 1.0;
        let expect = if m >= 4.0 {
            1u32 << m.log2().floor() as u32
        } else {
            4
        };
        assert_eq!(choose_k(n, two), expect, "n=2^{e}");
    }
}

#[test]
fn bfs_full_group_n3() {
    let t = bfs_table(3).unwrap();
    assert_eq!(t.len(), 40320);
    assert!(t.is_complete());
    assert!(t.diameter() >= gluhov_floor(3).unwrap() as usize);
    assert_eq!(t.level_sizes().iter().sum::<usize>(), 40320);
    assert_eq!(t.level_sizes()[1], 12);
}

/// Brute force over all gate sequences: no circuit shorter than the BFS
/// distance reaches a permutation.
#[test]
fn bfs_distances_are_optimal_n2() {
    let t = bfs_table(2).unwrap();
    let gates = omega_gates(2);
    let mut best: std::collections::HashMap<Vec<u32>, usize> = Default::default();
    let mut frontier: Vec<Vec<Gate>> = vec![vec![]];
    for len in 0..=t.diameter() {
        let mut next = Vec::new();
        for seq in &frontier {
            let p = Circuit::from_gates(2, seq.iter().copied())
                .unwrap()
                .simulate()
                .unwrap();
            best.entry(p.image().to_vec()).or_insert(len);
            for g in &gates {
                let mut s = seq.clone();
                s.push(*g);
                next.push(s);
            }
        }
        frontier = next;
    }
    assert_eq!(best.len(), 24);
    for p in t.permutations() {
        let c = t.circuit(&p).unwrap();
        assert_eq!(c.simulate().unwrap(), p);
        assert_eq!(c.len(), best[p.image()]);
    }
}

#[test]
fn capped_search_n4_reaches_only_even() {
    let t = BfsTable::build_capped(4, 3).unwrap();
    assert!(!t.is_complete());
    assert!(t.len() > 10_000);
    assert!(t.permutations().all(|p| p.is_even()));
}

#[test]
fn random_circuits_are_even_n4() {
    for seed in 0..500 {
        let c = random_omega_circuit(4, 1 + seed as usize % 40, seed).unwrap();
        assert!(c.simulate().unwrap().is_even());
    }
}

#[test]
fn mct_decomposition_sizes() {
    for m in 3..=8u32 {
        let n = m + 2;
        let controls: Vec<u32> = (2..=m + 1).collect();
        let gates = decompose_mct(&controls, 1, n).unwrap();
        assert!(gates.len() as u32 <= 8 * m);
        let expected = Gate::new(controls.iter().copied(), 1).unwrap();
        let c = Circuit::from_gates(n, gates).unwrap();
        assert!(c.is_omega2());
        let want = Permutation::from_image(n, (0..1u32 << n).map(|x| expected.apply(x)).collect())
            .unwrap();
        assert_eq!(c.simulate().unwrap(), want);
    }
}
