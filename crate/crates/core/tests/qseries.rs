use std::collections::HashMap;

use walg_core::algebra::presets::{triplet_p2, TripletConstants};
use walg_core::algebra::canonical_words;
use walg_core::qseries::{
    bracket_series, chi_tilde, diff_at_level, phi, phi_trunc, partition_counts, theta_range, theta_sum,
    triplet_character, triplet_verma_character, vacuum_exponent, verma_character, QSeries,
};
use walg_core::scalar::{int, Rat};

fn brute_partitions(n: u64, max_part: u64, memo: &mut HashMap<(u64, u64), u64>) -> u64 {
    if n == 0 {
        return 1;
    }
    if max_part == 0 {
        return 0;
    }
    if let Some(v) = memo.get(&(n, max_part)) {
        return *v;
    }
    let mut total = brute_partitions(n, max_part - 1, memo);
    if max_part <= n {
        total += brute_partitions(n - max_part, max_part, memo);
    }
    memo.insert((n, max_part), total);
    total
}

#[test]
fn inverse_phi_counts_partitions() {
    let inv = phi(60).inverse().unwrap();
    let direct = partition_counts(60);
    let mut memo = HashMap::new();
    for n in 0..=60u64 {
        let want = int(brute_partitions(n, n, &mut memo) as i64);
        assert_eq!(inv.coeff_at_level(&int(n as i64)).unwrap(), want, "n={n}");
        assert_eq!(direct[n as usize], want);
    }
}

#[test]
fn truncated_phi_identity() {
    for k in 2..=7u64 {
        let mut rhs = phi(60);
        for l in 1..k {
            let factor = QSeries::from_powers(60, [(0, int(1)), (l, int(-1))]);
            rhs = rhs.mul(&factor.inverse().unwrap());
        }
        assert_eq!(phi_trunc(k, 60).unwrap(), rhs, "k={k}");
    }
}

#[test]
fn phi_times_inverse_is_unit() {
    let p = phi(40);
    assert_eq!(p.mul(&p.inverse().unwrap()), QSeries::one(1, Rat::from_integer(0.into()), 40));
}

fn expected_bracket(p: i64, with_six: bool) -> Vec<(i64, i64)> {
    let mut v = vec![(0, 1), (1, -1), (2 * p - 1, 3), (2 * p + 2, -3)];
    if with_six {
        v.push((4 * p - 2, 6));
    }
    v
}

fn assert_bracket(s: &QSeries, expected: &[(i64, i64)], below: i64) {
    for level in 0..below {
        let want: i64 = expected.iter().filter(|(l, _)| *l == level).map(|(_, c)| *c).sum();
        assert_eq!(s.coeff_at_level(&int(level)).unwrap(), int(want), "level {level}");
    }
}

#[test]
fn partial_expansions() {
    for p in 2..=5 {
        let t = bracket_series(&triplet_character(p, (6 * p) as u64).unwrap());
        assert_bracket(&t, &expected_bracket(p, false), 6 * p - 2);
        let x = bracket_series(&chi_tilde(p, (4 * p) as u64).unwrap());
        assert_bracket(&x, &expected_bracket(p, true), 4 * p - 1);
    }
}

#[test]
fn singular_vector_counts() {
    for p in 3..=5 {
        let v = triplet_verma_character(p, 40).unwrap();
        let t = triplet_character(p, 40).unwrap();
        assert_eq!(diff_at_level(&v, &t, &int(2 * p + 2)).unwrap(), int(3), "p={p}");
    }
    for p in 2..=5 {
        let x = chi_tilde(p, 40).unwrap();
        let t = triplet_character(p, 40).unwrap();
        assert_eq!(diff_at_level(&x, &t, &int(4 * p - 2)).unwrap(), int(6), "p={p}");
    }
    let v = triplet_verma_character(2, 40).unwrap();
    let t = triplet_character(2, 40).unwrap();
    assert_eq!(diff_at_level(&v, &t, &int(6)).unwrap(), int(9));
    assert_eq!(diff_at_level(&t, &t, &int(17)).unwrap(), int(0));
}

#[test]
fn theta_truncation_is_certified() {
    for p in 2..=5 {
        let cutoff = 40;
        let base = theta_sum(p, theta_range(p, cutoff, 0), cutoff).unwrap();
        let wide = theta_sum(p, theta_range(p, cutoff, 1), cutoff).unwrap();
        assert_eq!(base, wide, "p={p}");
    }
}

#[test]
fn characters_share_the_vacuum_exponent() {
    for p in 2..=5 {
        for s in [triplet_character(p, 10), triplet_verma_character(p, 10), chi_tilde(p, 10)] {
            let s = s.unwrap();
            assert_eq!(s.offset(), &vacuum_exponent(p));
            assert_eq!(s.coeff_at_level(&int(0)).unwrap(), int(1));
        }
    }
}

#[test]
fn verma_matches_word_enumeration() {
    let spec = triplet_p2(&TripletConstants::symbolic());
    let v = verma_character(&[2, 3, 3, 3], &int(-2), 10).unwrap();
    for level in 0..=10 {
        let count = canonical_words(&spec, level).len() as i64;
        assert_eq!(v.coeff_at_level(&int(level)).unwrap(), int(count), "level {level}");
    }
}

#[test]
fn virasoro_verma_is_inverse_phi_two() {
    let v = verma_character(&[2], &Rat::from_integer(0.into()), 20).unwrap();
    let phi2 = phi_trunc(2, 20).unwrap().inverse().unwrap();
    assert_eq!(v, phi2);
}
