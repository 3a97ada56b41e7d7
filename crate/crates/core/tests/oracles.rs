//! Library results against naive re-implementations written from the definitions.

use proptest::prelude::*;

use quasihelix::curve::partial_sum;
use quasihelix::extremal::{ratio_bounds, window_min, Fraction};
use quasihelix::sequence::sign_at;

/// Counts links by writing `n` in base 4 as a string.
fn oracle_sign(n: u64) -> i64 {
    let mut digits = String::new();
    let mut x = n;
    loop {
        digits.insert(0, char::from(b'0' + (x % 4) as u8));
        x /= 4;
        if x == 0 {
            break;
        }
    }
    let links = ["11", "13", "22", "23", "31", "32"];
    let count = (0..digits.len().saturating_sub(1)).filter(|&i| links.contains(&&digits[i..i + 2])).count();
    if count % 2 == 0 { 1 } else { -1 }
}

/// `S(n) = Σ_{j<n} a_j u_{j mod 4}` by plain summation.
fn oracle_points(n_max: usize) -> Vec<[i64; 4]> {
    let mut out = vec![[0i64; 4]];
    for j in 0..n_max {
        let mut next = *out.last().unwrap();
        next[j % 4] += oracle_sign(j as u64);
        out.push(next);
    }
    out
}

fn sq(a: &[i64; 4], b: &[i64; 4]) -> u64 {
    a.iter().zip(b).map(|(x, y)| ((x - y) * (x - y)) as u64).sum()
}

#[test]
fn signs_and_sums_match_oracle() {
    let points = oracle_points(5000);
    for n in 0..5000u64 {
        assert_eq!(sign_at(n).to_i64(), oracle_sign(n), "a_{n}");
        assert_eq!(partial_sum(n).0, points[n as usize], "S({n})");
    }
}

#[test]
fn window_min_matches_brute_force() {
    let n_max = 300usize;
    let points = oracle_points(n_max);
    for (lo, hi) in [(0, 4), (4, 16), (15, 64), (16, 64), (64, 256)] {
        let mut best = u64::MAX;
        let mut pairs = Vec::new();
        for n in 0..=n_max {
            for m in 0..n {
                let gap = (n - m) as u64;
                if gap <= lo || gap > hi {
                    continue;
                }
                let q = sq(&points[n], &points[m]);
                if q < best {
                    best = q;
                    pairs.clear();
                }
                if q == best {
                    pairs.push((m as u64, n as u64));
                }
            }
        }
        let got = window_min(lo, hi, n_max as u64).unwrap();
        assert_eq!(got.min_sq_dist, best, "window ({lo}, {hi}]");
        let mut got_pairs: Vec<(u64, u64)> = got.pairs.iter().map(|p| (p.m, p.n)).collect();
        got_pairs.sort();
        pairs.sort();
        assert_eq!(got_pairs, pairs, "window ({lo}, {hi}]");
    }
}

#[test]
fn ratio_extremes_match_brute_force() {
    let n_max = 400usize;
    let points = oracle_points(n_max);
    let (mut lo, mut hi) = ((u64::MAX, 1u64), (0u64, 1u64));
    for n in 1..=n_max {
        for m in 0..n {
            let (q, g) = (sq(&points[n], &points[m]), (n - m) as u64);
            if q * lo.1 < lo.0 * g {
                lo = (q, g);
            }
            if q * hi.1 > hi.0 * g {
                hi = (q, g);
            }
        }
    }
    let got = ratio_bounds(n_max as u64).unwrap();
    assert_eq!(got.min.sq_ratio, Fraction::new(lo.0, lo.1));
    assert_eq!(got.max.sq_ratio, Fraction::new(hi.0, hi.1));
}

proptest! {
    #[test]
    fn big_index_sign_matches_oracle(n in 0u64..u64::MAX) {
        prop_assert_eq!(sign_at(n).to_i64(), oracle_sign(n));
    }

    #[test]
    fn partial_sum_is_additive(m in 0u64..100_000, k in 0u64..64) {
        // S(m + k) - S(m) sums the k terms starting at m.
        let mut expected = partial_sum(m).0;
        for j in m..m + k {
            expected[(j % 4) as usize] += oracle_sign(j);
        }
        prop_assert_eq!(partial_sum(m + k).0, expected);
    }
}
