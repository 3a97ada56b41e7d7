//! Exhaustive searches over pairs `m < n` of integer curve points.
//!
//! The quasi-helix constants are
//! `a^2 = inf ||S(n) - S(m)||^2 / (n - m)` and `b^2 = sup` of the same ratio.
//! Everything here is exact: squared distances are integers and ratios are
//! compared as fractions. Work is split over gaps `n - m` with rayon and
//! merged in gap order, so results do not depend on the thread count.

use std::cmp::Ordering;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::Vec4Z;
use crate::curve::{partial_sum, sum_stream};
use crate::error::{invalid, Result};
use crate::sequence::sign_at;

/// An exact nonnegative fraction, serialised as `{num, den, approx}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction(pub Ratio<u64>);

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        Fraction(Ratio::new(num, den))
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Fraction", 3)?;
        st.serialize_field("num", self.0.numer())?;
        st.serialize_field("den", self.0.denom())?;
        st.serialize_field("approx", &self.to_f64())?;
        st.end()
    }
}

/// One pair `m < n` with its exact squared distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub m: u64,
    pub n: u64,
    pub diff: Vec4Z,
    pub sq_dist: u64,
    pub sq_ratio: Fraction,
}

impl PairRecord {
    pub fn new(m: u64, n: u64, diff: Vec4Z) -> Self {
        let sq_dist = diff.norm_sq() as u64;
        PairRecord { m, n, diff, sq_dist, sq_ratio: Fraction::new(sq_dist, n - m) }
    }

    /// Recomputes the pair with the O(log n) evaluator.
    pub fn evaluate(m: u64, n: u64) -> Self {
        PairRecord::new(m, n, partial_sum(n) - partial_sum(m))
    }

    pub fn gap(&self) -> u64 {
        self.n - self.m
    }
}

/// Largest `n_max` accepted by the searches; keeps squared distances in `u64`.
pub const MAX_SEARCH_INDEX: u64 = 1 << 32;

/// Integer points `S(0..=n_max)`.
pub fn curve_points(n_max: u64) -> Vec<Vec4Z> {
    sum_stream(n_max + 1).collect()
}

fn check_n_max(n_max: u64) -> Result<()> {
    if n_max > MAX_SEARCH_INDEX {
        return invalid(format!("n_max {n_max} exceeds the search limit {MAX_SEARCH_INDEX}"));
    }
    Ok(())
}

/// Minimum squared distance and all pairs attaining it.
#[derive(Clone, Debug, Serialize)]
pub struct WindowMin {
    pub d_lo: u64,
    pub d_hi: u64,
    pub n_max: u64,
    pub min_sq_dist: u64,
    /// Ordered by `(n - m, m)`.
    pub pairs: Vec<PairRecord>,
}

#[derive(Clone, Debug)]
struct GapExtremes {
    min: u64,
    argmin: Vec<u64>,
    max: u64,
    argmax: Vec<u64>,
}

fn scan_gap(points: &[Vec4Z], gap: usize) -> GapExtremes {
    let mut ex = GapExtremes { min: u64::MAX, argmin: Vec::new(), max: 0, argmax: Vec::new() };
    for m in 0..points.len() - gap {
        let q = (points[m + gap] - points[m]).norm_sq() as u64;
        match q.cmp(&ex.min) {
            Ordering::Less => {
                ex.min = q;
                ex.argmin.clear();
                ex.argmin.push(m as u64);
            }
            Ordering::Equal => ex.argmin.push(m as u64),
            Ordering::Greater => {}
        }
        match q.cmp(&ex.max) {
            Ordering::Greater => {
                ex.max = q;
                ex.argmax.clear();
                ex.argmax.push(m as u64);
            }
            Ordering::Equal => ex.argmax.push(m as u64),
            Ordering::Less => {}
        }
    }
    ex
}

fn scan_gaps(points: &[Vec4Z], gaps: std::ops::RangeInclusive<u64>) -> Vec<(u64, GapExtremes)> {
    let gaps: Vec<u64> = gaps.collect();
    gaps.par_iter().map(|&g| (g, scan_gap(points, g as usize))).collect()
}

fn records(points: &[Vec4Z], gap: u64, ms: &[u64]) -> Vec<PairRecord> {
    ms.iter()
        .map(|&m| PairRecord::new(m, m + gap, points[(m + gap) as usize] - points[m as usize]))
        .collect()
}

/// Exact minimum of `||S(n) - S(m)||^2` over `d_lo < n - m <= d_hi`,
/// `0 <= m < n <= n_max`.
pub fn window_min(d_lo: u64, d_hi: u64, n_max: u64) -> Result<WindowMin> {
    check_n_max(n_max)?;
    let hi = d_hi.min(n_max);
    if d_lo >= hi {
        return invalid(format!("empty window: {d_lo} < n - m <= {d_hi} with n <= {n_max}"));
    }
    let points = curve_points(n_max);
    window_min_on(&points, d_lo, d_hi)
}

/// [`window_min`] over precomputed points `S(0..=n_max)`.
pub fn window_min_on(points: &[Vec4Z], d_lo: u64, d_hi: u64) -> Result<WindowMin> {
    let n_max = points.len() as u64 - 1;
    let hi = d_hi.min(n_max);
    if d_lo >= hi {
        return invalid(format!("empty window: {d_lo} < n - m <= {d_hi} with n <= {n_max}"));
    }
    let per_gap = scan_gaps(points, d_lo + 1..=hi);
    let min_sq_dist = per_gap.iter().map(|(_, ex)| ex.min).min().unwrap_or(u64::MAX);
    let pairs = per_gap
        .iter()
        .filter(|(_, ex)| ex.min == min_sq_dist)
        .flat_map(|(g, ex)| records(points, *g, &ex.argmin))
        .collect();
    Ok(WindowMin { d_lo, d_hi, n_max, min_sq_dist, pairs })
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioExtreme {
    pub sq_ratio: Fraction,
    pub pairs: Vec<PairRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioBounds {
    pub n_max: u64,
    pub min: RatioExtreme,
    pub max: RatioExtreme,
    /// Pairs whose squared ratio exceeds `12 + 8√2`, decided exactly.
    pub above_b_upper_sq: Vec<PairRecord>,
}

/// `q / g > 12 + 8√2`, decided in integers.
pub fn exceeds_b_upper_sq(sq_dist: u64, gap: u64) -> bool {
    let lhs = sq_dist as i128 - 12 * gap as i128;
    lhs > 0 && lhs * lhs > 128 * (gap as i128) * (gap as i128)
}

/// Exact extremes of `||S(n) - S(m)||^2 / (n - m)` over `0 <= m < n <= n_max`.
pub fn ratio_bounds(n_max: u64) -> Result<RatioBounds> {
    if n_max < 2 {
        return invalid(format!("ratio_bounds needs n_max >= 2, got {n_max}"));
    }
    check_n_max(n_max)?;
    let points = curve_points(n_max);
    Ok(ratio_bounds_on(&points))
}

pub fn ratio_bounds_on(points: &[Vec4Z]) -> RatioBounds {
    let n_max = points.len() as u64 - 1;
    let per_gap = scan_gaps(points, 1..=n_max);

    let min_ratio = per_gap.iter().map(|(g, ex)| Fraction::new(ex.min, *g)).min().unwrap();
    let max_ratio = per_gap.iter().map(|(g, ex)| Fraction::new(ex.max, *g)).max().unwrap();
    let collect = |target: Fraction, pick: fn(&GapExtremes) -> (u64, &[u64])| -> Vec<PairRecord> {
        per_gap
            .iter()
            .filter_map(|(g, ex)| {
                let (q, ms) = pick(ex);
                (Fraction::new(q, *g) == target).then(|| records(points, *g, ms))
            })
            .flatten()
            .collect()
    };
    let min_pairs = collect(min_ratio, |ex| (ex.min, &ex.argmin));
    let max_pairs = collect(max_ratio, |ex| (ex.max, &ex.argmax));
    let above_b_upper_sq = per_gap
        .iter()
        .filter(|(g, ex)| exceeds_b_upper_sq(ex.max, *g))
        .flat_map(|(g, ex)| records(points, *g, &ex.argmax))
        .collect();
    RatioBounds {
        n_max,
        min: RatioExtreme { sq_ratio: min_ratio, pairs: min_pairs },
        max: RatioExtreme { sq_ratio: max_ratio, pairs: max_pairs },
        above_b_upper_sq,
    }
}

/// Outcome of probing the guess `a = 1/√5` (squared ratio `1/5`) and the
/// lower estimate `b^2 >= 25/17`.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub n_max: u64,
    pub min_sq_ratio: RatioExtreme,
    pub max_sq_ratio: RatioExtreme,
    /// Some pair has squared ratio strictly below `1/5`.
    pub beats_one_fifth: bool,
    /// Smallest `n` (then smallest ratio, then smallest `m`) of a pair below `1/5`.
    pub first_below_one_fifth: Option<PairRecord>,
    /// Some pair has squared ratio strictly above `25/17`.
    pub beats_25_over_17: bool,
}

pub fn conjecture_scan(n_max: u64) -> Result<ConjectureReport> {
    let bounds = ratio_bounds(n_max)?;
    let points = curve_points(n_max);
    let one_fifth = Fraction::new(1, 5);
    let first_below_one_fifth = (1..=n_max)
        .into_par_iter()
        .find_first(|&n| (0..n).any(|m| 5 * (points[n as usize] - points[m as usize]).norm_sq() < (n - m) as u128))
        .map(|n| {
            (0..n)
                .map(|m| PairRecord::new(m, n, points[n as usize] - points[m as usize]))
                .min_by(|a, b| a.sq_ratio.cmp(&b.sq_ratio).then(a.m.cmp(&b.m)))
                .expect("n >= 1")
        });
    Ok(ConjectureReport {
        n_max,
        beats_one_fifth: bounds.min.sq_ratio < one_fifth,
        first_below_one_fifth,
        beats_25_over_17: bounds.max.sq_ratio > Fraction::new(25, 17),
        min_sq_ratio: bounds.min,
        max_sq_ratio: bounds.max,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaOneEntry {
    pub n: u64,
    pub m: i64,
    pub sq_dist: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaOneTable {
    /// `||S(16n + m) - S(16n)||^2` for `n in 0..4`, `|m| <= 8`, `16n + m >= 0`.
    pub entries: Vec<LemmaOneEntry>,
    pub max_odd_n: u64,
    pub max_even_n: u64,
    /// Entries above the bound (8 for odd `n`, 9 for even `n`).
    pub violations: Vec<LemmaOneEntry>,
    /// Entries equal to their bound.
    pub equality_cases: Vec<LemmaOneEntry>,
    pub equality_only_at_odd_m: bool,
    /// Closed form `1 - (3 + √2/2)(16/15)/4`.
    pub alpha: f64,
    /// `1 - (√max_even + √max_odd / 4) Σ_{i<depth} 16^{-i} / 4`, from the table.
    pub alpha_from_table: f64,
    pub depth_terms: u32,
}

impl LemmaOneTable {
    pub fn bounds_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const LEMMA_ONE_BOUND_ODD: u64 = 8;
pub const LEMMA_ONE_BOUND_EVEN: u64 = 9;

/// `α` from its closed form `4(1 - α) = (√9 + √8/4)(1 + 1/16 + 1/16^2 + ...)`.
pub fn alpha_closed_form() -> f64 {
    1.0 - (3.0 + std::f64::consts::SQRT_2 / 2.0) * (16.0 / 15.0) / 4.0
}

pub fn lemma_one(depth_terms: u32) -> LemmaOneTable {
    let mut entries = Vec::new();
    for n in 0..4u64 {
        let base = partial_sum(16 * n);
        for m in -8i64..=8 {
            let idx = 16 * n as i64 + m;
            if idx < 0 {
                continue;
            }
            let sq_dist = (partial_sum(idx as u64) - base).norm_sq() as u64;
            entries.push(LemmaOneEntry { n, m, sq_dist });
        }
    }
    let bound = |n: u64| if n % 2 == 1 { LEMMA_ONE_BOUND_ODD } else { LEMMA_ONE_BOUND_EVEN };
    let max_of = |odd: bool| {
        entries.iter().filter(|e| (e.n % 2 == 1) == odd).map(|e| e.sq_dist).max().unwrap_or(0)
    };
    let max_odd_n = max_of(true);
    let max_even_n = max_of(false);
    let violations: Vec<LemmaOneEntry> =
        entries.iter().filter(|e| e.sq_dist > bound(e.n)).cloned().collect();
    let equality_cases: Vec<LemmaOneEntry> =
        entries.iter().filter(|e| e.sq_dist == bound(e.n)).cloned().collect();
    let equality_only_at_odd_m = equality_cases.iter().all(|e| e.m % 2 != 0);

    let series: f64 = (0..depth_terms).map(|i| 16f64.powi(-(i as i32))).sum();
    let alpha_from_table =
        1.0 - ((max_even_n as f64).sqrt() + (max_odd_n as f64).sqrt() / 4.0) * series / 4.0;
    LemmaOneTable {
        entries,
        max_odd_n,
        max_even_n,
        violations,
        equality_cases,
        equality_only_at_odd_m,
        alpha: alpha_closed_form(),
        alpha_from_table,
        depth_terms,
    }
}

/// Keeps reports readable when a hypothesis fails badly.
pub const MAX_REPORTED_VIOLATIONS: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct LemmaTwoReport {
    pub a: u64,
    pub scan_max: u64,
    pub min_sq_dist: u64,
    pub argmin: Vec<PairRecord>,
    pub violation_count: u64,
    /// Pairs with squared distance below 4, first ones by `(n - m, m)`.
    pub violations: Vec<PairRecord>,
}

impl LemmaTwoReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Checks `||S(n) - S(m)||^2 >= 4` for all `n - m >= a`, `n <= scan_max`.
pub fn lemma_two(a: u64, scan_max: u64) -> Result<LemmaTwoReport> {
    if a == 0 || scan_max < a {
        return invalid(format!("lemma_two needs 1 <= A <= scan_max, got A = {a}, scan_max = {scan_max}"));
    }
    check_n_max(scan_max)?;
    let points = curve_points(scan_max);
    let window = window_min_on(&points, a - 1, scan_max)?;
    let gaps: Vec<u64> = (a..=scan_max).collect();
    let per_gap: Vec<(u64, Vec<u64>)> = gaps
        .par_iter()
        .map(|&g| {
            let ms = (0..=scan_max - g)
                .filter(|&m| (points[(m + g) as usize] - points[m as usize]).norm_sq() < 4)
                .collect();
            (g, ms)
        })
        .collect();
    let violation_count = per_gap.iter().map(|(_, ms)| ms.len() as u64).sum();
    let violations = per_gap
        .iter()
        .flat_map(|(g, ms)| records(&points, *g, ms))
        .take(MAX_REPORTED_VIOLATIONS)
        .collect();
    Ok(LemmaTwoReport {
        a,
        scan_max,
        min_sq_dist: window.min_sq_dist,
        argmin: window.pairs,
        violation_count,
        violations,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HoelderConstants {
    pub alpha: f64,
    pub lemma_two_a: u64,
    /// `2α / √(2(A + 1))`.
    pub a_lower: f64,
    /// `2(1 + √2)`.
    pub b_upper: f64,
    /// `12 + 8√2`.
    pub b_upper_sq: f64,
}

pub const LEMMA_TWO_A: u64 = 16;

pub fn hoelder_constants() -> HoelderConstants {
    let alpha = alpha_closed_form();
    HoelderConstants {
        alpha,
        lemma_two_a: LEMMA_TWO_A,
        a_lower: 2.0 * alpha / (2.0 * (LEMMA_TWO_A + 1) as f64).sqrt(),
        b_upper: crate::curve::B_UPPER,
        b_upper_sq: crate::curve::B_UPPER_SQ,
    }
}

/// Triples `(m, n, j)` with `m < n <= m + max_gap`, `m < m_limit`,
/// `1 <= j <= shifts`, where shifting the pair by `j * period` changes
/// `||S(n) - S(m)||`.
pub fn shift_norm_violations(period: u64, max_gap: u64, m_limit: u64, n_limit: u64, shifts: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for m in 0..m_limit {
        for n in m + 1..=(m + max_gap).min(n_limit) {
            let base = (partial_sum(n) - partial_sum(m)).norm_sq();
            for j in 1..=shifts {
                let shifted = (partial_sum(n + j * period) - partial_sum(m + j * period)).norm_sq();
                if shifted != base {
                    out.push((m, n, j));
                }
            }
        }
    }
    out
}

/// Squared distance recomputed by summing signs term by term.
pub fn sq_dist_by_summation(m: u64, n: u64) -> u64 {
    let mut d = Vec4Z::ZERO;
    for j in m..n {
        d.0[(j % 4) as usize] += sign_at(j).to_i64();
    }
    d.norm_sq() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(w: &WindowMin) -> Vec<(u64, u64)> {
        w.pairs.iter().map(|p| (p.m, p.n)).collect()
    }

    #[test]
    fn short_window_minimum() {
        let w = window_min(4, 16, 80).unwrap();
        assert_eq!(w.min_sq_dist, 2);
        let found = pairs(&w);
        for p in [(5, 11), (23, 29), (35, 41), (53, 59)] {
            assert!(found.contains(&p), "missing {p:?}");
        }
        // Exhaustive search finds more minimisers than the four classic ones.
        for p in [(13, 19), (11, 21), (69, 75)] {
            assert!(found.contains(&p), "missing {p:?}");
        }
        let diffs: Vec<Vec4Z> = [(5, 11), (23, 29), (35, 41), (53, 59)]
            .iter()
            .map(|&(m, n)| w.pairs.iter().find(|p| (p.m, p.n) == (m, n)).unwrap().diff)
            .collect();
        assert_eq!(
            diffs,
            vec![Vec4Z([1, 0, 0, -1]), Vec4Z([0, 1, -1, 0]), Vec4Z([0, -1, 1, 0]), Vec4Z([-1, 0, 0, 1])]
        );
    }

    #[test]
    fn long_window_minimum() {
        let w = window_min(16, 64, 256).unwrap();
        assert_eq!(w.min_sq_dist, 4);
        assert_eq!(pairs(&w), vec![(22, 42), (214, 234)]);
        assert_eq!(w.pairs[0].diff, Vec4Z([1, 1, 1, -1]));
        assert_eq!(w.pairs[1].diff, Vec4Z([-1, -1, -1, 1]));
    }

    #[test]
    fn unit_window() {
        let w = window_min(0, 1, 10).unwrap();
        assert_eq!(w.min_sq_dist, 1);
        assert_eq!(w.pairs.len(), 10);
    }

    #[test]
    fn empty_window_rejected() {
        assert!(window_min(5, 5, 10).is_err());
        assert!(window_min(10, 20, 10).is_err());
    }

    #[test]
    fn reported_distances_match_summation() {
        let w = window_min(4, 16, 200).unwrap();
        for p in &w.pairs {
            assert_eq!(p.sq_dist, sq_dist_by_summation(p.m, p.n));
            assert_eq!(*p, PairRecord::evaluate(p.m, p.n));
        }
    }

    #[test]
    fn ratio_bounds_small() {
        let r = ratio_bounds(2).unwrap();
        assert_eq!(r.min.sq_ratio, Fraction::new(1, 1));
        assert_eq!(r.max.sq_ratio, Fraction::new(1, 1));
        assert_eq!(r.min.pairs.len(), 3);
        assert!(ratio_bounds(1).is_err());
    }

    #[test]
    fn ratio_bounds_witnesses() {
        let r = ratio_bounds(42).unwrap();
        assert_eq!(r.min.sq_ratio, Fraction::new(1, 5));
        assert!(r.min.pairs.iter().any(|p| (p.m, p.n, p.sq_dist) == (22, 42, 4)));
        let r = ratio_bounds(17).unwrap();
        assert!(r.max.sq_ratio >= Fraction::new(25, 17));
        assert_eq!(PairRecord::evaluate(0, 17).sq_dist, 25);
    }

    #[test]
    fn conjecture_outcomes() {
        let c = conjecture_scan(42).unwrap();
        assert!(!c.beats_one_fifth);
        assert_eq!(c.min_sq_ratio.sq_ratio, Fraction::new(1, 5));
        let c = conjecture_scan(17).unwrap();
        assert!(c.max_sq_ratio.sq_ratio >= Fraction::new(25, 17));
        // The first pair below 1/5 appears at n = 84.
        let c = conjecture_scan(100).unwrap();
        let first = c.first_below_one_fifth.unwrap();
        assert_eq!((first.m, first.n, first.sq_dist), (39, 84, 7));
        assert!(c.beats_one_fifth);
    }

    #[test]
    fn b_upper_check_is_exact() {
        // 12 + 8√2 = 23.3137...
        assert!(!exceeds_b_upper_sq(23, 1));
        assert!(exceeds_b_upper_sq(24, 1));
        assert!(!exceeds_b_upper_sq(2331, 100));
        assert!(exceeds_b_upper_sq(2332, 100));
    }

    #[test]
    fn lemma_one_table() {
        let t = lemma_one(16);
        assert!(t.bounds_hold());
        assert_eq!((t.max_odd_n, t.max_even_n), (8, 9));
        assert!(t.entries.iter().filter(|e| e.m == 0).all(|e| e.sq_dist == 0));
        assert!((t.alpha - t.alpha_from_table).abs() < 1e-12);
        assert!((t.alpha - 0.011_438_191_683_587_4).abs() < 1e-15);
        // For odd n the bound 8 is reached at m = ±8.
        assert!(!t.equality_only_at_odd_m);
        assert!(t.equality_cases.iter().any(|e| e.n == 1 && e.m == 8));
        assert!(t.equality_cases.iter().filter(|e| e.n % 2 == 0).all(|e| e.m % 2 != 0));
    }

    #[test]
    fn lemma_two_holds_with_a_16() {
        let r = lemma_two(16, 256).unwrap();
        assert!(r.passed());
        assert_eq!(r.min_sq_dist, 4);
        let argmin: Vec<(u64, u64)> = r.argmin.iter().map(|p| (p.m, p.n)).collect();
        for p in [(22, 42), (214, 234)] {
            assert!(argmin.contains(&p));
        }
        // With gaps >= 16 (inclusive), pairs at gap exactly 16 also reach 4.
        assert!(argmin.contains(&(5, 21)));
    }

    #[test]
    fn lemma_two_fails_with_small_a() {
        let r = lemma_two(5, 64).unwrap();
        assert!(!r.passed());
        assert!(r.min_sq_dist < 4);
        assert!(r.violations.iter().any(|p| (p.m, p.n, p.sq_dist) == (5, 11, 2)));
        assert!(lemma_two(0, 10).is_err());
        assert!(lemma_two(20, 10).is_err());
    }

    #[test]
    fn hoelder_values() {
        let h = hoelder_constants();
        assert!((h.b_upper - 4.828_427_124_746_19).abs() < 1e-12);
        assert!((h.b_upper_sq - (12.0 + 8.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!(h.a_lower > 0.0);
        assert!((h.a_lower - 0.003_923_267_380_648_098).abs() < 1e-15);
    }

    #[test]
    fn sixty_four_shift_does_not_preserve_norms() {
        let bad = shift_norm_violations(64, 16, 64, 64, 64);
        assert!(bad.contains(&(1, 17, 1)));
        // Shifting by four blocks of 64 keeps the block type, so norms of
        // pairs inside one block survive.
        assert!(shift_norm_violations(256, 16, 64, 64, 64).is_empty());
    }

    #[test]
    fn sixteen_shift_law() {
        for j in 0..=64u64 {
            let j0 = j % 4;
            for m in 0..16 {
                for n in m + 1..=16 {
                    let lhs = partial_sum(n + 16 * j) - partial_sum(m + 16 * j);
                    let rhs = sign_at(j).to_i64() * (partial_sum(n + 16 * j0) - partial_sum(m + 16 * j0));
                    assert_eq!(lhs, rhs, "m = {m}, n = {n}, j = {j}");
                }
            }
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| serde_json::to_string(&ratio_bounds(600).unwrap()).unwrap())
        };
        assert_eq!(run(1), run(7));
    }
}
