//! Acceptance gate: one PASS/FAIL line per criterion. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasihelix::algebra::{matrix_identity_checks, matrix_m, matrix_t, project_plane_q, DyadicRational, Vec4Z};
use quasihelix::curve::{eval_dyadic, first_coordinate_min, partial_sum};
use quasihelix::extremal::{
    alpha_closed_form, conjecture_scan, lemma_one, lemma_two, window_min, Fraction, PairRecord, LEMMA_TWO_A,
};
use quasihelix::genfun::{functional_equation_check, norm_identity, quad_at_level};
use quasihelix::sequence::{prefix, sign_at_big, verify_equivalence, Digit4Word, Sign};
use quasihelix::spherical::{double_point, double_point_direction, double_point_shifted};

// Tolerances and budgets.
const C1_TERMS: usize = 1 << 16;
const C1_SECONDS: f64 = 1.0;
const C5_RANDOM_SAMPLES: usize = 10_000;
const C5_MAX_K: u32 = 20;
const C5_INTEGER_LIMIT: i64 = 10_000;
const C6_LIMIT: u64 = 4096;
const C6_MAX_K: u32 = 12;
const C7_SECONDS: f64 = 1.0;
const C9_ALPHA_TOL: f64 = 1e-12;
const C9_SERIES_TERMS: u32 = 64;
const C10_SCAN_MAX: u64 = 4096;
const C10_SECONDS: f64 = 30.0;
const C11_NMAX: u64 = 4096;
const C12_LIMIT: u64 = 65536;
const C13_MAX_LEVEL: u32 = 6;
const C13_NORM_LEVEL: u32 = 4;
const C13_NORM_SAMPLES: usize = 64;
const C13_NORM_REL_TOL: f64 = 1e-6;
const C13_FUNCTIONAL_LEN: usize = 1024;
const C14_DEPTH: u32 = 20;
const C14_ANGLE_TOL: f64 = 1e-5;
const C14_PLANE_TOL: f64 = 1e-9;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn c1() -> Outcome {
    let start = Instant::now();
    let report = verify_equivalence(C1_TERMS);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        report.all_agree() && secs < C1_SECONDS,
        format!("{} terms, first discrepancy {:?}, {secs:.3} s", C1_TERMS, report.first_discrepancy),
    )
}

fn c2() -> Outcome {
    let word: String = prefix(16).iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    outcome(word == "+ + + + + - + - + + - - + - - +", word)
}

fn c3() -> Outcome {
    let digits = [1, 3, 2, 0, 0, 1, 1, 1, 0, 2, 3, 1, 1, 1, 2, 2];
    let word = Digit4Word::from_msd_first(&digits).expect("valid digits");
    let links = word.link_count();
    let sign = sign_at_big(&word.value_big());
    outcome(links == 9 && sign == Sign::Minus && word.sign() == Sign::Minus, format!("A_n = {links}, a_n = {sign}1"))
}

fn c4() -> Outcome {
    let checks = matrix_identity_checks();
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    outcome(failed.is_empty(), format!("{} identities, failed {failed:?}", checks.len()))
}

fn self_similar_at(t: &DyadicRational) -> bool {
    let s = eval_dyadic(t).expect("t >= 0");
    let s16 = eval_dyadic(&t.shl(4)).expect("t >= 0");
    let s4 = eval_dyadic(&t.shl(2)).expect("t >= 0");
    let s2 = eval_dyadic(&t.shl(1)).expect("t >= 0");
    s16 == s.scale(4)
        && s4 == quasihelix::algebra::apply(&matrix_m(), &s)
        && s2 == quasihelix::algebra::apply(&matrix_t(), &s)
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for _ in 0..C5_RANDOM_SAMPLES {
        let k = rng.gen_range(0..=C5_MAX_K);
        let p: u64 = rng.gen_range(0..(1u64 << (k + 12)));
        let t = DyadicRational::new(p, k);
        if !self_similar_at(&t) {
            failures.push(t.to_string());
        }
    }
    for n in 0..=C5_INTEGER_LIMIT {
        let t = DyadicRational::integer(n);
        if !self_similar_at(&t) {
            failures.push(t.to_string());
        }
    }
    outcome(
        failures.is_empty(),
        format!("{C5_RANDOM_SAMPLES} random dyadic + integers 0..={C5_INTEGER_LIMIT}, failures {:?}", &failures[..failures.len().min(4)]),
    )
}

fn c6() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for k in 0..=C6_MAX_K {
        let step = 1u64 << k;
        let mut j = 0u64;
        while j * step <= C6_LIMIT {
            let q = (partial_sum((j + 1) * step) - partial_sum(j * step)).norm_sq();
            if q != step as u128 {
                bad.push((j, k, q));
            }
            checked += 1;
            j += 1;
        }
    }
    outcome(bad.is_empty(), format!("{checked} intervals, mismatches {:?}", &bad[..bad.len().min(4)]))
}

fn pair_set(pairs: &[PairRecord]) -> BTreeSet<(u64, u64)> {
    pairs.iter().map(|p| (p.m, p.n)).collect()
}

fn c7() -> Outcome {
    // One period of 64 starting points; n may run up to 64 + 16.
    let start = Instant::now();
    let w = window_min(4, 16, 64 + 16).expect("valid window");
    let secs = start.elapsed().as_secs_f64();
    let found: BTreeSet<(u64, u64)> = pair_set(&w.pairs).into_iter().filter(|&(m, _)| m < 64).collect();
    let expected: BTreeSet<(u64, u64)> = [(5, 11), (23, 29), (35, 41), (53, 59)].into_iter().collect();
    let extra: Vec<_> = found.difference(&expected).collect();
    let missing: Vec<_> = expected.difference(&found).collect();
    outcome(
        w.min_sq_dist == 2 && extra.is_empty() && missing.is_empty() && secs < C7_SECONDS,
        format!("min {} ({secs:.3} s); pairs beyond the four classes {extra:?}; missing {missing:?}", w.min_sq_dist),
    )
}

fn c8() -> Outcome {
    // 16 <= n - m <= 64 is 15 < n - m <= 64.
    let w = window_min(15, 64, 256).expect("valid window");
    let found = pair_set(&w.pairs);
    let expected: BTreeSet<(u64, u64)> = [(22, 42), (214, 234)].into_iter().collect();
    let diff = PairRecord::evaluate(22, 42).diff;
    let extra: Vec<_> = found.difference(&expected).collect();
    let open = window_min(16, 64, 256).expect("valid window");
    outcome(
        w.min_sq_dist == 4 && found == expected && diff == Vec4Z([1, 1, 1, -1]),
        format!(
            "min {}, diff(22,42) = {diff}; pairs beyond the two {extra:?}; with 16 < n - m <= 64: {:?}",
            w.min_sq_dist,
            pair_set(&open.pairs)
        ),
    )
}

fn c9() -> Outcome {
    let table = lemma_one(C9_SERIES_TERMS);
    let alpha_err = (table.alpha_from_table - alpha_closed_form()).abs();
    let closed = (3.0 + 8f64.sqrt() / 4.0) * 16.0 / 15.0 - 4.0 * (1.0 - alpha_closed_form());
    let even_m_equalities: Vec<(u64, i64)> =
        table.equality_cases.iter().filter(|e| e.m % 2 == 0).map(|e| (e.n, e.m)).collect();
    outcome(
        table.bounds_hold() && table.equality_only_at_odd_m && alpha_err <= C9_ALPHA_TOL && closed.abs() <= C9_ALPHA_TOL,
        format!(
            "max odd n {}, max even n {}, violations {}; equality at even m {even_m_equalities:?}; alpha {} (table error {alpha_err:.1e})",
            table.max_odd_n,
            table.max_even_n,
            table.violations.len(),
            table.alpha
        ),
    )
}

fn c10() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
    let start = Instant::now();
    let report = pool.install(|| lemma_two(LEMMA_TWO_A, C10_SCAN_MAX)).expect("valid scan");
    let secs = start.elapsed().as_secs_f64();
    outcome(
        report.passed() && report.min_sq_dist == 4 && secs < C10_SECONDS,
        format!(
            "min {} over {} pairs at the minimum, {} violations, {secs:.2} s single-threaded",
            report.min_sq_dist,
            report.argmin.len(),
            report.violation_count
        ),
    )
}

fn c11() -> Outcome {
    let scan = conjecture_scan(C11_NMAX).expect("valid scan");
    let bounds = quasihelix::extremal::ratio_bounds(C11_NMAX).expect("valid scan");
    let w17 = PairRecord::evaluate(0, 17);
    let w42 = PairRecord::evaluate(22, 42);
    let max_ok = scan.max_sq_ratio.sq_ratio >= Fraction::new(25, 17) && w17.sq_dist == 25;
    let min_ok = scan.min_sq_ratio.sq_ratio == Fraction::new(1, 5) && w42.sq_ratio == Fraction::new(1, 5);
    let b_ok = bounds.above_b_upper_sq.is_empty();
    let min_pairs: Vec<(u64, u64)> = scan.min_sq_ratio.pairs.iter().map(|p| (p.m, p.n)).collect();
    let first = scan.first_below_one_fifth.as_ref().map(|p| format!("({}, {}) at {}", p.m, p.n, p.sq_ratio));
    outcome(
        max_ok && min_ok && b_ok,
        format!(
            "max {} (||S(17)||^2 = {}); min {} at {min_pairs:?}, expected 1/5; first pair below 1/5 {first:?}; above 12+8sqrt2: {}",
            scan.max_sq_ratio.sq_ratio,
            w17.sq_dist,
            scan.min_sq_ratio.sq_ratio,
            bounds.above_b_upper_sq.len()
        ),
    )
}

fn c12() -> Outcome {
    let scan = first_coordinate_min(C12_LIMIT);
    let small: Vec<i64> = (1..=8).map(|n| partial_sum(n).0[0]).collect();
    outcome(
        scan.min >= 0 && small.iter().all(|&x| x >= 1),
        format!("min S_0(n), n <= {C12_LIMIT}: {} at {:?}; S_0(1..=8) = {small:?}", scan.min, scan.argmin),
    )
}

fn c13() -> Outcome {
    let mut prefix_ok = true;
    for level in 1..=C13_MAX_LEVEL {
        let quad = quad_at_level(level).expect("level in range");
        let expected: Vec<i64> = prefix(4usize.pow(level)).iter().map(|s| s.to_i64()).collect();
        prefix_ok &= quad.p().coeffs() == expected.as_slice();
    }
    let worst = (0..=C13_NORM_LEVEL)
        .map(|n| norm_identity(n, C13_NORM_SAMPLES).expect("valid").max_rel_error)
        .fold(0.0, f64::max);
    let functional = functional_equation_check(C13_FUNCTIONAL_LEN).expect("valid");
    outcome(
        prefix_ok && worst <= C13_NORM_REL_TOL && functional.passed(),
        format!("P_n prefixes {prefix_ok}, worst norm error {worst:.1e}, functional mismatches {}", functional.mismatches.len()),
    )
}

fn c14() -> Outcome {
    let report = double_point(C14_DEPTH).expect("depth in range");
    let listed = [[2, 1, 1, 1], [4, 1, 1, 1], [8, 3, 3, 3], [16, 5, 5, 5], [32, 11, 11, 11]];
    let vectors_ok = listed.iter().enumerate().all(|(i, v)| report.repunit_points[i + 1].0 == *v);
    let limit = double_point_direction();
    let limit_q = project_plane_q(&limit.0).iter().map(|x| x * x).sum::<f64>().sqrt();
    let shifted = double_point_shifted(C14_DEPTH).expect("depth in range");
    let converged = report.angle < C14_ANGLE_TOL
        && report.angle_to_expected < C14_ANGLE_TOL
        && report.direction_t_prime.angle(&limit) < C14_ANGLE_TOL;
    let shifted_ok = shifted.angle < C14_ANGLE_TOL && shifted.angle_to_expected < C14_ANGLE_TOL;
    outcome(
        vectors_ok && converged && limit_q <= C14_PLANE_TOL && shifted_ok,
        format!(
            "vectors {vectors_ok}; angle {:.2e}, to (3,1,1,1)/2sqrt3 {:.2e}; limit Q-part {limit_q:.1e}; shifted angle {:.2e}, to (2,1,1,0)/sqrt6 {:.2e}",
            report.angle, report.angle_to_expected, shifted.angle, shifted.angle_to_expected
        ),
    )
}

fn run_qh(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qh")).args(args).output().expect("spawn qh")
}

fn c15() -> Outcome {
    let selfcheck = run_qh(&["selfcheck", "--len", "4096"]);
    let dir = tempfile::tempdir().expect("tempdir");
    let runs: [(&str, Vec<&str>); 5] = [
        ("curve.csv", vec!["export", "--kind", "curve", "--format", "csv"]),
        ("directions.json", vec!["export", "--kind", "directions", "--format", "json", "--nmax", "128"]),
        ("bounds.json", vec!["bounds", "--nmax", "1024", "--window", "4:16"]),
        ("lemmas.json", vec!["lemmas", "--scan-max", "1024"]),
        ("density.json", vec!["density", "--nmax", "128"]),
    ];
    let mut mismatched = Vec::new();
    for (name, args) in &runs {
        let mut contents = Vec::new();
        for (rep, threads) in ["1", "8", "1", "8"].iter().enumerate() {
            let path = dir.path().join(format!("{rep}-{name}"));
            let mut full = vec!["--threads", threads];
            full.extend(args.iter().copied());
            full.extend(["--out", path.to_str().expect("utf-8 path")]);
            let out = run_qh(&full);
            if !out.status.success() {
                mismatched.push(format!("{name}: exit {:?}", out.status.code()));
            }
            contents.push(std::fs::read(Path::new(&path)).unwrap_or_default());
        }
        if contents.iter().any(|c| c != &contents[0] || c.is_empty()) {
            mismatched.push(name.to_string());
        }
    }
    outcome(
        selfcheck.status.code() == Some(0) && mismatched.is_empty(),
        format!("selfcheck exit {:?}; differing outputs {mismatched:?}", selfcheck.status.code()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("definition equivalence", c1),
        ("first 16 terms", c2),
        ("16-digit example", c3),
        ("matrix identities", c4),
        ("self-similarity", c5),
        ("dyadic interval norms", c6),
        ("extremal pairs, window (4,16]", c7),
        ("extremal pairs, window [16,64]", c8),
        ("lemma 1 table", c9),
        ("lemma 2", c10),
        ("ratio bounds", c11),
        ("positivity", c12),
        ("generating functions", c13),
        ("double point", c14),
        ("reproducibility", c15),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        if !result.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if result.passed { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
