//! The curve `S(t)`: exact integer partial sums, exact dyadic evaluation, a
//! Hölder-controlled real evaluator, and the arc isometries.
//!
//! `S(n) = Σ_{j<n} a_j u_{j mod 4}` is computed from the base-4 digits of `n`
//! with `S(4m + c) = M S(m) + a_m Σ_{i<c} W4[m mod 4][i] u_i`, so one
//! evaluation costs O(log n). At `t = p / 2^k` the curve is `T^{-k} S(p)`.

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{apply, apply_t_inverse, matrix_m, DyadicRational, Vec4Dyadic, Vec4Z, WALSH4};
use crate::error::{invalid, Result};
use crate::sequence::{sign_at, walsh_sign, Digit4Word, Sign};

/// Upper Hölder constant `b <= 2(1 + √2)`.
pub const B_UPPER: f64 = 2.0 * (1.0 + std::f64::consts::SQRT_2);

/// `B_UPPER^2 = 12 + 8√2`.
pub const B_UPPER_SQ: f64 = 12.0 + 8.0 * std::f64::consts::SQRT_2;

/// Exact `S(n)`.
pub fn partial_sum(n: u64) -> Vec4Z {
    let m = matrix_m();
    let mut point = Vec4Z::ZERO;
    let mut sign = Sign::Plus;
    let mut row = 0usize;
    for &digit in Digit4Word::from_u64(n).digits().iter().rev() {
        point = m.apply_z(&point);
        for i in 0..digit as usize {
            point.0[i] += sign.to_i64() * WALSH4[row][i];
        }
        sign = sign * walsh_sign(row, digit as usize);
        row = digit as usize;
    }
    point
}

/// Exact `S(n)` for an index of any size.
pub fn partial_sum_big(n: &BigUint) -> [BigInt; 4] {
    let m = matrix_m();
    let mut point: [BigInt; 4] = Default::default();
    let mut sign = Sign::Plus;
    let mut row = 0usize;
    for &digit in Digit4Word::from_biguint(n).digits().iter().rev() {
        point = m.apply_big(&point);
        for (i, coord) in point.iter_mut().enumerate().take(digit as usize) {
            *coord += sign.to_i64() * WALSH4[row][i];
        }
        sign = sign * walsh_sign(row, digit as usize);
        row = digit as usize;
    }
    point
}

/// Streams `S(0), S(1), ..., S(limit - 1)`, one step per term.
#[derive(Clone, Debug)]
pub struct SumStream {
    next: u64,
    limit: u64,
    current: Vec4Z,
    signs: Vec<Sign>,
}

pub fn sum_stream(limit: u64) -> SumStream {
    SumStream { next: 0, limit, current: Vec4Z::ZERO, signs: Vec::new() }
}

impl Iterator for SumStream {
    type Item = Vec4Z;

    fn next(&mut self) -> Option<Vec4Z> {
        if self.next >= self.limit {
            return None;
        }
        let out = self.current;
        let i = self.next as usize;
        let sign = if i == 0 {
            Sign::Plus
        } else {
            self.signs[i / 4] * walsh_sign(i / 4, i % 4)
        };
        // Terms with index >= limit / 4 are never looked up again.
        if (i as u64) < self.limit / 4 + 1 {
            self.signs.push(sign);
        }
        self.current.0[i % 4] += sign.to_i64();
        self.next += 1;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.limit - self.next) as usize;
        (left, Some(left))
    }
}

/// A parameter together with its exact curve point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePoint {
    pub t: DyadicRational,
    pub value: Vec4Dyadic,
}

/// Applies `T^{-k}`. Since `T^{-2} = M/4` and `(M/4)^2 = I/4`, this needs at
/// most two matrix products.
pub fn apply_t_inverse_pow(v: &Vec4Dyadic, k: u32) -> Vec4Dyadic {
    let quarter_turns = k / 2;
    let mut out = v.shr(2 * (quarter_turns / 2));
    if quarter_turns % 2 == 1 {
        out = apply(&matrix_m(), &out).shr(2);
    }
    if k % 2 == 1 {
        out = apply_t_inverse(&out);
    }
    out
}

/// Exact `S(t)` for dyadic `t >= 0`.
pub fn eval_dyadic(t: &DyadicRational) -> Result<Vec4Dyadic> {
    if t.is_negative() {
        return invalid(format!("the curve is defined for t >= 0, got {t}"));
    }
    let p = t.numerator().to_biguint().expect("nonnegative");
    let base = Vec4Dyadic::from_big(partial_sum_big(&p));
    Ok(apply_t_inverse_pow(&base, t.exponent()))
}

pub fn curve_point(t: &DyadicRational) -> Result<CurvePoint> {
    Ok(CurvePoint { t: t.clone(), value: eval_dyadic(t)? })
}

/// Number of binary digits of `t` needed so that the Hölder bound
/// `B_UPPER * sqrt(|t - t*|)` stays below `tol`.
pub fn resolution_bits(tol: f64) -> u32 {
    let bits = (2.0 * (B_UPPER / tol).log2()).ceil();
    bits.max(0.0) as u32
}

/// The dyadic `t*` used by [`eval_real`]: `t` truncated to
/// [`resolution_bits`] binary digits.
pub fn dyadic_truncation(t: f64, tol: f64) -> Result<DyadicRational> {
    if !(t.is_finite() && t >= 0.0) {
        return invalid(format!("t must be a finite nonnegative number, got {t}"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return invalid(format!("tol must be a finite positive number, got {tol}"));
    }
    // The output is a double of size up to B_UPPER * sqrt(t); a tolerance
    // below its rounding error cannot be honoured.
    let scale = (B_UPPER * t.sqrt()).max(1.0);
    if tol < 8.0 * f64::EPSILON * scale {
        return invalid(format!("tol {tol} is below double precision for t = {t}"));
    }
    let k = resolution_bits(tol);
    let exact = DyadicRational::from_f64(t)?;
    Ok(DyadicRational::new(exact.shl(k).floor(), k))
}

/// `S(t)` for real `t >= 0`, within `tol` of the true point.
pub fn eval_real(t: f64, tol: f64) -> Result<[f64; 4]> {
    let t_star = dyadic_truncation(t, tol)?;
    Ok(eval_dyadic(&t_star)?.to_f64())
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryWitness {
    pub s: String,
    pub t: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArcIsometryReport {
    pub j: u64,
    pub j0: u64,
    pub sign: Sign,
    pub samples: usize,
    pub failures: Vec<IsometryWitness>,
}

impl ArcIsometryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `S(t + j) - S(s + j) = a_j (S(t + j0) - S(s + j0))`, `j0 = j mod 4`,
/// exactly at `samples` random dyadic pairs `0 < s < t < 1`.
pub fn check_arc_isometry(j: u64, samples: usize, seed: u64) -> Result<ArcIsometryReport> {
    let j0 = j % 4;
    let sign = sign_at(j);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ j.rotate_left(17));
    let mut failures = Vec::new();
    for _ in 0..samples {
        let k = rng.gen_range(2..=20u32);
        let top = 1u64 << k;
        let a = rng.gen_range(1..top);
        let mut b = rng.gen_range(1..top);
        while b == a {
            b = rng.gen_range(1..top);
        }
        let s = DyadicRational::new(a.min(b), k);
        let t = DyadicRational::new(a.max(b), k);
        let shift = |x: &DyadicRational, by: u64| x + &DyadicRational::integer(by);
        let lhs = eval_dyadic(&shift(&t, j))?.sub(&eval_dyadic(&shift(&s, j))?);
        let base = eval_dyadic(&shift(&t, j0))?.sub(&eval_dyadic(&shift(&s, j0))?);
        let rhs = base.scale(sign.to_i64());
        if lhs != rhs {
            failures.push(IsometryWitness { s: s.to_string(), t: t.to_string() });
        }
    }
    Ok(ArcIsometryReport { j, j0, sign, samples, failures })
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstCoordinateScan {
    pub limit: u64,
    pub min: i64,
    pub argmin: Vec<u64>,
}

/// Minimum of the first coordinate of `S(n)` over `0 <= n <= limit`.
pub fn first_coordinate_min(limit: u64) -> FirstCoordinateScan {
    let mut min = i64::MAX;
    let mut argmin = Vec::new();
    for (n, point) in sum_stream(limit + 1).enumerate() {
        let x0 = point.0[0];
        if x0 < min {
            min = x0;
            argmin.clear();
        }
        if x0 == min {
            argmin.push(n as u64);
        }
    }
    FirstCoordinateScan { limit, min, argmin }
}
