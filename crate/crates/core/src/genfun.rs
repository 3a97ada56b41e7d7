//! Generating functions of the sequence.
//!
//! The quadruple `(P_n, Q_n, R_n, T_n)` starts at `(1, 1, 1, 1)` and is
//! advanced by `M(z^{4^n})`, where row `r` of `M(z)` is
//! `(W4[r][0], W4[r][1] z, W4[r][2] z^2, W4[r][3] z^3)`. Each polynomial has
//! degree below `4^n`, so multiplying by `z^{c 4^n}` is concatenation and a
//! step is four signed concatenations.
//!
//! The column series `f_c(z) = Σ_m a_{4m+c} z^m` satisfy `F(z) = M(z) F(z^4)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::WALSH4;
use crate::error::{invalid, Result};
use crate::sequence::{sign_at, Sign};

/// Deepest level accepted by [`quad_at_level`] (polynomials of degree < 4^10).
pub const MAX_LEVEL: u32 = 10;

/// Integer polynomial, coefficient `i` multiplies `z^i`; no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly(Vec<i64>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn constant(c: i64) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }
}

/// `(P_n, Q_n, R_n, T_n)` at a given level `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVec4 {
    pub level: u32,
    pub polys: [IntPoly; 4],
}

impl PolyVec4 {
    pub fn initial() -> Self {
        PolyVec4 { level: 0, polys: std::array::from_fn(|_| IntPoly::constant(1)) }
    }

    pub fn p(&self) -> &IntPoly {
        &self.polys[0]
    }
}

/// `(P, Q, R, T)_{n+1} = M(z^{4^n}) (P, Q, R, T)_n`.
pub fn step(quad: &PolyVec4) -> PolyVec4 {
    let block = 4usize.pow(quad.level);
    let polys = std::array::from_fn(|row| {
        let mut coeffs = vec![0i64; 4 * block];
        for (col, poly) in quad.polys.iter().enumerate() {
            let sign = WALSH4[row][col];
            for (i, &c) in poly.coeffs().iter().enumerate() {
                coeffs[col * block + i] = sign * c;
            }
        }
        IntPoly::new(coeffs)
    });
    PolyVec4 { level: quad.level + 1, polys }
}

pub fn quad_at_level(level: u32) -> Result<PolyVec4> {
    if level > MAX_LEVEL {
        return invalid(format!("level {level} exceeds {MAX_LEVEL}"));
    }
    Ok((0..level).fold(PolyVec4::initial(), |q, _| step(&q)))
}

#[derive(Clone, Debug, Serialize)]
pub struct NormIdentityReport {
    pub level: u32,
    pub samples: usize,
    /// `4^{level+1}`.
    pub expected: f64,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
}

/// Evaluates `|P_n|^2 + |Q_n|^2 + |R_n|^2 + |T_n|^2` at `samples` points
/// `e^{2πik/samples}` and compares it with `4^{n+1}`.
pub fn norm_identity(level: u32, samples: usize) -> Result<NormIdentityReport> {
    if samples == 0 {
        return invalid("norm_identity needs at least one sample");
    }
    let quad = quad_at_level(level)?;
    let expected = 4f64.powi(level as i32 + 1);
    let max_abs_error = (0..samples)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / samples as f64);
            let total: f64 = quad.polys.iter().map(|p| p.eval(z).norm_sqr()).sum();
            (total - expected).abs()
        })
        .fold(0.0, f64::max);
    Ok(NormIdentityReport { level, samples, expected, max_abs_error, max_rel_error: max_abs_error / expected })
}

/// Coefficients `a_{4m+c}` for `m < len`.
pub fn column_series(c: usize, len: usize) -> Result<Vec<Sign>> {
    if c > 3 {
        return invalid(format!("column index must be 0..=3, got {c}"));
    }
    Ok((0..len).map(|m| sign_at((4 * m + c) as u64)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalMismatch {
    pub column: usize,
    pub coefficient: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionalEquationReport {
    pub len: usize,
    pub mismatches: Vec<FunctionalMismatch>,
}

impl FunctionalEquationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks `f_c(z) = Σ_{c'} M(z)[c][c'] f_{c'}(z^4)` on the first `len`
/// coefficients of every column. Coefficient `4m + c'` of the right side is
/// `W4[c][c'] * [z^m] f_{c'}`.
pub fn functional_equation_check(len: usize) -> Result<FunctionalEquationReport> {
    let columns: Vec<Vec<Sign>> = (0..4).map(|c| column_series(c, len)).collect::<Result<_>>()?;
    let coarse_len = len.div_ceil(4);
    let coarse: Vec<Vec<Sign>> = (0..4).map(|c| column_series(c, coarse_len)).collect::<Result<_>>()?;
    let mut mismatches = Vec::new();
    for (c, column) in columns.iter().enumerate() {
        for (k, &lhs) in column.iter().enumerate() {
            let (m, c2) = (k / 4, k % 4);
            let rhs = coarse[c2][m].to_i64() * WALSH4[c][c2];
            if lhs.to_i64() != rhs {
                mismatches.push(FunctionalMismatch { column: c, coefficient: k });
            }
        }
    }
    Ok(FunctionalEquationReport { len, mismatches })
}

/// Rebuilds `f` from its columns: `f(z) = Σ_c z^c f_c(z^4)`.
pub fn interleave_columns(columns: &[Vec<Sign>; 4]) -> Vec<Sign> {
    let len = columns.iter().map(Vec::len).min().unwrap_or(0);
    (0..4 * len).map(|k| columns[k % 4][k / 4]).collect()
}
