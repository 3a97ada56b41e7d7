//! Exact linear algebra in four dimensions.
//!
//! Holds the Walsh matrices, the matrices `M` (order-4 Walsh) and `T` with
//! `T^2 = M` and `M^2 = 4I`, exact dyadic rationals for evaluating the curve
//! at `p / 2^k`, and the eigen-data of `M` and `T`.
//!
//! Eigenvectors that involve `√2` are kept exactly as elements of `Q(√2)`
//! ([`QSqrt2`]) so that the eigen-identities can be checked without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};

/// The order-4 Walsh matrix, which is also the matrix `M`.
pub const WALSH4: [[i64; 4]; 4] = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]];

/// Largest accepted exponent in [`walsh`] (a 4096 x 4096 matrix).
pub const WALSH_MAX_EXPONENT: u32 = 12;

/// `n`-th tensor power of `(1 1 / 1 -1)`, of size `2^n`.
pub fn walsh(n: u32) -> Result<Vec<Vec<i8>>> {
    if n == 0 {
        return invalid("walsh order exponent must be at least 1");
    }
    if n > WALSH_MAX_EXPONENT {
        return invalid(format!("walsh order 2^{n} exceeds the limit 2^{WALSH_MAX_EXPONENT}"));
    }
    let mut m: Vec<Vec<i8>> = vec![vec![1]];
    for _ in 0..n {
        let size = m.len();
        let mut next = vec![vec![0i8; 2 * size]; 2 * size];
        for (i, row) in m.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                next[i][j] = x;
                next[i][j + size] = x;
                next[i + size][j] = x;
                next[i + size][j + size] = -x;
            }
        }
        m = next;
    }
    Ok(m)
}

/// A 4x4 integer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Mat4(pub [[i64; 4]; 4]);

impl Mat4 {
    pub fn identity() -> Self {
        Mat4::scalar(1)
    }

    pub fn scalar(c: i64) -> Self {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = c;
        }
        Mat4(m)
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[j][i];
            }
        }
        Mat4(m)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Mat4::identity(), |acc, _| acc * *self)
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn apply_z(&self, v: &Vec4Z) -> Vec4Z {
        let mut out = [0i64; 4];
        for (o, row) in out.iter_mut().zip(&self.0) {
            *o = row.iter().zip(&v.0).map(|(a, b)| a * b).sum();
        }
        Vec4Z(out)
    }

    pub fn apply_f64(&self, v: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(&self.0) {
            *o = row.iter().zip(v).map(|(&a, b)| a as f64 * b).sum();
        }
        out
    }

    pub fn apply_big(&self, v: &[BigInt; 4]) -> [BigInt; 4] {
        std::array::from_fn(|i| {
            let mut acc = BigInt::zero();
            for (j, x) in v.iter().enumerate() {
                match self.0[i][j] {
                    0 => {}
                    1 => acc += x,
                    -1 => acc -= x,
                    c => acc += x * c,
                }
            }
            acc
        })
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Mat4(m)
    }
}

/// `M`: the order-4 Walsh matrix; `S(4t) = M S(t)`.
pub fn matrix_m() -> Mat4 {
    Mat4(WALSH4)
}

/// `T`, with `T^2 = M`; `S(2t) = T S(t)`.
pub fn matrix_t() -> Mat4 {
    Mat4([[1, 0, 1, 0], [1, 0, -1, 0], [0, 1, 0, 1], [0, 1, 0, -1]])
}

/// Integer point of `Z^4` in the basis `u_0..u_3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vec4Z(pub [i64; 4]);

impl Vec4Z {
    pub const ZERO: Vec4Z = Vec4Z([0; 4]);

    pub fn unit(i: usize) -> Self {
        let mut v = [0; 4];
        v[i] = 1;
        Vec4Z(v)
    }

    pub fn coords(&self) -> [i64; 4] {
        self.0
    }

    pub fn dot(&self, other: &Vec4Z) -> i128 {
        self.0.iter().zip(&other.0).map(|(&a, &b)| a as i128 * b as i128).sum()
    }

    pub fn norm_sq(&self) -> u128 {
        self.dot(self) as u128
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.0.map(|x| x as f64)
    }

    pub fn to_big(&self) -> [BigInt; 4] {
        self.0.map(BigInt::from)
    }
}

impl Add for Vec4Z {
    type Output = Vec4Z;
    fn add(self, rhs: Vec4Z) -> Vec4Z {
        Vec4Z(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for Vec4Z {
    fn add_assign(&mut self, rhs: Vec4Z) {
        *self = *self + rhs;
    }
}

impl Sub for Vec4Z {
    type Output = Vec4Z;
    fn sub(self, rhs: Vec4Z) -> Vec4Z {
        Vec4Z(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Vec4Z {
    type Output = Vec4Z;
    fn neg(self) -> Vec4Z {
        Vec4Z(self.0.map(|x| -x))
    }
}

impl Mul<Vec4Z> for i64 {
    type Output = Vec4Z;
    fn mul(self, rhs: Vec4Z) -> Vec4Z {
        Vec4Z(rhs.0.map(|x| self * x))
    }
}

impl fmt::Display for Vec4Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Exact `numerator / 2^exponent`, kept canonical: when the exponent is
/// positive the numerator is odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigInt,
    exponent: u32,
}

impl DyadicRational {
    pub fn new(numerator: impl Into<BigInt>, exponent: u32) -> Self {
        let mut d = DyadicRational { numerator: numerator.into(), exponent };
        d.canonicalize();
        d
    }

    pub fn zero() -> Self {
        DyadicRational::integer(0)
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        DyadicRational { numerator: n.into(), exponent: 0 }
    }

    /// The exact value of a finite double.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return invalid(format!("{x} is not a finite number"));
        }
        if x == 0.0 {
            return Ok(DyadicRational::zero());
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i32;
        let fraction = bits & ((1u64 << 52) - 1);
        let (mantissa, exp2) = if biased == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), biased - 1075)
        };
        let mut num = BigInt::from(mantissa);
        if negative {
            num = -num;
        }
        Ok(if exp2 >= 0 {
            DyadicRational::new(num << exp2 as usize, 0)
        } else {
            DyadicRational::new(num, (-exp2) as u32)
        })
    }

    /// Parses `p`, `p/q` with `q` a power of two, or `p/2^k`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            None => (text, None),
            Some((n, d)) => (n.trim(), Some(d.trim())),
        };
        let numerator: BigInt = num
            .parse()
            .map_err(|_| crate::Error::InvalidInput(format!("bad numerator in {text:?}")))?;
        let exponent = match den {
            None => 0,
            Some(d) => {
                if let Some(k) = d.strip_prefix("2^") {
                    k.parse::<u32>()
                        .map_err(|_| crate::Error::InvalidInput(format!("bad exponent in {text:?}")))?
                } else {
                    let q: u64 = d
                        .parse()
                        .map_err(|_| crate::Error::InvalidInput(format!("bad denominator in {text:?}")))?;
                    if q == 0 || !q.is_power_of_two() {
                        return invalid(format!("denominator of {text:?} is not a power of two"));
                    }
                    q.trailing_zeros()
                }
            }
        };
        Ok(DyadicRational::new(numerator, exponent))
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exponent as u64) as u32;
        if shift > 0 {
            self.numerator >>= shift as usize;
            self.exponent -= shift;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numerator.clone())
    }

    /// Divides by `2^k`.
    pub fn shr(&self, k: u32) -> Self {
        DyadicRational::new(self.numerator.clone(), self.exponent + k)
    }

    /// Multiplies by `2^k`.
    pub fn shl(&self, k: u32) -> Self {
        if k <= self.exponent {
            DyadicRational::new(self.numerator.clone(), self.exponent - k)
        } else {
            DyadicRational::new(&self.numerator << (k - self.exponent) as usize, 0)
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        DyadicRational::new(&self.numerator * c, self.exponent)
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        self.numerator.div_floor(&(BigInt::one() << self.exponent as usize))
    }

    pub fn to_f64(&self) -> f64 {
        big_ratio_to_f64(&self.numerator, self.exponent)
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent) as usize,
            &other.numerator << (e - other.exponent) as usize,
            e,
        )
    }
}

/// `num / 2^exp` rounded to a double; values whose numerator alone
/// overflows a double are shifted down first.
fn big_ratio_to_f64(num: &BigInt, exp: u32) -> f64 {
    let bits = num.bits();
    if bits <= 1000 {
        let x = num.to_f64().unwrap_or(f64::NAN);
        return x * 2f64.powi(-(exp as i32));
    }
    let drop = bits - 900;
    let head = (num >> drop as usize).to_f64().unwrap_or(f64::NAN);
    head * 2f64.powi(drop as i32 - exp as i32)
}

impl From<i64> for DyadicRational {
    fn from(n: i64) -> Self {
        DyadicRational::integer(n)
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;
    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let (a, b, e) = self.aligned(rhs);
        DyadicRational::new(a + b, e)
    }
}

impl Sub for &DyadicRational {
    type Output = DyadicRational;
    fn sub(self, rhs: &DyadicRational) -> DyadicRational {
        let (a, b, e) = self.aligned(rhs);
        DyadicRational::new(a - b, e)
    }
}

impl Mul for &DyadicRational {
    type Output = DyadicRational;
    fn mul(self, rhs: &DyadicRational) -> DyadicRational {
        DyadicRational::new(&self.numerator * &rhs.numerator, self.exponent + rhs.exponent)
    }
}

impl Neg for &DyadicRational {
    type Output = DyadicRational;
    fn neg(self) -> DyadicRational {
        DyadicRational { numerator: -&self.numerator, exponent: self.exponent }
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

/// A point of `R^4` with exact dyadic coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vec4Dyadic(pub [DyadicRational; 4]);

impl Vec4Dyadic {
    pub fn zero() -> Self {
        Vec4Dyadic(std::array::from_fn(|_| DyadicRational::zero()))
    }

    pub fn from_ints(v: [i64; 4]) -> Self {
        Vec4Dyadic(v.map(DyadicRational::integer))
    }

    pub fn from_big(v: [BigInt; 4]) -> Self {
        Vec4Dyadic(v.map(DyadicRational::integer))
    }

    pub fn from_z(v: &Vec4Z) -> Self {
        Vec4Dyadic::from_ints(v.0)
    }

    /// Integer coordinates, if every coordinate is an integer that fits `i64`.
    pub fn to_z(&self) -> Option<Vec4Z> {
        let mut out = [0i64; 4];
        for (o, c) in out.iter_mut().zip(&self.0) {
            *o = c.to_integer()?.to_i64()?;
        }
        Some(Vec4Z(out))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.0[i].to_f64())
    }

    pub fn shr(&self, k: u32) -> Self {
        Vec4Dyadic(std::array::from_fn(|i| self.0[i].shr(k)))
    }

    pub fn shl(&self, k: u32) -> Self {
        Vec4Dyadic(std::array::from_fn(|i| self.0[i].shl(k)))
    }

    pub fn scale(&self, c: i64) -> Self {
        Vec4Dyadic(std::array::from_fn(|i| self.0[i].scale(c)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Vec4Dyadic(std::array::from_fn(|i| &self.0[i] - &other.0[i]))
    }

    pub fn add(&self, other: &Self) -> Self {
        Vec4Dyadic(std::array::from_fn(|i| &self.0[i] + &other.0[i]))
    }

    pub fn norm_sq(&self) -> DyadicRational {
        self.0.iter().fold(DyadicRational::zero(), |acc, c| &acc + &(c * c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(DyadicRational::is_zero)
    }
}

impl fmt::Display for Vec4Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Exact matrix-vector product.
pub fn apply(mat: &Mat4, v: &Vec4Dyadic) -> Vec4Dyadic {
    // Bring all coordinates to one exponent, multiply as integers, then
    // renormalise.
    let e = v.0.iter().map(DyadicRational::exponent).max().unwrap_or(0);
    let nums: [BigInt; 4] = std::array::from_fn(|i| {
        v.0[i].numerator() << (e - v.0[i].exponent()) as usize
    });
    let out = mat.apply_big(&nums);
    Vec4Dyadic(out.map(|n| DyadicRational::new(n, e)))
}

/// `T^{-1} v = T^3 v / 4`.
pub fn apply_t_inverse(v: &Vec4Dyadic) -> Vec4Dyadic {
    let t3 = matrix_t().pow(3);
    apply(&t3, v).shr(2)
}

/// Unnormalised eigenvectors of `M` for eigenvalue 2 (spanning `P`).
pub const P0: [i64; 4] = [1, 1, 1, -1];
pub const P1: [i64; 4] = [1, 0, 0, 1];
/// Unnormalised eigenvectors of `M` for eigenvalue -2 (spanning `Q`).
pub const Q0: [i64; 4] = [1, -1, -1, -1];
pub const Q1: [i64; 4] = [0, 1, -1, 0];

fn dot_f(a: &[f64; 4], b: &[i64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, &y)| x * y as f64).sum()
}

/// Orthogonal projection onto the plane `P` (eigenvalue 2 of `M`).
pub fn project_plane_p(v: &[f64; 4]) -> [f64; 4] {
    let c0 = dot_f(v, &P0) / 4.0;
    let c1 = dot_f(v, &P1) / 2.0;
    std::array::from_fn(|i| c0 * P0[i] as f64 + c1 * P1[i] as f64)
}

/// Orthogonal projection onto the plane `Q` (eigenvalue -2 of `M`).
pub fn project_plane_q(v: &[f64; 4]) -> [f64; 4] {
    let c0 = dot_f(v, &Q0) / 4.0;
    let c1 = dot_f(v, &Q1) / 2.0;
    std::array::from_fn(|i| c0 * Q0[i] as f64 + c1 * Q1[i] as f64)
}

/// Reflection fixing `P` pointwise and negating `Q`; equals `(M/2) v`.
pub fn reflect_through_p(v: &[f64; 4]) -> [f64; 4] {
    let p = project_plane_p(v);
    std::array::from_fn(|i| 2.0 * p[i] - v[i])
}

/// An element `rational + sqrt2 * √2` of `Q(√2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    pub rational: Ratio<i64>,
    pub sqrt2: Ratio<i64>,
}

impl QSqrt2 {
    pub fn new(rational: Ratio<i64>, sqrt2: Ratio<i64>) -> Self {
        QSqrt2 { rational, sqrt2 }
    }

    pub fn int(n: i64) -> Self {
        QSqrt2::new(Ratio::from_integer(n), Ratio::zero())
    }

    pub fn zero() -> Self {
        QSqrt2::int(0)
    }

    pub fn sqrt2() -> Self {
        QSqrt2::new(Ratio::zero(), Ratio::one())
    }

    pub fn to_f64(self) -> f64 {
        let r = *self.rational.numer() as f64 / *self.rational.denom() as f64;
        let s = *self.sqrt2.numer() as f64 / *self.sqrt2.denom() as f64;
        r + s * std::f64::consts::SQRT_2
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2::new(self.rational + o.rational, self.sqrt2 + o.sqrt2)
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2::new(self.rational - o.rational, self.sqrt2 - o.sqrt2)
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.rational, -self.sqrt2)
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2::new(
            self.rational * o.rational + self.sqrt2 * o.sqrt2 * 2,
            self.rational * o.sqrt2 + self.sqrt2 * o.rational,
        )
    }
}

pub type Vec4Sqrt2 = [QSqrt2; 4];

fn scaled(c: QSqrt2, v: &[i64; 4]) -> Vec4Sqrt2 {
    v.map(|x| c * QSqrt2::int(x))
}

fn half() -> QSqrt2 {
    QSqrt2::new(Ratio::new(1, 2), Ratio::zero())
}

fn half_sqrt2() -> QSqrt2 {
    QSqrt2::new(Ratio::zero(), Ratio::new(1, 2))
}

pub fn add_v(a: &Vec4Sqrt2, b: &Vec4Sqrt2) -> Vec4Sqrt2 {
    std::array::from_fn(|i| a[i] + b[i])
}

pub fn sub_v(a: &Vec4Sqrt2, b: &Vec4Sqrt2) -> Vec4Sqrt2 {
    std::array::from_fn(|i| a[i] - b[i])
}

pub fn scale_v(c: QSqrt2, v: &Vec4Sqrt2) -> Vec4Sqrt2 {
    v.map(|x| c * x)
}

pub fn dot_v(a: &Vec4Sqrt2, b: &Vec4Sqrt2) -> QSqrt2 {
    a.iter().zip(b).fold(QSqrt2::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn apply_sqrt2(mat: &Mat4, v: &Vec4Sqrt2) -> Vec4Sqrt2 {
    std::array::from_fn(|i| {
        (0..4).fold(QSqrt2::zero(), |acc, j| acc + QSqrt2::int(mat.0[i][j]) * v[j])
    })
}

pub fn to_f64_v(v: &Vec4Sqrt2) -> [f64; 4] {
    v.map(QSqrt2::to_f64)
}

/// Orthonormal eigenbases of `M` and `T`, exact in `Q(√2)`.
#[derive(Clone, Debug)]
pub struct EigenFrame {
    /// `v_0, v_1` span `P`; `v_2, v_3` span `Q`.
    pub v: [Vec4Sqrt2; 4],
    /// `T w_0 = √2 w_0`, `T w_1 = -√2 w_1`, `T w_2 = √2 w_3`, `T w_3 = -√2 w_2`.
    pub w: [Vec4Sqrt2; 4],
}

impl EigenFrame {
    pub fn new() -> Self {
        let v0 = scaled(half(), &P0);
        let v1 = scaled(half_sqrt2(), &P1);
        let v2 = scaled(half(), &Q0);
        let v3 = scaled(half_sqrt2(), &Q1);
        let w0 = scale_v(half_sqrt2(), &add_v(&v0, &v1));
        let w1 = scale_v(half_sqrt2(), &sub_v(&v0, &v1));
        // In Q, T/√2 is a quarter turn, and T v_2 = √2 v_3 holds exactly;
        // this choice reproduces the normal form T' of T in the w-basis.
        EigenFrame { v: [v0, v1, v2, v3], w: [w0, w1, v2, v3] }
    }

    /// Matrix of `T` in the `w` basis: `W T W^T`, with `W` rows `w_i`.
    pub fn t_normal_form(&self) -> [[QSqrt2; 4]; 4] {
        let t = matrix_t();
        let tw: Vec<Vec4Sqrt2> = self.w.iter().map(|w| apply_sqrt2(&t, w)).collect();
        std::array::from_fn(|i| std::array::from_fn(|j| dot_v(&self.w[i], &tw[j])))
    }

    /// Determinant of the matrix whose rows are `w_0..w_3`.
    pub fn w_determinant(&self) -> QSqrt2 {
        det4(&self.w)
    }
}

impl Default for EigenFrame {
    fn default() -> Self {
        EigenFrame::new()
    }
}

fn det4(rows: &[Vec4Sqrt2; 4]) -> QSqrt2 {
    // Laplace expansion along the first row.
    let mut total = QSqrt2::zero();
    for col in 0..4 {
        let minor: Vec<Vec<QSqrt2>> = rows[1..]
            .iter()
            .map(|r| (0..4).filter(|&c| c != col).map(|c| r[c]).collect())
            .collect();
        let d3 = minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1])
            - minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0])
            + minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]);
        let term = rows[0][col] * d3;
        total = if col % 2 == 0 { total + term } else { total - term };
    }
    total
}

/// The exact identities relating `M` and `T`, by name.
pub fn matrix_identity_checks() -> Vec<(&'static str, bool)> {
    let m = matrix_m();
    let t = matrix_t();
    let eig = |v: [i64; 4], lambda: i64| m.apply_z(&Vec4Z(v)) == lambda * Vec4Z(v);
    let frame = EigenFrame::new();
    let sqrt2 = QSqrt2::sqrt2();
    let t_eig = |w: &Vec4Sqrt2, lambda: QSqrt2| apply_sqrt2(&t, w) == scale_v(lambda, w);
    vec![
        ("T^2 = M", t.pow(2) == m),
        ("M^2 = 4I", m.pow(2) == Mat4::scalar(4)),
        ("(M/2)(M/2)^T = I", m * m.transpose() == Mat4::scalar(4)),
        ("M p0 = 2 p0", eig(P0, 2)),
        ("M p1 = 2 p1", eig(P1, 2)),
        ("M q0 = -2 q0", eig(Q0, -2)),
        ("M q1 = -2 q1", eig(Q1, -2)),
        ("T w0 = sqrt2 w0", t_eig(&frame.w[0], sqrt2)),
        ("T w1 = -sqrt2 w1", t_eig(&frame.w[1], QSqrt2::zero() - sqrt2)),
    ]
}

/// `w_0` in floating point.
pub fn w0_f64() -> [f64; 4] {
    to_f64_v(&EigenFrame::new().w[0])
}
