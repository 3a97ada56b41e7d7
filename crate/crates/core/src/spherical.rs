//! Projections of the curve: the radial projection `S(t) / ||S(t)||` onto the
//! unit sphere, the central projection `S(t) / S_0(t)` onto the hyperplane
//! `x_0 = 1`, the weighted-mean point sequence, the double point at
//! `t = 1/3, t' = 4/3`, and the direction-density experiment.
//!
//! Sample parameters are doubles, and every double is a dyadic rational, so
//! sampled points are exact curve points rounded only at the last step.

use std::collections::{BTreeSet, HashSet};
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{matrix_m, matrix_t, project_plane_q, w0_f64, DyadicRational, Vec4Dyadic, Vec4Z};
use crate::curve::{eval_dyadic, partial_sum};
use crate::error::{invalid, Error, Result};
use crate::extremal::curve_points;
use crate::report::{write_csv, Envelope};
use crate::sequence::sign_at;

/// A point of the unit sphere `S^3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnitVec4(pub [f64; 4]);

impl UnitVec4 {
    pub fn normalize(v: [f64; 4]) -> Result<Self> {
        let norm = norm(&v);
        if !(norm > 0.0 && norm.is_finite()) {
            return invalid("cannot normalise a zero or non-finite vector");
        }
        Ok(UnitVec4(v.map(|x| x / norm)))
    }

    pub fn from_z(v: &Vec4Z) -> Result<Self> {
        UnitVec4::normalize(v.to_f64())
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    /// Angle to `other`, accurate for nearly equal vectors.
    pub fn angle(&self, other: &UnitVec4) -> f64 {
        let diff: [f64; 4] = std::array::from_fn(|i| self.0[i] - other.0[i]);
        let sum: [f64; 4] = std::array::from_fn(|i| self.0[i] + other.0[i]);
        2.0 * norm(&diff).atan2(norm(&sum))
    }

    pub fn distance(&self, other: &UnitVec4) -> f64 {
        norm(&std::array::from_fn(|i| self.0[i] - other.0[i]))
    }
}

fn norm(v: &[f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Normalises an exact dyadic vector; coordinates are rescaled to a common
/// integer numerator first so that tiny points keep full precision.
fn normalize_dyadic(v: &Vec4Dyadic) -> Result<UnitVec4> {
    let e = v.0.iter().map(DyadicRational::exponent).max().unwrap_or(0);
    let nums: Vec<BigInt> = v.0.iter().map(|c| c.shl(e).to_integer().expect("integral")).collect();
    let bits = nums.iter().map(|n| n.bits()).max().unwrap_or(0);
    let drop = bits.saturating_sub(60) as usize;
    let coords: [f64; 4] = std::array::from_fn(|i| (&nums[i] >> drop).to_f64().unwrap_or(f64::NAN));
    UnitVec4::normalize(coords)
}

/// Exact curve point at the double `t`.
pub fn eval_at_double(t: f64) -> Result<Vec4Dyadic> {
    eval_dyadic(&DyadicRational::from_f64(t)?)
}

/// `S(t) / ||S(t)||` for dyadic `t > 0`.
pub fn sphere_point(t: &DyadicRational) -> Result<UnitVec4> {
    if t.is_negative() || t.is_zero() {
        return invalid(format!("sphere_point needs t > 0, got {t}"));
    }
    normalize_dyadic(&eval_dyadic(t)?)
}

pub fn sphere_point_f64(t: f64) -> Result<UnitVec4> {
    sphere_point(&DyadicRational::from_f64(t)?)
}

/// `count` points with `t` geometrically spaced over `[a, 16a]`.
pub fn closed_curve_samples(a: f64, count: usize) -> Result<Vec<(f64, UnitVec4)>> {
    if !(a > 0.0 && a.is_finite()) {
        return invalid(format!("anchor must be positive, got {a}"));
    }
    geometric_params(a, 16.0 * a, count)?
        .into_iter()
        .map(|t| Ok((t, sphere_point_f64(t)?)))
        .collect()
}

fn geometric_params(from: f64, to: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return invalid("sample count must be positive");
    }
    if count == 1 {
        return Ok(vec![from]);
    }
    let ratio = (to / from).ln();
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                to
            } else {
                from * (ratio * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

fn linear_params(from: f64, to: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return invalid("sample count must be positive");
    }
    if count == 1 {
        return Ok(vec![from]);
    }
    Ok((0..count)
        .map(|i| if i == count - 1 { to } else { from + (to - from) * i as f64 / (count - 1) as f64 })
        .collect())
}

/// `(4^j - 1) / 3`, the base-4 repunit `11...1` with `j` digits.
pub fn repunit4(j: u32) -> u64 {
    (4u64.pow(j) - 1) / 3
}

/// Largest depth accepted by [`double_point`]; `repunit4(depth + 1)` must fit `u64`.
pub const MAX_DOUBLE_POINT_DEPTH: u32 = 30;

/// `(3, 1, 1, 1) / (2√3)`, the common direction of `S(1/3)` and `S(4/3)`.
pub fn double_point_direction() -> UnitVec4 {
    UnitVec4::normalize([3.0, 1.0, 1.0, 1.0]).expect("nonzero")
}

/// `(2, 1, 1, 0) / √6 = T (3, 1, 1, 1) / ||T (3, 1, 1, 1)||`.
pub fn shifted_double_point_direction() -> UnitVec4 {
    UnitVec4::normalize([2.0, 1.0, 1.0, 0.0]).expect("nonzero")
}

#[derive(Clone, Debug, Serialize)]
pub struct DoublePointReport {
    pub depth: u32,
    /// `S(r_j)` for `r_j = (4^j - 1)/3`, `j = 1..=depth + 1`.
    pub repunit_points: Vec<Vec4Z>,
    /// Directions of `S(r_j / 4^j)`, approximating `S(1/3)`, `j = 1..=depth`.
    pub directions_t: Vec<UnitVec4>,
    /// Directions of `S(r_{j+1} / 4^j)`, approximating `S(4/3)`.
    pub directions_t_prime: Vec<UnitVec4>,
    pub direction_t: UnitVec4,
    pub direction_t_prime: UnitVec4,
    pub angle: f64,
    pub angle_to_expected: f64,
    /// Length of the component of `direction_t` in the plane `Q`.
    pub q_component: f64,
}

/// `M^{j mod 2} v`: the direction of `M^{-j} v` since `M^2 = 4I`.
fn direction_of_scaled(v: &Vec4Z, j: u32) -> Result<UnitVec4> {
    let w = if j % 2 == 1 { matrix_m().apply_z(v) } else { *v };
    UnitVec4::from_z(&w)
}

/// Approximates the double point of the radial projection at `t = 1/3` and
/// `t' = 4/3` by truncating their base-4 expansions `0.111...` and `1.111...`.
pub fn double_point(depth: u32) -> Result<DoublePointReport> {
    if !(2..=MAX_DOUBLE_POINT_DEPTH).contains(&depth) {
        return invalid(format!("depth must be in 2..={MAX_DOUBLE_POINT_DEPTH}, got {depth}"));
    }
    let repunit_points: Vec<Vec4Z> = (1..=depth + 1).map(|j| partial_sum(repunit4(j))).collect();
    // S(r_j / 4^j) = M^{-j} S(r_j) and S(r_{j+1} / 4^j) = M^{-j} S(r_{j+1}).
    let directions_t = (1..=depth)
        .map(|j| direction_of_scaled(&repunit_points[j as usize - 1], j))
        .collect::<Result<Vec<_>>>()?;
    let directions_t_prime = (1..=depth)
        .map(|j| direction_of_scaled(&repunit_points[j as usize], j))
        .collect::<Result<Vec<_>>>()?;
    let direction_t = *directions_t.last().unwrap();
    let direction_t_prime = *directions_t_prime.last().unwrap();
    Ok(DoublePointReport {
        depth,
        angle: direction_t.angle(&direction_t_prime),
        angle_to_expected: direction_t.angle(&double_point_direction()),
        q_component: norm(&project_plane_q(&direction_t.0)),
        repunit_points,
        directions_t,
        directions_t_prime,
        direction_t,
        direction_t_prime,
    })
}

/// Ratios `d_{j+1} / d_j` of successive step angles of a direction sequence.
pub fn step_ratios(directions: &[UnitVec4]) -> Vec<f64> {
    let steps: Vec<f64> = directions.windows(2).map(|w| w[0].angle(&w[1])).collect();
    steps.windows(2).map(|w| w[1] / w[0]).collect()
}

/// Ratios `e_{j+1} / e_j` of successive angles to `limit`.
pub fn limit_ratios(directions: &[UnitVec4], limit: &UnitVec4) -> Vec<f64> {
    let errs: Vec<f64> = directions.iter().map(|d| d.angle(limit)).collect();
    errs.windows(2).map(|w| w[1] / w[0]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftedDoublePoint {
    pub depth: u32,
    pub direction_2t: UnitVec4,
    pub direction_2t_prime: UnitVec4,
    pub angle: f64,
    pub angle_to_expected: f64,
    pub q_component: f64,
    /// `||R(d_t) - d_2t||`, where `R` reflects about the line of `w_0`.
    pub w0_symmetry_residual: f64,
}

/// Reflection about the line spanned by `w_0`: `x -> 2 (x . w0) w0 - x`.
pub fn reflect_about_w0(x: &[f64; 4]) -> [f64; 4] {
    let w0 = w0_f64();
    let d: f64 = x.iter().zip(&w0).map(|(a, b)| a * b).sum();
    std::array::from_fn(|i| 2.0 * d * w0[i] - x[i])
}

/// The double point `S(2/3) ~ S(8/3)`, obtained by applying `T` to the
/// truncations used in [`double_point`].
pub fn double_point_shifted(depth: u32) -> Result<ShiftedDoublePoint> {
    let base = double_point(depth)?;
    let t = matrix_t();
    let j = depth as usize;
    let shifted = |v: &Vec4Z| {
        let scaled = if depth % 2 == 1 { matrix_m().apply_z(v) } else { *v };
        UnitVec4::from_z(&t.apply_z(&scaled))
    };
    let direction_2t = shifted(&base.repunit_points[j - 1])?;
    let direction_2t_prime = shifted(&base.repunit_points[j])?;
    let mirrored = UnitVec4(reflect_about_w0(&base.direction_t.0));
    Ok(ShiftedDoublePoint {
        depth,
        angle: direction_2t.angle(&direction_2t_prime),
        angle_to_expected: direction_2t.angle(&shifted_double_point_direction()),
        q_component: norm(&project_plane_q(&direction_2t.0)),
        w0_symmetry_residual: mirrored.distance(&direction_2t),
        direction_2t,
        direction_2t_prime,
    })
}

/// `S(t) / S_0(t)` for dyadic `t > 0`; the first coordinate is exactly 1.
pub fn central_projection(t: &DyadicRational) -> Result<[f64; 4]> {
    if t.is_negative() || t.is_zero() {
        return invalid(format!("central_projection needs t > 0, got {t}"));
    }
    let s = eval_dyadic(t)?;
    let e = s.0.iter().map(DyadicRational::exponent).max().unwrap_or(0);
    let nums: Vec<BigInt> = s.0.iter().map(|c| c.shl(e).to_integer().expect("integral")).collect();
    if nums[0].is_zero() {
        return Err(Error::Singular { index: 0, reason: format!("first coordinate of S({t}) is zero") });
    }
    let mut out = [1.0; 4];
    for i in 1..4 {
        out[i] = BigRational::new(nums[i].clone(), nums[0].clone()).to_f64().unwrap_or(f64::NAN);
    }
    Ok(out)
}

/// Weighted means `M_0 = A_0`,
/// `M_n = (σ_{n-1} M_{n-1} + a_n A_{n mod 4}) / σ_n` with `σ_n = a_0 + ... + a_n`.
///
/// Returns `M_0..=M_steps`. With `A_j = u_j` one has `σ_n = S_0(4(n + 1))`
/// and `M_n = S(n + 1) / σ_n`.
pub fn projective_sequence(anchors: &[[f64; 4]; 4], steps: usize) -> Result<Vec<[f64; 4]>> {
    if steps == 0 {
        return invalid("projective_sequence needs at least one step");
    }
    let mut points = Vec::with_capacity(steps + 1);
    let mut current = anchors[0];
    let mut sigma = sign_at(0).to_i64();
    points.push(current);
    for n in 1..=steps {
        let a = sign_at(n as u64).to_i64();
        let next_sigma = sigma + a;
        if next_sigma == 0 {
            return Err(Error::Singular { index: n as u64, reason: "a_0 + ... + a_n = 0".into() });
        }
        let anchor = &anchors[n % 4];
        current = std::array::from_fn(|i| (sigma as f64 * current[i] + a as f64 * anchor[i]) / next_sigma as f64);
        sigma = next_sigma;
        points.push(current);
    }
    Ok(points)
}

pub fn standard_anchors() -> [[f64; 4]; 4] {
    std::array::from_fn(|i| Vec4Z::unit(i).to_f64())
}

/// Unit direction of `S(n) - S(m)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DirectionSample {
    pub m: u64,
    pub n: u64,
    pub direction: UnitVec4,
}

/// Directions of `S(n) - S(m)` over `0 <= m < n <= n_max`, ordered by `(n, m)`.
pub fn direction_samples(n_max: u64) -> Result<Vec<DirectionSample>> {
    let points = curve_points(n_max);
    let mut out = Vec::new();
    for n in 1..=n_max {
        for m in 0..n {
            let d = points[n as usize] - points[m as usize];
            out.push(DirectionSample { m, n, direction: UnitVec4::from_z(&d)? });
        }
    }
    Ok(out)
}

/// Integer difference divided by the gcd of its coordinates.
fn primitive(v: Vec4Z) -> [i64; 4] {
    let g = v.0.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        v.0
    } else {
        v.0.map(|x| x / g)
    }
}

/// Cell of the equiangular cube-face grid on `S^3`: 8 faces times `k^3` cells.
pub fn grid_cell(v: &[f64; 4], k: usize) -> usize {
    let mut axis = 0;
    for i in 1..4 {
        if v[i].abs() > v[axis].abs() {
            axis = i;
        }
    }
    let face = 2 * axis + usize::from(v[axis] < 0.0);
    let scale = v[axis].abs();
    let mut cell = face;
    for i in (0..4).filter(|&i| i != axis) {
        let u = (v[i] / scale).atan() * 4.0 / std::f64::consts::PI;
        let idx = (((u + 1.0) / 2.0 * k as f64).floor() as usize).min(k - 1);
        cell = cell * k + idx;
    }
    cell
}

/// Center of a cell of [`grid_cell`], as a unit vector.
pub fn grid_cell_center(cell: usize, k: usize) -> UnitVec4 {
    let mut rest = cell;
    let mut idx = [0usize; 3];
    for slot in idx.iter_mut().rev() {
        *slot = rest % k;
        rest /= k;
    }
    let face = rest;
    let axis = face / 2;
    let sign = if face % 2 == 0 { 1.0 } else { -1.0 };
    let mut v = [0.0; 4];
    v[axis] = sign;
    for (slot, i) in (0..4).filter(|&i| i != axis).enumerate() {
        let u = (idx[slot] as f64 + 0.5) / k as f64 * 2.0 - 1.0;
        v[i] = (u * std::f64::consts::PI / 4.0).tan();
    }
    UnitVec4::normalize(v).expect("nonzero")
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub n_max: u64,
    pub pairs: u64,
    pub distinct_directions: usize,
    pub grid: usize,
    pub cells_total: usize,
    pub cells_occupied: usize,
    pub occupied_fraction: f64,
    pub probe_grid: usize,
    /// Largest angle from a probe direction to the nearest sampled direction:
    /// a lower estimate of the radius of the largest empty cap.
    pub largest_empty_cap: f64,
    pub largest_empty_cap_center: UnitVec4,
}

/// Exploratory coverage of `S^3` by the directions of `S(n) - S(m)`.
pub fn direction_density(n_max: u64, grid: usize, probe_grid: usize) -> Result<DensityReport> {
    if n_max < 1 || grid == 0 || probe_grid == 0 {
        return invalid("direction_density needs n_max >= 1 and positive grid sizes");
    }
    let points = curve_points(n_max);
    let mut distinct = BTreeSet::new();
    for n in 1..points.len() {
        for m in 0..n {
            distinct.insert(primitive(points[n] - points[m]));
        }
    }
    let dirs: Vec<UnitVec4> = distinct
        .iter()
        .map(|v| UnitVec4::from_z(&Vec4Z(*v)))
        .collect::<Result<_>>()?;
    let occupied: HashSet<usize> = dirs.iter().map(|d| grid_cell(&d.0, grid)).collect();
    let cells_total = 8 * grid.pow(3);

    let probes: Vec<UnitVec4> = (0..8 * probe_grid.pow(3)).map(|c| grid_cell_center(c, probe_grid)).collect();
    let nearest: Vec<f64> = probes
        .par_iter()
        .map(|p| {
            let best = dirs
                .iter()
                .map(|d| d.0.iter().zip(&p.0).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            best.clamp(-1.0, 1.0).acos()
        })
        .collect();
    let (arg, &cap) = nearest
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("probes");
    let pairs = n_max * (n_max + 1) / 2;
    Ok(DensityReport {
        n_max,
        pairs,
        distinct_directions: dirs.len(),
        grid,
        cells_total,
        cells_occupied: occupied.len(),
        occupied_fraction: occupied.len() as f64 / cells_total as f64,
        probe_grid,
        largest_empty_cap: cap,
        largest_empty_cap_center: probes[arg],
    })
}

/// What [`export_samples`] writes.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExportKind {
    /// `S(t)` at `samples` evenly spaced `t` in `[from, to]`.
    Curve { from: f64, to: f64, samples: usize },
    /// Radial projection, `t` geometrically spaced over `[from, 16 from]`.
    Sphere { from: f64, samples: usize },
    /// Central projection at evenly spaced `t` in `[from, to]`, `from > 0`.
    Central { from: f64, to: f64, samples: usize },
    /// `M_0..=M_steps` with anchors `u_0..u_3`.
    Projective { steps: usize },
    /// Directions of `S(n) - S(m)` for `n <= n_max`.
    Directions { n_max: u64 },
}

impl ExportKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExportKind::Curve { .. } => "curve",
            ExportKind::Sphere { .. } => "sphere",
            ExportKind::Central { .. } => "central",
            ExportKind::Projective { .. } => "projective",
            ExportKind::Directions { .. } => "directions",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize)]
struct ParamRecord {
    t: f64,
    x: [f64; 4],
}

#[derive(Clone, Debug, Serialize)]
struct IndexRecord {
    n: u64,
    x: [f64; 4],
}

#[derive(Clone, Debug, Serialize)]
struct PairDirectionRecord {
    m: u64,
    n: u64,
    x: [f64; 4],
}

enum Rows {
    Param(Vec<ParamRecord>),
    Index(Vec<IndexRecord>),
    Pair(Vec<PairDirectionRecord>),
}

fn build_rows(kind: &ExportKind) -> Result<Rows> {
    Ok(match *kind {
        ExportKind::Curve { from, to, samples } => {
            if !(from >= 0.0 && to >= from) {
                return invalid(format!("curve export needs 0 <= from <= to, got [{from}, {to}]"));
            }
            let rows = linear_params(from, to, samples)?
                .par_iter()
                .map(|&t| Ok(ParamRecord { t, x: eval_at_double(t)?.to_f64() }))
                .collect::<Result<_>>()?;
            Rows::Param(rows)
        }
        ExportKind::Sphere { from, samples } => {
            let params = {
                if !(from > 0.0 && from.is_finite()) {
                    return invalid(format!("anchor must be positive, got {from}"));
                }
                geometric_params(from, 16.0 * from, samples)?
            };
            let rows = params
                .par_iter()
                .map(|&t| Ok(ParamRecord { t, x: sphere_point_f64(t)?.0 }))
                .collect::<Result<_>>()?;
            Rows::Param(rows)
        }
        ExportKind::Central { from, to, samples } => {
            if !(from > 0.0 && to >= from) {
                return invalid(format!("central export needs 0 < from <= to, got [{from}, {to}]"));
            }
            let rows = linear_params(from, to, samples)?
                .par_iter()
                .map(|&t| Ok(ParamRecord { t, x: central_projection(&DyadicRational::from_f64(t)?)? }))
                .collect::<Result<_>>()?;
            Rows::Param(rows)
        }
        ExportKind::Projective { steps } => {
            let pts = projective_sequence(&standard_anchors(), steps)?;
            Rows::Index(pts.into_iter().enumerate().map(|(n, x)| IndexRecord { n: n as u64, x }).collect())
        }
        ExportKind::Directions { n_max } => Rows::Pair(
            direction_samples(n_max)?
                .into_iter()
                .map(|d| PairDirectionRecord { m: d.m, n: d.n, x: d.direction.0 })
                .collect(),
        ),
    })
}

fn fmt_row(lead: &[String], x: &[f64; 4]) -> Vec<String> {
    lead.iter().cloned().chain(x.iter().map(|v| v.to_string())).collect()
}

/// Writes sampled points of `kind` to `sink`; returns the number of records.
///
/// Output is deterministic: records are ordered by parameter and floats are
/// printed as shortest round-trip decimals.
pub fn export_samples(kind: &ExportKind, format: ExportFormat, sink: &mut dyn Write) -> Result<usize> {
    let rows = build_rows(kind)?;
    let count = match &rows {
        Rows::Param(r) => r.len(),
        Rows::Index(r) => r.len(),
        Rows::Pair(r) => r.len(),
    };
    match format {
        ExportFormat::Csv => {
            let (header, body): (&[&str], Vec<Vec<String>>) = match &rows {
                Rows::Param(r) => (
                    &["t", "x0", "x1", "x2", "x3"],
                    r.iter().map(|p| fmt_row(&[p.t.to_string()], &p.x)).collect(),
                ),
                Rows::Index(r) => (
                    &["n", "x0", "x1", "x2", "x3"],
                    r.iter().map(|p| fmt_row(&[p.n.to_string()], &p.x)).collect(),
                ),
                Rows::Pair(r) => (
                    &["m", "n", "x0", "x1", "x2", "x3"],
                    r.iter().map(|p| fmt_row(&[p.m.to_string(), p.n.to_string()], &p.x)).collect(),
                ),
            };
            write_csv(sink, header, &body)?;
        }
        ExportFormat::Json => {
            let data = match &rows {
                Rows::Param(r) => serde_json::to_value(r)?,
                Rows::Index(r) => serde_json::to_value(r)?,
                Rows::Pair(r) => serde_json::to_value(r)?,
            };
            let envelope = Envelope::new(format!("export {}", kind.name()), serde_json::to_value(kind)?, data);
            envelope.write(sink)?;
        }
    }
    Ok(count)
}
