//! Translational tilings: exact verification that a finite interval union
//! tiles ℝ by aℤ-translates, and desk-scale verification/classification of
//! unit-cube tilings of ℝ² on truncated point sets.
//!
//! Half-open intervals `[lo, hi)` are used throughout so that "overlap of
//! measure zero" checks need no tolerance bookkeeping in the exact case.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Num, Signed, ToPrimitive};
use thiserror::Error;

use crate::scalar::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TilingError {
    #[error("interval has lo >= hi")]
    EmptyInterval,
    #[error("intervals overlap on a set of positive measure")]
    OverlappingIntervals,
    #[error("endpoint is not finite")]
    NonFiniteEndpoint,
    #[error("modulus must be positive")]
    NonPositiveModulus,
    #[error("set spans too many translates to fold (cap {0})")]
    UnboundedSet(usize),
    #[error("point list does not cover the region dilated by the margin")]
    InsufficientMargin,
    #[error("region must have area >= 4 with both sides >= 2")]
    RegionTooSmall,
    #[error("empty input point list")]
    EmptyInput,
}

/// Scalar endpoints an interval set can carry: exact rationals or floats.
pub trait IntervalScalar: Num + Signed + PartialOrd + Clone + fmt::Debug {
    fn from_i64(n: i64) -> Self;
    /// floor(self / a) for a > 0.
    fn floor_div(&self, a: &Self) -> i64;
    fn to_f64(&self) -> f64;
    fn is_finite_value(&self) -> bool {
        true
    }
    fn half(&self) -> Self;
}

impl IntervalScalar for Rational {
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn floor_div(&self, a: &Self) -> i64 {
        (self / a).floor().to_integer().to_i64().expect("fold index fits i64")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn half(&self) -> Self {
        self / Rational::from_integer(2.into())
    }
}

impl IntervalScalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn floor_div(&self, a: &Self) -> i64 {
        (self / a).floor() as i64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn half(&self) -> Self {
        self / 2.0
    }
}

/// Finite union of disjoint, sorted, half-open intervals `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet<S> {
    intervals: Vec<(S, S)>,
}

impl<S: IntervalScalar> IntervalSet<S> {
    /// Builds a set from raw intervals. Touching intervals are merged;
    /// intervals overlapping on positive measure are rejected.
    pub fn new(mut intervals: Vec<(S, S)>) -> Result<Self, TilingError> {
        for (lo, hi) in &intervals {
            if !lo.is_finite_value() || !hi.is_finite_value() {
                return Err(TilingError::NonFiniteEndpoint);
            }
            if lo >= hi {
                return Err(TilingError::EmptyInterval);
            }
        }
        intervals.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite endpoints"));
        let mut merged: Vec<(S, S)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            match merged.last_mut() {
                Some(last) if lo < last.1 => return Err(TilingError::OverlappingIntervals),
                Some(last) if lo == last.1 => last.1 = hi,
                _ => merged.push((lo, hi)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn single(lo: S, hi: S) -> Result<Self, TilingError> {
        Self::new(vec![(lo, hi)])
    }

    pub fn intervals(&self) -> &[(S, S)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> S {
        self.intervals
            .iter()
            .fold(S::zero(), |acc, (lo, hi)| acc + (hi.clone() - lo.clone()))
    }

    pub fn translate(&self, t: &S) -> Self {
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|(lo, hi)| (lo.clone() + t.clone(), hi.clone() + t.clone()))
                .collect(),
        }
    }

    pub fn contains(&self, x: &S) -> bool {
        self.intervals
            .iter()
            .any(|(lo, hi)| lo <= x && x < hi)
    }

    /// Hull `[min lo, max hi)`, or None when empty.
    pub fn bounds(&self) -> Option<(S, S)> {
        let first = self.intervals.first()?;
        let last = self.intervals.last()?;
        Some((first.0.clone(), last.1.clone()))
    }

    pub fn to_f64(&self) -> IntervalSet<f64> {
        IntervalSet {
            intervals: self
                .intervals
                .iter()
                .map(|(lo, hi)| (lo.to_f64(), hi.to_f64()))
                .collect(),
        }
    }
}

/// One constant piece of a folded multiplicity profile.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldPiece<S> {
    pub lo: S,
    pub hi: S,
    pub multiplicity: u32,
}

/// Piecewise-constant profile of `x ↦ #{k : x + a·k ∈ Ω}` on `[0, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldProfile<S> {
    pub modulus: S,
    pub pieces: Vec<FoldPiece<S>>,
}

impl<S: IntervalScalar> FoldProfile<S> {
    /// Σ piece length × multiplicity; equals measure(Ω) by construction.
    pub fn weighted_measure(&self) -> S {
        self.pieces.iter().fold(S::zero(), |acc, p| {
            let len = p.hi.clone() - p.lo.clone();
            let mut m = S::zero();
            for _ in 0..p.multiplicity {
                m = m + len.clone();
            }
            acc + m
        })
    }

    pub fn is_exact_tiling(&self) -> bool {
        self.pieces.iter().all(|p| p.multiplicity == 1)
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.pieces.iter().map(|p| p.multiplicity).max().unwrap_or(0)
    }
}

pub const DEFAULT_FOLD_CAP: usize = 1 << 20;

/// Folds Ω into `[0, a)` and records the exact multiplicity profile.
pub fn fold_mod<S: IntervalScalar>(
    omega: &IntervalSet<S>,
    a: &S,
) -> Result<FoldProfile<S>, TilingError> {
    fold_mod_with_cap(omega, a, DEFAULT_FOLD_CAP)
}

pub fn fold_mod_with_cap<S: IntervalScalar>(
    omega: &IntervalSet<S>,
    a: &S,
    cap: usize,
) -> Result<FoldProfile<S>, TilingError> {
    if *a <= S::zero() {
        return Err(TilingError::NonPositiveModulus);
    }

    // Slice every interval along the aℤ grid and shift each slice into [0, a).
    let mut slices: Vec<(S, S)> = Vec::new();
    for (lo, hi) in omega.intervals() {
        let k_lo = lo.floor_div(a);
        let mut k = k_lo;
        loop {
            let cell_lo = a.clone() * S::from_i64(k);
            if cell_lo >= *hi {
                break;
            }
            let cell_hi = a.clone() * S::from_i64(k + 1);
            let s_lo = if *lo > cell_lo { lo.clone() } else { cell_lo.clone() };
            let s_hi = if *hi < cell_hi { hi.clone() } else { cell_hi.clone() };
            if s_lo < s_hi {
                slices.push((s_lo - cell_lo.clone(), s_hi - cell_lo));
            }
            if slices.len() > cap {
                return Err(TilingError::UnboundedSet(cap));
            }
            k += 1;
        }
    }

    // Breakpoints of the profile: all slice endpoints plus 0 and a.
    let mut cuts: Vec<S> = vec![S::zero(), a.clone()];
    for (lo, hi) in &slices {
        cuts.push(lo.clone());
        cuts.push(hi.clone());
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite endpoints"));
    cuts.dedup();

    let mut pieces: Vec<FoldPiece<S>> = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0].clone(), w[1].clone());
        let mid = (lo.clone() + hi.clone()).half();
        let mult = slices
            .iter()
            .filter(|(slo, shi)| *slo <= mid && mid < *shi)
            .count() as u32;
        match pieces.last_mut() {
            Some(last) if last.multiplicity == mult && last.hi == lo => last.hi = hi,
            _ => pieces.push(FoldPiece {
                lo,
                hi,
                multiplicity: mult,
            }),
        }
    }

    Ok(FoldProfile {
        modulus: a.clone(),
        pieces,
    })
}

/// True iff Ω tiles ℝ with aℤ-translates (every fold multiplicity is 1).
pub fn tiles_by<S: IntervalScalar>(
    omega: &IntervalSet<S>,
    a: &S,
) -> Result<(bool, FoldProfile<S>), TilingError> {
    let profile = fold_mod(omega, a)?;
    Ok((profile.is_exact_tiling(), profile))
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x0 < x1 && y0 < y1, "degenerate rectangle");
        Self { x0, x1, y0, y1 }
    }

    pub fn centered_square(half_side: f64) -> Self {
        Self::new(-half_side, half_side, -half_side, half_side)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn dilate(&self, r: f64) -> Self {
        Self::new(self.x0 - r, self.x1 + r, self.y0 - r, self.y1 + r)
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.x0 <= p[0] && p[0] <= self.x1 && self.y0 <= p[1] && p[1] <= self.y1
    }

    /// Radius of the largest inscribed disk.
    pub fn inradius(&self) -> f64 {
        0.5 * self.width().min(self.height())
    }
}

pub const DEFAULT_CUBE_MARGIN: f64 = 1.0;

/// Checks that `[0,1]² + points` covers `region` exactly once, using the
/// arrangement of translated cube edges (each arrangement cell is tested at
/// its midpoint). The point list must extend at least `margin` beyond the
/// region so no covering cube is missing from the sample.
pub fn is_cube_tiling(
    points: &[[f64; 2]],
    region: Rect,
    tol: f64,
) -> Result<bool, TilingError> {
    is_cube_tiling_with(points, region, tol, DEFAULT_CUBE_MARGIN)
}

pub fn is_cube_tiling_with(
    points: &[[f64; 2]],
    region: Rect,
    tol: f64,
    margin: f64,
) -> Result<bool, TilingError> {
    if points.is_empty() {
        return Err(TilingError::EmptyInput);
    }
    if region.width() < 2.0 || region.height() < 2.0 || region.width() * region.height() < 4.0 {
        return Err(TilingError::RegionTooSmall);
    }
    let needed = region.dilate(margin - tol);
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        min_x = min_x.min(p[0]);
        max_x = max_x.max(p[0]);
        min_y = min_y.min(p[1]);
        max_y = max_y.max(p[1]);
    }
    if min_x > needed.x0 || max_x + 1.0 < needed.x1 || min_y > needed.y0 || max_y + 1.0 < needed.y1
    {
        return Err(TilingError::InsufficientMargin);
    }

    let xs = edge_coords(points.iter().map(|p| p[0]), region.x0, region.x1, tol);
    let ys = edge_coords(points.iter().map(|p| p[1]), region.y0, region.y1, tol);

    for wx in xs.windows(2) {
        if wx[1] - wx[0] <= 2.0 * tol {
            continue;
        }
        let mx = 0.5 * (wx[0] + wx[1]);
        for wy in ys.windows(2) {
            if wy[1] - wy[0] <= 2.0 * tol {
                continue;
            }
            let my = 0.5 * (wy[0] + wy[1]);
            let count = points
                .iter()
                .filter(|p| {
                    let dx = mx - p[0];
                    let dy = my - p[1];
                    0.0 < dx && dx < 1.0 && 0.0 < dy && dy < 1.0
                })
                .count();
            if count != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sorted, tol-deduplicated arrangement coordinates within [lo, hi]:
/// region edges plus every cube edge (λ and λ+1) falling inside.
fn edge_coords(values: impl Iterator<Item = f64>, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    let mut coords = vec![lo, hi];
    for v in values {
        for edge in [v, v + 1.0] {
            if lo < edge && edge < hi {
                coords.push(edge);
            }
        }
    }
    coords.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    let mut out: Vec<f64> = Vec::with_capacity(coords.len());
    for c in coords {
        match out.last() {
            Some(&prev) if c - prev <= tol => {}
            _ => out.push(c),
        }
    }
    out
}

/// Structural classification of a unit-cube tiling sample: rows of shifted
/// integer grids (`Lambda1`), columns of shifted integer grids (`Lambda2`),
/// or neither.
#[derive(Debug, Clone, PartialEq)]
pub enum CubeTilingClass {
    Lambda1 {
        z: [f64; 2],
        shifts: BTreeMap<i64, f64>,
    },
    Lambda2 {
        z: [f64; 2],
        shifts: BTreeMap<i64, f64>,
    },
    Neither,
}

/// Classifies a (caller-verified) cube tiling sample as Λ₁ or Λ₂, extracting
/// the base point z and the per-row (or per-column) shifts s_k ∈ [0,1) with
/// s_0 = 0 whenever row/column 0 is present. Ties report Λ₁.
pub fn classify_cube_tiling(
    points: &[[f64; 2]],
    tol: f64,
) -> Result<CubeTilingClass, TilingError> {
    if points.is_empty() {
        return Err(TilingError::EmptyInput);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        a.partial_cmp(b)
            .expect("finite coordinates")
    });

    if let Some((z, shifts)) = try_row_structure(&pts, tol, false) {
        return Ok(CubeTilingClass::Lambda1 { z, shifts });
    }
    if let Some((z, shifts)) = try_row_structure(&pts, tol, true) {
        let (z, shifts) = (z, shifts);
        return Ok(CubeTilingClass::Lambda2 {
            z: [z[1], z[0]],
            shifts,
        });
    }
    Ok(CubeTilingClass::Neither)
}

/// Λ₁-style detection: second coordinate on z₂ + ℤ, first coordinate on
/// z₁ + s_k + ℤ within each row. With `swap` the roles of the coordinates
/// are exchanged (Λ₂ detection). Returned z is in swapped coordinates.
fn try_row_structure(
    pts: &[[f64; 2]],
    tol: f64,
    swap: bool,
) -> Option<([f64; 2], BTreeMap<i64, f64>)> {
    let coord = |p: &[f64; 2], i: usize| if swap { p[1 - i] } else { p[i] };

    let nearest = pts
        .iter()
        .min_by(|a, b| {
            let ra = a[0] * a[0] + a[1] * a[1];
            let rb = b[0] * b[0] + b[1] * b[1];
            ra.partial_cmp(&rb).expect("finite coordinates")
        })
        .expect("nonempty");
    let mut z1 = frac(coord(nearest, 0));
    let z2 = frac(coord(nearest, 1));

    let mut rows: BTreeMap<i64, f64> = BTreeMap::new();
    for p in pts {
        let dy = coord(p, 1) - z2;
        let k = dy.round();
        if (dy - k).abs() > tol {
            return None;
        }
        let u = frac(coord(p, 0) - z1);
        match rows.get(&(k as i64)) {
            Some(&s) => {
                if circular_distance(u, s) > tol {
                    return None;
                }
            }
            None => {
                rows.insert(k as i64, u);
            }
        }
    }

    // Rebase on row 0 when present so that s_0 = 0 exactly.
    if let Some(&s0) = rows.get(&0) {
        if s0 > tol {
            z1 = frac(z1 + s0);
            for s in rows.values_mut() {
                *s = frac(*s - s0);
            }
        } else {
            rows.insert(0, 0.0);
        }
    }
    // Snap near-1 shifts (circularly near 0) to 0.
    for s in rows.values_mut() {
        if *s > 1.0 - tol {
            *s = 0.0;
        }
    }

    Some(([z1, z2], rows))
}

fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}
