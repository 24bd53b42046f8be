//! Upper Beurling density estimation for finite point sets and the
//! arithmetic-progression obstruction arithmetic.
//!
//! The asymptotic quantity D⁺(S) = limsup_r sup_x #(S ∩ B(x,r))/|B(x,r)| is
//! approximated by a finite-sample proxy: for each radius the supremum runs
//! over a center grid of spacing r/8, and the estimate is the maximum over
//! the two largest radii. Reports carry those parameters; the value is an
//! estimate, not a certified limsup.

use std::f64::consts::PI;
use thiserror::Error;

use crate::tiling::Rect;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("empty input")]
    EmptyInput,
    #[error("radius {radius} exceeds half the window inradius {inradius}")]
    RadiusExceedsWindow { radius: f64, inradius: f64 },
    #[error("radii must be positive and increasing")]
    BadRadii,
    #[error("angle is a multiple of pi/2 (sin or cos vanishes)")]
    DegenerateAngle,
    #[error("spacing must be positive")]
    BadSpacing,
    #[error("point lies outside the declared window")]
    PointOutsideWindow,
}

/// Finite point sample declared faithful inside `window`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet2D {
    points: Vec<[f64; 2]>,
    window: Rect,
}

impl PointSet2D {
    pub fn new(mut points: Vec<[f64; 2]>, window: Rect) -> Result<Self, DensityError> {
        if points.is_empty() {
            return Err(DensityError::EmptyInput);
        }
        for p in &points {
            if !window.contains(*p) {
                return Err(DensityError::PointOutsideWindow);
            }
        }
        points.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        points.dedup();
        Ok(Self { points, window })
    }

    /// Lattice Bℤ² truncated to the window.
    pub fn from_lattice_basis(basis: &crate::lattice::FloatMatrix, window: Rect) -> Self {
        // Index range large enough to cover the window corners.
        let inv = Matrix2Inverse::new(basis);
        let corners = [
            [window.x0, window.y0],
            [window.x0, window.y1],
            [window.x1, window.y0],
            [window.x1, window.y1],
        ];
        let mut m_lo = i64::MAX;
        let mut m_hi = i64::MIN;
        let mut n_lo = i64::MAX;
        let mut n_hi = i64::MIN;
        for c in corners {
            let [m, n] = inv.apply(c);
            m_lo = m_lo.min(m.floor() as i64 - 1);
            m_hi = m_hi.max(m.ceil() as i64 + 1);
            n_lo = n_lo.min(n.floor() as i64 - 1);
            n_hi = n_hi.max(n.ceil() as i64 + 1);
        }
        let mut points = Vec::new();
        for m in m_lo..=m_hi {
            for n in n_lo..=n_hi {
                let p = basis.apply([m as f64, n as f64]);
                if window.contains(p) {
                    points.push(p);
                }
            }
        }
        Self::new(points, window).expect("lattice truncation is nonempty")
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn window(&self) -> Rect {
        self.window
    }
}

struct Matrix2Inverse {
    inv: [[f64; 2]; 2],
}

impl Matrix2Inverse {
    fn new(m: &crate::lattice::FloatMatrix) -> Self {
        let det = m.a * m.d - m.b * m.c;
        Self {
            inv: [[m.d / det, -m.b / det], [-m.c / det, m.a / det]],
        }
    }

    fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.inv[0][0] * v[0] + self.inv[0][1] * v[1],
            self.inv[1][0] * v[0] + self.inv[1][1] * v[1],
        ]
    }
}

/// Per-radius estimate sup_x #(S ∩ B(x,r)) / (πr²).
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusEstimate {
    pub radius: f64,
    pub sup_density: f64,
    pub best_center: [f64; 2],
    pub center_grid_spacing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub per_radius: Vec<RadiusEstimate>,
    /// Max over the two largest radii.
    pub estimate: f64,
}

/// Upper Beurling density proxy over an increasing radius list. Balls must
/// fit inside the faithful window: r ≤ inradius/2.
pub fn upper_beurling_density(
    set: &PointSet2D,
    radii: &[f64],
) -> Result<DensityReport, DensityError> {
    if radii.is_empty() {
        return Err(DensityError::BadRadii);
    }
    for w in radii.windows(2) {
        if w[0] >= w[1] {
            return Err(DensityError::BadRadii);
        }
    }
    if radii[0] <= 0.0 {
        return Err(DensityError::BadRadii);
    }
    let inradius = set.window().inradius();
    let max_r = *radii.last().unwrap();
    if max_r > inradius / 2.0 {
        return Err(DensityError::RadiusExceedsWindow {
            radius: max_r,
            inradius,
        });
    }

    let mut per_radius = Vec::with_capacity(radii.len());
    for &r in radii {
        let spacing = r / 8.0;
        let w = set.window();
        // centers where B(x, r) stays inside the window
        let xs = grid_1d(w.x0 + r, w.x1 - r, spacing);
        let ys = grid_1d(w.y0 + r, w.y1 - r, spacing);
        let ball_area = PI * r * r;
        let r2 = r * r;
        let mut best = 0.0f64;
        let mut best_center = [0.0, 0.0];
        for &cx in &xs {
            for &cy in &ys {
                // closed ball |x − y| ≤ r
                let count = set
                    .points()
                    .iter()
                    .filter(|p| {
                        let dx = p[0] - cx;
                        let dy = p[1] - cy;
                        dx * dx + dy * dy <= r2 + 1e-12
                    })
                    .count();
                let dens = count as f64 / ball_area;
                if dens > best {
                    best = dens;
                    best_center = [cx, cy];
                }
            }
        }
        per_radius.push(RadiusEstimate {
            radius: r,
            sup_density: best,
            best_center,
            center_grid_spacing: spacing,
        });
    }

    let estimate = per_radius
        .iter()
        .rev()
        .take(2)
        .map(|e| e.sup_density)
        .fold(0.0, f64::max);
    Ok(DensityReport {
        per_radius,
        estimate,
    })
}

fn grid_1d(lo: f64, hi: f64, spacing: f64) -> Vec<f64> {
    if hi < lo {
        return vec![0.5 * (lo + hi)];
    }
    let n = ((hi - lo) / spacing).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * spacing).collect()
}

/// |sinθ · cosθ|, the density bound for product sets whose factors sit in
/// arithmetic progressions of spacings 1/|sinθ| and 1/|cosθ|. Always ≤ 1/2.
pub fn product_progression_bound(theta: f64) -> Result<f64, DensityError> {
    let (sin, cos) = theta.sin_cos();
    if sin.abs() < 1e-12 || cos.abs() < 1e-12 {
        return Err(DensityError::DegenerateAngle);
    }
    Ok((sin * cos).abs())
}

/// Containment of a finite set in an arithmetic progression φ + dℤ, with the
/// offset fitted by the circular mean of the residues mod d.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgressionFit {
    pub contained: bool,
    pub offset: f64,
    pub max_deviation: f64,
}

pub fn progression_containment(
    values: &[f64],
    spacing: f64,
    offset_tol: f64,
) -> Result<ProgressionFit, DensityError> {
    if values.is_empty() {
        return Err(DensityError::EmptyInput);
    }
    if spacing.is_nan() || spacing <= 0.0 {
        return Err(DensityError::BadSpacing);
    }
    // circular mean of residues a mod d, mapped to the unit circle
    let mut mean = num_complex::Complex64::new(0.0, 0.0);
    for &a in values {
        mean += num_complex::Complex64::from_polar(1.0, 2.0 * PI * (a / spacing));
    }
    let offset = if mean.norm() < 1e-12 {
        values[0].rem_euclid(spacing)
    } else {
        (mean.arg() / (2.0 * PI)).rem_euclid(1.0) * spacing
    };

    let mut max_dev = 0.0f64;
    for &a in values {
        let res = (a - offset).rem_euclid(spacing);
        let dev = res.min(spacing - res);
        max_dev = max_dev.max(dev);
    }
    Ok(ProgressionFit {
        contained: max_dev <= offset_tol,
        offset,
        max_deviation: max_dev,
    })
}
