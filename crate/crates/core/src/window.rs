//! Window-function models and the orthonormal-basis decision procedure.
//!
//! A compactly supported window generates a Gabor orthonormal basis over a
//! density-one lattice with π₁(Λ) = aℤ exactly when |g| = (1/√a)·1_Ω for a
//! bounded Ω that tiles ℝ by aℤ-translates. The decision pipeline here is
//! exact for piecewise windows; sampled windows go through a declared
//! flatness detector and rational quantization.

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::f64::consts::PI;
use thiserror::Error;

use crate::lattice::{density, project_first, Lattice2D, LatticeError, ProjectionResult};
use crate::scalar::{limit_denominator, rational_from_f64, FieldScalar, Rational};
use crate::signal::SampledSignal;
use crate::tiling::{tiles_by, FoldProfile, IntervalSet, TilingError};

/// Relative flatness tolerance for sampled-modulus runs, and for comparing a
/// quantized constant against 1/√a.
pub const FLATNESS_TOL: f64 = 1e-6;
/// Denominator bound when quantizing sampled data to rationals.
pub const QUANTIZE_DEN: u64 = 1_000_000;
/// Samples below this fraction of the peak modulus count as "outside the
/// support" for the sampled-window detector.
const SUPPORT_CUTOFF: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WindowError {
    #[error("piece has lo >= hi")]
    EmptyPiece,
    #[error("piece modulus must be positive")]
    NonPositiveModulus,
    #[error("pieces overlap")]
    OverlappingPieces,
    #[error("window has empty support")]
    EmptySupport,
    #[error("sampled modulus is not piecewise constant within tolerance")]
    NotPiecewiseConstant,
    #[error("chirp scale mu must be nonzero")]
    ZeroMu,
    #[error("tiling modulus must be a positive rational")]
    BadModulus,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

/// Phase e^{i(π(q·t² + 2·l·t) + c)} attached to one window piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPhase {
    pub quad: f64,
    pub lin: f64,
    pub constant: f64,
}

impl QuadPhase {
    pub const ZERO: Self = Self {
        quad: 0.0,
        lin: 0.0,
        constant: 0.0,
    };

    pub fn at(&self, t: f64) -> f64 {
        PI * (self.quad * t * t + 2.0 * self.lin * t) + self.constant
    }
}

/// One piece: constant modulus √(modulus_sq) on [lo, hi) with a quadratic
/// phase. The squared modulus is stored so that scalings by 1/√a stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowPiece {
    pub lo: Rational,
    pub hi: Rational,
    pub modulus_sq: Rational,
    pub phase: QuadPhase,
}

impl WindowPiece {
    pub fn modulus(&self) -> f64 {
        self.modulus_sq.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

/// Compactly supported window with piecewise-constant modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseWindow {
    pieces: Vec<WindowPiece>,
}

impl PiecewiseWindow {
    pub fn new(mut pieces: Vec<WindowPiece>) -> Result<Self, WindowError> {
        if pieces.is_empty() {
            return Err(WindowError::EmptySupport);
        }
        for p in &pieces {
            if p.lo >= p.hi {
                return Err(WindowError::EmptyPiece);
            }
            if p.modulus_sq <= Rational::zero() {
                return Err(WindowError::NonPositiveModulus);
            }
        }
        pieces.sort_by(|x, y| x.lo.cmp(&y.lo));
        for w in pieces.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(WindowError::OverlappingPieces);
            }
        }
        Ok(Self { pieces })
    }

    /// Indicator 1_{[lo, hi)}.
    pub fn indicator(lo: Rational, hi: Rational) -> Result<Self, WindowError> {
        Self::new(vec![WindowPiece {
            lo,
            hi,
            modulus_sq: Rational::one(),
            phase: QuadPhase::ZERO,
        }])
    }

    /// (1/√a)·1_{[lo, hi)} given a > 0 (modulus² = 1/a exactly).
    pub fn scaled_indicator(lo: Rational, hi: Rational, a: Rational) -> Result<Self, WindowError> {
        if a <= Rational::zero() {
            return Err(WindowError::BadModulus);
        }
        Self::new(vec![WindowPiece {
            lo,
            hi,
            modulus_sq: a.recip(),
            phase: QuadPhase::ZERO,
        }])
    }

    pub fn pieces(&self) -> &[WindowPiece] {
        &self.pieces
    }

    pub fn support(&self) -> IntervalSet<Rational> {
        IntervalSet::new(
            self.pieces
                .iter()
                .map(|p| (p.lo.clone(), p.hi.clone()))
                .collect(),
        )
        .expect("pieces are validated disjoint")
    }

    /// Exact squared L² norm Σ m²·length.
    pub fn norm_sq(&self) -> Rational {
        self.pieces.iter().fold(Rational::zero(), |acc, p| {
            acc + &p.modulus_sq * (&p.hi - &p.lo)
        })
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        for p in &self.pieces {
            let lo = p.lo.to_f64().unwrap();
            let hi = p.hi.to_f64().unwrap();
            if lo <= t && t < hi {
                return Complex64::from_polar(p.modulus(), p.phase.at(t));
            }
        }
        Complex64::new(0.0, 0.0)
    }

    /// Samples the window on a symmetric grid.
    pub fn to_signal(&self, t_half: f64, n: usize) -> SampledSignal<f64> {
        SampledSignal::from_fn_symmetric(t_half, n, |t| self.eval(t))
    }

    /// Hull of the support in float coordinates.
    pub fn support_hull(&self) -> (f64, f64) {
        let lo = self.pieces.first().unwrap().lo.to_f64().unwrap();
        let hi = self.pieces.last().unwrap().hi.to_f64().unwrap();
        (lo, hi)
    }
}

/// A window: exact piecewise form or uniformly sampled values.
#[derive(Debug, Clone, PartialEq)]
pub enum Window {
    Piecewise(PiecewiseWindow),
    Sampled(SampledSignal<f64>),
}

impl Window {
    pub fn indicator_unit() -> Self {
        Window::Piecewise(
            PiecewiseWindow::indicator(Rational::zero(), Rational::one()).unwrap(),
        )
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Window::Piecewise(w) => w.eval(t),
            Window::Sampled(s) => s.eval_linear(t),
        }
    }

    pub fn norm_sq_f64(&self) -> f64 {
        match self {
            Window::Piecewise(w) => w.norm_sq().to_f64().unwrap(),
            Window::Sampled(s) => {
                let n = s.norm_l2();
                n * n
            }
        }
    }
}

/// Modulus profile: support set plus the per-interval squared constants.
/// `quantized` is set when the data came from samples and the constants are
/// only trusted to the flatness tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusProfile {
    pub support: IntervalSet<Rational>,
    pub constants: Vec<(Rational, Rational, Rational)>,
    pub quantized: bool,
}

/// Extracts the support and per-interval modulus constants of a window.
pub fn modulus_profile(g: &Window) -> Result<ModulusProfile, WindowError> {
    match g {
        Window::Piecewise(w) => Ok(ModulusProfile {
            support: w.support(),
            constants: w
                .pieces()
                .iter()
                .map(|p| (p.lo.clone(), p.hi.clone(), p.modulus_sq.clone()))
                .collect(),
            quantized: false,
        }),
        Window::Sampled(s) => sampled_profile(s),
    }
}

fn sampled_profile(s: &SampledSignal<f64>) -> Result<ModulusProfile, WindowError> {
    let peak = s.max_abs();
    if peak <= 0.0 {
        return Err(WindowError::EmptySupport);
    }
    let cutoff = peak * SUPPORT_CUTOFF;
    let mut constants: Vec<(Rational, Rational, Rational)> = Vec::new();
    let mut run_start: Option<usize> = None;

    let mut close_run = |start: usize, end: usize| -> Result<(), WindowError> {
        // Run of active samples [start, end] inclusive.
        let moduli: Vec<f64> = (start..=end).map(|i| s.values[i].norm()).collect();
        let med = crate::special::median(&moduli);
        for m in &moduli {
            if (m - med).abs() > FLATNESS_TOL * med {
                return Err(WindowError::NotPiecewiseConstant);
            }
        }
        let lo = limit_denominator(s.t(start), QUANTIZE_DEN);
        let hi = limit_denominator(s.t(end) + s.step, QUANTIZE_DEN);
        let m = limit_denominator(med, QUANTIZE_DEN);
        constants.push((lo, hi, &m * &m));
        Ok(())
    };

    for i in 0..s.len() {
        let active = s.values[i].norm() > cutoff;
        match (active, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(start)) => {
                close_run(start, i - 1)?;
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(start) = run_start {
        close_run(start, s.len() - 1)?;
    }
    if constants.is_empty() {
        return Err(WindowError::EmptySupport);
    }
    let support = IntervalSet::new(
        constants
            .iter()
            .map(|(lo, hi, _)| (lo.clone(), hi.clone()))
            .collect(),
    )?;
    Ok(ModulusProfile {
        support,
        constants,
        quantized: true,
    })
}

/// Why a window does or does not generate an orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictReason {
    Ok,
    DenseProjection,
    DensityNotOne,
    ModulusNotConstant,
    WrongConstant,
    NotATiling,
}

impl VerdictReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictReason::Ok => "OK",
            VerdictReason::DenseProjection => "DenseProjection",
            VerdictReason::DensityNotOne => "DensityNotOne",
            VerdictReason::ModulusNotConstant => "ModulusNotConstant",
            VerdictReason::WrongConstant => "WrongConstant",
            VerdictReason::NotATiling => "NotATiling",
        }
    }
}

/// Structured outcome of the decision pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowVerdict {
    pub is_onb_window: bool,
    pub reason: VerdictReason,
    /// Fold profile of the support, when the pipeline got that far.
    pub fold_profile: Option<FoldProfile<Rational>>,
    /// Positive generator of π₁(Λ), when discrete.
    pub generator: Option<FieldScalar>,
}

impl WindowVerdict {
    fn fail(reason: VerdictReason) -> Self {
        debug_assert!(reason != VerdictReason::Ok);
        Self {
            is_onb_window: false,
            reason,
            fold_profile: None,
            generator: None,
        }
    }
}

/// Theorem-of-the-window check: verdict OK iff |g| is the single constant
/// 1/√a on its support Ω and Ω tiles ℝ by aℤ-translates. Phase is ignored.
pub fn characterize_window(g: &Window, a: &Rational) -> Result<WindowVerdict, WindowError> {
    if *a <= Rational::zero() {
        return Err(WindowError::BadModulus);
    }
    let profile = modulus_profile(g)?;

    // Single constant across the support?
    let first = &profile.constants[0].2;
    let constant_ok = if profile.quantized {
        profile.constants.iter().all(|(_, _, m2)| {
            let x = m2.to_f64().unwrap().sqrt();
            let y = first.to_f64().unwrap().sqrt();
            (x - y).abs() <= FLATNESS_TOL * y
        })
    } else {
        profile.constants.iter().all(|(_, _, m2)| m2 == first)
    };
    if !constant_ok {
        return Ok(WindowVerdict::fail(VerdictReason::ModulusNotConstant));
    }

    // Constant equals 1/√a?
    let target = a.recip();
    let value_ok = if profile.quantized {
        let m = first.to_f64().unwrap().sqrt();
        let want = target.to_f64().unwrap().sqrt();
        (m - want).abs() <= FLATNESS_TOL * want
    } else {
        *first == target
    };
    if !value_ok {
        return Ok(WindowVerdict::fail(VerdictReason::WrongConstant));
    }

    let (ok, fold) = tiles_by(&profile.support, a)?;
    Ok(WindowVerdict {
        is_onb_window: ok,
        reason: if ok {
            VerdictReason::Ok
        } else {
            VerdictReason::NotATiling
        },
        fold_profile: Some(fold),
        generator: None,
    })
}

/// Chirp operator (U_S f)(t) = |μ|^{-1/2} e^{iπ(ν/μ)t²} f(t/μ).
pub fn apply_chirp(g: &Window, mu: f64, nu: f64) -> Result<Window, WindowError> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(WindowError::ZeroMu);
    }
    match g {
        Window::Piecewise(w) => {
            let mu_exact = rational_from_f64(mu).expect("finite float");
            let mu_abs = mu_exact.clone().abs();
            let pieces = w
                .pieces()
                .iter()
                .map(|p| {
                    let e0 = &p.lo * &mu_exact;
                    let e1 = &p.hi * &mu_exact;
                    let (lo, hi) = if mu > 0.0 { (e0, e1) } else { (e1, e0) };
                    WindowPiece {
                        lo,
                        hi,
                        modulus_sq: &p.modulus_sq / &mu_abs,
                        phase: QuadPhase {
                            quad: p.phase.quad / (mu * mu) + nu / mu,
                            lin: p.phase.lin / mu,
                            constant: p.phase.constant,
                        },
                    }
                })
                .collect();
            Ok(Window::Piecewise(PiecewiseWindow::new(pieces)?))
        }
        Window::Sampled(s) => {
            let n = s.len();
            let scale = mu.abs().powf(-0.5);
            let step = s.step * mu.abs();
            let (t_min, reversed) = if mu > 0.0 {
                (s.t_min * mu, false)
            } else {
                (s.t(n - 1) * mu, true)
            };
            let values = (0..n)
                .map(|i| {
                    let src = if reversed { n - 1 - i } else { i };
                    let t = t_min + step * i as f64;
                    let chirp = Complex64::from_polar(scale, PI * (nu / mu) * t * t);
                    chirp * s.values[src]
                })
                .collect();
            Ok(Window::Sampled(SampledSignal {
                t_min,
                step,
                values,
            }))
        }
    }
}

/// Full decision: density 1, discrete projection, window characterization.
pub fn decide_onb(g: &Window, lattice: &Lattice2D) -> Result<WindowVerdict, WindowError> {
    let dens = density(lattice)?;
    if !lattice.is_exact() {
        return Err(LatticeError::ExactBackendRequired.into());
    }
    if !dens.is_one() {
        return Ok(WindowVerdict::fail(VerdictReason::DensityNotOne));
    }
    match project_first(lattice)? {
        ProjectionResult::Dense => Ok(WindowVerdict::fail(VerdictReason::DenseProjection)),
        ProjectionResult::Zero => Err(LatticeError::DegenerateFirstRow.into()),
        ProjectionResult::Discrete(tau) => {
            let mut verdict = match tau.as_rational() {
                Some(a) => characterize_window(g, a)?,
                // A rational-endpoint window can never have modulus 1/√a
                // with a irrational.
                None => WindowVerdict::fail(VerdictReason::WrongConstant),
            };
            verdict.generator = Some(tau);
            Ok(verdict)
        }
    }
}
