//! Fractional Fourier transform engine.
//!
//! The spectral definition F_θ f = Σ e^{-inθ} ⟨f, h_n⟩ h_n over the Hermite
//! basis is the source of truth; the fast path evaluates the equivalent
//! chirp–transform–chirp kernel on a uniform grid, with exact special
//! branches at multiples of π/2 (identity, Fourier, reflection, inverse).
//! `verify_eigen` cross-validates the kernel constant against the spectral
//! definition.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};
use thiserror::Error;

use crate::signal::{Real, SampledSignal};
use crate::special::oscillatory_segment;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrftError {
    #[error("grid must have at least 64 points, a power of two")]
    BadGridSize,
    #[error("grid half-width must be at least 4")]
    BadGridWidth,
    #[error("grid is under-resolved: need n >= 4·t_half² so the step resolves frequencies up to t_half")]
    GridUnderResolved,
    #[error("input signal is not on the plan grid")]
    GridMismatch,
    #[error("theta is within the ill-conditioned band around a multiple of pi/2; compose with the exact quarter transform instead")]
    AngleIllConditioned,
    #[error("hermite order {0} exceeds the recurrence stability bound 64")]
    OrderTooLarge(usize),
    #[error("angle is a multiple of pi/2 (degenerate for this operation)")]
    DegenerateAngle,
}

/// Width of the exact special-angle window around (π/2)ℤ.
pub const SPECIAL_ANGLE_EPS: f64 = 1e-12;
/// Angles closer than this to (π/2)ℤ (but not special) are rejected.
pub const ILL_CONDITIONED_BAND: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    /// θ ≡ k·π/2 with k = 0..3.
    Special(u8),
    /// General chirp–transform–chirp evaluation.
    Kernel,
}

/// Transform plan: angle, grid, and the FFT machinery for the Bluestein
/// evaluation. Immutable and shareable across calls.
pub struct FrftPlan<T: Real> {
    theta: f64,
    t_half: T,
    n: usize,
    branch: Branch,
    fft_forward: Arc<dyn Fft<T>>,
    fft_inverse: Arc<dyn Fft<T>>,
    conv_len: usize,
}

/// Transform output with the soft edge-mass warning.
#[derive(Debug, Clone, PartialEq)]
pub struct FrftOutput<T> {
    pub signal: SampledSignal<T>,
    /// Set when |f| at the grid edges exceeds 1e-6 of the peak, i.e. the
    /// signal does not decay inside the window and truncation error is
    /// suspect.
    pub edge_warning: bool,
}

impl<T: Real> std::fmt::Debug for FrftPlan<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FrftPlan")
            .field("theta", &self.theta)
            .field("t_half", &self.t_half)
            .field("n", &self.n)
            .field("branch", &self.branch)
            .finish()
    }
}

impl<T: Real> FrftPlan<T> {
    pub fn new(theta: f64, t_half: f64, n: usize) -> Result<Self, FrftError> {
        if n < 64 || !n.is_power_of_two() {
            return Err(FrftError::BadGridSize);
        }
        if t_half.is_nan() || t_half < 4.0 {
            return Err(FrftError::BadGridWidth);
        }
        // Output frequencies range over [-t_half, t_half); the input step
        // must satisfy the Nyquist bound for them or the transform aliases.
        if (n as f64) < 4.0 * t_half * t_half {
            return Err(FrftError::GridUnderResolved);
        }
        let theta = theta.rem_euclid(2.0 * std::f64::consts::PI);
        let quarter = std::f64::consts::FRAC_PI_2;
        let k = (theta / quarter).round();
        let delta = theta - k * quarter;
        let branch = if delta.abs() <= SPECIAL_ANGLE_EPS {
            Branch::Special((k as i64).rem_euclid(4) as u8)
        } else if delta.abs() < ILL_CONDITIONED_BAND {
            return Err(FrftError::AngleIllConditioned);
        } else {
            Branch::Kernel
        };
        // Bluestein correlation length: linear convolution of N with 2N-1.
        let conv_len = (3 * n - 2).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fft_forward = planner.plan_fft(conv_len, FftDirection::Forward);
        let fft_inverse = planner.plan_fft(conv_len, FftDirection::Inverse);
        Ok(Self {
            theta,
            t_half: T::of_f64(t_half),
            n,
            branch,
            fft_forward,
            fft_inverse,
            conv_len,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn grid_len(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> T {
        (self.t_half + self.t_half) / T::of_f64(self.n as f64)
    }

    /// The plan's sampling grid (symmetric, right endpoint excluded).
    pub fn grid_signal(&self, f: impl Fn(T) -> Complex<T>) -> SampledSignal<T> {
        SampledSignal::from_fn(-self.t_half, self.step(), self.n, f)
    }

    fn check_grid(&self, f: &SampledSignal<T>) -> Result<(), FrftError> {
        let tol = self.step() * T::of_f64(1e-9);
        if f.len() != self.n
            || (f.t_min + self.t_half).abs() > tol
            || (f.step - self.step()).abs() > tol
        {
            return Err(FrftError::GridMismatch);
        }
        Ok(())
    }

    /// Applies F_θ to a signal on the plan grid.
    pub fn transform(&self, f: &SampledSignal<T>) -> Result<FrftOutput<T>, FrftError> {
        self.check_grid(f)?;
        let peak = f.max_abs();
        let edge = f.values[0].norm().max(f.values[self.n - 1].norm());
        let edge_warning = edge > peak * T::of_f64(1e-6) && peak > T::zero();

        let values = match self.branch {
            Branch::Special(0) => f.values.clone(),
            Branch::Special(1) => self.scaled_fourier(&f.values, 1.0, false),
            Branch::Special(2) => reflect(&f.values),
            Branch::Special(_) => {
                // F^{-1} g = conj(F(conj g))
                let conj: Vec<_> = f.values.iter().map(|v| v.conj()).collect();
                let fwd = self.scaled_fourier(&conj, 1.0, false);
                fwd.iter().map(|v| v.conj()).collect()
            }
            Branch::Kernel => self.kernel_transform(&f.values),
        };
        Ok(FrftOutput {
            signal: SampledSignal {
                t_min: f.t_min,
                step: f.step,
                values,
            },
            edge_warning,
        })
    }

    /// Kernel branch. For θ ∈ (π, 2π) uses F_θ = R ∘ F_{θ−π} so the kernel
    /// constant is only needed on (0, π), where √(1 − i·cotθ) has the
    /// principal value γ_θ·|sinθ|^{-1/2} with γ_θ = e^{i(θ/2 − π/4)}.
    fn kernel_transform(&self, values: &[Complex<T>]) -> Vec<Complex<T>> {
        let (theta, reflected) = if self.theta > std::f64::consts::PI {
            (self.theta - std::f64::consts::PI, true)
        } else {
            (self.theta, false)
        };
        let sin = theta.sin();
        let cot = theta.cos() / sin;
        let gamma = Complex::<f64>::from_polar(1.0, 0.5 * theta - std::f64::consts::FRAC_PI_4);
        let amp = gamma * sin.abs().powf(-0.5);

        let h = self.step().as_f64();
        let t0 = -self.t_half.as_f64();
        // input chirp e^{iπ x² cotθ}
        let chirped: Vec<Complex<T>> = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = t0 + h * i as f64;
                let ph = std::f64::consts::PI * x * x * cot;
                v * Complex::new(T::of_f64(ph.cos()), T::of_f64(ph.sin()))
            })
            .collect();
        let transformed = self.scaled_fourier(&chirped, sin, true);
        let out: Vec<Complex<T>> = transformed
            .iter()
            .enumerate()
            .map(|(m, v)| {
                let xi = t0 + h * m as f64;
                let ph = std::f64::consts::PI * xi * xi * cot;
                let factor = amp * Complex::<f64>::from_polar(1.0, ph);
                v * Complex::new(T::of_f64(factor.re), T::of_f64(factor.im))
            })
            .collect();
        if reflected {
            reflect(&out)
        } else {
            out
        }
    }

    /// Continuous-Fourier evaluation on the plan grid at scaled frequencies:
    /// S_m = h·Σ_n w_n f_n e^{-2πi x_n x_m / s}, with trapezoid end weights.
    /// Bluestein factorization turns the x_n·x_m cross term into one linear
    /// convolution of length conv_len.
    fn scaled_fourier(&self, values: &[Complex<T>], s: f64, trapezoid: bool) -> Vec<Complex<T>> {
        let n = self.n;
        let h = self.step().as_f64();
        let t = self.t_half.as_f64();
        let c = h * h / s;
        let pi = std::f64::consts::PI;
        let cx = |ph: f64| Complex::new(T::of_f64(ph.cos()), T::of_f64(ph.sin()));

        // u_k = w_k f_{n-1-k} e^{2πiT h (n-1-k)/s + iπc (n-1-k)²} (reversed)
        let mut u = vec![Complex::new(T::zero(), T::zero()); self.conv_len];
        for j in 0..n {
            let w = if trapezoid && (j == 0 || j == n - 1) {
                T::of_f64(0.5)
            } else {
                T::one()
            };
            let jf = j as f64;
            let phase = 2.0 * pi * t * h * jf / s + pi * c * jf * jf;
            u[n - 1 - j] = values[j] * cx(phase) * w;
        }
        // v_j = e^{-iπ c j²}, j = 0..2n-2
        let mut v = vec![Complex::new(T::zero(), T::zero()); self.conv_len];
        for (j, slot) in v.iter_mut().enumerate().take(2 * n - 1) {
            let jf = j as f64;
            *slot = cx(-pi * c * jf * jf);
        }

        self.fft_forward.process(&mut u);
        self.fft_forward.process(&mut v);
        for (a, b) in u.iter_mut().zip(&v) {
            *a *= *b;
        }
        self.fft_inverse.process(&mut u);
        let scale = T::of_f64(1.0 / self.conv_len as f64);

        (0..n)
            .map(|m| {
                let mf = m as f64;
                let phase = -2.0 * pi * t * t / s + 2.0 * pi * t * h * mf / s + pi * c * mf * mf;
                let w = u[m + n - 1] * scale;
                w * cx(phase) * T::of_f64(h)
            })
            .collect()
    }
}

/// Index reversal t ↦ −t on the symmetric grid (the +T sample, absent from
/// the grid, wraps to −T; decay at the edges makes this exact in practice).
fn reflect<T: Real>(values: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = values.len();
    (0..n).map(|i| values[(n - i) % n]).collect()
}

/// Normalized Hermite function h_n sampled on the symmetric grid, via the
/// stable three-term recurrence
/// h_{n+1}(t) = t·√(4π/(n+1))·h_n(t) − √(n/(n+1))·h_{n-1}(t),
/// h_0(t) = 2^{1/4} e^{-πt²}. Eigenfunctions of the Fourier transform with
/// eigenvalues (-i)^n.
pub fn hermite<T: Real>(order: usize, t_half: f64, n: usize) -> Result<SampledSignal<T>, FrftError> {
    if order > 64 {
        return Err(FrftError::OrderTooLarge(order));
    }
    if n < 64 || !n.is_power_of_two() {
        return Err(FrftError::BadGridSize);
    }
    if t_half.is_nan() || t_half < 4.0 {
        return Err(FrftError::BadGridWidth);
    }
    let step = 2.0 * t_half / n as f64;
    let pi = std::f64::consts::PI;
    let mut prev: Vec<f64> = Vec::new();
    let mut cur: Vec<f64> = (0..n)
        .map(|i| {
            let t = -t_half + step * i as f64;
            2f64.powf(0.25) * (-pi * t * t).exp()
        })
        .collect();
    for m in 0..order {
        let a = (4.0 * pi / (m as f64 + 1.0)).sqrt();
        let b = (m as f64 / (m as f64 + 1.0)).sqrt();
        let next: Vec<f64> = (0..n)
            .map(|i| {
                let t = -t_half + step * i as f64;
                let lower = if m == 0 { 0.0 } else { b * prev[i] };
                a * t * cur[i] - lower
            })
            .collect();
        prev = std::mem::replace(&mut cur, next);
    }
    let _ = prev;
    Ok(SampledSignal {
        t_min: T::of_f64(-t_half),
        step: T::of_f64(step),
        values: cur
            .into_iter()
            .map(|x| Complex::new(T::of_f64(x), T::zero()))
            .collect(),
    })
}

/// Relative eigenvector residual ‖F_θ h_n − e^{-inθ} h_n‖ / ‖h_n‖. This is
/// the cross-check of the kernel constant against the spectral definition.
pub fn verify_eigen(theta: f64, order: usize, t_half: f64, n: usize) -> Result<f64, FrftError> {
    let h: SampledSignal<f64> = hermite(order, t_half, n)?;
    let plan = FrftPlan::<f64>::new(theta, t_half, n)?;
    let out = plan.transform(&h)?;
    let eigen = Complex::<f64>::from_polar(1.0, -(order as f64) * theta);
    let mut num = 0.0;
    let mut den = 0.0;
    for (got, want) in out.signal.values.iter().zip(&h.values) {
        num += (got - want * eigen).norm_sqr();
        den += want.norm_sqr();
    }
    Ok((num / den).sqrt())
}

/// Closed-form F_θ 1_{[0,1)} for θ ∉ (π/2)ℤ, evaluable anywhere:
/// F_θ f(ξ) = γ_θ |sinθ|^{-1/2} e^{iπξ²cotθ} ∫₀¹ e^{iπ(y²cotθ − 2ξy/sinθ)} dy.
/// This is the counterexample window; its 1/ξ tails are the point (it has
/// unbounded support), so `hull` only declares where evaluation is wanted.
#[derive(Debug, Clone, Copy)]
pub struct ChirpedIndicatorTransform {
    theta: f64,
    hull: f64,
}

impl ChirpedIndicatorTransform {
    pub fn new(theta: f64, hull: f64) -> Result<Self, FrftError> {
        let reduced = theta.rem_euclid(std::f64::consts::FRAC_PI_2);
        let dist = reduced.min(std::f64::consts::FRAC_PI_2 - reduced);
        if dist <= ILL_CONDITIONED_BAND {
            return Err(FrftError::DegenerateAngle);
        }
        Ok(Self {
            theta: theta.rem_euclid(2.0 * std::f64::consts::PI),
            hull,
        })
    }

    pub fn eval_point(&self, xi: f64) -> Complex<f64> {
        let (theta, xi) = if self.theta > std::f64::consts::PI {
            (self.theta - std::f64::consts::PI, -xi)
        } else {
            (self.theta, xi)
        };
        let sin = theta.sin();
        let cot = theta.cos() / sin;
        let gamma = Complex::<f64>::from_polar(1.0, 0.5 * theta - std::f64::consts::FRAC_PI_4);
        let chirp = Complex::<f64>::from_polar(1.0, std::f64::consts::PI * xi * xi * cot);
        let integral = oscillatory_segment(cot, -xi / sin, 0.0, 1.0);
        gamma * sin.abs().powf(-0.5) * chirp * integral
    }

    /// Samples onto a symmetric grid.
    pub fn sample(&self, t_half: f64, n: usize) -> SampledSignal<f64> {
        SampledSignal::from_fn_symmetric(t_half, n, |t| self.eval_point(t))
    }
}

impl crate::gram::WindowFn for ChirpedIndicatorTransform {
    fn eval(&self, x: f64) -> Complex<f64> {
        self.eval_point(x)
    }

    fn support_hull(&self) -> (f64, f64) {
        (-self.hull, self.hull)
    }
}
