//! Uniformly sampled complex signals on `[t_min, t_min + n·h)`.

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};
use rustfft::FftNum;
use thiserror::Error;

/// Scalar bundle for the numeric layer; implemented by `f32` and `f64`.
pub trait Real: Float + FloatConst + FftNum + NumAssign {
    fn of_f64(x: f64) -> Self;
    fn as_f64(self) -> f64;
}

impl Real for f64 {
    fn of_f64(x: f64) -> Self {
        x
    }
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    fn of_f64(x: f64) -> Self {
        x as f32
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalError {
    #[error("signal needs at least two samples")]
    TooShort,
    #[error("step must be positive and finite")]
    BadStep,
    #[error("grids do not match")]
    GridMismatch,
}

/// Complex samples `values[i] = f(t_min + i·step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal<T> {
    pub t_min: T,
    pub step: T,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> SampledSignal<T> {
    pub fn new(t_min: T, step: T, values: Vec<Complex<T>>) -> Result<Self, SignalError> {
        if values.len() < 2 {
            return Err(SignalError::TooShort);
        }
        if !step.is_finite() || step <= T::zero() {
            return Err(SignalError::BadStep);
        }
        Ok(Self {
            t_min,
            step,
            values,
        })
    }

    pub fn from_fn(t_min: T, step: T, n: usize, f: impl Fn(T) -> Complex<T>) -> Self {
        let values = (0..n)
            .map(|i| f(t_min + step * T::of_f64(i as f64)))
            .collect();
        Self {
            t_min,
            step,
            values,
        }
    }

    /// Symmetric grid of n points starting at -t_half with step 2·t_half/n
    /// (the right endpoint t_half is excluded).
    pub fn from_fn_symmetric(t_half: T, n: usize, f: impl Fn(T) -> Complex<T>) -> Self {
        let step = (t_half + t_half) / T::of_f64(n as f64);
        Self::from_fn(-t_half, step, n, f)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self, i: usize) -> T {
        self.t_min + self.step * T::of_f64(i as f64)
    }

    /// One past the last sample point.
    pub fn t_end(&self) -> T {
        self.t(self.len())
    }

    pub fn grid(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len()).map(move |i| self.t(i))
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (self.t_min - other.t_min).abs() <= self.step * T::of_f64(1e-9)
            && (self.step - other.step).abs() <= self.step * T::of_f64(1e-9)
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Discrete L² norm √(h·Σ|v|²).
    pub fn norm_l2(&self) -> T {
        let sum = self
            .values
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr());
        (sum * self.step).sqrt()
    }

    /// Discrete inner product h·Σ f·conj(g) on a shared grid.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>, SignalError> {
        if !self.same_grid(other) {
            return Err(SignalError::GridMismatch);
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (a, b) in self.values.iter().zip(&other.values) {
            acc += a * b.conj();
        }
        Ok(acc * self.step)
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            t_min: self.t_min,
            step: self.step,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Pointwise linear interpolation; zero outside the sampled range.
    pub fn eval_linear(&self, t: T) -> Complex<T> {
        let pos = (t - self.t_min) / self.step;
        if pos < T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        let idx = pos.floor();
        let i = idx.as_f64() as usize;
        if i + 1 >= self.len() {
            if i + 1 == self.len() && (pos - idx) <= T::of_f64(1e-9) {
                return self.values[i];
            }
            return Complex::new(T::zero(), T::zero());
        }
        let w = pos - idx;
        self.values[i] * (T::one() - w) + self.values[i + 1] * w
    }

    /// Fraction of ∑|v|² h lying outside [-radius, radius].
    pub fn mass_outside(&self, radius: T) -> T {
        let total = self
            .values
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr());
        if total == T::zero() {
            return T::zero();
        }
        let mut outside = T::zero();
        for (i, v) in self.values.iter().enumerate() {
            if self.t(i).abs() > radius {
                outside += v.norm_sqr();
            }
        }
        outside / total
    }
}
