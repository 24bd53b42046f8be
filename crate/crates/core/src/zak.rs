//! Weighted Zak-transform diagnostics.
//!
//! For a window g and shear parameter α, the fibre function
//! D(ω,θ) = Σ_k γ_k ĝ(k+ω) e^{2πikθ} with γ_k = e^{πiαk(k−1)} is unimodular
//! a.e. and satisfies D(ω+1,θ) = e^{2πi(α−θ)} D(ω,θ−α) exactly when the
//! Gabor system is orthonormal. This module evaluates truncated versions of
//! D on a grid, checks unimodularity and the covariance relation, computes
//! the autocorrelations r_n, estimates spectral support, and fits pure
//! exponentials to unimodular data.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rustfft::{FftDirection, FftPlanner};
use std::f64::consts::PI;
use thiserror::Error;

use crate::signal::SampledSignal;
use crate::special::{median, oscillatory_segment};
use crate::window::{PiecewiseWindow, Window};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZakError {
    #[error("grids must have at least 8 points")]
    GridTooSmall,
    #[error("truncation K must be nonnegative")]
    BadTruncation,
    #[error("K = {k} exceeds the Nyquist bound {bound} of the sampled window grid")]
    KTooLargeForSampledGrid { k: i64, bound: i64 },
    #[error("alpha is not a multiple of the theta step and interpolation is disabled")]
    GridIncompatible,
    #[error("|n| must be at most 2K")]
    LagOutOfRange,
    #[error("|F| deviates from 1 by more than 0.1 somewhere; not a unimodular input")]
    NotUnimodular,
    #[error("omega index out of range")]
    OmegaOutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralSource {
    ClosedForm,
    DiscreteTransform,
    Synthetic,
}

/// Samples ĝ(k+ω) for k ∈ [−K, K+1] (one extra row so the ω+1 sheet needs
/// no new data) on a uniform ω grid over [0,1).
#[derive(Debug, Clone)]
pub struct SpectralSamples {
    k_trunc: i64,
    omega: Vec<f64>,
    /// values[(k + K) as usize][i] = ĝ(k + ω_i)
    values: Vec<Vec<Complex64>>,
    pub source: SpectralSource,
}

impl SpectralSamples {
    pub fn from_fourier_fn(
        k_trunc: i64,
        n_omega: usize,
        source: SpectralSource,
        ghat: impl Fn(f64) -> Complex64,
    ) -> Result<Self, ZakError> {
        if k_trunc < 0 {
            return Err(ZakError::BadTruncation);
        }
        if n_omega < 8 {
            return Err(ZakError::GridTooSmall);
        }
        let omega: Vec<f64> = (0..n_omega).map(|i| i as f64 / n_omega as f64).collect();
        let values = (-k_trunc..=k_trunc + 1)
            .map(|k| omega.iter().map(|&w| ghat(k as f64 + w)).collect())
            .collect();
        Ok(Self {
            k_trunc,
            omega,
            values,
            source,
        })
    }

    /// Closed-form ĝ for a piecewise window (per piece, ĝ is an oscillatory
    /// segment integral; pure indicators reduce to exact sinc terms).
    pub fn from_piecewise(
        w: &PiecewiseWindow,
        k_trunc: i64,
        n_omega: usize,
    ) -> Result<Self, ZakError> {
        Self::from_fourier_fn(k_trunc, n_omega, SpectralSource::ClosedForm, |xi| {
            piecewise_fourier(w, xi)
        })
    }

    /// Discrete-transform ĝ for a sampled window. K is capped by the grid's
    /// Nyquist frequency; beyond it the samples carry no spectral content.
    pub fn from_sampled(
        s: &SampledSignal<f64>,
        k_trunc: i64,
        n_omega: usize,
    ) -> Result<Self, ZakError> {
        let bound = (0.5 / s.step).floor() as i64 - 1;
        if k_trunc + 1 > bound {
            return Err(ZakError::KTooLargeForSampledGrid {
                k: k_trunc,
                bound,
            });
        }
        let sig = s.clone();
        Self::from_fourier_fn(k_trunc, n_omega, SpectralSource::DiscreteTransform, move |xi| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, v) in sig.values.iter().enumerate() {
                let t = sig.t(i);
                acc += v * Complex64::from_polar(1.0, -2.0 * PI * t * xi);
            }
            acc * sig.step
        })
    }

    pub fn from_window(g: &Window, k_trunc: i64, n_omega: usize) -> Result<Self, ZakError> {
        match g {
            Window::Piecewise(w) => Self::from_piecewise(w, k_trunc, n_omega),
            Window::Sampled(s) => Self::from_sampled(s, k_trunc, n_omega),
        }
    }

    pub fn k_trunc(&self) -> i64 {
        self.k_trunc
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// ĝ(k + ω_i) for k ∈ [−K, K+1].
    pub fn value(&self, k: i64, omega_idx: usize) -> Complex64 {
        self.values[(k + self.k_trunc) as usize][omega_idx]
    }
}

/// ĝ(ξ) of a piecewise window, exact oscillatory-segment evaluation.
pub fn piecewise_fourier(w: &PiecewiseWindow, xi: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in w.pieces() {
        let lo = p.lo.to_f64().unwrap();
        let hi = p.hi.to_f64().unwrap();
        let seg = oscillatory_segment(p.phase.quad, p.phase.lin - xi, lo, hi);
        acc += p.modulus() * Complex64::from_polar(1.0, p.phase.constant) * seg;
    }
    acc
}

/// γ_k = e^{πiαk(k−1)} for k ∈ [−K, K]; all of modulus one.
pub fn gamma_weights(alpha: f64, k_trunc: i64) -> Vec<Complex64> {
    (-k_trunc..=k_trunc)
        .map(|k| {
            let kf = k as f64;
            Complex64::from_polar(1.0, PI * alpha * kf * (kf - 1.0))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summation {
    Raw,
    Cesaro,
}

/// D-values on the (ω, θ) grid, sheets j = 0, 1 (i.e. D(ω+j, θ)).
#[derive(Debug, Clone)]
pub struct ZakGrid {
    pub alpha: f64,
    pub k_trunc: i64,
    pub summation: Summation,
    pub omega: Vec<f64>,
    pub theta: Vec<f64>,
    /// sheets[j][omega_idx][theta_idx]
    pub sheets: [Vec<Vec<Complex64>>; 2],
}

/// Number of ω rows dropped from each end in interior statistics.
pub const INTERIOR_MARGIN: usize = 2;

/// Evaluates the truncated series D(ω+j, θ) = Σ_{|k|≤K} w_k γ_k ĝ(k+ω+j)
/// e^{2πikθ} on a uniform θ grid, by folding the coefficients mod the grid
/// size and taking one inverse FFT per (ω, sheet).
pub fn compute_d(
    samples: &SpectralSamples,
    alpha: f64,
    n_theta: usize,
    summation: Summation,
) -> Result<ZakGrid, ZakError> {
    if n_theta < 8 {
        return Err(ZakError::GridTooSmall);
    }
    let k_trunc = samples.k_trunc;
    let gammas = gamma_weights(alpha, k_trunc);
    let weights: Vec<f64> = (-k_trunc..=k_trunc)
        .map(|k| match summation {
            Summation::Raw => 1.0,
            Summation::Cesaro => 1.0 - k.abs() as f64 / (k_trunc as f64 + 1.0),
        })
        .collect();

    let mut planner = FftPlanner::<f64>::new();
    let ifft = planner.plan_fft(n_theta, FftDirection::Inverse);

    let n_omega = samples.omega.len();
    let mut sheets = [
        vec![vec![Complex64::new(0.0, 0.0); n_theta]; n_omega],
        vec![vec![Complex64::new(0.0, 0.0); n_theta]; n_omega],
    ];
    for (j, sheet) in sheets.iter_mut().enumerate() {
        for (i, row) in sheet.iter_mut().enumerate() {
            let mut bins = vec![Complex64::new(0.0, 0.0); n_theta];
            for k in -k_trunc..=k_trunc {
                let idx = (k + k_trunc) as usize;
                // sheet j needs ĝ(k + ω + j) = value at row k + j
                let coeff = weights[idx] * gammas[idx] * samples.value(k + j as i64, i);
                let bin = (k.rem_euclid(n_theta as i64)) as usize;
                bins[bin] += coeff;
            }
            ifft.process(&mut bins);
            row.copy_from_slice(&bins);
        }
    }

    Ok(ZakGrid {
        alpha,
        k_trunc,
        summation,
        omega: samples.omega.clone(),
        theta: (0..n_theta).map(|m| m as f64 / n_theta as f64).collect(),
        sheets,
    })
}

impl ZakGrid {
    fn interior_rows(&self) -> std::ops::Range<usize> {
        let n = self.omega.len();
        if n > 2 * INTERIOR_MARGIN + 1 {
            INTERIOR_MARGIN..n - INTERIOR_MARGIN
        } else {
            0..n
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularReport {
    pub max_dev: f64,
    pub median_dev: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Deviation ||D| − 1| over the interior grid; pass iff the median is below
/// tol (truncated Fourier series overshoot near jumps makes the max an
/// unfair statistic).
pub fn check_unimodular(zak: &ZakGrid, tol: f64) -> UnimodularReport {
    let mut devs = Vec::new();
    for i in zak.interior_rows() {
        for v in &zak.sheets[0][i] {
            devs.push((v.norm() - 1.0).abs());
        }
    }
    let max_dev = devs.iter().cloned().fold(0.0, f64::max);
    let median_dev = median(&devs);
    UnimodularReport {
        max_dev,
        median_dev,
        tol,
        pass: median_dev < tol,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    pub max_residual: f64,
    pub median_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Residual of D(ω+1,θ) = e^{2πi(α−θ)} D(ω,θ−α) over the interior grid.
/// α must be a multiple of the θ step unless interpolation is enabled.
pub fn check_covariance(
    zak: &ZakGrid,
    tol: f64,
    interpolate: bool,
) -> Result<CovarianceReport, ZakError> {
    let m = zak.theta.len();
    let step = 1.0 / m as f64;
    let ratio = zak.alpha / step;
    let shift = ratio.round();
    let exact_shift = (ratio - shift).abs() < 1e-9;
    if !exact_shift && !interpolate {
        return Err(ZakError::GridIncompatible);
    }

    let mut residuals = Vec::new();
    for i in zak.interior_rows() {
        for (t_idx, &theta) in zak.theta.iter().enumerate() {
            let lhs = zak.sheets[1][i][t_idx];
            let rhs_value = if exact_shift {
                let src = (t_idx as i64 - shift as i64).rem_euclid(m as i64) as usize;
                zak.sheets[0][i][src]
            } else {
                // circular linear interpolation at θ − α
                let pos = (t_idx as f64 - ratio).rem_euclid(m as f64);
                let lo = pos.floor() as usize % m;
                let hi = (lo + 1) % m;
                let w = pos - pos.floor();
                zak.sheets[0][i][lo] * (1.0 - w) + zak.sheets[0][i][hi] * w
            };
            let factor = Complex64::from_polar(1.0, 2.0 * PI * (zak.alpha - theta));
            residuals.push((lhs - factor * rhs_value).norm());
        }
    }
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    let median_residual = median(&residuals);
    Ok(CovarianceReport {
        max_residual,
        median_residual,
        tol,
        pass: median_residual < tol,
    })
}

/// Truncated autocorrelation r_n(ω) = Σ_k b_{k−n} conj(b_k), b_k = γ_k ĝ(k+ω).
pub fn autocorrelation(
    samples: &SpectralSamples,
    alpha: f64,
    n: i64,
    omega_idx: usize,
) -> Result<Complex64, ZakError> {
    let k_trunc = samples.k_trunc;
    if n.abs() > 2 * k_trunc {
        return Err(ZakError::LagOutOfRange);
    }
    if omega_idx >= samples.omega.len() {
        return Err(ZakError::OmegaOutOfRange);
    }
    let gamma = |k: i64| {
        let kf = k as f64;
        Complex64::from_polar(1.0, PI * alpha * kf * (kf - 1.0))
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -k_trunc..=k_trunc {
        let km = k - n;
        if km < -k_trunc || km > k_trunc {
            continue;
        }
        let b_km = gamma(km) * samples.value(km, omega_idx);
        let b_k = gamma(k) * samples.value(k, omega_idx);
        acc += b_km * b_k.conj();
    }
    Ok(acc)
}

/// Support estimate of the discrete-transform energy profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportEstimate {
    /// Smallest symmetric radius capturing 1−ε of the spectral energy.
    pub radius: f64,
    /// Hull of the highest-energy bins making up 1−ε of the energy.
    pub lo: f64,
    pub hi: f64,
    pub peak_freq: f64,
    /// Per-candidate fraction of energy inside [−λ, λ].
    pub candidate_fractions: Vec<(f64, f64)>,
}

pub const DEFAULT_SUPPORT_EPSILON: f64 = 1e-4;

/// Estimates the spectral support of a sampled function from its discrete
/// transform. Diagnostic only: resolution is one frequency bin 1/(N·h).
pub fn spectrum_support(
    f: &SampledSignal<f64>,
    epsilon: f64,
    candidates: &[f64],
) -> SupportEstimate {
    let n = f.len();
    let mut buf: Vec<Complex64> = f.values.clone();
    let mut planner = FftPlanner::<f64>::new();
    planner
        .plan_fft(n, FftDirection::Forward)
        .process(&mut buf);

    let bin_freq = |j: usize| -> f64 {
        let k = if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
        k as f64 / (n as f64 * f.step)
    };
    let energy: Vec<f64> = buf.iter().map(|v| v.norm_sqr()).collect();
    let total: f64 = energy.iter().sum();
    if total <= 0.0 {
        return SupportEstimate {
            radius: 0.0,
            lo: 0.0,
            hi: 0.0,
            peak_freq: 0.0,
            candidate_fractions: candidates.iter().map(|&c| (c, 1.0)).collect(),
        };
    }

    // symmetric radius: accumulate bins by |freq|
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        bin_freq(a)
            .abs()
            .partial_cmp(&bin_freq(b).abs())
            .expect("finite")
    });
    let mut acc = 0.0;
    let mut radius = 0.0;
    for &j in &order {
        acc += energy[j];
        radius = bin_freq(j).abs();
        if acc >= (1.0 - epsilon) * total {
            break;
        }
    }

    // hull of the top-energy bins
    let mut by_energy: Vec<usize> = (0..n).collect();
    by_energy.sort_by(|&a, &b| energy[b].partial_cmp(&energy[a]).expect("finite"));
    let mut acc = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &j in &by_energy {
        acc += energy[j];
        lo = lo.min(bin_freq(j));
        hi = hi.max(bin_freq(j));
        if acc >= (1.0 - epsilon) * total {
            break;
        }
    }
    let peak = by_energy[0];

    let candidate_fractions = candidates
        .iter()
        .map(|&c| {
            let inside: f64 = (0..n)
                .filter(|&j| bin_freq(j).abs() <= c)
                .map(|j| energy[j])
                .sum();
            (c, inside / total)
        })
        .collect();

    SupportEstimate {
        radius,
        lo,
        hi,
        peak_freq: bin_freq(peak),
        candidate_fractions,
    }
}

/// Fit F(t) ≈ c·e^{2πiλt} for unimodular data. λ comes from the median
/// phase increment, c from the demodulated mean; the residual is the max
/// pointwise deviation. Compact spectral support forces the residual to
/// vanish for genuinely unimodular inputs, so a large residual certifies
/// non-compact spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialFit {
    pub c: Complex64,
    pub lambda: f64,
    pub residual: f64,
}

pub fn exponential_fit(f: &SampledSignal<f64>) -> Result<ExponentialFit, ZakError> {
    for v in &f.values {
        if (v.norm() - 1.0).abs() > 0.1 {
            return Err(ZakError::NotUnimodular);
        }
    }
    let increments: Vec<f64> = f
        .values
        .windows(2)
        .map(|w| (w[1] * w[0].conj()).arg() / (2.0 * PI * f.step))
        .collect();
    let lambda = median(&increments);

    let mut mean = Complex64::new(0.0, 0.0);
    for (i, v) in f.values.iter().enumerate() {
        mean += v * Complex64::from_polar(1.0, -2.0 * PI * lambda * f.t(i));
    }
    let c = mean / f.values.len() as f64;

    let mut residual = 0.0f64;
    for (i, v) in f.values.iter().enumerate() {
        let model = c * Complex64::from_polar(1.0, 2.0 * PI * lambda * f.t(i));
        residual = residual.max((v - model).norm());
    }
    Ok(ExponentialFit {
        c,
        lambda,
        residual,
    })
}

/// Generator of the coefficient chain c_{m+1} = κ̄·e^{2πimα}·c_m (|κ| = 1).
/// Every term has |c_m| = |c_0|, so a square-summable chain forces c_0 = 0.
pub fn coefficient_chain(
    c0: Complex64,
    kappa: Complex64,
    alpha: f64,
    len: usize,
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len);
    let mut c = c0;
    for m in 0..len {
        out.push(c);
        c = kappa.conj() * Complex64::from_polar(1.0, 2.0 * PI * alpha * m as f64) * c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn unit_window() -> PiecewiseWindow {
        PiecewiseWindow::indicator(ratio(0, 1), ratio(1, 1)).unwrap()
    }

    #[test]
    fn gamma_weights_values() {
        let g = gamma_weights(0.0, 4);
        assert!(g.iter().all(|v| (v - 1.0).norm() < 1e-15));

        let g = gamma_weights(0.37, 4);
        // k = 0 and k = 1 give k(k-1) = 0
        assert!((g[4] - 1.0).norm() < 1e-15);
        assert!((g[5] - 1.0).norm() < 1e-15);
        assert!(g.iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));

        // α = 1/2, k = 2: exponent π·(1/2)·2·1 = π, so γ = −1
        let g = gamma_weights(0.5, 2);
        assert!((g[4] + 1.0).norm() < 1e-15);
    }

    #[test]
    fn indicator_fourier_closed_form() {
        // ĝ(ξ) = (1 − e^{−2πiξ})/(2πiξ), ĝ(0) = 1, ĝ(k) = 0 for integer k ≠ 0
        let w = unit_window();
        assert!((piecewise_fourier(&w, 0.0) - 1.0).norm() < 1e-12);
        for k in [1.0, -1.0, 2.0, 5.0] {
            assert!(piecewise_fourier(&w, k).norm() < 1e-12);
        }
        let v = piecewise_fourier(&w, 0.5);
        // ∫₀¹ e^{−πix} dx = 2/(πi)·... = (1−e^{−iπ})/(iπ)·(1/2)·2 = 2/(iπ)
        let want = Complex64::new(0.0, -2.0 / PI);
        assert!((v - want).norm() < 1e-12, "{v} vs {want}");
    }

    #[test]
    fn one_term_spectrum_gives_constant_d() {
        // Single-term series (K = 0) with ĝ ≡ 1 on [0,1): D ≡ γ₀ = 1 on
        // sheet 0 while the ω+1 sheet sees only ĝ(ω+1) = 0.
        let spec = SpectralSamples::from_fourier_fn(0, 16, SpectralSource::Synthetic, |xi| {
            if (0.0..1.0).contains(&xi) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let zak = compute_d(&spec, 0.3, 16, Summation::Raw).unwrap();
        for row in &zak.sheets[0] {
            for v in row {
                assert!((v - 1.0).norm() < 1e-12);
            }
        }
        for row in &zak.sheets[1] {
            for v in row {
                assert!(v.norm() < 1e-12);
            }
        }
        let report = check_unimodular(&zak, 1e-10);
        assert!(report.pass);

        // degenerate input: the covariance relation fails with residual 1
        let cov = check_covariance(&zak, 1e-10, true).unwrap();
        assert!((cov.max_residual - 1.0).abs() < 1e-12);
        assert!(!cov.pass);
    }

    #[test]
    fn wide_synthetic_spectrum_satisfies_covariance_exactly() {
        // With ĝ supported in [0,1) and K ≥ 1 the index shift in the
        // covariance relation is an exact algebraic identity.
        let spec = SpectralSamples::from_fourier_fn(4, 16, SpectralSource::Synthetic, |xi| {
            if (0.0..1.0).contains(&xi) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let zak = compute_d(&spec, 0.25, 16, Summation::Raw).unwrap();
        let cov = check_covariance(&zak, 1e-10, false).unwrap();
        assert!(cov.max_residual < 1e-12, "residual {}", cov.max_residual);
    }

    #[test]
    fn single_term_series_reproduces_ghat() {
        // K = 1 with only the k = 0 coefficient nonzero: D(ω,θ) = ĝ(ω).
        let w = unit_window();
        let spec = SpectralSamples::from_fourier_fn(1, 8, SpectralSource::Synthetic, |xi| {
            if (0.0..1.0).contains(&xi) {
                piecewise_fourier(&w, xi)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let zak = compute_d(&spec, 0.0, 8, Summation::Raw).unwrap();
        for (i, &omega) in zak.omega.iter().enumerate() {
            let want = piecewise_fourier(&w, omega);
            for v in &zak.sheets[0][i] {
                assert!((v - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn unimodularity_improves_with_k() {
        let w = unit_window();
        let mut medians = Vec::new();
        for k in [64, 256, 1024] {
            let spec = SpectralSamples::from_piecewise(&w, k, 32).unwrap();
            let zak = compute_d(&spec, 0.0, 64, Summation::Cesaro).unwrap();
            medians.push(check_unimodular(&zak, 1.0).median_dev);
        }
        assert!(
            medians[0] > medians[1] && medians[1] > medians[2],
            "medians {medians:?}"
        );
        assert!(medians[2] < 0.05, "final median {}", medians[2]);
    }

    #[test]
    fn covariance_grid_compatibility() {
        let w = unit_window();
        let spec = SpectralSamples::from_piecewise(&w, 32, 16).unwrap();
        let zak = compute_d(&spec, 0.5, 4, Summation::Raw);
        assert!(zak.is_err(), "theta grid below minimum size");

        let zak = compute_d(&spec, 0.5, 8, Summation::Raw).unwrap();
        // α = 1/2 with step 1/8: exact shift of 4 bins
        assert!(check_covariance(&zak, 1.0, false).is_ok());

        let spec = SpectralSamples::from_piecewise(&w, 32, 16).unwrap();
        let zak = compute_d(&spec, 0.37, 8, Summation::Raw).unwrap();
        assert_eq!(
            check_covariance(&zak, 1.0, false).unwrap_err(),
            ZakError::GridIncompatible
        );
        assert!(check_covariance(&zak, 1.0, true).is_ok());
    }

    #[test]
    fn autocorrelation_examples() {
        let w = unit_window();
        let spec = SpectralSamples::from_piecewise(&w, 512, 8).unwrap();
        // r_0(ω) = Σ|ĝ(k+ω)|² → 1 (Parseval with ‖g‖ = 1)
        let r0 = autocorrelation(&spec, 0.0, 0, 4).unwrap();
        assert!(r0.im.abs() < 1e-12);
        assert!((r0.re - 1.0).abs() < 2e-3, "r0 = {r0}");
        // r_1 small at large K
        let r1 = autocorrelation(&spec, 0.0, 1, 4).unwrap();
        assert!(r1.norm() < 2e-3, "r1 = {r1}");

        assert_eq!(
            autocorrelation(&spec, 0.0, 2000, 4).unwrap_err(),
            ZakError::LagOutOfRange
        );
    }

    #[test]
    fn one_term_autocorrelation_is_delta() {
        let spec = SpectralSamples::from_fourier_fn(4, 8, SpectralSource::Synthetic, |xi| {
            if (0.0..1.0).contains(&xi) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        for n in 1..=8 {
            assert!(autocorrelation(&spec, 0.7, n, 3).unwrap().norm() < 1e-15);
        }
        let r0 = autocorrelation(&spec, 0.7, 0, 3).unwrap();
        assert!((r0.re - 1.0).abs() < 1e-15 && r0.im.abs() < 1e-15);
    }

    #[test]
    fn spectrum_support_pure_tone() {
        let f = SampledSignal::from_fn_symmetric(8.0, 512, |t: f64| {
            Complex64::from_polar(1.0, 2.0 * PI * 3.0 * t)
        });
        let est = spectrum_support(&f, 1e-4, &[1.0, 3.5]);
        let bin = 1.0 / (512.0 * f.step);
        assert!((est.peak_freq - 3.0).abs() <= bin, "peak {}", est.peak_freq);
        assert!((est.lo - 3.0).abs() <= 2.0 * bin && (est.hi - 3.0).abs() <= 2.0 * bin);
        assert!((est.radius - 3.0).abs() <= 2.0 * bin);
        assert!(est.candidate_fractions[0].1 < 0.01);
        assert!(est.candidate_fractions[1].1 > 0.999);
    }

    #[test]
    fn spectrum_support_two_tones() {
        let f = SampledSignal::from_fn_symmetric(8.0, 512, |t: f64| {
            Complex64::from_polar(0.5, 2.0 * PI * 2.0 * t)
                + Complex64::from_polar(0.5, -2.0 * PI * 2.0 * t)
        });
        let est = spectrum_support(&f, 1e-4, &[]);
        assert!(est.lo <= -1.9 && est.hi >= 1.9, "{est:?}");
    }

    #[test]
    fn spectrum_support_chirp_is_wide() {
        let f = SampledSignal::from_fn_symmetric(8.0, 1024, |t: f64| {
            Complex64::from_polar(1.0, PI * t * t)
        });
        let est = spectrum_support(&f, 1e-4, &[]);
        assert!(est.hi - est.lo > 4.0, "chirp support {est:?}");
    }

    #[test]
    fn exponential_fit_tones() {
        let f = SampledSignal::from_fn_symmetric(8.0, 1024, |t: f64| {
            Complex64::from_polar(1.0, 2.0 * PI * 3.0 * t)
        });
        let fit = exponential_fit(&f).unwrap();
        assert!((fit.lambda - 3.0).abs() < 1e-10);
        assert!((fit.c - 1.0).norm() < 1e-8);
        assert!(fit.residual < 1e-8);

        let g = SampledSignal::from_fn_symmetric(8.0, 1024, |t: f64| {
            Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, -2.0 * PI * 0.5 * t)
        });
        let fit = exponential_fit(&g).unwrap();
        assert!((fit.lambda + 0.5).abs() < 1e-10);
        assert!((fit.c - Complex64::new(0.0, 1.0)).norm() < 1e-8);
        assert!(fit.residual < 1e-8);
    }

    #[test]
    fn exponential_fit_rejects_chirp_model() {
        let f = SampledSignal::from_fn_symmetric(8.0, 1024, |t: f64| {
            Complex64::from_polar(1.0, PI * t * t)
        });
        let fit = exponential_fit(&f).unwrap();
        assert!(fit.residual > 0.5, "chirp residual {}", fit.residual);

        let not_uni = SampledSignal::from_fn_symmetric(8.0, 64, |t: f64| {
            Complex64::new((-t * t).exp(), 0.0)
        });
        assert_eq!(
            exponential_fit(&not_uni).unwrap_err(),
            ZakError::NotUnimodular
        );
    }

    #[test]
    fn coefficient_chain_modulus_constant() {
        let chain = coefficient_chain(
            Complex64::new(0.6, 0.8),
            Complex64::from_polar(1.0, 1.1),
            std::f64::consts::SQRT_2 / 2.0,
            64,
        );
        for c in &chain {
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
        // zero seed stays zero
        let zero = coefficient_chain(
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, 0.3),
            0.3,
            16,
        );
        assert!(zero.iter().all(|c| c.norm() == 0.0));
    }
}
