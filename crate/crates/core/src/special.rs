//! Special functions for oscillatory integrals: complex error function via
//! the Faddeeva function, and the quadratic-phase primitive
//! `∫₀ˣ e^{iπq u²} du` used by the closed-form Gabor inner products.

use num_complex::Complex64;
use std::f64::consts::PI;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Faddeeva function w(z) = e^{-z²} erfc(-iz) for Im(z) ≥ 0, via the Laplace
/// continued fraction (bottom-up, fixed depth). Accurate away from the real
/// axis and for |z| ≳ 2.5; callers route small arguments elsewhere.
fn faddeeva_cf(z: Complex64) -> Complex64 {
    let mut f = z;
    for k in (1..=48).rev() {
        f = z - Complex64::new(k as f64 / 2.0, 0.0) / f;
    }
    Complex64::new(0.0, 1.0) / (SQRT_PI * f)
}

/// Maclaurin series for erf. The alternating-term cancellation costs about
/// ε·e^{|z|²} in absolute terms, which is ε·e^{2·Re(z)²} relative to
/// |erf(z)| — so the series is the accurate route whenever Re(z) is small,
/// regardless of |z| (up to overflow of the largest term).
fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z; // (-1)^n z^{2n+1} / n!
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..500 {
        let contrib = term / (2.0 * n as f64 + 1.0);
        sum += contrib;
        if n as f64 > z.norm_sqr() && contrib.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        term = -term * z2 / (n as f64 + 1.0);
    }
    sum * (2.0 / SQRT_PI)
}

/// Asymptotic expansion erfc(z) ~ e^{-z²}/(z√π)·Σ (-1)^n (2n-1)!!/(2z²)^n,
/// for large |z| away from the negative real axis.
fn erfc_asymptotic(z: Complex64) -> Complex64 {
    let inv_2z2 = 0.5 / (z * z);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..30 {
        let next = term * inv_2z2 * -(2.0 * n as f64 - 1.0);
        if next.norm() >= term.norm() {
            break;
        }
        sum += next;
        term = next;
    }
    (-z * z).exp() / (z * SQRT_PI) * sum
}

/// Error function of a complex argument.
///
/// After symmetry reduction to the first quadrant: the Maclaurin series
/// covers |z| ≤ 3.2 and the near-imaginary-axis band Re(z) ≤ 3 up to
/// |z| = 12; the Faddeeva continued fraction covers Re(z) > 3 (where its
/// argument iz sits safely above the real axis); the asymptotic expansion
/// covers the remaining far field.
pub fn erf_complex(z: Complex64) -> Complex64 {
    // Reduce to the first quadrant: erf(-z) = -erf(z), erf(z̄) = erf(z)̄.
    let mut w = z;
    let mut sign = 1.0;
    if w.re < 0.0 {
        w = -w;
        sign = -sign;
    }
    let conjugate = w.im < 0.0;
    if conjugate {
        w = w.conj();
    }
    let r = w.norm();
    let result = if r <= 3.2 || (w.re <= 3.0 && r <= 12.0) {
        erf_series(w)
    } else if w.re > 3.0 {
        // erfc(w) = e^{-w²} w(iw) for Re(w) ≥ 0; Im(iw) = Re(w) > 3 keeps
        // the continued fraction in its accurate region.
        let iw = Complex64::new(-w.im, w.re);
        Complex64::new(1.0, 0.0) - (-w * w).exp() * faddeeva_cf(iw)
    } else {
        Complex64::new(1.0, 0.0) - erfc_asymptotic(w)
    };
    let result = if conjugate { result.conj() } else { result };
    sign * result
}

/// ∫₀ˣ e^{iπ q u²} du for real q and x (Fresnel-type primitive).
///
/// Small |q·x²| uses the power series (which also avoids the wild
/// e^{-iπL²/q} phases the erf route would incur when q → 0); otherwise the
/// integral is expressed through `erf_complex` along the e^{∓iπ/4} ray.
pub fn fresnel_quadratic(q: f64, x: f64) -> Complex64 {
    if q == 0.0 {
        return Complex64::new(x, 0.0);
    }
    let arg = PI * q.abs() * x * x;
    if arg < 0.5 {
        // Σ (iπq)^n x^{2n+1} / (n! (2n+1))
        let base = Complex64::new(0.0, PI * q) * x * x;
        let mut term = Complex64::new(x, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 0..40 {
            let contrib = term / (2.0 * n as f64 + 1.0);
            sum += contrib;
            if contrib.norm() < 1e-18 * sum.norm().max(1e-300) {
                break;
            }
            term = term * base / (n as f64 + 1.0);
        }
        return sum;
    }
    // √(-iπq) with the principal branch: for q > 0 on the e^{-iπ/4} ray.
    let root_mag = (PI * q.abs()).sqrt();
    let half_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let root = Complex64::new(root_mag * half_sqrt2, -q.signum() * root_mag * half_sqrt2);
    (SQRT_PI / 2.0) * erf_complex(root * x) / root
}

/// ∫_a^b e^{i(πq·x² + 2πl·x)} dx.
///
/// Pure-exponential segments use the exact sinc expression; genuine
/// quadratic phases complete the square and take a Fresnel difference. A
/// near-degenerate band (tiny q against a huge completed-square shift, where
/// the analytic phase πl²/q stops being representable) falls back to an
/// oscillation-resolved Simpson rule.
pub fn oscillatory_segment(q: f64, l: f64, a: f64, b: f64) -> Complex64 {
    let span = b - a;
    let xmax = a.abs().max(b.abs());
    if q.abs() * xmax * xmax < 1e-10 / PI {
        return span * Complex64::from_polar(sinc(PI * l * span), PI * l * (a + b));
    }
    let c0 = l / q;
    if (l * l / q).abs() <= 1e8 {
        let phase = -PI * l * l / q;
        let diff = fresnel_quadratic(q, b + c0) - fresnel_quadratic(q, a + c0);
        return Complex64::from_polar(1.0, phase) * diff;
    }
    let periods = (l.abs() + q.abs() * xmax) * span + 1.0;
    let n = ((periods * 256.0).ceil() as usize).clamp(64, 200_000);
    let n = n + n % 2;
    let h = span / n as f64;
    let f = |x: f64| Complex64::from_polar(1.0, PI * q * x * x + 2.0 * PI * l * x);
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * (h / 3.0)
}

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Median of a slice (not in place; NaNs not expected).
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty(), "median of empty slice");
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaNs"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
