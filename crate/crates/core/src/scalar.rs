//! Exact scalar arithmetic over the field ℚ + ℚ·ξ with a single declared
//! irrational symbol ξ.
//!
//! Every lattice decision in this crate (density, projection discreteness,
//! normalization) runs on [`FieldScalar`] values so that the verdicts are
//! exact, not floating-point guesses. A scalar is `q0 + q1·ξ` with `q0`, `q1`
//! rational; ξ carries a certified-irrational flag and a float approximation
//! used only for numeric export and sign queries of provably nonzero values.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number (arbitrary precision, always lowest terms).
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("result leaves the field Q + Q*xi (product of two irrational parts)")]
    OutOfField,
    #[error("division by a general field scalar requires proportional coefficients")]
    NotProportional,
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars use distinct irrational symbols ({0} vs {1})")]
    SymbolMismatch(String, String),
    #[error("symbol {0} is not certified irrational; decision would be unsound")]
    UncertifiedSymbol(String),
    #[error("malformed rational literal {0:?} (expected decimal-free \"p\" or \"p/q\")")]
    BadRationalLiteral(String),
    #[error("malformed scalar literal {0:?} (expected \"p/q\" or \"p/q + r/s*sym\")")]
    BadScalarLiteral(String),
}

/// The one irrational symbol a computation may use, e.g. `sqrt2`.
///
/// `approx` is only consulted for sign determination of values that are
/// provably nonzero, and for float export; no irrationality is ever inferred
/// from it.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrationalSymbol {
    pub name: String,
    pub approx: f64,
    pub irrational: bool,
}

impl IrrationalSymbol {
    pub fn new(name: impl Into<String>, approx: f64, irrational: bool) -> Arc<Self> {
        Arc::new(Self {
            name: name.into(),
            approx,
            irrational,
        })
    }

    /// √2, the stock example symbol.
    pub fn sqrt2() -> Arc<Self> {
        Self::new("sqrt2", std::f64::consts::SQRT_2, true)
    }
}

/// Exact element `q0 + q1·ξ` of ℚ + ℚ·ξ.
#[derive(Debug, Clone)]
pub struct FieldScalar {
    q0: Rational,
    q1: Rational,
    symbol: Option<Arc<IrrationalSymbol>>,
}

impl FieldScalar {
    pub fn from_rational(q0: Rational) -> Self {
        Self {
            q0,
            q1: Rational::zero(),
            symbol: None,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// General element `q0 + q1·ξ`. A zero `q1` drops the symbol.
    pub fn with_symbol(q0: Rational, q1: Rational, symbol: Arc<IrrationalSymbol>) -> Self {
        if q1.is_zero() {
            Self::from_rational(q0)
        } else {
            Self {
                q0,
                q1,
                symbol: Some(symbol),
            }
        }
    }

    /// The symbol itself: `0 + 1·ξ`.
    pub fn symbol_value(symbol: Arc<IrrationalSymbol>) -> Self {
        Self::with_symbol(Rational::zero(), Rational::one(), symbol)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.q0
    }

    pub fn symbol_coeff(&self) -> &Rational {
        &self.q1
    }

    pub fn symbol(&self) -> Option<&Arc<IrrationalSymbol>> {
        self.symbol.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.q1.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q1.is_zero()
    }

    /// Exact rational value, if the symbol coefficient vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.q0)
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.q0.is_integer()
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.q0.to_integer())
        } else {
            None
        }
    }

    fn merged_symbol(
        a: &Option<Arc<IrrationalSymbol>>,
        b: &Option<Arc<IrrationalSymbol>>,
    ) -> Result<Option<Arc<IrrationalSymbol>>, ScalarError> {
        match (a, b) {
            (None, None) => Ok(None),
            (Some(s), None) => Ok(Some(s.clone())),
            (None, Some(s)) => Ok(Some(s.clone())),
            (Some(s), Some(t)) => {
                if s.name == t.name {
                    Ok(Some(s.clone()))
                } else {
                    Err(ScalarError::SymbolMismatch(s.name.clone(), t.name.clone()))
                }
            }
        }
    }

    fn normalized(q0: Rational, q1: Rational, symbol: Option<Arc<IrrationalSymbol>>) -> Self {
        if q1.is_zero() {
            Self {
                q0,
                q1,
                symbol: None,
            }
        } else {
            Self { q0, q1, symbol }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        let symbol = Self::merged_symbol(&self.symbol, &other.symbol)?;
        Ok(Self::normalized(
            &self.q0 + &other.q0,
            &self.q1 + &other.q1,
            symbol,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        let symbol = Self::merged_symbol(&self.symbol, &other.symbol)?;
        Ok(Self::normalized(
            &self.q0 - &other.q0,
            &self.q1 - &other.q1,
            symbol,
        ))
    }

    pub fn neg(&self) -> Self {
        Self::normalized(-&self.q0, -&self.q1, self.symbol.clone())
    }

    /// Product. Closed only when at least one factor is rational: a product
    /// of two irrational parts would need ξ², which the field does not carry.
    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        if !self.q1.is_zero() && !other.q1.is_zero() {
            return Err(ScalarError::OutOfField);
        }
        let symbol = Self::merged_symbol(&self.symbol, &other.symbol)?;
        Ok(Self::normalized(
            &self.q0 * &other.q0,
            &self.q0 * &other.q1 + &self.q1 * &other.q0,
            symbol,
        ))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::normalized(&self.q0 * r, &self.q1 * r, self.symbol.clone())
    }

    /// Quotient `self / other`. Defined when `other` is a nonzero rational,
    /// or when the coefficient vectors are proportional (so the quotient is
    /// rational).
    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Self::merged_symbol(&self.symbol, &other.symbol)?;
        if other.q1.is_zero() {
            let inv = other.q0.recip();
            return Ok(self.scale(&inv));
        }
        // other = p0 + p1 ξ with p1 ≠ 0: quotient stays in the field only if
        // self = r · other for a rational r, i.e. q0 p1 == q1 p0.
        let r = &self.q1 / &other.q1;
        if &r * &other.q0 == self.q0 {
            Ok(Self::from_rational(r))
        } else {
            Err(ScalarError::NotProportional)
        }
    }

    /// Float value via the symbol's approximation.
    pub fn to_f64(&self) -> f64 {
        let base = self.q0.to_f64().unwrap_or(f64::NAN);
        if self.q1.is_zero() {
            base
        } else {
            let approx = self.symbol.as_ref().map(|s| s.approx).unwrap_or(f64::NAN);
            base + self.q1.to_f64().unwrap_or(f64::NAN) * approx
        }
    }

    /// Exact sign when rational. For values with a ξ-part the value is
    /// provably nonzero (certified-irrational ξ), and the sign is read off
    /// the float approximation; an uncertified symbol is an error.
    pub fn try_signum(&self) -> Result<i32, ScalarError> {
        if self.q1.is_zero() {
            return Ok(if self.q0.is_zero() {
                0
            } else if self.q0.is_positive() {
                1
            } else {
                -1
            });
        }
        let sym = self.symbol.as_ref().expect("nonzero q1 carries a symbol");
        if !sym.irrational {
            return Err(ScalarError::UncertifiedSymbol(sym.name.clone()));
        }
        Ok(if self.to_f64() > 0.0 { 1 } else { -1 })
    }

    pub fn try_abs(&self) -> Result<Self, ScalarError> {
        if self.try_signum()? < 0 {
            Ok(self.neg())
        } else {
            Ok(self.clone())
        }
    }

    /// Strict literal parser: `p`, `p/q`, or `p/q + r/s*name` with the given
    /// symbol in scope. Rationals are decimal-free integer fractions.
    pub fn parse(text: &str, symbol: Option<&Arc<IrrationalSymbol>>) -> Result<Self, ScalarError> {
        let parts: Vec<&str> = text.split('+').collect();
        match parts.len() {
            1 => Ok(Self::from_rational(parse_rational(parts[0].trim())?)),
            2 => {
                let q0 = parse_rational(parts[0].trim())?;
                let term = parts[1].trim();
                let (coeff, name) = term
                    .split_once('*')
                    .ok_or_else(|| ScalarError::BadScalarLiteral(text.to_string()))?;
                let q1 = parse_rational(coeff.trim())?;
                let sym = symbol.ok_or_else(|| ScalarError::BadScalarLiteral(text.to_string()))?;
                if name.trim() != sym.name {
                    return Err(ScalarError::SymbolMismatch(
                        name.trim().to_string(),
                        sym.name.clone(),
                    ));
                }
                Ok(Self::with_symbol(q0, q1, sym.clone()))
            }
            _ => Err(ScalarError::BadScalarLiteral(text.to_string())),
        }
    }
}

impl PartialEq for FieldScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.q0 != other.q0 || self.q1 != other.q1 {
            return false;
        }
        match (&self.symbol, &other.symbol) {
            (Some(s), Some(t)) => s.name == t.name || self.q1.is_zero(),
            _ => true,
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q1.is_zero() {
            write!(f, "{}", format_rational(&self.q0))
        } else {
            let name = self
                .symbol
                .as_ref()
                .map(|s| s.name.as_str())
                .unwrap_or("xi");
            write!(
                f,
                "{} + {}*{}",
                format_rational(&self.q0),
                format_rational(&self.q1),
                name
            )
        }
    }
}

/// Strict `p` / `p/q` parser (no decimals, no exponents).
pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let bad = || ScalarError::BadRationalLiteral(text.to_string());
    let (num_str, den_str) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text.trim(), None),
    };
    let num: BigInt = num_str.parse().map_err(|_| bad())?;
    let den: BigInt = match den_str {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_i64(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite float (every finite f64 is dyadic).
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Best rational approximation with denominator ≤ `max_den`, by continued
/// fractions. Used to quantize sampled data into the exact world.
pub fn limit_denominator(x: f64, max_den: u64) -> Rational {
    assert!(max_den >= 1);
    if !x.is_finite() {
        return Rational::zero();
    }
    let negative = x < 0.0;
    let mut frac = x.abs();
    // Convergents p/q of the continued fraction of |x|.
    let (mut p0, mut q0, mut p1, mut q1) = (
        BigInt::zero(),
        BigInt::one(),
        BigInt::one(),
        BigInt::zero(),
    );
    let limit = BigInt::from(max_den);
    for _ in 0..64 {
        let a = frac.floor();
        if !a.is_finite() {
            break;
        }
        let a_int = BigInt::from(a as i64);
        let p2 = &a_int * &p1 + &p0;
        let q2 = &a_int * &q1 + &q0;
        if q2 > limit {
            // Semiconvergent with the largest admissible coefficient.
            let t = (&limit - &q0) / &q1;
            let p_semi = &t * &p1 + &p0;
            let q_semi = &t * &q1 + &q0;
            let cand_a = Rational::new(p_semi, q_semi);
            let cand_b = Rational::new(p1.clone(), q1.clone());
            let xabs = Rational::from_float(x.abs()).unwrap_or_else(Rational::zero);
            let best = if (&cand_a - &xabs).abs() < (&cand_b - &xabs).abs() && !q1.is_zero() {
                cand_a
            } else {
                cand_b
            };
            return if negative { -best } else { best };
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let rem = frac - a;
        if rem < 1e-15 {
            break;
        }
        frac = 1.0 / rem;
    }
    let best = Rational::new(p1, q1.max(BigInt::one()));
    if negative {
        -best
    } else {
        best
    }
}
