//! Full-rank 2D lattices Λ = Aℤ², their density, the first-coordinate
//! projection analysis, and the constructive lower-triangular normalization.
//!
//! The exact backend ([`FieldScalar`] entries) decides discreteness of
//! π₁(Λ) = aℤ + bℤ; the float backend exists for rotated lattices and other
//! purely numeric work and refuses the exact-only operations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{FieldScalar, Rational, ScalarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("singular basis (determinant zero)")]
    SingularBasis,
    #[error("operation requires the exact lattice backend")]
    ExactBackendRequired,
    #[error("lattice density is not 1 (|det| != 1)")]
    NotDensityOne,
    #[error("first-coordinate projection is dense, not discrete")]
    NotDiscrete,
    #[error("matrix is not lower triangular")]
    NotLowerTriangular,
    #[error("degenerate lattice: first row is identically zero")]
    DegenerateFirstRow,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Scalar interface the 2×2 matrix machinery needs. Implemented by the exact
/// [`FieldScalar`] (where products can leave the field and must be checked)
/// and by plain floats (where they cannot).
pub trait MatrixScalar: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn try_mul(&self, other: &Self) -> Result<Self, ScalarError>;
    fn try_div(&self, other: &Self) -> Result<Self, ScalarError>;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl MatrixScalar for FieldScalar {
    fn zero() -> Self {
        FieldScalar::zero()
    }
    fn one() -> Self {
        FieldScalar::one()
    }
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("symbol mismatch in matrix")
    }
    fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("symbol mismatch in matrix")
    }
    fn neg(&self) -> Self {
        FieldScalar::neg(self)
    }
    fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        FieldScalar::try_mul(self, other)
    }
    fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        FieldScalar::try_div(self, other)
    }
    fn is_zero(&self) -> bool {
        FieldScalar::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        FieldScalar::to_f64(self)
    }
}

macro_rules! float_matrix_scalar {
    ($t:ty) => {
        impl MatrixScalar for $t {
            fn zero() -> Self {
                0.0
            }
            fn one() -> Self {
                1.0
            }
            fn add(&self, other: &Self) -> Self {
                self + other
            }
            fn sub(&self, other: &Self) -> Self {
                self - other
            }
            fn neg(&self) -> Self {
                -self
            }
            fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
                Ok(self * other)
            }
            fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
                if *other == 0.0 {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(self / other)
                }
            }
            fn is_zero(&self) -> bool {
                *self == 0.0
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float_matrix_scalar!(f64);
float_matrix_scalar!(f32);

/// Row-major 2×2 matrix; first row is (a, b).
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix2<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: MatrixScalar> Matrix2<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(S::one(), S::zero(), S::zero(), S::one())
    }

    pub fn det(&self) -> Result<S, ScalarError> {
        Ok(self.a.try_mul(&self.d)?.sub(&self.b.try_mul(&self.c)?))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(Self::new(
            self.a.try_mul(&rhs.a)?.add(&self.b.try_mul(&rhs.c)?),
            self.a.try_mul(&rhs.b)?.add(&self.b.try_mul(&rhs.d)?),
            self.c.try_mul(&rhs.a)?.add(&self.d.try_mul(&rhs.c)?),
            self.c.try_mul(&rhs.b)?.add(&self.d.try_mul(&rhs.d)?),
        ))
    }

    /// Inverse by the adjugate formula.
    pub fn inverse(&self) -> Result<Self, LatticeError> {
        let det = self.det()?;
        if det.is_zero() {
            return Err(LatticeError::SingularBasis);
        }
        Ok(Self::new(
            self.d.try_div(&det)?,
            self.b.neg().try_div(&det)?,
            self.c.neg().try_div(&det)?,
            self.a.try_div(&det)?,
        ))
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let (a, b, c, d) = (
            self.a.to_f64(),
            self.b.to_f64(),
            self.c.to_f64(),
            self.d.to_f64(),
        );
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    pub fn to_f64(&self) -> Matrix2<f64> {
        Matrix2::new(
            self.a.to_f64(),
            self.b.to_f64(),
            self.c.to_f64(),
            self.d.to_f64(),
        )
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.b.is_zero()
    }
}

/// Exact basis matrix.
pub type ExactMatrix = Matrix2<FieldScalar>;
/// Float basis matrix.
pub type FloatMatrix = Matrix2<f64>;

impl ExactMatrix {
    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(
            FieldScalar::from_integer(a),
            FieldScalar::from_integer(b),
            FieldScalar::from_integer(c),
            FieldScalar::from_integer(d),
        )
    }

    pub fn from_rationals(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self::new(
            FieldScalar::from_rational(a),
            FieldScalar::from_rational(b),
            FieldScalar::from_rational(c),
            FieldScalar::from_rational(d),
        )
    }

    /// Integer unimodular matrix from raw entries; panics if |det| ≠ 1.
    pub fn unimodular(a: i64, b: i64, c: i64, d: i64) -> Self {
        assert_eq!((a * d - b * c).abs(), 1, "not unimodular");
        Self::from_integers(a, b, c, d)
    }
}

/// Full-rank lattice Λ = Aℤ² with an exact or float backend.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)] // exact basis is the common case; boxing buys nothing here
pub enum Lattice2D {
    Exact(ExactMatrix),
    Float(FloatMatrix),
}

impl Lattice2D {
    pub fn exact(basis: ExactMatrix) -> Result<Self, LatticeError> {
        if basis.det()?.is_zero() {
            return Err(LatticeError::SingularBasis);
        }
        Ok(Self::Exact(basis))
    }

    pub fn float(basis: FloatMatrix) -> Result<Self, LatticeError> {
        if basis.det().expect("float det is total").abs() < 1e-12 {
            return Err(LatticeError::SingularBasis);
        }
        Ok(Self::Float(basis))
    }

    /// ℤ² itself.
    pub fn integer() -> Self {
        Self::Exact(ExactMatrix::from_integers(1, 0, 0, 1))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn exact_basis(&self) -> Result<&ExactMatrix, LatticeError> {
        match self {
            Self::Exact(m) => Ok(m),
            Self::Float(_) => Err(LatticeError::ExactBackendRequired),
        }
    }

    pub fn basis_f64(&self) -> FloatMatrix {
        match self {
            Self::Exact(m) => m.to_f64(),
            Self::Float(m) => m.clone(),
        }
    }

    /// Point A(m, n) in float coordinates.
    pub fn point(&self, m: i64, n: i64) -> [f64; 2] {
        self.basis_f64().apply([m as f64, n as f64])
    }
}

/// Density of the lattice: 1/|det A|, exact or float depending on backend.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityValue {
    Exact(FieldScalar),
    Float(f64),
}

impl DensityValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(v) => v.to_f64(),
            Self::Float(v) => *v,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Self::Exact(v) => *v == FieldScalar::one(),
            Self::Float(v) => (*v - 1.0).abs() < 1e-12,
        }
    }
}

/// Structure of π₁(Λ) = aℤ + bℤ.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionResult {
    /// π₁(Λ) = τℤ with τ > 0.
    Discrete(FieldScalar),
    /// π₁(Λ) dense in ℝ (b/a certified irrational).
    Dense,
    /// First row identically zero (degenerate; rejected upstream).
    Zero,
}

/// density(Λ) = 1/|det(basis)|.
pub fn density(lattice: &Lattice2D) -> Result<DensityValue, LatticeError> {
    match lattice {
        Lattice2D::Exact(m) => {
            let det = m.det()?;
            if det.is_zero() {
                return Err(LatticeError::SingularBasis);
            }
            let det = det.try_abs()?;
            Ok(DensityValue::Exact(FieldScalar::one().try_div(&det)?))
        }
        Lattice2D::Float(m) => {
            let det = m.det().expect("float det is total").abs();
            if det < 1e-12 {
                return Err(LatticeError::SingularBasis);
            }
            Ok(DensityValue::Float(1.0 / det))
        }
    }
}

/// Decides whether π₁(Λ) = aℤ + bℤ is discrete and finds its positive
/// generator. Exact backend only.
pub fn project_first(lattice: &Lattice2D) -> Result<ProjectionResult, LatticeError> {
    let basis = lattice.exact_basis()?;
    let a = &basis.a;
    let b = &basis.b;
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Ok(ProjectionResult::Zero),
        (true, false) => Ok(ProjectionResult::Discrete(b.try_abs()?)),
        (false, true) => Ok(ProjectionResult::Discrete(a.try_abs()?)),
        (false, false) => {
            // b/a rational iff the coefficient cross test holds:
            // (b0 + b1 ξ) = r (a0 + a1 ξ) needs b0 a1 == b1 a0.
            let cross_lhs = b.rational_part() * a.symbol_coeff();
            let cross_rhs = b.symbol_coeff() * a.rational_part();
            if cross_lhs == cross_rhs {
                let r = rational_ratio(b, a)?;
                let q = r.denom().clone();
                // aℤ + bℤ = a(ℤ + (p/q)ℤ) = (a/q)ℤ with gcd(p,q)=1.
                let generator = a
                    .try_abs()?
                    .scale(&Rational::new(BigInt::one(), q));
                Ok(ProjectionResult::Discrete(generator))
            } else {
                // The ratio involves ξ; density of ℤ + αℤ needs α certified
                // irrational.
                let sym = a
                    .symbol()
                    .or_else(|| b.symbol())
                    .expect("cross test failed, so a symbol is present");
                if !sym.irrational {
                    return Err(ScalarError::UncertifiedSymbol(sym.name.clone()).into());
                }
                Ok(ProjectionResult::Dense)
            }
        }
    }
}

/// Rational value of b/a given that the cross test certified proportionality.
fn rational_ratio(b: &FieldScalar, a: &FieldScalar) -> Result<Rational, LatticeError> {
    let r = if !a.rational_part().is_zero() {
        b.rational_part() / a.rational_part()
    } else {
        b.symbol_coeff() / a.symbol_coeff()
    };
    Ok(r)
}

/// Output of [`normalize_lower_triangular`].
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    /// Lower triangular basis [[τ, 0], [c, 1/τ]] of the same lattice.
    pub l: ExactMatrix,
    /// Integer matrix with det 1 such that basis·U = L (basis possibly
    /// column-swapped first, see `columns_swapped`).
    pub u: ExactMatrix,
    /// Set when det(basis) = -1 and the columns were swapped to reach det 1.
    pub columns_swapped: bool,
}

/// Rewrites a density-one lattice with discrete projection as L·ℤ² with L
/// lower triangular, L₁₁ = τ > 0, det L = 1, via an integer unimodular
/// change of basis U with canonical Bezout coefficients.
pub fn normalize_lower_triangular(lattice: &Lattice2D) -> Result<Normalization, LatticeError> {
    let basis = lattice.exact_basis()?;
    let det = basis.det()?;
    let (basis, columns_swapped) = if det == FieldScalar::one() {
        (basis.clone(), false)
    } else if det == FieldScalar::one().neg() {
        // det -1: swapping the columns flips the sign and keeps the lattice.
        (
            ExactMatrix::new(
                basis.b.clone(),
                basis.a.clone(),
                basis.d.clone(),
                basis.c.clone(),
            ),
            true,
        )
    } else {
        return Err(LatticeError::NotDensityOne);
    };

    let swapped_lattice = Lattice2D::Exact(basis.clone());
    let tau = match project_first(&swapped_lattice)? {
        ProjectionResult::Discrete(t) => t,
        ProjectionResult::Dense => return Err(LatticeError::NotDiscrete),
        ProjectionResult::Zero => return Err(LatticeError::DegenerateFirstRow),
    };

    let m = basis
        .a
        .try_div(&tau)?
        .as_integer()
        .expect("a/tau is an integer by construction of the generator");
    let n = basis
        .b
        .try_div(&tau)?
        .as_integer()
        .expect("b/tau is an integer by construction of the generator");
    debug_assert!(m.gcd(&n).is_one(), "generator must make (m, n) coprime");

    let (r, s) = canonical_bezout(&m, &n);
    let u = ExactMatrix::new(
        FieldScalar::from_rational(BigRational::from_integer(r.clone())),
        FieldScalar::from_rational(BigRational::from_integer(-n.clone())),
        FieldScalar::from_rational(BigRational::from_integer(s.clone())),
        FieldScalar::from_rational(BigRational::from_integer(m.clone())),
    );
    debug_assert_eq!(u.det().unwrap(), FieldScalar::one());

    let l = basis.mul(&u)?;
    debug_assert!(l.b.is_zero(), "L must come out lower triangular");
    debug_assert_eq!(l.det().unwrap(), FieldScalar::one());
    debug_assert_eq!(l.a, tau);

    Ok(Normalization {
        l,
        u,
        columns_swapped,
    })
}

/// Bezout pair (r, s) with m·r + n·s = 1 for coprime m, n, normalized to
/// 0 ≤ r < |n| when n ≠ 0, and (r, s) = (sign(m), 0) when n = 0.
fn canonical_bezout(m: &BigInt, n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        let sign = if m.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        return (sign, BigInt::zero());
    }
    let ext = m.extended_gcd(n);
    debug_assert!(ext.gcd.is_one());
    let n_abs = n.abs();
    // Shift r into [0, |n|): r -> r + k|n| adjusts s -> s - k*m*sign(n)... do
    // it through the identity m(r + t·n) + n(s - t·m) = 1.
    let mut r = ext.x;
    let mut s = ext.y;
    let t = r.div_floor(&n_abs);
    let step_sign = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    r -= &t * &n_abs;
    s += &t * m * step_sign;
    debug_assert!(r >= BigInt::zero() && r < n_abs);
    debug_assert!((m * &r + n * &s).is_one());
    (r, s)
}

/// Parameters (μ, ν) of S = L⁻¹ for lower triangular L = [[a,0],[c,1/a]],
/// so that S = [[μ, 0], [ν, 1/μ]] with μ = 1/a, ν = -c.
pub fn chirp_params(l: &ExactMatrix) -> Result<(FieldScalar, FieldScalar), LatticeError> {
    if !l.is_lower_triangular() {
        return Err(LatticeError::NotLowerTriangular);
    }
    if l.a.is_zero() {
        return Err(LatticeError::SingularBasis);
    }
    let mu = FieldScalar::one().try_div(&l.a)?;
    let nu = l.c.neg();
    Ok((mu, nu))
}

/// Float-backend lattice R_θℤ².
pub fn rotation_lattice(theta: f64) -> Lattice2D {
    let (sin, cos) = theta.sin_cos();
    Lattice2D::Float(FloatMatrix::new(cos, -sin, sin, cos))
}
