//! Scalar rings.
//!
//! Everything in this crate is generic over [`Scalar`], a commutative ring
//! with unit together with a unit test. Two instantiations are provided:
//! exact rationals ([`BigRational`]) and thresholded floating point
//! ([`Real`]).

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A commutative ring with unit and a decidable group of units.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Returns the multiplicative inverse, or [`Error::NotInvertible`]
    /// when `self` is not a unit.
    fn try_invert(&self) -> Result<Self>;

    fn from_integer(n: &BigInt) -> Self;

    fn is_unit(&self) -> bool {
        self.try_invert().is_ok()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }

    /// Image of a rational number; fails when its denominator is not a unit.
    fn from_rational(q: &BigRational) -> Result<Self> {
        let den = Self::from_integer(q.denom()).try_invert()?;
        Ok(Self::from_integer(q.numer()) * den)
    }

    /// Equality up to the ring's notion of rounding. Exact rings use `==`.
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

impl Scalar for BigRational {
    fn try_invert(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::NotInvertible)
        } else {
            Ok(self.recip())
        }
    }

    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_rational(q: &BigRational) -> Result<Self> {
        Ok(q.clone())
    }
}

/// Default invertibility threshold of [`Real`].
pub const DEFAULT_THRESHOLD: f64 = 1e-12;

/// A floating-point scalar whose units are the values with `|value| > ε`.
///
/// Binary operations keep the larger threshold of their operands. The
/// identities `zero()` and `one()` carry threshold zero, so they never
/// override the threshold chosen for the inputs.
/// Equality compares values only.
#[derive(Clone, Copy, Debug)]
pub struct Real<F> {
    value: F,
    threshold: F,
}

impl<F: Float> Real<F> {
    pub fn new(value: F) -> Self {
        Self {
            value,
            threshold: F::from(DEFAULT_THRESHOLD).unwrap_or_else(F::epsilon),
        }
    }

    pub fn with_threshold(value: F, threshold: F) -> Self {
        Self {
            value,
            threshold: threshold.abs(),
        }
    }

    pub fn value(&self) -> F {
        self.value
    }

    pub fn threshold(&self) -> F {
        self.threshold
    }

    fn lift(&self, other: &Self, value: F) -> Self {
        Self {
            value,
            threshold: self.threshold.max(other.threshold),
        }
    }
}

impl<F: Float> PartialEq for Real<F> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<F: Float + Display> Display for Real<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(&self.value, f)
    }
}

impl<F: Float> Add for Real<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.lift(&rhs, self.value + rhs.value)
    }
}

impl<F: Float> Sub for Real<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.lift(&rhs, self.value - rhs.value)
    }
}

impl<F: Float> Mul for Real<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.lift(&rhs, self.value * rhs.value)
    }
}

impl<F: Float> Neg for Real<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: -self.value,
            threshold: self.threshold,
        }
    }
}

impl<F: Float> Zero for Real<F> {
    fn zero() -> Self {
        Self::with_threshold(F::zero(), F::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl<F: Float> One for Real<F> {
    fn one() -> Self {
        Self::with_threshold(F::one(), F::zero())
    }
}

impl<F> Scalar for Real<F>
where
    F: Float + Debug + Display + Send + Sync + 'static,
{
    fn try_invert(&self) -> Result<Self> {
        if self.value.abs() > self.threshold {
            Ok(Self {
                value: self.value.recip(),
                threshold: self.threshold,
            })
        } else {
            Err(Error::NotInvertible)
        }
    }

    fn from_integer(n: &BigInt) -> Self {
        Self::new(F::from(n.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan))
    }

    fn from_rational(q: &BigRational) -> Result<Self> {
        let v = q.to_f64().ok_or(Error::NotInvertible)?;
        Ok(Self::new(F::from(v).unwrap_or_else(F::nan)))
    }

    /// Relative comparison at a tolerance of `1e-9` (scaled by magnitude).
    fn approx_eq(&self, other: &Self) -> bool {
        let tol = F::from(1e-9).unwrap_or_else(F::epsilon);
        let scale = F::one().max(self.value.abs()).max(other.value.abs());
        (self.value - other.value).abs() <= tol * scale
    }
}
