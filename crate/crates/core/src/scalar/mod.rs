//! Exact and high-precision scalar types.
//!
//! * [`Rat`]: arbitrary-precision rationals (always in lowest terms).
//! * [`CycNum`]: elements of the cyclotomic field `Q(ζ_m)` in the power basis
//!   modulo the `m`-th cyclotomic polynomial.
//! * [`CFloat`]: complex numbers with multi-precision binary components.
//!
//! The [`Scalar`] and [`Numeric`] traits let polynomial evaluation and the
//! gradient routines run unchanged over any of them.

mod cfloat;
mod cyclotomic;
mod rat;
mod upoly;

use std::fmt::Debug;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

pub use cfloat::{CFloat, DEFAULT_PRECISION};
pub use cyclotomic::{common_conductor, cyclotomic_polynomial, euler_phi, lift_all, CycNum};
pub use rat::{rat, rat_from_pair, rat_sqrt, rat_to_pair, Rat};

/// Commutative ring operations shared by the exact and floating scalars.
///
/// Constructors take `&self` so that types carrying context (the conductor of
/// a [`CycNum`], the precision of a [`CFloat`]) can produce compatible values.
pub trait Scalar: Clone + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplication by a rational constant.
    fn scaled(&self, c: &Rat) -> Self;
    /// True only for the exact zero (for floats: the literal zero).
    fn is_zero_value(&self) -> bool;

    fn scaled_int(&self, c: i64) -> Self {
        self.scaled(&Rat::from_integer(c.into()))
    }

    fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

/// Complex floating scalars used by the numeric search.
pub trait Numeric: Scalar {
    fn from_parts_like(&self, re: f64, im: f64) -> Self;
    fn conj(&self) -> Self;
    /// Modulus, rounded to `f64`.
    fn modulus(&self) -> f64;
    /// Reciprocal; callers guarantee `self` is nonzero.
    fn recip(&self) -> Self;
    /// Principal square root.
    fn sqrt(&self) -> Self;
    fn to_complex64(&self) -> Complex64;
}

impl Scalar for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Rat) -> Self {
        self * c
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Rat) -> Self {
        self * c.to_f64().unwrap_or(f64::NAN)
    }
    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
}

impl Scalar for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::zero()
    }
    fn one_like(&self) -> Self {
        Complex64::one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Rat) -> Self {
        self * c.to_f64().unwrap_or(f64::NAN)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl Numeric for Complex64 {
    fn from_parts_like(&self, re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn recip(&self) -> Self {
        self.inv()
    }
    fn sqrt(&self) -> Self {
        Complex64::sqrt(*self)
    }
    fn to_complex64(&self) -> Complex64 {
        *self
    }
}
