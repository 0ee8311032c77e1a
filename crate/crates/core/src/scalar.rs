//! The scalar abstraction shared by every polynomial and rational-function
//! type in the crate.
//!
//! Everything here is exact. A [`Field`] is any type with context-free
//! `zero`/`one` (from `num-traits`) and exact division. The concrete
//! instances are [`Rational`], [`CycloNum`](crate::CycloNum), and the
//! rational-function towers built on top of them with
//! [`RatFun`](crate::RatFun).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// An exact field.
///
/// `NESTING` counts how many rational-function layers sit above the
/// constants; it names the polynomial variable at each layer (`t`, then
/// `x`, then `y`).
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const NESTING: usize;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    /// The rational value, if this element lies in the prime field.
    fn as_rational(&self) -> Option<Rational>;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Polynomial variable names by nesting depth.
pub(crate) fn var_name(depth: usize) -> &'static str {
    match depth {
        0 => "t",
        1 => "x",
        2 => "y",
        _ => "w",
    }
}

impl Field for Rational {
    const NESTING: usize = 0;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Formats a rational in the expression grammar: `3`, `-2`, `1/2`.
pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True when a printed coefficient must be wrapped in parentheses before it
/// is multiplied onto a monomial.
pub(crate) fn needs_parens(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    body.contains(['+', '-', ' '])
}

pub(crate) fn is_negative_rational(q: &Rational) -> bool {
    q.is_negative()
}
