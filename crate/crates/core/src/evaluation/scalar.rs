use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::Rational;
use crate::graphs::format_rational;

/// Tolerance used by float models, relative to the larger magnitude.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Field of values a model computes in.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    /// Equality for rationals; agreement within [`FLOAT_TOLERANCE`] for floats.
    fn close_to(&self, other: &Self) -> bool;

    /// Size estimate used for pivot selection.
    fn magnitude(&self) -> f64;

    fn render(&self) -> String;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn close_to(&self, other: &Self) -> bool {
        self == other
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map_or(f64::INFINITY, f64::abs)
    }

    fn render(&self) -> String {
        format_rational(self)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn close_to(&self, other: &Self) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        (self - other).abs() <= FLOAT_TOLERANCE * scale
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn render(&self) -> String {
        format!("{self:e}")
    }
}
