use std::fmt;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Coefficient field for polynomials and graph weights.
///
/// Anything that behaves like an ordered field works for the arithmetic
/// (`f64`, `f32`, [`crate::Rational`]). Root isolation, multiplicities and
/// every theorem check need exact comparisons and are only provided for
/// [`crate::Rational`].
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type represents small integers")
    }
}

impl<T> Scalar for T where
    T: Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}
