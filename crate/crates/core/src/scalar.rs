//! Scalar abstractions shared by the lattice and classical modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Field element usable for lattice constants: exact rationals or floats.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// `n / d` in this field.
    fn ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n).expect("integer in range") / Self::from_i64(d).expect("integer in range")
    }

    /// Integer embedding.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer in range")
    }
}

impl<T> Scalar for T where
    T: Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Floating-point scalar for the time-stepping code.
pub trait Real: Scalar + Float {
    /// Lossy conversion from `f64` constants.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("finite constant")
    }
}

impl<T: Scalar + Float> Real for T {}
