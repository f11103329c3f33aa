//! Floating point abstraction shared by the simulator and the analytic models.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};
use serde::Serialize;

/// Real scalar the whole crate is generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Shortest decimal string that parses back to the same value.
    fn to_shortest(self) -> String;

    /// Lossless-as-possible conversion from `f64` constants.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable")
    }

    /// Conversion from a count or index.
    fn from_count(value: usize) -> Self {
        Self::from_usize(value).expect("count representable")
    }
}

macro_rules! impl_scalar {
    ($f:ty) => {
        impl Scalar for $f {
            fn to_shortest(self) -> String {
                if self.is_finite() {
                    ryu::Buffer::new().format_finite(self).to_owned()
                } else {
                    self.to_string()
                }
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);

/// Pairwise summation; error grows as O(log n) rather than O(n).
pub fn pairwise_sum<T: Scalar>(values: &[T]) -> T {
    const BLOCK: usize = 128;
    if values.len() <= BLOCK {
        let mut acc = T::zero();
        for &v in values {
            acc = acc + v;
        }
        acc
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Pairwise sum of `f(v)` over the slice.
pub fn pairwise_sum_map<T: Scalar>(values: &[T], f: impl Fn(T) -> T + Copy) -> T {
    const BLOCK: usize = 128;
    if values.len() <= BLOCK {
        let mut acc = T::zero();
        for &v in values {
            acc = acc + f(v);
        }
        acc
    } else {
        let mid = values.len() / 2;
        pairwise_sum_map(&values[..mid], f) + pairwise_sum_map(&values[mid..], f)
    }
}
