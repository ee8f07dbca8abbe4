use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Arithmetic used by the completion search; `None` signals overflow.
pub(crate) trait Scalar: Clone + Eq + std::hash::Hash + std::fmt::Debug {
    fn from_i64(x: i64) -> Self;
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
}

impl Scalar for i64 {
    fn from_i64(x: i64) -> Self {
        x
    }

    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn is_negative(&self) -> bool {
        *self < 0
    }
}

impl Scalar for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }

    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}
