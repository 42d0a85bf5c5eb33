//! Scalar abstraction shared by the exact and floating-point code paths.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed};

/// Exact rational number. Arbitrary precision, always reduced.
pub type Rational = BigRational;

/// A number type that curvature, index and expectation computations can be
/// carried out in.
///
/// Implemented for every signed `Num` that can be built from `i64`, which
/// covers [`Rational`], `f64` and `f32`.
pub trait Scalar: Num + Signed + Clone + PartialOrd + FromPrimitive + Debug + Display + Send + Sync {
    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("every scalar type represents i64 values")
    }

    /// `num / den`; `den` must be nonzero.
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_int(num) / Self::from_int(den)
    }

    fn from_count(value: u64) -> Self {
        <Self as FromPrimitive>::from_u64(value).expect("every scalar type represents u64 values")
    }
}

impl<T> Scalar for T where
    T: Num + Signed + Clone + PartialOrd + FromPrimitive + Debug + Display + Send + Sync
{
}

/// Builds an exact rational from a numerator and denominator.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Binomial coefficient as `u64`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Lossy conversion to `f64`, for reporting only.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

/// Serializes any `Display` value as a JSON string, e.g. `"1/6"`.
pub fn serde_display<T: Display, S: serde::Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_reduces() {
        let r: Rational = Scalar::ratio(4, 6);
        assert_eq!(r, rational(2, 3));
        assert_eq!(r.to_string(), "2/3");
        let f: f64 = Scalar::ratio(1, 4);
        assert_eq!(f, 0.25);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(20, 10), Some(184_756));
        assert_eq!(binomial(67, 33), Some(14_226_520_737_620_288_370));
        assert_eq!(binomial(200, 100), None);
    }
}
