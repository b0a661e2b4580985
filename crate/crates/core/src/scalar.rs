//! Scalar abstraction for measure values.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// A number type that can hold measures of events.
///
/// Exact rationals give exact answers; floats trade exactness for speed.
pub trait MeasureScalar: Num + Clone + PartialOrd + Debug {
    /// The value `num / den`. `den` must be non-zero.
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self;

    fn from_u64_ratio(num: u64, den: u64) -> Self {
        Self::from_ratio(&BigUint::from(num), &BigUint::from(den))
    }
}

impl MeasureScalar for BigRational {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }
}

impl MeasureScalar for f64 {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        BigRational::from_ratio(num, den)
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl MeasureScalar for f32 {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        BigRational::from_ratio(num, den)
            .to_f32()
            .unwrap_or(f32::NAN)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u32), |acc, i| acc * i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_reduced() {
        let r = BigRational::from_u64_ratio(6, 8);
        assert_eq!(r.to_string(), "3/4");
        assert_eq!(BigRational::from_u64_ratio(4, 4).to_string(), "1");
    }

    #[test]
    fn float_ratio() {
        assert_eq!(f64::from_u64_ratio(1, 4), 0.25);
        assert_eq!(f32::from_u64_ratio(3, 4), 0.75);
        let huge = factorial(30);
        assert!(
            (f64::from_ratio(&BigUint::from(1u32), &huge) - 1.0 / 2.652_528_598_121_91e32).abs()
                < 1e-40
        );
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(8), BigUint::from(40320u32));
    }
}
