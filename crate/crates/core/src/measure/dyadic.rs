use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::ExactRational;

/// A binary rational `mantissa / 2^exponent` approximating a measure to
/// within `2^{−exponent}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicApprox {
    pub mantissa: BigInt,
    pub exponent: u32,
}

impl DyadicApprox {
    /// Nearest dyadic with denominator `2^k`; the error is at most `2^{−k−1}`.
    pub fn round(value: &ExactRational, k: u32) -> Self {
        let scale = BigInt::one() << k;
        let scaled = value * ExactRational::from_integer(scale);
        // floor(x + 1/2)
        let twice: BigInt = scaled.numer() * 2 + scaled.denom();
        let mantissa = twice.div_floor(&(scaled.denom() * 2));
        DyadicApprox {
            mantissa,
            exponent: k,
        }
    }

    pub fn value(&self) -> ExactRational {
        ExactRational::new(self.mantissa.clone(), BigInt::one() << self.exponent)
    }

    /// `|self − x| < 2^{−exponent}`.
    pub fn within(&self, x: &ExactRational) -> bool {
        let diff = self.value() - x;
        let bound = ExactRational::new(BigInt::one(), BigInt::one() << self.exponent);
        diff < bound && -diff < bound
    }
}

impl fmt::Display for DyadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.mantissa, self.exponent)
    }
}
