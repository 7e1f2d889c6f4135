//! Coefficient fields.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

/// A field of coefficients. Exact rationals are the reference instance;
/// floating point types are accepted for quick numerical experiments.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + Debug + Display + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self;

    /// Parses an integer or `p/q` literal.
    fn parse_literal(s: &str) -> Option<Self>;

    /// Whether display needs parentheses when used as a factor.
    fn is_neg(&self) -> bool;
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse_literal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn is_neg(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_int(n: i64) -> Self {
                n as $t
            }

            fn parse_literal(s: &str) -> Option<Self> {
                let s = s.trim();
                match s.split_once('/') {
                    Some((p, q)) => Some(p.trim().parse::<$t>().ok()? / q.trim().parse::<$t>().ok()?),
                    None => s.parse().ok(),
                }
            }

            fn is_neg(&self) -> bool {
                *self < 0.0
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        let q = BigRational::parse_literal("-3/6").unwrap();
        assert_eq!(q, BigRational::new((-1).into(), 2.into()));
        assert_eq!(q.to_string(), "-1/2");
        assert!(BigRational::parse_literal("x").is_none());
    }

    #[test]
    fn float_literals() {
        assert_eq!(f64::parse_literal("3/4"), Some(0.75));
        assert_eq!(f32::from_int(-2), -2.0);
    }
}
