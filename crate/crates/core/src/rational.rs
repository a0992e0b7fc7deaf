//! Exact rationals and their JSON form.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Reduced big-integer fraction with positive denominator.
pub type ExactRational = BigRational;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

pub fn integer(v: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(v.into())
}

/// `{"num": "...", "den": "..."}` with decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&ExactRational> for RationalJson {
    fn from(r: &ExactRational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalises_sign() {
        let r = ratio(10, -6);
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(r.denom(), &BigInt::from(3));
        let json = serde_json::to_string(&RationalJson::from(&r)).unwrap();
        assert_eq!(json, r#"{"num":"-5","den":"3"}"#);
    }
}
