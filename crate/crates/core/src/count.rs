//! Exact counts and their logarithms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative integer of unbounded size.
///
/// Serializes as a decimal string so that values past 2^53 survive JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Count(BigUint);

impl Count {
    pub fn new(value: BigUint) -> Self {
        Count(value)
    }

    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    /// Natural log, see [`log_of_count`].
    pub fn ln(&self) -> Result<LogEstimate> {
        log_of_count(self)
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl PartialEq<u64> for Count {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Count {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // BigUint accepts a leading '+' and underscores; a count literal is digits only.
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(s.to_owned()));
        }
        BigUint::from_str(s)
            .map(Count)
            .map_err(|_| Error::Parse(s.to_owned()))
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Natural logarithm of a positive quantity too large for an `f64`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogEstimate {
    pub log_value: f64,
}

impl LogEstimate {
    pub fn new(log_value: f64) -> Self {
        LogEstimate { log_value }
    }

    /// `exp(self - other) - 1`, the relative error of `other` as an estimate of `self`.
    pub fn relative_error_of(self, estimate: LogEstimate) -> f64 {
        (self.log_value - estimate.log_value).exp_m1()
    }
}

impl std::ops::Sub for LogEstimate {
    type Output = f64;

    fn sub(self, rhs: LogEstimate) -> f64 {
        self.log_value - rhs.log_value
    }
}

/// Bits kept in the mantissa window; anything shorter converts exactly.
const MANTISSA_WINDOW: u64 = 64;

/// `ln(c)` from the bit length plus the leading 64 bits, so it never
/// overflows and keeps ~1e-16 absolute accuracy.
pub fn log_of_count(c: &Count) -> Result<LogEstimate> {
    let v = &c.0;
    if v.is_zero() {
        return Err(Error::LogOfZero);
    }
    let bits = v.bits();
    let shift = bits.saturating_sub(MANTISSA_WINDOW);
    let top = (v >> shift).to_u64().expect("window fits in u64");
    let ln = (top as f64).ln() + shift as f64 * std::f64::consts::LN_2;
    Ok(LogEstimate::new(ln))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn log_of_small_counts() {
        assert_eq!(log_of_count(&Count::from(1)).unwrap().log_value, 0.0);
        let l = log_of_count(&Count::from(230)).unwrap().log_value;
        assert!((l - 230f64.ln()).abs() < 1e-15);
        assert!((l - 5.43808).abs() < 1e-5);
    }

    #[test]
    fn log_of_power_of_two() {
        let c = Count::new(BigUint::one() << 200u32);
        let l = log_of_count(&c).unwrap().log_value;
        let want = 200.0 * std::f64::consts::LN_2;
        assert!(((l - want) / want).abs() < 1e-15);
    }

    #[test]
    fn log_of_huge_count_is_finite() {
        // 10^2000 would be +inf through a plain f64 conversion.
        let c = Count::new(BigUint::from(10u32).pow(2000));
        let l = log_of_count(&c).unwrap().log_value;
        let want = 2000.0 * std::f64::consts::LN_10;
        assert!(((l - want) / want).abs() < 1e-12);
    }

    #[test]
    fn log_of_zero_fails() {
        assert_eq!(log_of_count(&Count::zero()), Err(Error::LogOfZero));
    }

    #[test]
    fn rejects_non_decimal_literals() {
        for s in ["", "+1", "1_000", "-3", "0x10", " 5"] {
            assert!(s.parse::<Count>().is_err(), "{s:?}");
        }
        assert_eq!("007".parse::<Count>().unwrap(), 7u64);
    }

    #[test]
    fn serializes_as_string() {
        let c: Count = "123456789012345678901234567890".parse().unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, "\"123456789012345678901234567890\"");
        let back: Count = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    proptest! {
        #[test]
        fn decimal_round_trip(digits in "[1-9][0-9]{0,80}") {
            let c: Count = digits.parse().unwrap();
            prop_assert_eq!(c.to_string(), digits);
        }

        #[test]
        fn log_matches_f64_in_range(x in 1u64..u64::MAX) {
            let l = log_of_count(&Count::from(x)).unwrap().log_value;
            prop_assert!((l - (x as f64).ln()).abs() <= 1e-12 * (x as f64).ln().max(1.0));
        }
    }
}
