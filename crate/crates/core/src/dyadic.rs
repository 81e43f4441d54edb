//! Exact dyadic rationals `m / 2^e` with arbitrary-precision mantissas.
//!
//! These are the index set for all sparse vectors in this crate. The
//! midpoint recursion that realizes rational placements halves intervals
//! once per step, so mantissas grow by roughly one bit per step and
//! fixed-width integers overflow long before the test sizes used here.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact dyadic rational in canonical form: the mantissa is odd unless
/// the exponent is zero. Ordering and equality agree with the rational value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: u32) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.canonicalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: 0 }
    }

    pub fn half() -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: 1 }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic { mantissa: BigInt::from(v), exponent: 0 }
    }

    fn canonicalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let shift = self.mantissa.trailing_zeros().unwrap_or(0).min(u64::from(self.exponent));
        if shift > 0 {
            self.mantissa >>= shift;
            self.exponent -= shift as u32;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Exact midpoint `(a + b) / 2`.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        let e = a.exponent.max(b.exponent);
        let ma = &a.mantissa << u64::from(e - a.exponent);
        let mb = &b.mantissa << u64::from(e - b.exponent);
        Dyadic::new(ma + mb, e + 1)
    }

    /// Translation by an integer offset.
    pub fn translate_int(&self, offset: i64) -> Dyadic {
        self + &Dyadic::from_int(offset)
    }

    /// Approximate value, for diagnostics and output only.
    pub fn to_f64(&self) -> f64 {
        let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
        m / (2f64).powi(self.exponent as i32)
    }

    /// The smallest integer `>= self`, when it fits in an `i64`.
    pub fn ceil_i64(&self) -> Option<i64> {
        let one_less = (BigInt::one() << u64::from(self.exponent)) - BigInt::one();
        let ceiled = (&self.mantissa + one_less) >> u64::from(self.exponent);
        ceiled.to_i64()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        // m_a / 2^e_a  vs  m_b / 2^e_b  ==  m_a * 2^(e-e_a)  vs  m_b * 2^(e-e_b)
        let e = self.exponent.max(other.exponent);
        let ma = &self.mantissa << u64::from(e - self.exponent);
        let mb = &other.mantissa << u64::from(e - other.exponent);
        ma.cmp(&mb)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        let ma = &self.mantissa << u64::from(e - self.exponent);
        let mb = &rhs.mantissa << u64::from(e - rhs.exponent);
        Dyadic::new(ma + mb, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        let ma = &self.mantissa << u64::from(e - self.exponent);
        let mb = &rhs.mantissa << u64::from(e - rhs.exponent);
        Dyadic::new(ma - mb, e)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            let den = BigInt::one() << u64::from(self.exponent);
            write!(f, "{}/{}", self.mantissa, den)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Parses `"m"` or `"m/d"` where `d` is a power of two.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::ParseDyadic(s.to_string());
        match s.split_once('/') {
            None => {
                let m = BigInt::from_str(s.trim()).map_err(|_| bad())?;
                Ok(Dyadic::new(m, 0))
            }
            Some((num, den)) => {
                let m = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if d <= BigInt::zero() {
                    return Err(bad());
                }
                let bits = d.bits();
                // A positive power of two has exactly one set bit.
                if d != (BigInt::one() << (bits - 1)) {
                    return Err(bad());
                }
                Ok(Dyadic::new(m, (bits - 1) as u32))
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
