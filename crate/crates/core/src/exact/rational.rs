use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational, always reduced with positive denominator.
/// Displays and serializes as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactQ(pub BigRational);

impl ExactQ {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactQ(BigRational::new(num.into(), den.into()))
    }

    pub fn int(v: impl Into<BigInt>) -> Self {
        ExactQ(BigRational::from_integer(v.into()))
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        Self::int(BigInt::from(v.clone()))
    }

    pub fn zero() -> Self {
        ExactQ(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactQ(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn recip(&self) -> Self {
        ExactQ(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Self {
        ExactQ(num_traits::Pow::pow(&self.0, e))
    }

    pub fn abs(&self) -> Self {
        ExactQ(self.0.abs())
    }

    /// Nearest double; `±inf` or `0` when out of range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Natural log of a positive value, accurate even far outside the `f64` range.
    pub fn ln(&self) -> f64 {
        assert!(self.0.is_positive(), "ln of a non-positive rational");
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Display for ExactQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for ExactQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Invalid(format!("not a rational: {s:?}"));
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(ExactQ::new(p, q))
    }
}

impl Serialize for ExactQ {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactQ {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for ExactQ {
    fn from(v: i64) -> Self {
        ExactQ::int(v)
    }
}

impl From<BigUint> for ExactQ {
    fn from(v: BigUint) -> Self {
        ExactQ::int(BigInt::from(v))
    }
}

impl From<BigInt> for ExactQ {
    fn from(v: BigInt) -> Self {
        ExactQ::int(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for ExactQ {
            type Output = ExactQ;
            fn $m(self, rhs: ExactQ) -> ExactQ {
                ExactQ(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactQ> for ExactQ {
            type Output = ExactQ;
            fn $m(self, rhs: &'a ExactQ) -> ExactQ {
                ExactQ(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactQ> for &'a ExactQ {
            type Output = ExactQ;
            fn $m(self, rhs: &'a ExactQ) -> ExactQ {
                ExactQ((&self.0).$m(&rhs.0))
            }
        }
        impl $atr for ExactQ {
            fn $am(&mut self, rhs: ExactQ) {
                self.0.$am(rhs.0);
            }
        }
        impl<'a> $atr<&'a ExactQ> for ExactQ {
            fn $am(&mut self, rhs: &'a ExactQ) {
                self.0.$am(&rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div for ExactQ {
    type Output = ExactQ;
    fn div(self, rhs: ExactQ) -> ExactQ {
        ExactQ(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a ExactQ> for &'a ExactQ {
    type Output = ExactQ;
    fn div(self, rhs: &'a ExactQ) -> ExactQ {
        ExactQ(&self.0 / &rhs.0)
    }
}

impl<'a> Div<&'a ExactQ> for ExactQ {
    type Output = ExactQ;
    fn div(self, rhs: &'a ExactQ) -> ExactQ {
        ExactQ(self.0 / &rhs.0)
    }
}

impl Neg for ExactQ {
    type Output = ExactQ;
    fn neg(self) -> ExactQ {
        ExactQ(-self.0)
    }
}

impl Sum for ExactQ {
    fn sum<I: Iterator<Item = ExactQ>>(iter: I) -> Self {
        iter.fold(ExactQ::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a ExactQ> for ExactQ {
    fn sum<I: Iterator<Item = &'a ExactQ>>(iter: I) -> Self {
        iter.fold(ExactQ::zero(), |a, b| a + b)
    }
}

impl Product for ExactQ {
    fn product<I: Iterator<Item = ExactQ>>(iter: I) -> Self {
        iter.fold(ExactQ::one(), |a, b| a * b)
    }
}
