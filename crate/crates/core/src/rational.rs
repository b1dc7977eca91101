//! Exact rationals and their serialized form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`; panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

pub fn is_zero(q: &Rational) -> bool {
    q.is_zero()
}

/// Wire form of a rational: numerator and denominator as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalRepr {
    fn from(q: &Rational) -> Self {
        RationalRepr {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl RationalRepr {
    pub fn parse(&self) -> Result<Rational, String> {
        let num: BigInt = self
            .num
            .parse()
            .map_err(|_| format!("bad numerator `{}`", self.num))?;
        let den: BigInt = self
            .den
            .parse()
            .map_err(|_| format!("bad denominator `{}`", self.den))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rational::new(num, den))
    }
}

impl std::fmt::Display for RationalRepr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == "1" {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `serde(with = "rational::serde_q")` for `Rational` fields.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr::from(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        repr.parse().map_err(serde::de::Error::custom)
    }
}

/// Human form: `22`, `-3/4`.
pub fn display(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
