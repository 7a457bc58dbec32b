//! Exact rational numbers and their text form.
//!
//! Rationals are written as `numerator/denominator` in lowest terms with a
//! positive denominator. Parsing also accepts bare integers.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

pub fn pow2_neg(exp: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << exp as usize)
}

pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Human-facing form: integers without the `/1`.
pub fn display(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format(r)
    }
}

pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("malformed rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn clamp_unit(r: &Rational) -> Rational {
    if r.is_negative() {
        Rational::zero()
    } else if *r > Rational::one() {
        Rational::one()
    } else {
        r.clone()
    }
}

pub fn in_range(r: &Rational, low: &Rational, high: &Rational) -> bool {
    r >= low && r <= high
}

/// `|a - b| <= tol`, exactly.
pub fn within(a: &Rational, b: &Rational, tol: &Rational) -> bool {
    (a - b).abs() <= *tol
}

/// Smallest integer `>= r`.
pub fn ceil_to_u64(r: &Rational) -> Option<u64> {
    let c = r.ceil().to_integer();
    u64::try_from(c).ok()
}

/// `floor(r)` as a big integer.
pub fn floor_int(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Approximate decimal rendering for display only.
pub fn approx(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapters that store rationals in their text form.
pub mod text {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(D::Error::custom)
    }

    pub mod option {
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        use super::super::Rational;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&super::super::format(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| super::super::parse(&s).map_err(D::Error::custom))
                .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("6/8").unwrap(), ratio(3, 4));
        assert_eq!(format(&parse("6/8").unwrap()), "3/4");
        assert_eq!(format(&parse("-2/-4").unwrap()), "1/2");
        assert_eq!(format(&parse("5").unwrap()), "5/1");
        assert_eq!(display(&parse("10/2").unwrap()), "5");
        assert_eq!(display(&parse("-3/6").unwrap()), "-1/2");
        assert_eq!(format(&parse("-3/6").unwrap()), "-1/2");
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(parse("1/0"), Err(Error::Parse(_))));
        assert!(parse("a/2").is_err());
        assert!(parse("").is_err());
        assert!(parse("1/2/3").is_err());
    }

    #[test]
    fn helpers() {
        assert_eq!(pow2_neg(3), ratio(1, 8));
        assert_eq!(clamp_unit(&ratio(3, 2)), int(1));
        assert_eq!(clamp_unit(&ratio(-1, 2)), int(0));
        assert!(within(&ratio(1, 2), &ratio(51, 100), &ratio(1, 100)));
        assert!(!within(&ratio(1, 2), &ratio(52, 100), &ratio(1, 100)));
        assert_eq!(ceil_to_u64(&ratio(100, 3)), Some(34));
        assert_eq!(floor_int(&ratio(-1, 2)), BigInt::from(-1));
    }
}
