//! Rational scalars and their `"num/den"` string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. `BigRational` keeps numerator and denominator
/// coprime with a positive denominator after every operation.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or a bare integer `"p"`. Whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Always emits `num/den`, including `n/1` for integers.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Integer power with negative exponents allowed. Panics on `0^-k`.
pub fn pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        assert!(!base.is_zero(), "zero to a negative power");
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

/// Lossy decimal view, used only for human-readable summaries.
pub fn approx(r: &Rational) -> f64 {
    // BigRational::to_f64 overflows to NaN on huge operands; scale through logs instead.
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().abs();
    let d = r.denom();
    let bits = n.bits() as i64 - d.bits() as i64;
    let shift = bits.clamp(-1000, 1000);
    let scaled = if shift >= 0 {
        Rational::new(n, d.clone() << (shift as usize))
    } else {
        Rational::new(n << ((-shift) as usize), d.clone())
    };
    let m = scaled.to_f64().unwrap_or(f64::NAN);
    let v = m * 2f64.powi(shift as i32);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

pub fn is_unit_root(q: &Rational) -> bool {
    q.is_one() || *q == -Rational::one()
}

/// (De)serializes a `Rational` as a `"num/den"` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rational_opt_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<Vec<Rational>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.iter().map(format_rational).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(d)?;
        raw.map(|v| {
            v.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        })
        .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("2/5").unwrap(), rat(2, 5));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn format_is_reduced() {
        assert_eq!(format_rational(&rat(4, -10)), "-2/5");
        assert_eq!(format_rational(&int(3)), "3/1");
    }

    #[test]
    fn negative_powers() {
        assert_eq!(pow(&rat(2, 5), -2), rat(25, 4));
        assert_eq!(pow(&rat(2, 5), 0), int(1));
    }

    #[test]
    fn approx_handles_huge_values() {
        let big = pow(&rat(5, 2), 2000);
        assert!(approx(&big).is_infinite() || approx(&big) > 1e300);
        let tiny = pow(&rat(2, 5), 900);
        let a = approx(&tiny);
        assert!((0.0..1e-300).contains(&a));
        assert!((approx(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }
}
