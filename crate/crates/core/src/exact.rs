//! Serde adapters for exact numbers.
//!
//! Integers whose magnitude exceeds 2^53 are written as decimal strings so
//! that JSON consumers backed by doubles cannot silently round them. Rationals
//! are always written as `"p/q"` in lowest terms.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};
use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;
use std::fmt;

const SAFE: i64 = 1 << 53;

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) if v.abs() <= SAFE => s.serialize_i64(v),
            _ => s.serialize_str(&x.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(BigIntVisitor)
    }

    struct BigIntVisitor;

    impl<'de> Visitor<'de> for BigIntVisitor {
        type Value = BigInt;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an integer or a decimal string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(v.into())
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(v.into())
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            v.parse().map_err(E::custom)
        }
    }

    /// True when the value would be emitted as a JSON number.
    pub fn fits_json_number(x: &BigInt) -> bool {
        x.abs() <= BigInt::from(SAFE)
    }
}

pub mod ratio {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", x.numer(), x.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        let text: String = serde::Deserialize::deserialize(d)?;
        parse(&text).ok_or_else(|| de::Error::custom(format!("bad rational {text:?}")))
    }

    pub fn parse(text: &str) -> Option<Ratio<i64>> {
        let (p, q) = text.split_once('/')?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        Some(Ratio::new(p.trim().parse().ok()?, q))
    }

    /// Integer values print bare, everything else as `p/q`.
    pub fn display(x: &Ratio<i64>) -> String {
        if x.is_integer() {
            x.numer().to_string()
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }
}
