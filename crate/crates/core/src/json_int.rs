//! Integer wrapper for JSON documents.
//!
//! Values that fit in an `i64` are written as JSON numbers; larger ones are
//! written as decimal strings. Both forms are accepted on input.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct JsonInt(pub BigInt);

impl From<BigInt> for JsonInt {
    fn from(v: BigInt) -> Self {
        JsonInt(v)
    }
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        JsonInt(v.clone())
    }
}

impl From<i64> for JsonInt {
    fn from(v: i64) -> Self {
        JsonInt(BigInt::from(v))
    }
}

impl From<JsonInt> for BigInt {
    fn from(v: JsonInt) -> Self {
        v.0
    }
}

impl fmt::Display for JsonInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

struct JsonIntVisitor;

impl<'de> Visitor<'de> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
        Ok(JsonInt(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
        Ok(JsonInt(BigInt::from(v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<JsonInt, E> {
        Err(E::invalid_value(de::Unexpected::Float(v), &self))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
        BigInt::from_str(v.trim())
            .map(JsonInt)
            .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(JsonIntVisitor)
    }
}

pub(crate) fn to_json_vec(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().map(JsonInt::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_are_numbers() {
        let s = serde_json::to_string(&JsonInt::from(-17)).unwrap();
        assert_eq!(s, "-17");
    }

    #[test]
    fn large_values_are_strings() {
        let big = BigInt::from(i64::MAX) * BigInt::from(4);
        let s = serde_json::to_string(&JsonInt(big.clone())).unwrap();
        assert_eq!(s, format!("\"{big}\""));
        let back: JsonInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back.0, big);
    }

    #[test]
    fn accepts_strings_and_unsigned() {
        let v: JsonInt = serde_json::from_str("\"42\"").unwrap();
        assert_eq!(v, JsonInt::from(42));
        let v: JsonInt = serde_json::from_str("18446744073709551615").unwrap();
        assert_eq!(v.0, BigInt::from(u64::MAX));
        assert!(serde_json::from_str::<JsonInt>("1.5").is_err());
        assert!(serde_json::from_str::<JsonInt>("\"x1\"").is_err());
    }
}
