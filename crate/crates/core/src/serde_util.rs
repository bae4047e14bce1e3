//! Serde adapters for exact numbers.
//!
//! Integers are written as JSON numbers when they fit in 64 bits and as
//! decimal strings otherwise; rationals are always written as `"p/q"`
//! strings (or `"p"` when the denominator is 1).

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Unsigned(u64),
    Text(String),
}

fn int_repr(x: &BigInt) -> IntRepr {
    match x.to_i64() {
        Some(v) => IntRepr::Small(v),
        None => IntRepr::Text(x.to_string()),
    }
}

fn parse_int<E: serde::de::Error>(r: IntRepr) -> Result<BigInt, E> {
    match r {
        IntRepr::Small(v) => Ok(BigInt::from(v)),
        IntRepr::Unsigned(v) => Ok(BigInt::from(v)),
        IntRepr::Text(s) => BigInt::from_str(s.trim())
            .map_err(|_| E::custom(format!("invalid integer literal {s:?}"))),
    }
}

pub mod bigint_seq {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(int_repr))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<IntRepr>::deserialize(d)?.into_iter().map(parse_int).collect()
    }
}

pub mod biguint_seq {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| int_repr(&BigInt::from(x.clone()))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<IntRepr>::deserialize(d)?
            .into_iter()
            .map(|r| {
                let x: BigInt = parse_int(r)?;
                x.to_biguint().ok_or_else(|| D::Error::custom("expected a nonnegative integer"))
            })
            .collect()
    }
}

fn split_fraction(s: &str) -> (&str, Option<&str>) {
    match s.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (s.trim(), None),
    }
}

pub(crate) fn format_big_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn parse_big_rational(s: &str) -> Option<BigRational> {
    let (p, q) = split_fraction(s);
    let p = BigInt::from_str(p).ok()?;
    let q = match q {
        Some(q) => BigInt::from_str(q).ok()?,
        None => BigInt::from(1),
    };
    if q == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(p, q))
}

pub(crate) fn format_rational64(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn parse_rational64(s: &str) -> Option<Rational64> {
    let (p, q) = split_fraction(s);
    let p = i64::from_str(p).ok()?;
    let q = match q {
        Some(q) => i64::from_str(q).ok()?,
        None => 1,
    };
    if q == 0 {
        return None;
    }
    Some(Rational64::new(p, q))
}

pub mod big_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_big_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_big_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}")))
    }
}

pub mod rational64 {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational64(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational64(&s).ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}")))
    }
}

/// `BTreeMap<u64, u64>` as a list of `[key, value]` pairs, so that it
/// survives buffering inside tagged enums.
pub mod u64_pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<u64, u64>, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[u64; 2]> = map.iter().map(|(&k, &v)| [k, v]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, u64>, D::Error> {
        let pairs = Vec::<[u64; 2]>::deserialize(d)?;
        let n = pairs.len();
        let map: BTreeMap<u64, u64> = pairs.into_iter().map(|[k, v]| (k, v)).collect();
        if map.len() != n {
            return Err(serde::de::Error::custom("repeated key"));
        }
        Ok(map)
    }
}
