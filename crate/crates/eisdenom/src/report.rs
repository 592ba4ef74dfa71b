//! Serde helpers that print exact numbers as strings.

use num_bigint::BigInt;
use serde::Serializer;

use crate::arith::Rational;

pub fn ser_big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_rat<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_rats<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// A valuation, with `None` printed as "inf".
pub fn ser_val<S: Serializer>(v: &Option<i64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_i64(*x),
        None => s.serialize_str("inf"),
    }
}

pub fn fmt_val(v: Option<i64>) -> String {
    v.map_or_else(|| "inf".to_string(), |x| x.to_string())
}
