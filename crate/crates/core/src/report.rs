//! Serialization helpers shared by the JSON reports.

use std::fmt::Display;

use num_rational::BigRational;
use serde::Serializer;

use crate::algebra::rational::format_rational;

pub(crate) fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn ser_rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

/// Sparse vectors as `[[index, "p/q"], ...]`.
pub(crate) fn ser_sparse<S: Serializer>(
    v: &[(usize, BigRational)],
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(i, x)| (i, format_rational(x))))
}
