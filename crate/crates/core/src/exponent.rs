//! Lebesgue exponents in `[1, inf]` and the power-sum reductions built on them.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent `p` with `1 <= p <= inf`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return Err(Error::InvalidExponent(value));
        }
        Ok(Exponent(value))
    }

    /// Builds the exponent with `1/p = reciprocal`.
    pub fn from_reciprocal(reciprocal: f64) -> Result<Self> {
        if !(-1e-12..=1.0 + 1e-12).contains(&reciprocal) {
            return Err(Error::InvalidExponent(1.0 / reciprocal));
        }
        if reciprocal <= 1e-15 {
            Ok(Exponent::INFINITY)
        } else {
            Ok(Exponent((1.0 / reciprocal).max(1.0)))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p`, zero for `p = inf`.
    pub fn reciprocal(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// The conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        if self.is_infinite() {
            Exponent::ONE
        } else if self.0 == 1.0 {
            Exponent::INFINITY
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }

    /// True for `1 < p < inf`.
    pub fn is_interior(self) -> bool {
        self.0 > 1.0 && self.0.is_finite()
    }

    pub fn min(self, other: Exponent) -> Exponent {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Exponent) -> Exponent {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::INFINITY),
            other => {
                if let Some((a, b)) = other.split_once('/') {
                    let a: f64 = a.trim().parse().map_err(|_| Error::Config(format!("bad exponent `{s}`")))?;
                    let b: f64 = b.trim().parse().map_err(|_| Error::Config(format!("bad exponent `{s}`")))?;
                    return Exponent::new(a / b);
                }
                let v: f64 = other.parse().map_err(|_| Error::Config(format!("bad exponent `{s}`")))?;
                Exponent::new(v)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Exponent::new(v).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Streaming reduction `(sum v^p * measure)^(1/p)`, or `max v` for `p = inf`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PowerSum {
    p: Exponent,
    acc: f64,
}

impl PowerSum {
    pub(crate) fn new(p: Exponent) -> Self {
        PowerSum { p, acc: 0.0 }
    }

    #[inline]
    pub(crate) fn push(&mut self, v: f64) {
        let p = self.p.0;
        if p.is_infinite() {
            if v > self.acc {
                self.acc = v;
            }
        } else if p == 1.0 {
            self.acc += v;
        } else if p == 2.0 {
            self.acc += v * v;
        } else {
            self.acc += v.powf(p);
        }
    }

    pub(crate) fn finish(self, measure: f64) -> f64 {
        let p = self.p.0;
        if p.is_infinite() {
            self.acc
        } else if p == 1.0 {
            self.acc * measure
        } else if p == 2.0 {
            (self.acc * measure).sqrt()
        } else {
            (self.acc * measure).powf(1.0 / p)
        }
    }
}
