//! Closed intervals over the extended reals.
//!
//! An [`Interval`] is either empty or a pair `lo <= hi` where `lo` may be
//! `-inf` and `hi` may be `+inf`. Endpoint arithmetic is plain `f64` with no
//! outward rounding.
//!
//! ```
//! use strategem::Interval;
//!
//! let x = Interval::new(3.0, 5.0).unwrap();
//! let y = Interval::new(1.0, 2.0).unwrap();
//! assert_eq!(x.sub(y).unwrap(), Interval::new(1.0, 4.0).unwrap());
//!
//! // dividing by [0, 0] yields the empty set rather than an error
//! assert!(x.div(Interval::point(0.0)).unwrap().is_empty());
//! ```

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]`, possibly unbounded, or the empty set.
///
/// The empty set is stored as `lo = +inf, hi = -inf`, a pair that cannot
/// arise from a non-empty interval.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// Sign configuration of a non-empty divisor, one per branch of the
/// reciprocal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReciprocalCase {
    /// `[0, 0]`: the reciprocal is the empty set.
    Zero,
    /// `0` is not in the interval.
    ExcludesZero,
    /// `lo = 0 < hi`.
    ZeroLower,
    /// `lo < 0 = hi`.
    ZeroUpper,
    /// `lo < 0 < hi`.
    StraddlesZero,
}

/// Product with `0 * inf = 0`.
fn ext_mul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };

    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::Range("interval endpoint is NaN".into()));
        }
        if lo > hi {
            return Err(Error::Range(format!("interval bounds out of order: [{lo}, {hi}]")));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::Range(format!("degenerate infinite interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(value: f64) -> Self {
        Interval::new(value, value).expect("finite point interval")
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn is_bounded(&self) -> bool {
        !self.is_empty() && self.lo.is_finite() && self.hi.is_finite()
    }

    /// Lower endpoint. `+inf` for the empty set.
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Upper endpoint. `-inf` for the empty set.
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lo <= value && value <= self.hi
    }

    /// Set inclusion. The empty set is a subset of everything.
    pub fn is_subset(&self, other: &Interval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    fn require_nonempty(self) -> Result<Self> {
        if self.is_empty() {
            Err(Error::EmptyOperand)
        } else {
            Ok(self)
        }
    }

    /// `[x] - [y] = [x.lo - y.hi, x.hi - y.lo]`.
    pub fn sub(self, other: Interval) -> Result<Interval> {
        let (x, y) = (self.require_nonempty()?, other.require_nonempty()?);
        Ok(Interval {
            lo: x.lo - y.hi,
            hi: x.hi - y.lo,
        })
    }

    /// `[x] + [y] = [x.lo + y.lo, x.hi + y.hi]`.
    pub fn add(self, other: Interval) -> Result<Interval> {
        let (x, y) = (self.require_nonempty()?, other.require_nonempty()?);
        Ok(Interval {
            lo: x.lo + y.lo,
            hi: x.hi + y.hi,
        })
    }

    /// Min and max of the four endpoint products, with `0 * inf = 0`.
    pub fn mul(self, other: Interval) -> Result<Interval> {
        let (x, y) = (self.require_nonempty()?, other.require_nonempty()?);
        let products = [
            ext_mul(x.lo, y.lo),
            ext_mul(x.lo, y.hi),
            ext_mul(x.hi, y.lo),
            ext_mul(x.hi, y.hi),
        ];
        let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval { lo, hi })
    }

    pub fn reciprocal_case(&self) -> Option<ReciprocalCase> {
        if self.is_empty() {
            return None;
        }
        let (lo, hi) = (self.lo, self.hi);
        Some(if lo == 0.0 && hi == 0.0 {
            ReciprocalCase::Zero
        } else if lo > 0.0 || hi < 0.0 {
            ReciprocalCase::ExcludesZero
        } else if lo == 0.0 {
            ReciprocalCase::ZeroLower
        } else if hi == 0.0 {
            ReciprocalCase::ZeroUpper
        } else {
            ReciprocalCase::StraddlesZero
        })
    }

    /// `1 / [y]`, case by case on the sign of the endpoints.
    pub fn recip(self) -> Result<Interval> {
        let case = self.reciprocal_case().ok_or(Error::EmptyOperand)?;
        let (lo, hi) = (self.lo, self.hi);
        Ok(match case {
            ReciprocalCase::Zero => Interval::EMPTY,
            ReciprocalCase::ExcludesZero => Interval {
                lo: 1.0 / hi,
                hi: 1.0 / lo,
            },
            ReciprocalCase::ZeroLower => Interval {
                lo: 1.0 / hi,
                hi: f64::INFINITY,
            },
            ReciprocalCase::ZeroUpper => Interval {
                lo: f64::NEG_INFINITY,
                hi: 1.0 / lo,
            },
            ReciprocalCase::StraddlesZero => Interval::ENTIRE,
        })
    }

    /// `[x] / [y] = [x] * (1 / [y])`. Empty when `y = [0, 0]`.
    pub fn div(self, other: Interval) -> Result<Interval> {
        let x = self.require_nonempty()?;
        let inverse = other.recip()?;
        if inverse.is_empty() {
            return Ok(Interval::EMPTY);
        }
        x.mul(inverse)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

fn serialize_endpoint<S: SerializeSeq>(seq: &mut S, value: f64) -> Result<(), S::Error> {
    if value == f64::INFINITY {
        seq.serialize_element("inf")
    } else if value == f64::NEG_INFINITY {
        seq.serialize_element("-inf")
    } else {
        seq.serialize_element(&value)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_empty() {
            return serializer.serialize_none();
        }
        let mut seq = serializer.serialize_seq(Some(2))?;
        serialize_endpoint(&mut seq, self.lo)?;
        serialize_endpoint(&mut seq, self.hi)?;
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Endpoint {
    Number(f64),
    Sentinel(String),
}

impl Endpoint {
    fn value<E: de::Error>(self) -> Result<f64, E> {
        match self {
            Endpoint::Number(v) => Ok(v),
            Endpoint::Sentinel(s) => match s.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(E::custom(format!("unknown interval endpoint {other:?}"))),
            },
        }
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Option<(Endpoint, Endpoint)> = Option::deserialize(deserializer)?;
        match raw {
            None => Ok(Interval::EMPTY),
            Some((lo, hi)) => {
                Interval::new(lo.value()?, hi.value()?).map_err(de::Error::custom)
            }
        }
    }
}
