//! Verdicts and small serialization helpers shared by reports.

use serde::Serialize;

use crate::arith::{Enclosure, Rational, Side};

/// Outcome of a certified inequality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Undecided,
    Violated,
}

impl Verdict {
    /// `value <= bound`: holds if the value's upper end is at most the
    /// bound's lower end, violated if the value is certainly larger.
    pub fn le(value: &Enclosure, bound: &Enclosure) -> Verdict {
        if value.hi() <= bound.lo() {
            Verdict::Holds
        } else if value.lo() > bound.hi() {
            Verdict::Violated
        } else {
            Verdict::Undecided
        }
    }

    /// `value < bound`.
    pub fn lt(value: &Enclosure, bound: &Enclosure) -> Verdict {
        if value.hi() < bound.lo() {
            Verdict::Holds
        } else if value.lo() >= bound.hi() {
            Verdict::Violated
        } else {
            Verdict::Undecided
        }
    }

    /// `|value| <= bound`.
    pub fn abs_le(value: &Enclosure, bound: &Enclosure) -> Verdict {
        Verdict::le(&value.abs(), bound)
    }

    /// `|value| < bound`.
    pub fn abs_lt(value: &Enclosure, bound: &Enclosure) -> Verdict {
        Verdict::lt(&value.abs(), bound)
    }

    /// `value > t` for a rational threshold.
    pub fn gt_rat(value: &Enclosure, t: &Rational) -> Verdict {
        match value.side_of(t) {
            Side::Above => Verdict::Holds,
            Side::Below => Verdict::Violated,
            Side::Straddles if value.lo() == t && value.is_point() => Verdict::Violated,
            Side::Straddles => Verdict::Undecided,
        }
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    /// Worst of two verdicts: violated beats undecided beats holds.
    pub fn and(self, o: Verdict) -> Verdict {
        use Verdict::*;
        match (self, o) {
            (Violated, _) | (_, Violated) => Violated,
            (Undecided, _) | (_, Undecided) => Undecided,
            _ => Holds,
        }
    }

    pub fn all<I: IntoIterator<Item = Verdict>>(it: I) -> Verdict {
        it.into_iter().fold(Verdict::Holds, Verdict::and)
    }
}

/// A certified inequality with both sides enclosed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub value: Enclosure,
    pub bound: Enclosure,
    pub verdict: Verdict,
}

impl Check {
    pub fn le(value: Enclosure, bound: Enclosure) -> Self {
        let verdict = Verdict::le(&value, &bound);
        Check { value, bound, verdict }
    }

    pub fn lt(value: Enclosure, bound: Enclosure) -> Self {
        let verdict = Verdict::lt(&value, &bound);
        Check { value, bound, verdict }
    }

    /// `|value| <= bound`; stores `|value|`.
    pub fn abs_le(value: Enclosure, bound: Enclosure) -> Self {
        Check::le(value.abs(), bound)
    }

    /// `|value| < bound`; stores `|value|`.
    pub fn abs_lt(value: Enclosure, bound: Enclosure) -> Self {
        Check::lt(value.abs(), bound)
    }
}

/// Serde helper: exact rationals as `"p/q"` strings.
pub mod rat_str {
    use serde::Serializer;

    use crate::arith::{rat_to_string, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }
}

/// Serde helper for `Vec<Rational>`.
pub mod rat_vec {
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    use crate::arith::{rat_to_string, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&rat_to_string(r))?;
        }
        seq.end()
    }
}

/// Serde helper: big integers as decimal strings.
pub mod big_str {
    use serde::Serializer;

    pub fn serialize<S: Serializer, T: std::fmt::Display>(x: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }
}
