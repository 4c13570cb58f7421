use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::{rat_to_string, Rational};

/// A closed rational interval `[lo, hi]` certified to contain some real.
///
/// Arithmetic is exact on the endpoints, so "outward rounding" here means
/// the result is the exact image hull; there is nothing to round.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

/// Position of an enclosure relative to a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
    Straddles,
}

impl Enclosure {
    /// Panics if `lo > hi`; use [`Enclosure::try_new`] for untrusted input.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi: [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn try_new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    /// Builds `[min(a,b), max(a,b)]`.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            Enclosure { lo: a, hi: b }
        } else {
            Enclosure { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(Rational::from_integer(BigInt::from(n)))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn encloses(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn hull_point(&self, x: &Rational) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(x.clone()),
            hi: self.hi.clone().max(x.clone()),
        }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Rational {
        if self.contains_zero() {
            Rational::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> Enclosure {
        Enclosure {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Enclosure {
        Enclosure::spanning(&self.lo * c, &self.hi * c)
    }

    pub fn add_rat(&self, c: &Rational) -> Enclosure {
        Enclosure {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    /// Reciprocal; `None` if the interval contains zero.
    pub fn recip(&self) -> Option<Enclosure> {
        if self.contains_zero() {
            return None;
        }
        Some(Enclosure::spanning(self.lo.recip(), self.hi.recip()))
    }

    pub fn checked_div(&self, other: &Enclosure) -> Option<Enclosure> {
        other.recip().map(|r| self * &r)
    }

    pub fn side_of(&self, t: &Rational) -> Side {
        if &self.hi < t {
            Side::Below
        } else if &self.lo > t {
            Side::Above
        } else {
            Side::Straddles
        }
    }

    /// Certified strict comparison: `Some(Less)` if every point of `self`
    /// is below every point of `other`, `None` if the intervals overlap.
    pub fn certified_cmp(&self, other: &Enclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn max_with(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Endpoints as decimal approximations, for diagnostics only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (super::rat_to_f64(&self.lo), super::rat_to_f64(&self.hi))
    }

    /// Rounds endpoints with long numerators or denominators outward to
    /// dyadics with about `sig_bits` significant bits.
    pub fn outward(&self, sig_bits: u64) -> Enclosure {
        Enclosure { lo: round_dyadic(&self.lo, sig_bits, false), hi: round_dyadic(&self.hi, sig_bits, true) }
    }

    /// The exact endpoints as `"p/q"` strings.
    pub fn to_strings(&self) -> [String; 2] {
        [rat_to_string(&self.lo), rat_to_string(&self.hi)]
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", rat_to_string(&self.lo), rat_to_string(&self.hi))
    }
}

/// Significant bits kept when serializing enclosures.
pub const REPORT_BITS: u64 = 128;

fn round_dyadic(x: &Rational, sig_bits: u64, up: bool) -> Rational {
    if x.numer().bits() + x.denom().bits() <= 2 * sig_bits {
        return x.clone();
    }
    let s = sig_bits as i64 - (x.numer().bits() as i64 - x.denom().bits() as i64);
    let round = |y: &Rational| if up { super::ceil_rat(y) } else { super::floor_rat(y) };
    if s >= 0 {
        let p = BigInt::one() << s as u64;
        Rational::new(round(&(x * &p)), p)
    } else {
        let p = BigInt::one() << (-s) as u64;
        Rational::from_integer(round(&(x / &p)) * p)
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        // Reports carry outward-rounded endpoints: still an enclosure, and
        // readable where exact forms run to hundreds of digits.
        let r = self.outward(REPORT_BITS);
        seq.serialize_element(&rat_to_string(&r.lo))?;
        seq.serialize_element(&rat_to_string(&r.hi))?;
        seq.end()
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, o: &Enclosure) -> Enclosure {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Enclosure {
            type Output = Enclosure;
            fn $m(self, o: Enclosure) -> Enclosure {
                (&self).$m(&o)
            }
        }
        impl $tr<&Enclosure> for Enclosure {
            type Output = Enclosure;
            fn $m(self, o: &Enclosure) -> Enclosure {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl std::iter::Sum for Enclosure {
    fn sum<I: Iterator<Item = Enclosure>>(iter: I) -> Enclosure {
        iter.fold(Enclosure::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn mul_mixed_signs() {
        let a = Enclosure::new(rat(-1, 2), rat(3, 1));
        let b = Enclosure::new(rat(-2, 1), rat(1, 3));
        let p = &a * &b;
        assert_eq!(p.lo(), &rat(-6, 1));
        assert_eq!(p.hi(), &rat(1, 1));
    }

    #[test]
    fn recip_refuses_zero() {
        assert!(Enclosure::new(rat(-1, 2), rat(1, 2)).recip().is_none());
        let r = Enclosure::new(rat(2, 1), rat(4, 1)).recip().unwrap();
        assert_eq!(r, Enclosure::new(rat(1, 4), rat(1, 2)));
    }

    #[test]
    fn side_of_threshold() {
        let e = Enclosure::new(rat(1, 3), rat(1, 2));
        assert_eq!(e.side_of(&rat(1, 4)), Side::Above);
        assert_eq!(e.side_of(&rat(2, 3)), Side::Below);
        assert_eq!(e.side_of(&rat(1, 2)), Side::Straddles);
    }

    #[test]
    fn outward_keeps_containment() {
        let big = BigInt::from(3).pow(200);
        let x = Rational::new(big.clone() + 1u32, big.clone() * 7u32);
        let e = Enclosure::point(x.clone()).outward(64);
        assert!(e.contains(&x));
        assert!(e.width() < rat(1, 1 << 60));
        let huge = Enclosure::point(Rational::new(big.clone() * 5u32 + 1u32, BigInt::from(3))).outward(64);
        assert!(huge.contains(&Rational::new(big * 5u32 + 1u32, BigInt::from(3))));
        assert_eq!(Enclosure::point(rat(1, 6)).outward(64), Enclosure::point(rat(1, 6)));
    }
}
