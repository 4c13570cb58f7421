use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Enclosure, Rational};

/// `floor(x / 2^s)`.
pub fn floor_shr(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    if !x.is_negative() {
        x >> s
    } else {
        -(((-x) - 1u32) >> s) - 1u32
    }
}

/// `ceil(x / 2^s)`.
pub fn ceil_shr(x: &BigInt, s: u32) -> BigInt {
    -floor_shr(&-x, s)
}

/// Fixed-point interval `[lo, hi] * 2^-prec` with big-integer endpoints.
///
/// Addition is exact, so sums of `Fx` values are independent of the order
/// in which they are reduced. Products and quotients round outward.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fx {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

impl fmt::Debug for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_f64_pair();
        write!(f, "Fx[{a:e}, {b:e}]@{}", self.prec)
    }
}

impl Fx {
    pub fn from_raw(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Fx { lo, hi, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Fx::from_raw(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        let u = BigInt::one() << prec;
        Fx::from_raw(u.clone(), u, prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        let v = n << prec;
        Fx::from_raw(v.clone(), v, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(n), prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let scaled = r.numer() << prec;
        let (q, rem) = scaled.div_mod_floor(r.denom());
        let hi = if rem.is_zero() { q.clone() } else { &q + 1u32 };
        Fx::from_raw(q, hi, prec)
    }

    pub fn from_enclosure(e: &Enclosure, prec: u32) -> Self {
        let a = Self::from_rational(e.lo(), prec);
        let b = Self::from_rational(e.hi(), prec);
        Fx::from_raw(a.lo, b.hi, prec)
    }

    pub fn to_enclosure(&self) -> Enclosure {
        let d = BigInt::one() << self.prec;
        Enclosure::new(
            Rational::new(self.lo.clone(), d.clone()),
            Rational::new(self.hi.clone(), d),
        )
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo_rat(&self) -> Rational {
        Rational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn hi_rat(&self) -> Rational {
        Rational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    /// Width in units of `2^-prec`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let s = 2f64.powi(-(self.prec as i32).min(1000));
        (big_to_f64(&self.lo) * s, big_to_f64(&self.hi) * s)
    }

    pub fn mid_f64(&self) -> f64 {
        let (a, b) = self.to_f64_pair();
        0.5 * (a + b)
    }

    /// Re-expresses at another precision, rounding outward when coarsening.
    pub fn with_prec(&self, prec: u32) -> Fx {
        use std::cmp::Ordering::*;
        match prec.cmp(&self.prec) {
            Equal => self.clone(),
            Greater => {
                let s = prec - self.prec;
                Fx::from_raw(&self.lo << s, &self.hi << s, prec)
            }
            Less => {
                let s = self.prec - prec;
                Fx::from_raw(floor_shr(&self.lo, s), ceil_shr(&self.hi, s), prec)
            }
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn hull(&self, o: &Fx) -> Fx {
        assert_eq!(self.prec, o.prec);
        Fx::from_raw(
            self.lo.clone().min(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
            self.prec,
        )
    }

    pub fn intersects(&self, o: &Fx) -> bool {
        assert_eq!(self.prec, o.prec);
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// Widens symmetrically by `r` ulps.
    pub fn widen(&self, r: &BigInt) -> Fx {
        Fx::from_raw(&self.lo - r, &self.hi + r, self.prec)
    }

    pub fn neg(&self) -> Fx {
        Fx::from_raw(-&self.hi, -&self.lo, self.prec)
    }

    pub fn add(&self, o: &Fx) -> Fx {
        assert_eq!(self.prec, o.prec);
        Fx::from_raw(&self.lo + &o.lo, &self.hi + &o.hi, self.prec)
    }

    pub fn add_assign(&mut self, o: &Fx) {
        assert_eq!(self.prec, o.prec);
        self.lo += &o.lo;
        self.hi += &o.hi;
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        assert_eq!(self.prec, o.prec);
        Fx::from_raw(&self.lo - &o.hi, &self.hi - &o.lo, self.prec)
    }

    /// Adds the integer `n` exactly.
    pub fn add_int(&self, n: &BigInt) -> Fx {
        let v = n << self.prec;
        Fx::from_raw(&self.lo + &v, &self.hi + &v, self.prec)
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        assert_eq!(self.prec, o.prec);
        let (lo, hi) = if !self.lo.is_negative() && !o.lo.is_negative() {
            (&self.lo * &o.lo, &self.hi * &o.hi)
        } else {
            let c = [
                &self.lo * &o.lo,
                &self.lo * &o.hi,
                &self.hi * &o.lo,
                &self.hi * &o.hi,
            ];
            (
                c.iter().min().unwrap().clone(),
                c.iter().max().unwrap().clone(),
            )
        };
        Fx::from_raw(floor_shr(&lo, self.prec), ceil_shr(&hi, self.prec), self.prec)
    }

    pub fn sqr(&self) -> Fx {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        let (lo, hi) = if self.contains_zero() {
            (BigInt::zero(), a.max(b))
        } else if self.lo.is_positive() {
            (a, b)
        } else {
            (b, a)
        };
        Fx::from_raw(floor_shr(&lo, self.prec), ceil_shr(&hi, self.prec), self.prec)
    }

    /// Exact multiplication by an integer.
    pub fn mul_int(&self, n: &BigInt) -> Fx {
        let a = &self.lo * n;
        let b = &self.hi * n;
        if n.is_negative() {
            Fx::from_raw(b, a, self.prec)
        } else {
            Fx::from_raw(a, b, self.prec)
        }
    }

    pub fn mul_u64(&self, n: u64) -> Fx {
        Fx::from_raw(&self.lo * n, &self.hi * n, self.prec)
    }

    /// Division by a nonzero integer, rounded outward.
    pub fn div_int(&self, n: &BigInt) -> Fx {
        assert!(!n.is_zero());
        let (a, b) = if n.is_negative() {
            (-&self.hi, -&self.lo)
        } else {
            (self.lo.clone(), self.hi.clone())
        };
        let d = n.abs();
        let lo = a.div_floor(&d);
        let hi = -((-b).div_floor(&d));
        Fx::from_raw(lo, hi, self.prec)
    }

    pub fn div_u64(&self, n: u64) -> Fx {
        self.div_int(&BigInt::from(n))
    }

    /// Multiplication by the exact rational `r`, rounded outward.
    pub fn mul_rat(&self, r: &Rational) -> Fx {
        self.mul_int(r.numer()).div_int(r.denom())
    }

    /// Multiplies by `2^-s`, rounded outward.
    pub fn shr(&self, s: u32) -> Fx {
        Fx::from_raw(floor_shr(&self.lo, s), ceil_shr(&self.hi, s), self.prec)
    }

    /// Reciprocal; `None` if zero is enclosed.
    pub fn recip(&self) -> Option<Fx> {
        if self.contains_zero() {
            return None;
        }
        let one = BigInt::one() << (2 * self.prec);
        // 1/x is decreasing on each sign branch.
        let lo = one.div_floor(&self.hi);
        let hi = -((-&one).div_floor(&self.lo));
        Some(Fx::from_raw(lo, hi, self.prec))
    }

    /// Square root of the nonnegative part, rounded outward.
    pub fn sqrt(&self) -> Fx {
        let z = BigInt::zero();
        let lo = self.lo.clone().max(z.clone()) << self.prec;
        let hi = self.hi.clone().max(z) << self.prec;
        let l = lo.sqrt();
        let mut h = hi.sqrt();
        if &h * &h < hi {
            h += 1u32;
        }
        Fx::from_raw(l, h, self.prec)
    }

    /// Largest absolute value, as an upper bound in ulps.
    pub fn mag_ulps(&self) -> BigInt {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value, in ulps (lower bound).
    pub fn mig_ulps(&self) -> BigInt {
        if self.contains_zero() {
            BigInt::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> Fx {
        Fx::from_raw(self.mig_ulps(), self.mag_ulps(), self.prec)
    }

    /// `floor` of the lower endpoint value.
    pub fn floor_lo(&self) -> BigInt {
        floor_shr(&self.lo, self.prec)
    }

    pub fn floor_hi(&self) -> BigInt {
        floor_shr(&self.hi, self.prec)
    }

    /// Reduces modulo 1 by an exact integer shift chosen from the lower
    /// endpoint; the result has `lo` in `[0, 1)`.
    pub fn reduce_mod1(&self) -> Fx {
        let n = self.floor_lo();
        self.add_int(&-n)
    }

    pub fn max(&self, o: &Fx) -> Fx {
        assert_eq!(self.prec, o.prec);
        Fx::from_raw(
            self.lo.clone().max(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
            self.prec,
        )
    }

    /// Clamps both endpoints into `[-1, 1]`; valid only when the exact value
    /// is known to lie there.
    pub fn clamp_unit(&self) -> Fx {
        let u = BigInt::one() << self.prec;
        let m = -&u;
        Fx::from_raw(
            self.lo.clone().max(m.clone()).min(u.clone()),
            self.hi.clone().min(u).max(m),
            self.prec,
        )
    }
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn shifts_round_the_right_way() {
        let x = BigInt::from(-5);
        assert_eq!(floor_shr(&x, 1), BigInt::from(-3));
        assert_eq!(ceil_shr(&x, 1), BigInt::from(-2));
        assert_eq!(floor_shr(&BigInt::from(5), 1), BigInt::from(2));
        assert_eq!(ceil_shr(&BigInt::from(5), 1), BigInt::from(3));
        assert_eq!(ceil_shr(&BigInt::from(4), 1), BigInt::from(2));
    }

    #[test]
    fn rational_round_trip_encloses() {
        let r = rat(-1, 3);
        let f = Fx::from_rational(&r, 40);
        assert!(f.to_enclosure().contains(&r));
        assert_eq!(f.width_ulps(), BigInt::one());
        let exact = Fx::from_rational(&rat(3, 8), 10);
        assert_eq!(exact.width_ulps(), BigInt::zero());
    }

    #[test]
    fn recip_encloses() {
        let x = Fx::from_rational(&rat(3, 7), 64);
        let r = x.recip().unwrap();
        assert!(r.to_enclosure().contains(&rat(7, 3)));
        let n = x.neg().recip().unwrap();
        assert!(n.to_enclosure().contains(&rat(-7, 3)));
    }

    #[test]
    fn reduce_mod1_keeps_value_class() {
        let x = Fx::from_rational(&rat(-7, 3), 50);
        let y = x.reduce_mod1();
        assert!(y.to_enclosure().contains(&rat(2, 3)));
    }
}
