//! Exact rationals, rational enclosures and fixed-point intervals.

mod complex;
mod enclosure;
mod fixed;
mod linform;
mod logs;
mod trig;

pub use complex::CFx;
pub use enclosure::{Enclosure, Side, REPORT_BITS};
pub use fixed::{ceil_shr, floor_shr, Fx};
pub use linform::{LinForm, LinInterval};
pub use logs::{ln_upper, LN2_HI, PI_HI, PI_LO};
pub use trig::{cis_turns, cos_turns, pi_fx, sin_turns};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `n/d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Canonical `"p/q"` form; integers are written `"p/1"` so the format is
/// uniform across reports.
pub fn rat_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, `p` or a finite decimal such as `0.05`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn floor_rat(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil_rat(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Fractional part in `[0, 1)`.
pub fn frac_rat(r: &Rational) -> Rational {
    r - Rational::from_integer(floor_rat(r))
}

/// Smallest power-of-two exponent `e` with `2^-e <= r`, for positive `r`.
pub fn bits_below(r: &Rational) -> u64 {
    assert!(r.is_positive());
    let mut e = r.denom().bits().saturating_sub(r.numer().bits());
    while Rational::new(BigInt::one(), BigInt::one() << e) > *r {
        e += 1;
    }
    e
}
