//! Rational bounds on pi and logarithms, for closed-form certificates.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{int, rat, Rational};

/// 355/113 > pi.
pub const PI_HI: (i64, i64) = (355, 113);
/// 333/106 < pi.
pub const PI_LO: (i64, i64) = (333, 106);
/// 6931472/10^7 > ln 2.
pub const LN2_HI: (i64, i64) = (6_931_472, 10_000_000);

/// Upper bound on `ln(x)` for an integer `x >= 1`, from the tangent line
/// at `2^e <= x < 2^(e+1)`: `ln x <= e ln 2 + (x - 2^e)/2^e`.
pub fn ln_upper(x: &BigInt) -> Rational {
    assert!(*x >= BigInt::one());
    let e = x.bits() - 1;
    let base = BigInt::one() << e;
    let ln2 = rat(LN2_HI.0, LN2_HI.1);
    let tangent = Rational::new(x - &base, base);
    if e == 0 && tangent.is_zero() {
        return Rational::zero();
    }
    ln2 * int(e) + tangent
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_to_f64;

    #[test]
    fn ln_upper_is_an_upper_bound() {
        for x in [1u64, 2, 3, 7, 8, 9, 1000, 123_456_789, u64::MAX] {
            let ub = rat_to_f64(&ln_upper(&BigInt::from(x)));
            assert!(ub >= (x as f64).ln() - 1e-12, "x={x}");
            assert!(ub <= (x as f64).ln() + 0.31, "x={x}");
        }
    }
}
