use num_traits::Zero;

use super::{OrbitPoint, OrderedOrbit};
use crate::arith::{int, Enclosure, Fx, Rational};
use crate::cf::Theta;
use crate::error::Result;

/// `D = sup_gamma |#{xi <= gamma} - Q gamma|` via the order-statistic
/// formula `max_i max(i - Q xi_(i), Q xi_(i) - (i-1))`.
///
/// With uncertain points the `i`-th order statistic lies between the
/// `i`-th smallest lower end and the `i`-th smallest upper end, so no
/// refinement is ever needed to stay sound.
pub fn discrepancy_of(values: &[Enclosure]) -> Enclosure {
    if values.is_empty() {
        return Enclosure::zero();
    }
    let mut lo: Vec<&Rational> = values.iter().map(|e| e.lo()).collect();
    let mut hi: Vec<&Rational> = values.iter().map(|e| e.hi()).collect();
    lo.sort_unstable();
    hi.sort_unstable();
    let q = int(values.len() as u64);
    let mut d_lo = Rational::zero();
    let mut d_hi = Rational::zero();
    for i in 0..values.len() {
        let ii = int(i as u64 + 1);
        let im1 = int(i as u64);
        let (xl, xh) = (&q * lo[i], &q * hi[i]);
        // term(x) = max(i - Qx, Qx - (i-1)), convex in x
        let t_at = |x: &Rational| -> Rational { (&ii - x).max(x - &im1) };
        let (a, b) = (t_at(&xl), t_at(&xh));
        let mut t_lo = a.clone().min(b.clone());
        let t_hi = a.max(b);
        // Minimum of the convex term over [xl, xh] is at x = i - 1/2.
        let kink = Rational::new((2 * i as i64 + 1).into(), 2.into());
        if xl <= kink && kink <= xh {
            t_lo = Rational::new(1.into(), 2.into());
        }
        d_lo = d_lo.max(t_lo);
        d_hi = d_hi.max(t_hi);
    }
    Enclosure::new(d_lo, d_hi)
}

pub fn discrepancy(points: &[OrbitPoint]) -> Enclosure {
    let v: Vec<Enclosure> = points.iter().map(|p| p.value.clone()).collect();
    discrepancy_of(&v)
}

/// Discrepancy of `{k theta + phi}`, `k < q`.
pub fn orbit_discrepancy(theta: &Theta, phi: &Rational, q: u64) -> Result<Enclosure> {
    let pts: Vec<OrbitPoint> = super::orbit_stream(theta, phi, q)?.collect::<Result<_>>()?;
    Ok(discrepancy(&pts))
}

/// Discrepancy of a certified-sorted level orbit (no sorting needed), in
/// fixed point.
pub fn sorted_orbit_discrepancy(theta: &Theta, orbit: &OrderedOrbit) -> Result<Enclosure> {
    let n = orbit.len() as u64;
    let prec = 96 + 2 * (64 - n.leading_zeros());
    let th = theta.fx(prec)?;
    let qn = num_bigint::BigInt::from(n);
    let mut d = Fx::zero(prec);
    for (i, p) in orbit.points.iter().enumerate() {
        // Q * (k theta - m)
        let x = th.mul_u64(p.k).add_int(&num_bigint::BigInt::from(-p.m)).mul_int(&qn);
        let ii = Fx::from_i64(i as i64 + 1, prec);
        let im1 = Fx::from_i64(i as i64, prec);
        let t1 = ii.sub(&x);
        let t2 = x.sub(&im1);
        d = d.max(&t1.max(&t2));
    }
    Ok(d.to_enclosure())
}
