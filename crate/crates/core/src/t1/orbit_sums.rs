//! Orbit sums of bumps for astronomically long orbits.
//!
//! `1_{[a,b)}({y}) = floor(y - a) - floor(y - b)` turns
//! `sum_{k<Q} h_j(k theta + phi)` into two weighted floor sums with weight
//! `e(L_j theta)`. The floors of `k theta + c` for `k < Q` are produced by
//! a convergent `P/R` and certified to equal those of theta: each term is
//! nondecreasing in the slope, so equal totals at two convergents that
//! straddle theta force equality term by term.

use num_bigint::BigInt;
use num_traits::Zero;

use super::floorsum::{floor_sum, weighted_floor_sum};
use super::BumpSchedule;
use crate::arith::{cis_turns, frac_rat, Enclosure, Fx, Rational};
use crate::cf::{Theta, DEFAULT_REFINEMENT_CAP};
use crate::error::{Error, Result};

/// Floor data `(p, q, r)` with `floor(k P/R + c) = floor((p k + r)/q)`.
fn affine(pn: &BigInt, rd: &BigInt, c: &Rational) -> (BigInt, BigInt, BigInt) {
    let (u, v) = (c.numer(), c.denom());
    (pn * v, rd * v, u * rd)
}

/// A convergent `(P, R)` of `theta - a_0` whose floors
/// `floor(k P/R + c)`, `k < n`, agree with those of `theta - a_0` for every
/// offset in `offsets`. The integer part `k a_0` cancels in every window
/// difference, so callers only ever see the fractional rotation.
pub fn certified_convergent(theta: &Theta, n: &BigInt, offsets: &[Rational]) -> Result<(BigInt, BigInt)> {
    let mut t = 0usize;
    let target = n << 8u32;
    while theta.q(t as i64)? <= target {
        t += 1;
    }
    for _ in 0..DEFAULT_REFINEMENT_CAP {
        let a0 = &theta.spec().a0;
        let (q0, q1) = (theta.q(t as i64)?, theta.q(t as i64 + 1)?);
        let p0 = theta.p(t as i64)? - a0 * &q0;
        let p1 = theta.p(t as i64 + 1)? - a0 * &q1;
        let agree = offsets.iter().all(|c| {
            let (a, b, r) = affine(&p0, &q0, c);
            let (a1, b1, r1) = affine(&p1, &q1, c);
            floor_sum(&a, &b, &r, n) == floor_sum(&a1, &b1, &r1, n)
        });
        if agree {
            return Ok((p0, q0));
        }
        t += 1;
    }
    Err(Error::RefinementCap { what: "floor certification of an orbit sum".into() })
}

/// `#{k < n : {k theta + phi} in [a, b)}` for `0 <= a <= b <= a + 1`.
pub fn window_count(theta: &Theta, phi: &Rational, a: &Rational, b: &Rational, n: &BigInt) -> Result<BigInt> {
    let (ca, cb) = (phi - a, phi - b);
    let (pn, rd) = certified_convergent(theta, n, &[ca.clone(), cb.clone()])?;
    let (p, q, r) = affine(&pn, &rd, &ca);
    let (p2, q2, r2) = affine(&pn, &rd, &cb);
    Ok(floor_sum(&p, &q, &r, n) - floor_sum(&p2, &q2, &r2, n))
}

impl BumpSchedule {
    /// `sum_{k<n} h_j(k theta + phi)`, certified, width about `2^-64`.
    pub fn bump_orbit_sum(&self, j: usize, theta: &Theta, phi: &Rational, n: &BigInt) -> Result<Enclosure> {
        if n.is_zero() {
            return Ok(Enclosure::zero());
        }
        let l = &self.level(j).l;
        let (a, b) = (self.x(j - 1), self.x(j));
        let (ca, cb) = (phi - &a, phi - &b);
        let (pn, rd) = certified_convergent(theta, n, &[ca.clone(), cb.clone()])?;
        let (pa, qa, ra) = affine(&pn, &rd, &ca);
        let (pb, qb, rb) = affine(&pn, &rd, &cb);
        let nb = n.bits() as u32;
        let mut w = 128 + 3 * nb;
        for _ in 0..4 {
            let th = theta.fx(w + l.bits() as u32 + 8)?;
            let z = cis_turns(&th.mul_int(l).reduce_mod1().with_prec(w));
            let (sa, _) = weighted_floor_sum(&pa, &qa, &ra, n, &z);
            let (sb, _) = weighted_floor_sum(&pb, &qb, &rb, n, &z);
            let phase_arg = frac_rat(&(&ca * Rational::from_integer(l.clone())));
            let phase = cis_turns(&Fx::from_rational(&phase_arg, w));
            let v = phase.mul(&sa.sub(&sb)).im.div_u64(j as u64);
            if v.width_ulps().bits() + 64 <= w as u64 {
                return Ok(v.to_enclosure());
            }
            w *= 2;
        }
        Err(Error::RefinementCap { what: format!("orbit sum of bump {j}") })
    }

    /// Certified `sum_{k<n} f(k theta + phi)`: bumps `1..=n_max` exactly,
    /// the unresolved tail as `count / (n_max + 1)`.
    pub fn f_orbit_sum(&self, theta: &Theta, phi: &Rational, n: &BigInt) -> Result<Enclosure> {
        let mut s = Enclosure::zero();
        for j in 1..=self.n_max() {
            s = s + self.bump_orbit_sum(j, theta, phi, n)?;
        }
        Ok(s + self.tail_bracket(theta, phi, n)?.0)
    }

    /// Enclosure of `sum_k sum_{j>n_max} h_j(k theta + phi)` and the number
    /// of orbit points that can see the tail.
    pub fn tail_bracket(&self, theta: &Theta, phi: &Rational, n: &BigInt) -> Result<(Enclosure, BigInt)> {
        let c = window_count(theta, phi, &self.x(self.n_max()), &self.x_star_upper(), n)?;
        let t = Rational::new(c.clone(), BigInt::from(self.n_max() as u64 + 1));
        Ok((Enclosure::new(-&t, t), c))
    }
}
