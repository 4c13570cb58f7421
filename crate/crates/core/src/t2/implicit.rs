//! Jump segments followed below the materialized levels.
//!
//! Every newcomer of level `lam+1` inside a jump segment gets the same
//! value, so a jump segment splits into two jump segments around a
//! constant middle run. Only the jump segments need to be tracked, which
//! keeps the work independent of `Q_lam`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::tree::{newcomer_value, Segment, Side};
use crate::arith::{Enclosure, LinForm, LinInterval, Rational};
use crate::cf::Theta;
use crate::error::{Error, Result};
use crate::orbit::SymPoint;

/// Orbit point `k theta - m` with unbounded indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigPoint {
    pub k: BigInt,
    pub m: BigInt,
}

impl BigPoint {
    pub fn new(k: impl Into<BigInt>, m: impl Into<BigInt>) -> Self {
        BigPoint { k: k.into(), m: m.into() }
    }

    pub fn form(&self) -> LinForm {
        LinForm::new(Rational::from_integer(-&self.m), Rational::from_integer(self.k.clone()))
    }
}

impl From<SymPoint> for BigPoint {
    fn from(p: SymPoint) -> Self {
        BigPoint::new(p.k, p.m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpSegment {
    pub level: usize,
    pub left: BigPoint,
    pub right: BigPoint,
    pub f_left: Rational,
    pub f_right: Rational,
    pub side: Side,
}

impl JumpSegment {
    /// The two level-2 segments `[0, theta]` and `[theta, 1]`.
    pub fn roots() -> [JumpSegment; 2] {
        let (zero, th, one) = (BigPoint::new(0, 0), BigPoint::new(1, 0), BigPoint::new(0, -1));
        [
            JumpSegment {
                level: 2,
                left: zero,
                right: th.clone(),
                f_left: Rational::one(),
                f_right: Rational::zero(),
                side: Side::Left,
            },
            JumpSegment { level: 2, left: th, right: one, f_left: Rational::zero(), f_right: Rational::one(), side: Side::Right },
        ]
    }

    /// From a materialized jump segment; `None` for constant ones.
    pub fn from_segment(s: &Segment) -> Option<Self> {
        Some(JumpSegment {
            level: s.level,
            left: s.left_point.into(),
            right: s.right_point.into(),
            f_left: s.f_left.clone(),
            f_right: s.f_right.clone(),
            side: s.side?,
        })
    }

    pub fn len(&self) -> LinForm {
        &self.right.form() - &self.left.form()
    }

    pub fn delta_f(&self) -> Rational {
        (&self.f_left - &self.f_right).abs()
    }

    pub fn bracket(&self) -> LinInterval {
        LinInterval::bracket(&self.f_left, &self.f_right, &self.len())
    }
}

/// A jump segment one level down.
#[derive(Clone, Debug, PartialEq)]
pub enum Refined {
    /// No newcomer landed inside.
    Persist(JumpSegment),
    /// Newcomers from `first` to `last` (equal when there is one), all with
    /// value `value`.
    Split { left: JumpSegment, first: BigPoint, last: BigPoint, value: Rational, right: JumpSegment },
}

pub fn refine(theta: &Theta, s: &JumpSegment) -> Result<Refined> {
    let lam = s.level as i64;
    let (q, p, q_next) = (theta.q(lam)?, theta.p(lam)?, theta.q(lam + 1)?);
    let forward = lam % 2 == 0;
    let anchor = if forward { &s.left } else { &s.right };
    let t = (&q_next - 1u32 - &anchor.k).div_floor(&q);
    let next = s.level + 1;
    if !t.is_positive() {
        return Ok(Refined::Persist(JumpSegment { level: next, ..s.clone() }));
    }
    let at = |i: &BigInt| BigPoint { k: &anchor.k + i * &q, m: &anchor.m + i * &p };
    let (near, far) = (at(&BigInt::one()), at(&t));
    let (first, last) = if forward { (near, far) } else { (far, near) };
    let value = newcomer_value(&s.f_left, &s.f_right, s.side);
    let left = JumpSegment {
        level: next,
        left: s.left.clone(),
        right: first.clone(),
        f_left: s.f_left.clone(),
        f_right: value.clone(),
        side: s.side,
    };
    let right = JumpSegment {
        level: next,
        left: last.clone(),
        right: s.right.clone(),
        f_left: value.clone(),
        f_right: s.f_right.clone(),
        side: s.side,
    };
    Ok(Refined::Split { left, first, last, value, right })
}

/// Bracket of `int_s f` from the constant runs down to level `to_level`
/// and the endpoint brackets of the jump segments left there.
/// `cap` bounds the number of jump segments visited.
pub fn segment_integral(theta: &Theta, s: &JumpSegment, to_level: usize, cap: u64) -> Result<LinInterval> {
    let mut acc = LinInterval::zero();
    let mut stack = vec![s.clone()];
    let mut visited = 0u64;
    while let Some(s) = stack.pop() {
        visited += 1;
        if visited > cap {
            return Err(Error::budget("jump segment refinement", format!("more than {cap} segments"), cap));
        }
        if s.level >= to_level {
            acc.add_assign(&s.bracket());
            continue;
        }
        match refine(theta, &s)? {
            Refined::Persist(c) => stack.push(c),
            Refined::Split { left, first, last, value, right } => {
                acc.add_exact(&(&last.form() - &first.form()).scale(&value));
                stack.push(left);
                stack.push(right);
            }
        }
    }
    Ok(acc)
}

/// The real `(c theta - d) / v`, `v > 0`: a rational (`c = 0`) or an orbit
/// point given symbolically (`v = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPoint {
    c: BigInt,
    d: BigInt,
    v: BigInt,
}

impl EvalPoint {
    pub fn rational(x: &Rational) -> Self {
        EvalPoint { c: BigInt::zero(), d: -x.numer(), v: x.denom().clone() }
    }

    pub fn orbit(k: impl Into<BigInt>, m: impl Into<BigInt>) -> Self {
        EvalPoint { c: k.into(), d: m.into(), v: BigInt::one() }
    }

    pub fn theta() -> Self {
        EvalPoint::orbit(1, 0)
    }

    /// Sign of `p - x`.
    fn cmp_point(&self, theta: &Theta, p: &BigPoint) -> Result<Ordering> {
        theta.sign_of(&(&self.v * &p.k - &self.c), &(&self.v * &p.m - &self.d))
    }

    fn in_unit(&self, theta: &Theta) -> Result<bool> {
        Ok(self.cmp_point(theta, &BigPoint::new(0, 0))? != Ordering::Greater
            && self.cmp_point(theta, &BigPoint::new(0, -1))? != Ordering::Less)
    }
}

/// `f_theta(x)`: exact when `x` is a level point or sits in a constant run,
/// else the endpoint bracket of the deepest jump segment reached.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FValue {
    pub value: Enclosure,
    pub level: usize,
    pub exact: bool,
    /// `false` when the level cap stopped the descent above `tol`.
    pub converged: bool,
}

pub fn eval_f_theta(theta: &Theta, x: &EvalPoint, tol: &Rational, level_cap: usize) -> Result<FValue> {
    theta.spec().require_t2_shape()?;
    if !x.in_unit(theta)? {
        return Err(Error::Precondition("x must lie in [0, 1]".into()));
    }
    let exact = |v: Rational, level: usize| FValue { value: Enclosure::point(v), level, exact: true, converged: true };
    let [l, r] = JumpSegment::roots();
    let mut seg = match x.cmp_point(theta, &l.right)? {
        Ordering::Equal => return Ok(exact(Rational::zero(), 2)),
        Ordering::Greater => l,
        Ordering::Less => r,
    };
    loop {
        if x.cmp_point(theta, &seg.left)? == Ordering::Equal {
            return Ok(exact(seg.f_left.clone(), seg.level));
        }
        if x.cmp_point(theta, &seg.right)? == Ordering::Equal {
            return Ok(exact(seg.f_right.clone(), seg.level));
        }
        let stop = seg.delta_f() <= *tol;
        if stop || seg.level >= level_cap {
            let value = Enclosure::spanning(seg.f_left.clone(), seg.f_right.clone());
            return Ok(FValue { value, level: seg.level, exact: false, converged: stop });
        }
        seg = match refine(theta, &seg)? {
            Refined::Persist(c) => c,
            Refined::Split { left, first, last, value, right } => {
                let lvl = left.level;
                match (x.cmp_point(theta, &first)?, x.cmp_point(theta, &last)?) {
                    (Ordering::Greater, _) => left,
                    (_, Ordering::Less) => right,
                    _ => return Ok(exact(value, lvl)),
                }
            }
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::cf::ThetaSpec;

    #[test]
    fn fixed_values() {
        let t = Theta::new(ThetaSpec::tichy_fast());
        let tol = rat(1, 1000);
        let one = eval_f_theta(&t, &EvalPoint::rational(&rat(1, 1)), &tol, 40).unwrap();
        assert_eq!(one.value, Enclosure::point(rat(1, 1)));
        let zero = eval_f_theta(&t, &EvalPoint::rational(&rat(0, 1)), &tol, 40).unwrap();
        assert_eq!(zero.value, Enclosure::point(rat(1, 1)));
        let th = eval_f_theta(&t, &EvalPoint::theta(), &tol, 40).unwrap();
        assert_eq!(th.value, Enclosure::point(rat(0, 1)));
        assert!(eval_f_theta(&t, &EvalPoint::rational(&rat(3, 2)), &tol, 40).is_err());
    }

    #[test]
    fn descent_narrows() {
        let t = Theta::new(ThetaSpec::tichy_fast());
        let v = eval_f_theta(&t, &EvalPoint::rational(&rat(1, 7)), &rat(1, 1_000_000), 60).unwrap();
        assert!(v.converged);
        assert!(v.value.width() <= rat(1, 1_000_000));
    }

    #[test]
    fn root_integrals_bracket_mean() {
        let t = Theta::new(ThetaSpec::tichy_fast());
        let th = t.enclosure_bits(200).unwrap();
        let mut coarse = LinInterval::zero();
        let mut fine = LinInterval::zero();
        for r in JumpSegment::roots() {
            coarse.add_assign(&segment_integral(&t, &r, 2, 10).unwrap());
            fine.add_assign(&segment_integral(&t, &r, 6, 1000).unwrap());
        }
        let (c, f) = (coarse.eval(&th), fine.eval(&th));
        assert!(c.encloses(&f));
        assert!(f.width() < rat(1, 1_000_000));
    }
}
