use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{rat, LinForm, Rational};
use crate::cf::Theta;
use crate::error::{Error, Result};
use crate::orbit::{sorted_orbit, OrderedOrbit, SymPoint};
use crate::report::rat_str;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Jump,
    Constant,
}

/// Position of a jump segment relative to `theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Segment `I_{nu,k} = [x_{nu,k-1}, x_{nu,k}]`, `k = 1..=Q_nu`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub level: usize,
    pub k: usize,
    pub left_point: SymPoint,
    pub right_point: SymPoint,
    #[serde(with = "rat_str")]
    pub f_left: Rational,
    #[serde(with = "rat_str")]
    pub f_right: Rational,
    pub kind: Kind,
    /// `None` for constant segments.
    pub side: Option<Side>,
}

impl Segment {
    pub fn len(&self) -> LinForm {
        &self.right_point.form() - &self.left_point.form()
    }

    /// `Delta_f = |f_left - f_right|`.
    pub fn delta_f(&self) -> Rational {
        let d = &self.f_left - &self.f_right;
        if d < Rational::zero() {
            -d
        } else {
            d
        }
    }
}

/// The level-`nu` partition of `[0, 1]` by `{k theta}`, `k < Q_nu`, with
/// the exact values of `f_theta` at every endpoint.
#[derive(Clone, Debug)]
pub struct SegmentTree {
    pub level: usize,
    pub order: OrderedOrbit,
    /// Value id per orbit index `k`.
    ids: Vec<u32>,
    values: Vec<Rational>,
    /// Sorted position of `theta = {1 theta}`.
    theta_rank: usize,
}

/// Interns rationals so that each orbit index stores a `u32`.
#[derive(Default)]
struct ValueTable {
    values: Vec<Rational>,
    index: HashMap<Rational, u32>,
}

impl ValueTable {
    fn intern(&mut self, v: Rational) -> u32 {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.values.len() as u32;
        self.index.insert(v.clone(), i);
        self.values.push(v);
        i
    }
}

/// Value given to every newcomer in a segment: the constant, or the
/// weighted endpoint average for jump segments.
pub(crate) fn newcomer_value(f_left: &Rational, f_right: &Rational, side: Side) -> Rational {
    if f_left == f_right {
        return f_left.clone();
    }
    match side {
        Side::Right => (f_left + f_right) * rat(1, 2),
        Side::Left => f_left * rat(1, 3) + f_right * rat(2, 3),
    }
}

impl SegmentTree {
    /// Builds levels `2..=nu` in turn; only the last one is kept.
    pub fn build(theta: &Theta, nu: usize, budget: u64) -> Result<Self> {
        theta.spec().require_t2_shape()?;
        if nu < 2 {
            return Err(Error::Precondition(format!("tree levels start at 2, got {nu}")));
        }
        let q_nu = theta.q(nu as i64)?;
        if q_nu > BigInt::from(budget) {
            return Err(Error::budget("segment tree", &q_nu, budget));
        }
        let n = q_nu.to_usize().expect("below budget");
        let mut table = ValueTable::default();
        let mut ids = vec![u32::MAX; n];
        ids[0] = table.intern(Rational::one());
        ids[1] = table.intern(Rational::zero());
        let sentinel = ids[0];
        for lam in 2..nu {
            let order = sorted_orbit(theta, lam, budget)?;
            let q: u64 = theta.q(lam as i64)?.try_into().expect("below budget");
            let q_next: u64 = theta.q(lam as i64 + 1)?.try_into().expect("below budget");
            // Newcomers j + i Q_lam sit at x_j + i delta_lam, on the side of
            // the anchor x_j given by the sign of delta_lam = Q_lam theta - P_lam.
            let forward = lam % 2 == 0;
            let rank = rank_of_theta(&order);
            for g in 0..order.len() {
                let (a, b) = (order.at(g), order.at(g + 1));
                let id_of = |p: SymPoint| if p == SymPoint::SENTINEL { sentinel } else { ids[p.k as usize] };
                let (fl, fr) = (id_of(a), id_of(b));
                let anchor = if forward { a.k } else { b.k };
                let t = (q_next - 1 - anchor) / q;
                if t == 0 {
                    continue;
                }
                let side = if g < rank { Side::Left } else { Side::Right };
                let v = if fl == fr {
                    fl
                } else {
                    let v = newcomer_value(&table.values[fl as usize], &table.values[fr as usize], side);
                    table.intern(v)
                };
                for i in 1..=t {
                    ids[(anchor + i * q) as usize] = v;
                }
            }
        }
        debug_assert!(ids.iter().all(|&i| i != u32::MAX));
        let order = sorted_orbit(theta, nu, budget)?;
        let theta_rank = rank_of_theta(&order);
        Ok(SegmentTree { level: nu, order, ids, values: table.values, theta_rank })
    }

    /// Number of segments, `Q_nu`.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// `f({k theta})` by orbit index.
    pub fn value_of_k(&self, k: u64) -> &Rational {
        &self.values[self.ids[k as usize] as usize]
    }

    /// `f(x_{nu,i})` for sorted position `i <= Q_nu` (`x_{nu,Q_nu} = 1`).
    pub fn value_at(&self, i: usize) -> &Rational {
        let p = self.order.at(i);
        if p == SymPoint::SENTINEL {
            self.value_of_k(0)
        } else {
            self.value_of_k(p.k)
        }
    }

    pub fn theta_rank(&self) -> usize {
        self.theta_rank
    }

    /// Segment `k` in `1..=Q_nu`.
    pub fn segment(&self, k: usize) -> Segment {
        let (fl, fr) = (self.value_at(k - 1).clone(), self.value_at(k).clone());
        let kind = if fl == fr { Kind::Constant } else { Kind::Jump };
        let side = match kind {
            Kind::Constant => None,
            Kind::Jump if k <= self.theta_rank => Some(Side::Left),
            Kind::Jump => Some(Side::Right),
        };
        Segment {
            level: self.level,
            k,
            left_point: self.order.at(k - 1),
            right_point: self.order.at(k),
            f_left: fl,
            f_right: fr,
            kind,
            side,
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        (1..=self.len()).map(move |k| self.segment(k))
    }

    /// `f(x_{nu,k})` for `k = 0..Q_nu-1` in sorted order.
    pub fn f_values(&self) -> Vec<Rational> {
        (0..self.len()).map(|i| self.value_at(i).clone()).collect()
    }

    /// `sum_k f(x_{nu,k})`, exact.
    pub fn f_sum(&self) -> Rational {
        let mut counts = vec![0u64; self.values.len()];
        for &i in &self.ids {
            counts[i as usize] += 1;
        }
        counts.iter().zip(&self.values).map(|(&c, v)| v * BigInt::from(c)).sum()
    }

    /// One JSON object per segment, newline-terminated.
    pub fn dump_jsonl(&self) -> String {
        let mut out = String::new();
        for s in self.segments() {
            out.push_str(&serde_json::to_string(&s).expect("segment serializes"));
            out.push('\n');
        }
        out
    }

    /// Checks values in `[0, 1]` with `2^a 3^b` denominators, monotonicity
    /// on each side of `theta`, and `f(0) = f(1) = 1`, `f(theta) = 0`.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Precondition(format!("tree level {}: {m}", self.level)));
        for v in &self.values {
            if *v < Rational::zero() || *v > Rational::one() {
                return fail(format!("value {v} outside [0, 1]"));
            }
            if !is_2_3_smooth(v.denom()) {
                return fail(format!("value {v} has a denominator with a prime above 3"));
            }
        }
        if !self.value_of_k(0).is_one() || !self.value_of_k(1).is_zero() {
            return fail("f(0) = 1, f(theta) = 0 broken".into());
        }
        for i in 0..self.len() {
            let (a, b) = (self.value_at(i), self.value_at(i + 1));
            let ok = if i < self.theta_rank { a >= b } else { a <= b };
            if !ok {
                return fail(format!("monotonicity broken at sorted position {i}"));
            }
        }
        Ok(())
    }
}

fn rank_of_theta(order: &OrderedOrbit) -> usize {
    order.points.iter().position(|p| p.k == 1).expect("theta is a point of every level >= 2")
}

fn is_2_3_smooth(d: &BigInt) -> bool {
    let mut d = d.clone();
    for p in [2u32, 3] {
        let p = BigInt::from(p);
        while d.is_multiple_of(&p) {
            d /= &p;
        }
    }
    d.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::ThetaSpec;

    fn fast() -> Theta {
        Theta::new(ThetaSpec::tichy_fast())
    }

    #[test]
    fn level_two_has_two_jumps() {
        let t = SegmentTree::build(&fast(), 2, 100).unwrap();
        let segs: Vec<Segment> = t.segments().collect();
        assert_eq!(segs.len(), 2);
        assert!(segs.iter().all(|s| s.kind == Kind::Jump));
        assert_eq!(segs[0].side, Some(Side::Left));
        assert_eq!(segs[1].side, Some(Side::Right));
        assert_eq!(t.f_values(), vec![Rational::one(), Rational::zero()]);
    }

    #[test]
    fn level_three_values() {
        // Newcomers 2, 4 land in [0, theta] and get 1/3; 3 lands in
        // [theta, 1] and gets 1/2.
        let t = SegmentTree::build(&fast(), 3, 100).unwrap();
        assert_eq!(t.value_of_k(2), &rat(1, 3));
        assert_eq!(t.value_of_k(4), &rat(1, 3));
        assert_eq!(t.value_of_k(3), &rat(1, 2));
        t.check_invariants().unwrap();
    }

    #[test]
    fn invariants_through_level_five() {
        for nu in 2..=5 {
            let t = SegmentTree::build(&fast(), nu, 1 << 20).unwrap();
            t.check_invariants().unwrap();
            assert_eq!(BigInt::from(t.len()), fast().q(nu as i64).unwrap());
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        let t = Theta::new(ThetaSpec::sqrt2());
        assert!(SegmentTree::build(&t, 3, 100).is_err());
    }
}
