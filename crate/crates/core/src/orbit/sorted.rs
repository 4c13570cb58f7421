use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::SymPoint;
use crate::cf::Theta;
use crate::error::{Error, Result};

/// The first `Q_nu` orbit points in increasing order, with the implicit
/// sentinel `1` after the last one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedOrbit {
    pub level: usize,
    pub points: Vec<SymPoint>,
}

impl OrderedOrbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point `i` for `i <= Q_nu`, where index `Q_nu` is the sentinel.
    pub fn at(&self, i: usize) -> SymPoint {
        if i == self.points.len() {
            SymPoint::SENTINEL
        } else {
            self.points[i]
        }
    }

    /// `rank[k]` = position of orbit index `k` in the sorted order.
    pub fn ranks(&self) -> Vec<u32> {
        let mut r = vec![0u32; self.points.len()];
        for (i, p) in self.points.iter().enumerate() {
            r[p.k as usize] = i as u32;
        }
        r
    }
}

/// The two neighbour steps of the level-`nu` orbit.
///
/// Between consecutive points the index moves by `+Q_{nu-1}` (gap
/// `||Q_{nu-1} theta||`) or by `Q_{nu-1} - Q_nu` (gap
/// `||Q_{nu-1} theta|| + ||Q_nu theta||`). `ascending` says whether these
/// steps move right (`Q_{nu-1} theta - P_{nu-1} > 0`) or left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkSteps {
    pub q: u64,
    pub q_prev: u64,
    pub p: i64,
    pub p_prev: i64,
    pub ascending: bool,
}

impl WalkSteps {
    /// Neighbour of `pt` in the walk direction; wraps to the sentinel.
    #[inline]
    pub fn step(&self, pt: SymPoint) -> SymPoint {
        if pt.k + self.q_prev < self.q {
            SymPoint { k: pt.k + self.q_prev, m: pt.m + self.p_prev }
        } else {
            SymPoint { k: pt.k + self.q_prev - self.q, m: pt.m + self.p_prev - self.p }
        }
    }

    /// Inverse of [`WalkSteps::step`].
    #[inline]
    pub fn unstep(&self, pt: SymPoint) -> SymPoint {
        if pt.k >= self.q_prev {
            SymPoint { k: pt.k - self.q_prev, m: pt.m - self.p_prev }
        } else {
            SymPoint { k: pt.k + self.q - self.q_prev, m: pt.m - self.p_prev + self.p }
        }
    }

    /// Right neighbour of a level point (sentinel for the largest point).
    pub fn succ(&self, pt: SymPoint) -> SymPoint {
        if self.ascending {
            self.step(pt)
        } else {
            self.unstep(pt)
        }
    }

    /// Left neighbour of a level point, treating index 0 as the sentinel
    /// when called with [`SymPoint::SENTINEL`].
    pub fn pred(&self, pt: SymPoint) -> SymPoint {
        if self.ascending {
            self.unstep(pt)
        } else {
            self.step(pt)
        }
    }
}

/// Certifies the step directions for level `nu >= 1`.
pub fn walk_steps(theta: &Theta, nu: usize) -> Result<WalkSteps> {
    assert!(nu >= 1);
    let to_u = |x: BigInt| x.to_u64().ok_or_else(|| Error::budget("orbit level", "Q_nu beyond u64", "u64"));
    let to_i = |x: BigInt| x.to_i64().ok_or_else(|| Error::budget("orbit level", "P_nu beyond i64", "i64"));
    let (qb, qpb) = (theta.q(nu as i64)?, theta.q(nu as i64 - 1)?);
    let (pb, ppb) = (theta.p(nu as i64)?, theta.p(nu as i64 - 1)?);
    let s1 = theta.sign_of(&qpb, &ppb)?;
    let s2 = theta.sign_of(&(&qpb - &qb), &(&ppb - &pb))?;
    if s1 != s2 || s1 == Ordering::Equal {
        return Err(Error::ThreeGapViolation {
            level: nu,
            detail: "neighbour steps do not share a direction".into(),
        });
    }
    Ok(WalkSteps {
        q: to_u(qb)?,
        q_prev: to_u(qpb)?,
        p: to_i(pb)?,
        p_prev: to_i(ppb)?,
        ascending: s1 == Ordering::Greater,
    })
}

/// Sorts `{k theta}` for `k < Q_nu` in `O(Q_nu)`.
///
/// Both neighbour steps are certified to move in the same direction, the
/// walk visits every index exactly once and returns to its start shifted
/// by exactly 1. Hence the positions are strictly monotone along the walk
/// and span `[0, 1)`, which certifies the order without comparing any two
/// points numerically.
pub fn sorted_orbit(theta: &Theta, nu: usize, budget: u64) -> Result<OrderedOrbit> {
    let q = theta.q(nu as i64)?;
    let qn = q.to_u64().filter(|&v| v <= budget).ok_or_else(|| Error::budget("sorted orbit", &q, budget))?;
    if nu == 0 {
        return Ok(OrderedOrbit { level: 0, points: vec![SymPoint::ORIGIN] });
    }
    let w = walk_steps(theta, nu)?;
    let n = qn as usize;
    let mut seen = vec![false; n];
    let mut points = Vec::with_capacity(n);
    let start = if w.ascending { SymPoint::ORIGIN } else { SymPoint::SENTINEL };
    let end = if w.ascending { SymPoint::SENTINEL } else { SymPoint::ORIGIN };
    let mut cur = start;
    for i in 0..n {
        if w.ascending {
            if seen[cur.k as usize] {
                return Err(walk_err(nu, cur));
            }
            seen[cur.k as usize] = true;
            points.push(cur);
            cur = w.step(cur);
        } else {
            cur = w.step(cur);
            if seen[cur.k as usize] {
                return Err(walk_err(nu, cur));
            }
            seen[cur.k as usize] = true;
            points.push(cur);
            if i + 1 == n && cur != end {
                return Err(walk_err(nu, cur));
            }
        }
    }
    if w.ascending && cur != end {
        return Err(walk_err(nu, cur));
    }
    if !w.ascending {
        points.reverse();
    }
    debug_assert_eq!(points[0], SymPoint::ORIGIN);
    Ok(OrderedOrbit { level: nu, points })
}

fn walk_err(nu: usize, at: SymPoint) -> Error {
    Error::ThreeGapViolation { level: nu, detail: format!("neighbour walk broke at k = {}, m = {}", at.k, at.m) }
}
