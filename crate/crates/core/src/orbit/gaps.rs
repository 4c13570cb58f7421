use serde::Serialize;

use super::{walk_steps, OrderedOrbit};
use crate::arith::Enclosure;
use crate::cf::Theta;
use crate::error::{Error, Result};

/// Gap statistics of a level-`nu` orbit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapProfile {
    pub level: usize,
    pub count_short: u64,
    pub count_long: u64,
    /// `||Q_{nu-1} theta||`.
    pub short_len: Enclosure,
    /// `||Q_{nu-1} theta|| + ||Q_nu theta||`.
    pub long_len: Enclosure,
}

/// Classifies every gap (including the last one, up to 1) exactly by its
/// index/offset difference and checks the counts
/// `(Q_nu - Q_{nu-1}, Q_{nu-1})`.
pub fn three_gap_profile(theta: &Theta, orbit: &OrderedOrbit) -> Result<GapProfile> {
    let nu = orbit.level;
    if nu == 0 {
        let one = Enclosure::from_int(1);
        return Ok(GapProfile { level: 0, count_short: 0, count_long: 1, short_len: one.clone(), long_len: one });
    }
    let w = walk_steps(theta, nu)?;
    let sgn: i64 = if w.ascending { 1 } else { -1 };
    let short = (sgn * w.q_prev as i64, sgn * w.p_prev);
    let long = (sgn * (w.q_prev as i64 - w.q as i64), sgn * (w.p_prev - w.p));
    let (mut cs, mut cl) = (0u64, 0u64);
    for i in 0..orbit.len() {
        let (a, b) = (orbit.at(i), orbit.at(i + 1));
        let d = (b.k as i64 - a.k as i64, b.m - a.m);
        if d == short {
            cs += 1;
        } else if d == long {
            cl += 1;
        } else {
            return Err(Error::ThreeGapViolation {
                level: nu,
                detail: format!("gap between k = {} and k = {} has neither length", a.k, b.k),
            });
        }
    }
    if cs != w.q - w.q_prev || cl != w.q_prev {
        return Err(Error::ThreeGapViolation {
            level: nu,
            detail: format!("counts ({cs}, {cl}), expected ({}, {})", w.q - w.q_prev, w.q_prev),
        });
    }
    let s = theta.quality_tight(nu - 1)?;
    let l = &s + &theta.quality_tight(nu)?;
    if s.certified_cmp(&l) != Some(std::cmp::Ordering::Less) {
        return Err(Error::ThreeGapViolation { level: nu, detail: "short and long lengths overlap".into() });
    }
    Ok(GapProfile { level: nu, count_short: cs, count_long: cl, short_len: s, long_len: l })
}
