use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::arith::{Enclosure, Fx};
use crate::cf::{Theta, DEFAULT_REFINEMENT_CAP};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum BestApprox {
    /// `||Q_nu theta|| < ||q theta||` certified for every `q` checked.
    Holds { nu: usize, checked: u64, quality: Enclosure },
    /// A `q` with `||q theta|| <= ||Q_nu theta||` (certified).
    Violated { nu: usize, q: u64 },
    /// `Q_{nu+1}` exceeds the enumeration budget.
    Skipped { nu: usize, needed: String, budget: u64 },
}

impl BestApprox {
    pub fn holds(&self) -> bool {
        matches!(self, BestApprox::Holds { .. })
    }
}

/// Checks `||Q_nu theta|| < ||q theta||` for `1 <= q < Q_{nu+1}`,
/// `q != Q_nu`.
pub fn best_approx_check(theta: &Theta, nu: usize, budget: u64) -> Result<BestApprox> {
    let qn1 = theta.q(nu as i64 + 1)?;
    let upto = match qn1.to_u64().filter(|&v| v <= budget) {
        Some(v) => v,
        None => return Ok(BestApprox::Skipped { nu, needed: qn1.to_string(), budget }),
    };
    let qn = theta.q_u64(nu as i64)?.expect("Q_nu < Q_{nu+1} fits");
    let quality = theta.quality_tight(nu)?;
    // The closest competitor is ||Q_{nu-1} theta|| or
    // ||Q_{nu+1} theta - Q_nu theta||, both at least ||Q_nu theta|| +
    // ||Q_{nu+1} theta||; start with enough bits to see that margin.
    let margin_bits = (theta.q(nu as i64 + 2)?.bits() + 8) as u32;
    let mut prec = (64 - upto.leading_zeros()) + margin_bits + 32;
    let mut pending: Vec<u64> = (1..upto).filter(|&q| q != qn).collect();
    for _ in 0..DEFAULT_REFINEMENT_CAP {
        let th = theta.fx(prec)?;
        let qual_hi = Fx::from_enclosure(&quality, prec);
        let one = BigInt::one() << prec;
        let mut undecided = Vec::new();
        for &q in &pending {
            let y = th.mul_u64(q);
            let n = y.floor_lo();
            if n != y.floor_hi() {
                undecided.push(q);
                continue;
            }
            let f = y.add_int(&-n);
            // ||q theta|| >= min(f_lo, 1 - f_hi)
            let d_lo = f.lo_raw().clone().min(&one - f.hi_raw());
            let d_hi = f.hi_raw().clone().min(&one - f.lo_raw());
            if d_lo > *qual_hi.hi_raw() {
                continue;
            }
            if d_hi <= *qual_hi.lo_raw() {
                return Ok(BestApprox::Violated { nu, q });
            }
            undecided.push(q);
        }
        if undecided.is_empty() {
            return Ok(BestApprox::Holds { nu, checked: upto.saturating_sub(2), quality });
        }
        pending = undecided;
        prec += prec / 2 + 16;
    }
    Err(Error::RefinementCap { what: format!("best approximation check at level {nu}") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::ThetaSpec;

    #[test]
    fn golden_and_sqrt2_hold() {
        let g = Theta::new(ThetaSpec::golden());
        for nu in 0..12 {
            assert!(best_approx_check(&g, nu, 1 << 20).unwrap().holds(), "golden {nu}");
        }
        let s = Theta::new(ThetaSpec::sqrt2());
        assert!(best_approx_check(&s, 4, 1 << 20).unwrap().holds());
    }

    #[test]
    fn budget_skips() {
        let g = Theta::new(ThetaSpec::golden());
        let r = best_approx_check(&g, 30, 1000).unwrap();
        assert!(matches!(r, BestApprox::Skipped { .. }));
    }
}
