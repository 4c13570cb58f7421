use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::Theta;
use crate::arith::{rat, Enclosure, Rational};
use crate::error::Result;
use crate::lab::ModulusBound;
use crate::report::Verdict;

/// Result of the `Q_{nu+1} ||Q_nu theta|| > 1/2` check.
#[derive(Clone, Debug, Serialize)]
pub struct Q12Outcome {
    pub nu: usize,
    pub verdict: Verdict,
    /// Enclosure of `Q_{nu+1} ||Q_nu theta||` at the deciding depth.
    pub certificate: Enclosure,
    pub depth: usize,
}

/// Certifies `Q_{nu+1} ||Q_nu theta|| > 1/2`, refining the tail bracket
/// up to `max_depth` quotients.
pub fn verify_q12(theta: &Theta, nu: usize, max_depth: usize) -> Result<Q12Outcome> {
    let half = rat(1, 2);
    let qn1 = theta.q(nu as i64 + 1)?;
    let mut last = None;
    for depth in 1..=max_depth.max(1) {
        // Left unreduced, see `quality`.
        let q = theta.quality(nu, depth)?;
        let scale = |r: &Rational| Rational::new_raw(r.numer() * &qn1, r.denom().clone());
        let cert = Enclosure::new(scale(q.lo()), scale(q.hi()));
        let v = Verdict::gt_rat(&cert, &half);
        if v != Verdict::Undecided {
            return Ok(Q12Outcome { nu, verdict: v, certificate: cert, depth });
        }
        last = Some((cert, depth));
    }
    let (certificate, depth) = last.unwrap();
    Ok(Q12Outcome { nu, verdict: Verdict::Undecided, certificate, depth })
}

/// `Q_{nu-1} / a_{nu+1}` for each `nu` in the range (exact).
pub fn condition_oo1_trace(theta: &Theta, nus: std::ops::RangeInclusive<usize>) -> Result<Vec<Rational>> {
    nus.map(|nu| Ok(Rational::new(theta.q(nu as i64 - 1)?, theta.a(nu + 1)?)))
        .collect()
}

/// `Q_nu * omega(||Q_nu theta||)` for each `nu` in the range.
pub fn condition_oo1o_trace(
    theta: &Theta,
    modulus: &ModulusBound,
    nus: std::ops::RangeInclusive<usize>,
) -> Result<Vec<Enclosure>> {
    nus.map(|nu| {
        let q = Rational::from_integer(theta.q(nu as i64)?);
        Ok(modulus.eval(&theta.quality_tight(nu)?).scale(&q))
    })
    .collect()
}

/// `P_nu Q_{nu-1} - P_{nu-1} Q_nu = (-1)^{nu-1}` for `nu = 0..=nu_max`.
pub fn determinant_ok(theta: &Theta, nu_max: usize) -> Result<bool> {
    for nu in 0..=nu_max as i64 {
        let d = theta.p(nu)? * theta.q(nu - 1)? - theta.p(nu - 1)? * theta.q(nu)?;
        let want = if (nu - 1).rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
        if d != want {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::ThetaSpec;

    #[test]
    fn q12_nu0_with_a1_one_needs_depth_two() {
        let t = Theta::new(ThetaSpec::golden());
        let o = verify_q12(&t, 0, 16).unwrap();
        assert_eq!(o.verdict, Verdict::Holds);
        assert!(o.depth >= 2);
    }

    #[test]
    fn oo1_trace_tichy_fast() {
        let t = Theta::new(ThetaSpec::tichy_fast());
        let tr = condition_oo1_trace(&t, 3..=5).unwrap();
        assert_eq!(tr[0], rat(2, 12));
        assert_eq!(tr[2], rat(62, 19220));
    }

    #[test]
    fn determinants() {
        for s in ThetaSpec::builtin_names() {
            let t = Theta::new(ThetaSpec::builtin(s).unwrap());
            assert!(determinant_ok(&t, 12).unwrap());
        }
    }
}
