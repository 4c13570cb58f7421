use num_bigint::BigInt;
use serde::Serialize;

use super::BumpSchedule;
use crate::arith::{int, rat, Enclosure, Rational, PI_HI, PI_LO};
use crate::cf::{Theta, DEFAULT_REFINEMENT_CAP};
use crate::error::{Error, Result};
use crate::report::{big_str, rat_str, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionBounds {
    pub m1: Verdict,
    pub m2: Verdict,
    pub m3: Verdict,
    pub m4: Verdict,
    pub total: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub nu: usize,
    pub n: usize,
    pub l: usize,
    #[serde(with = "big_str")]
    pub q_l: BigInt,
    #[serde(with = "rat_str")]
    pub phi: Rational,
    #[serde(rename = "S1")]
    pub s1: Enclosure,
    #[serde(rename = "S2")]
    pub s2: Enclosure,
    #[serde(rename = "S3")]
    pub s3: Enclosure,
    #[serde(rename = "S4")]
    pub s4: Enclosure,
    pub total: Enclosure,
    pub bounds: DecompositionBounds,
    /// `N_n < Q_{nu+1}`.
    pub degree_below_q_next: Verdict,
    /// `|I| < 2 ||Q_{l-1} theta||` for `I = (x_{n+2}, x*)`.
    pub lemma1_hypothesis: Verdict,
    /// `||Q_l theta|| / ||Q_nu theta||`.
    pub ratio_q: Enclosure,
    /// `eps_{n+3} / eps_{n+2}`.
    #[serde(with = "rat_str")]
    pub ratio_eps: Rational,
    pub ratio_chain: Verdict,
    /// Orbit points in the unresolved tail window beyond `x_{n_max}`.
    #[serde(with = "big_str")]
    pub tail_points: BigInt,
}

impl DecompositionReport {
    pub fn verdict(&self) -> Verdict {
        let b = &self.bounds;
        Verdict::all([b.m1, b.m2, b.m3, b.m4, b.total, self.degree_below_q_next, self.lemma1_hypothesis])
    }
}

/// `||Q_nu theta||` refined until it decides `pred`, or the cap.
fn decide<F: Fn(&Enclosure) -> Option<bool>>(theta: &Theta, nu: usize, what: &str, pred: F) -> Result<bool> {
    for depth in 6..6 + DEFAULT_REFINEMENT_CAP {
        if let Some(b) = pred(&theta.quality(nu, depth)?) {
            return Ok(b);
        }
    }
    Err(Error::RefinementCap { what: what.to_string() })
}

fn le_rat(e: &Enclosure, t: &Rational) -> Option<bool> {
    if e.hi() <= t {
        Some(true)
    } else if e.lo() > t {
        Some(false)
    } else {
        None
    }
}

impl BumpSchedule {
    /// `n(nu) >= 1` with `eps_{n+2} < ||Q_nu theta|| <= eps_{n+1}`; needs
    /// `n + 2 <= n_max`.
    pub fn resolve_n(&self, theta: &Theta, nu: usize) -> Result<usize> {
        let what = format!("n(nu) at nu = {nu}");
        if !decide(theta, nu, &what, |e| le_rat(e, &self.eps(2)))? {
            return Err(Error::Precondition(format!("||Q_{nu} theta|| > eps_2: n(nu) would be 0")));
        }
        let mut n = 1;
        while n + 2 <= self.n_max() {
            if !decide(theta, nu, &what, |e| le_rat(e, &self.eps(n + 2)))? {
                return Ok(n);
            }
            n += 1;
        }
        Err(Error::Precondition(format!("n(nu) at nu = {nu} is beyond the built schedule (n_max = {})", self.n_max())))
    }

    /// The `count` smallest `nu <= nu_limit` whose `n(nu)` is resolvable.
    pub fn resolvable_nus(&self, theta: &Theta, count: usize, nu_limit: usize) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for nu in 0..=nu_limit {
            if out.len() == count {
                break;
            }
            match self.resolve_n(theta, nu) {
                Ok(_) => out.push(nu),
                Err(Error::Precondition(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    /// Minimal `l` with `||Q_l theta|| <= eps_{n+3}`.
    pub fn resolve_l(&self, theta: &Theta, nu: usize, n: usize) -> Result<usize> {
        let t = self.eps(n + 3);
        let mut l = nu;
        loop {
            if decide(theta, l, "l(nu)", |e| le_rat(e, &t))? {
                return Ok(l);
            }
            l += 1;
        }
    }

    /// The four-part split of `sum_{k<Q_l} f(k theta + phi)` with certified
    /// enclosures of each part and the bounds 2/n, pi/(2(n+2)), 16/n,
    /// 2/(n+3) and 22/n.
    pub fn decomposition_verify(&self, theta: &Theta, nu: usize, phi: &Rational, pn_cap: u64) -> Result<DecompositionReport> {
        let n = self.resolve_n(theta, nu)?;
        let l = self.resolve_l(theta, nu, n)?;
        let q_l = theta.q(l as i64)?;
        let pn = self.build_pn(n, pn_cap, 96)?;

        let s2 = pn.orbit_sum(theta, phi, &q_l, 64)?;
        let mut fn_sum = Enclosure::zero();
        for j in 1..=n {
            fn_sum = fn_sum + self.bump_orbit_sum(j, theta, phi, &q_l)?;
        }
        let s1 = &fn_sum - &s2;
        let s3 = self.bump_orbit_sum(n + 1, theta, phi, &q_l)? + self.bump_orbit_sum(n + 2, theta, phi, &q_l)?;
        let (mut s4, tail_points) = self.tail_bracket(theta, phi, &q_l)?;
        for j in n + 3..=self.n_max() {
            s4 = s4 + self.bump_orbit_sum(j, theta, phi, &q_l)?;
        }
        let total = &(&s1 + &s2) + &(&s3 + &s4);

        let nr = |a: i64, b: i64| Enclosure::point(rat(a, b));
        let d2 = 2 * (n as i64 + 2);
        let pi_half = Enclosure::new(rat(PI_LO.0, PI_LO.1 * d2), rat(PI_HI.0, PI_HI.1 * d2));
        let bounds = DecompositionBounds {
            m1: Verdict::abs_le(&s1, &nr(2, n as i64)),
            m2: Verdict::abs_le(&s2, &pi_half),
            m3: Verdict::abs_le(&s3, &nr(16, n as i64)),
            m4: Verdict::abs_le(&s4, &nr(2, n as i64 + 3)),
            total: Verdict::abs_le(&total, &nr(22, n as i64)),
        };

        let degree_below_q_next = Verdict::from_bool(self.level(n).degree < theta.q(nu as i64 + 1)?);
        let mut i_len = self.eps(self.n_max() + 1) * int(2);
        for j in n + 3..=self.n_max() {
            i_len += self.eps(j);
        }
        let q_lm1 = theta.quality_tight(l - 1)?;
        let lemma1_hypothesis = Verdict::lt(&Enclosure::point(i_len), &q_lm1.scale(&int(2)));
        let ratio_q = theta
            .quality_tight(l)?
            .checked_div(&theta.quality_tight(nu)?)
            .expect("qualities are positive");
        let ratio_eps = self.eps(n + 3) / self.eps(n + 2);
        let ratio_chain = Verdict::le(&ratio_q, &Enclosure::point(ratio_eps.clone()));
        Ok(DecompositionReport {
            nu,
            n,
            l,
            q_l,
            phi: phi.clone(),
            s1,
            s2,
            s3,
            s4,
            total,
            bounds,
            degree_below_q_next,
            lemma1_hypothesis,
            ratio_q,
            ratio_eps,
            ratio_chain,
            tail_points,
        })
    }
}
