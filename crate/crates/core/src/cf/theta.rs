use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ThetaSpec;
use crate::arith::{Enclosure, Fx, Rational};
use crate::error::{Error, Result};

/// Extra quotients a comparison may pull in before giving up.
pub const DEFAULT_REFINEMENT_CAP: usize = 64;

/// `(nu, P_nu, Q_nu)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub nu: i64,
    #[serde(with = "crate::report::big_str")]
    pub p: BigInt,
    #[serde(with = "crate::report::big_str")]
    pub q: BigInt,
}

#[derive(Default)]
struct Cache {
    a: Vec<BigInt>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

/// A spec together with its memoized quotient and convergent stream.
///
/// Cheap to clone (shared cache); safe to use from several threads.
#[derive(Clone)]
pub struct Theta {
    spec: Arc<ThetaSpec>,
    cache: Arc<RwLock<Cache>>,
    fx_cache: Arc<Mutex<HashMap<u32, Fx>>>,
}

impl std::fmt::Debug for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Theta({})", self.spec.label)
    }
}

impl Theta {
    pub fn new(spec: ThetaSpec) -> Self {
        let mut c = Cache::default();
        c.a.push(spec.a0.clone());
        c.p.push(spec.a0.clone());
        c.q.push(BigInt::one());
        Theta {
            spec: Arc::new(spec),
            cache: Arc::new(RwLock::new(c)),
            fx_cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn spec(&self) -> &ThetaSpec {
        &self.spec
    }

    fn ensure(&self, nu: usize) -> Result<()> {
        if self.cache.read().unwrap().q.len() > nu {
            return Ok(());
        }
        let mut c = self.cache.write().unwrap();
        while c.q.len() <= nu {
            let i = c.q.len();
            let a = self.spec.quotient(i, &c.q)?;
            let (pm1, qm1) = (c.p[i - 1].clone(), c.q[i - 1].clone());
            let (pm2, qm2) = if i >= 2 {
                (c.p[i - 2].clone(), c.q[i - 2].clone())
            } else {
                (BigInt::one(), BigInt::zero())
            };
            c.p.push(&a * pm1 + pm2);
            c.q.push(&a * qm1 + qm2);
            c.a.push(a);
        }
        Ok(())
    }

    /// Partial quotient `a_nu` (`a_0` may be any integer).
    pub fn a(&self, nu: usize) -> Result<BigInt> {
        self.ensure(nu)?;
        Ok(self.cache.read().unwrap().a[nu].clone())
    }

    /// `P_nu` for `nu >= -1`.
    pub fn p(&self, nu: i64) -> Result<BigInt> {
        if nu == -1 {
            return Ok(BigInt::one());
        }
        self.ensure(nu as usize)?;
        Ok(self.cache.read().unwrap().p[nu as usize].clone())
    }

    /// `Q_nu` for `nu >= -1`.
    pub fn q(&self, nu: i64) -> Result<BigInt> {
        if nu == -1 {
            return Ok(BigInt::zero());
        }
        self.ensure(nu as usize)?;
        Ok(self.cache.read().unwrap().q[nu as usize].clone())
    }

    pub fn q_u64(&self, nu: i64) -> Result<Option<u64>> {
        Ok(self.q(nu)?.to_u64())
    }

    pub fn convergent(&self, nu: i64) -> Result<Convergent> {
        Ok(Convergent { nu, p: self.p(nu)?, q: self.q(nu)? })
    }

    /// Convergents for `nu = -1..=nu_max`.
    pub fn convergents(&self, nu_max: usize) -> Result<Vec<Convergent>> {
        (-1..=nu_max as i64).map(|nu| self.convergent(nu)).collect()
    }

    /// Largest `nu` with `Q_nu <= bound` (`nu >= 0`).
    pub fn last_nu_with_q_at_most(&self, bound: u64) -> Result<usize> {
        let b = BigInt::from(bound);
        let mut nu = 0usize;
        while self.q(nu as i64 + 1)? <= b {
            nu += 1;
        }
        Ok(nu)
    }

    /// `[P_nu/Q_nu, P_{nu+1}/Q_{nu+1}]` ordered; theta lies strictly inside.
    pub fn enclosure_at(&self, nu: usize) -> Result<Enclosure> {
        let a = Rational::new(self.p(nu as i64)?, self.q(nu as i64)?);
        let b = Rational::new(self.p(nu as i64 + 1)?, self.q(nu as i64 + 1)?);
        Ok(Enclosure::spanning(a, b))
    }

    /// Enclosure between consecutive convergents with the smallest `nu`
    /// whose width `1/(Q_nu Q_{nu+1})` is at most `width_bound`.
    pub fn enclosure(&self, width_bound: &Rational) -> Result<Enclosure> {
        assert!(width_bound.is_positive());
        let mut nu = 0usize;
        loop {
            let w = Rational::new(BigInt::one(), self.q(nu as i64)? * self.q(nu as i64 + 1)?);
            if &w <= width_bound {
                return self.enclosure_at(nu);
            }
            nu += 1;
        }
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn enclosure_bits(&self, bits: u32) -> Result<Enclosure> {
        let mut nu = 0usize;
        loop {
            let prod = self.q(nu as i64)? * self.q(nu as i64 + 1)?;
            if prod.bits() > bits as u64 {
                return self.enclosure_at(nu);
            }
            nu += 1;
        }
    }

    /// Fixed-point enclosure of theta at precision `prec`, at most a few
    /// ulps wide.
    pub fn fx(&self, prec: u32) -> Result<Fx> {
        if let Some(v) = self.fx_cache.lock().unwrap().get(&prec) {
            return Ok(v.clone());
        }
        let e = self.enclosure_bits(prec + 2)?;
        let v = Fx::from_enclosure(&e, prec);
        self.fx_cache.lock().unwrap().insert(prec, v.clone());
        Ok(v)
    }

    /// Sign of `q*theta - p` for integers, decided exactly from the
    /// convergents (theta is irrational, so the value is never zero unless
    /// `q = p = 0`).
    pub fn sign_of(&self, q: &BigInt, p: &BigInt) -> Result<Ordering> {
        if q.is_zero() {
            return Ok(BigInt::zero().cmp(p));
        }
        let (q, p, flip) = if q.is_negative() { (-q, -p, true) } else { (q.clone(), p.clone(), false) };
        // Any fraction strictly between consecutive convergents has
        // denominator >= Q_nu + Q_{nu+1}; start where Q_nu > q.
        let mut nu = 0usize;
        while self.q(nu as i64)? <= q {
            nu += 1;
        }
        let x = Rational::new(p, q);
        for extra in 0..=DEFAULT_REFINEMENT_CAP {
            let e = self.enclosure_at(nu + extra)?;
            // theta > x  <=>  q*theta - p > 0
            let o = if &x < e.lo() {
                Some(Ordering::Greater)
            } else if &x > e.hi() {
                Some(Ordering::Less)
            } else {
                None
            };
            if let Some(o) = o {
                return Ok(if flip { o.reverse() } else { o });
            }
        }
        Err(Error::RefinementCap { what: format!("sign of {}*theta - {}", x.denom(), x.numer()) })
    }

    /// Enclosure of the tail `alpha_{nu+1} = [a_{nu+1}; a_{nu+2}, ...]`
    /// from `depth >= 1` quotients: the last tail is bracketed in `(1, inf)`.
    pub fn alpha(&self, nu: usize, depth: usize) -> Result<Enclosure> {
        assert!(depth >= 1);
        let qs: Vec<BigInt> = (nu + 1..=nu + depth).map(|i| self.a(i)).collect::<Result<_>>()?;
        let fold = |last_bump: bool| -> Rational {
            let mut v = Rational::from_integer(qs[depth - 1].clone() + if last_bump { 1 } else { 0 });
            for a in qs[..depth - 1].iter().rev() {
                v = Rational::from_integer(a.clone()) + v.recip();
            }
            v
        };
        Ok(Enclosure::spanning(fold(false), fold(true)))
    }

    /// Enclosure of `|Q_nu theta - P_nu| = 1/(alpha_{nu+1} Q_nu + Q_{nu-1})`.
    pub fn quality(&self, nu: usize, depth: usize) -> Result<Enclosure> {
        let al = self.alpha(nu, depth)?;
        let qn = self.q(nu as i64)?;
        let qm = self.q(nu as i64 - 1)?;
        // 1/(a Q_nu + Q_{nu-1}) = d/(n Q_nu + d Q_{nu-1}) for a = n/d.
        let inv = |a: &Rational| reduce_small(a.denom().clone(), a.numer() * &qn + a.denom() * &qm);
        Ok(Enclosure::new(inv(al.hi()), inv(al.lo())))
    }

    /// `quality` with a depth that makes the relative width small; the
    /// default for bound checks.
    pub fn quality_tight(&self, nu: usize) -> Result<Enclosure> {
        // Relative width 2^-64. Fast-growing quotients get there at the
        // first depth; bounded ones need about 50 levels.
        let mut q = self.quality(nu, 6)?;
        for depth in [12, 24, 48, 96] {
            if q.width() * BigInt::from(1u128 << 64) <= *q.lo() {
                break;
            }
            match self.quality(nu, depth) {
                Ok(deeper) => q = deeper,
                // a finite spec ran out of quotients; keep what we have
                Err(_) => break,
            }
        }
        Ok(q)
    }

    /// Signed `delta_nu = Q_nu theta - P_nu`, enclosed.
    pub fn delta(&self, nu: usize) -> Result<Enclosure> {
        let q = self.quality_tight(nu)?;
        Ok(if nu.is_multiple_of(2) { q } else { -q })
    }

    /// Enclosure of `||q theta||` (distance to the nearest integer) for
    /// `q >= 0`, using the supplied theta enclosure.
    pub fn dist_to_int(q: &BigInt, theta: &Enclosure) -> Enclosure {
        let x = theta.scale(&Rational::from_integer(q.clone()));
        let n = crate::arith::floor_rat(&x.mid());
        let n = Rational::from_integer(n);
        let below = x.add_rat(&-&n); // x - n
        let above = (-&x).add_rat(&(&n + Rational::one())); // n + 1 - x
        // ||x|| = min(x - n, n + 1 - x) when n <= x <= n + 1.
        let lo = below.lo().clone().min(above.lo().clone()).max(Rational::zero());
        let hi = below.hi().clone().min(above.hi().clone());
        if below.lo() >= &Rational::zero() && above.lo() >= &Rational::zero() {
            Enclosure::new(lo, hi.max(Rational::zero()))
        } else {
            // Straddles an integer: distance is between 0 and the width.
            Enclosure::new(Rational::zero(), x.width())
        }
    }
}

/// `n/d`, reduced only when cheap: num-bigint's gcd is quadratic, and
/// Liouville-type specs reach million-bit denominators. Unreduced
/// rationals compare and combine correctly.
fn reduce_small(n: BigInt, d: BigInt) -> Rational {
    if n.bits() + d.bits() < 1 << 14 {
        Rational::new(n, d)
    } else {
        Rational::new_raw(n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn golden_fibonacci() {
        let t = Theta::new(ThetaSpec::golden());
        let q: Vec<i64> = (0..=6).map(|n| t.q(n).unwrap().try_into().unwrap()).collect();
        assert_eq!(q, vec![1, 1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn finite_spec_reports_missing_index() {
        let s = ThetaSpec::new("fin", 0, &[1, 1, 2], super::super::TailRule::None);
        let t = Theta::new(s);
        let c = t.convergents(3).unwrap();
        let pq: Vec<(i64, i64)> = c[1..]
            .iter()
            .map(|c| (c.p.clone().try_into().unwrap(), c.q.clone().try_into().unwrap()))
            .collect();
        assert_eq!(pq, vec![(0, 1), (1, 1), (1, 2), (3, 5)]);
        assert_eq!(t.q(4), Err(Error::InsufficientQuotients { index: 4 }));
    }

    #[test]
    fn golden_enclosure_hundredth() {
        let t = Theta::new(ThetaSpec::golden());
        let e = t.enclosure(&rat(1, 100)).unwrap();
        // Smallest nu with 1/(Q_nu Q_{nu+1}) <= 1/100 is nu = 5.
        assert_eq!(e, Enclosure::new(rat(8, 13), rat(5, 8)));
        assert_eq!(e.width(), rat(1, 104));
        let next = t.enclosure_at(6).unwrap();
        assert_eq!(next, Enclosure::new(rat(8, 13), rat(13, 21)));
        assert_eq!(next.width(), rat(1, 273));
    }

    #[test]
    fn sign_of_linear_forms() {
        let t = Theta::new(ThetaSpec::golden());
        // 5 theta - 3 = 0.0901... > 0, 3 theta - 2 < 0
        assert_eq!(t.sign_of(&BigInt::from(5), &BigInt::from(3)).unwrap(), Ordering::Greater);
        assert_eq!(t.sign_of(&BigInt::from(3), &BigInt::from(2)).unwrap(), Ordering::Less);
        assert_eq!(t.sign_of(&BigInt::from(-3), &BigInt::from(-2)).unwrap(), Ordering::Greater);
        assert_eq!(t.sign_of(&BigInt::zero(), &BigInt::from(-1)).unwrap(), Ordering::Greater);
    }

    #[test]
    fn alpha_depth_one_is_one_term_bracket() {
        let t = Theta::new(ThetaSpec::tichy_fast());
        let a = t.alpha(5, 1).unwrap();
        assert_eq!(a, Enclosure::new(rat(19220, 1), rat(19221, 1)));
    }
}
