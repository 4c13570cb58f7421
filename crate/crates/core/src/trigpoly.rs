//! Real trigonometric polynomials `p(x) = sum_{0<|m|<=N} p_m e(mx)` with
//! `p_{-m} = conj(p_m)`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{cis_turns, parse_rational, CFx, Enclosure, Fx, Rational};
use crate::cf::Theta;
use crate::error::{Error, Result};

/// Coefficient times geometric ratio, per frequency, for one `Q`.
#[derive(Clone, Debug)]
pub struct OrbitFactors {
    prec: u32,
    ratios: Vec<CFx>,
}

/// Coefficients for `m = 1..=N`; negative frequencies are implied.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrigPolynomial {
    /// `coeffs[m-1] = (Re p_m, Im p_m)`.
    coeffs: Vec<(Enclosure, Enclosure)>,
}

impl TrigPolynomial {
    pub fn new(coeffs: Vec<(Enclosure, Enclosure)>) -> Self {
        TrigPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        TrigPolynomial { coeffs: Vec::new() }
    }

    /// `amp * cos(2 pi m x)`.
    pub fn cosine(m: usize, amp: Rational) -> Self {
        assert!(m >= 1);
        let mut c = vec![(Enclosure::zero(), Enclosure::zero()); m];
        c[m - 1].0 = Enclosure::point(amp / BigInt::from(2));
        TrigPolynomial { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[(Enclosure, Enclosure)] {
        &self.coeffs
    }

    /// `p_m` for any integer `m`.
    pub fn coeff(&self, m: i64) -> (Enclosure, Enclosure) {
        if m == 0 || m.unsigned_abs() as usize > self.coeffs.len() {
            return (Enclosure::zero(), Enclosure::zero());
        }
        let (re, im) = &self.coeffs[m.unsigned_abs() as usize - 1];
        if m > 0 {
            (re.clone(), im.clone())
        } else {
            (re.clone(), -im)
        }
    }

    fn coeff_fx(&self, m: usize, prec: u32) -> CFx {
        let (re, im) = &self.coeffs[m - 1];
        CFx::new(Fx::from_enclosure(re, prec), Fx::from_enclosure(im, prec))
    }

    /// `M[p] = sum_{0<|m|<=N} |m p_m|`.
    pub fn m_norm(&self, prec: u32) -> Enclosure {
        let mut acc = Fx::zero(prec);
        for m in 1..=self.coeffs.len() {
            acc.add_assign(&self.coeff_fx(m, prec).abs().mul_u64(2 * m as u64));
        }
        acc.to_enclosure()
    }

    /// `p(x) = 2 Re sum_{m>0} p_m e(mx)`.
    pub fn eval(&self, x: &Rational, prec: u32) -> Enclosure {
        let mut acc = Fx::zero(prec);
        for m in 1..=self.coeffs.len() {
            let arg = Fx::from_rational(&(x * BigInt::from(m)), prec);
            acc.add_assign(&self.coeff_fx(m, prec).mul(&cis_turns(&arg)).re);
        }
        acc.mul_u64(2).to_enclosure()
    }

    /// `sum_{k<Q} p(k theta + phi)` in closed form:
    /// `2 Re sum_m p_m e(m phi) (e(m Q theta) - 1) / (e(m theta) - 1)`.
    pub fn orbit_sum(&self, theta: &Theta, phi: &Rational, q: &BigInt, prec: u32) -> Result<Enclosure> {
        Ok(self.orbit_sum_with(&self.orbit_factors(theta, q, prec)?, phi))
    }

    /// The `phi`-independent ratios `(e(m Q theta) - 1) / (e(m theta) - 1)`.
    pub fn orbit_factors(&self, theta: &Theta, q: &BigInt, prec: u32) -> Result<OrbitFactors> {
        let n = self.coeffs.len() as u64;
        if n == 0 || q.is_zero() {
            return Ok(OrbitFactors { prec, ratios: Vec::new() });
        }
        // e(m theta) - 1 can be as small as 2 pi ||Q_nu theta||; budget the
        // bits lost in the division and in m*Q*theta.
        let lost = 2 * (q.bits() as u32 + 64 - n.leading_zeros()) + 16;
        let mut w = prec + lost;
        'retry: for _ in 0..6 {
            let th = theta.fx(w + lost)?;
            let mut ratios = Vec::with_capacity(n as usize);
            for m in 1..=n {
                let mth = th.mul_u64(m).reduce_mod1().with_prec(w);
                let den = cis_turns(&mth).sub(&CFx::one(w));
                let num = cis_turns(&th.mul_int(&(q * m)).reduce_mod1().with_prec(w)).sub(&CFx::one(w));
                match num.div(&den) {
                    Some(r) => ratios.push(self.coeff_fx(m as usize, w).mul(&r)),
                    None => {
                        w *= 2;
                        continue 'retry;
                    }
                }
            }
            return Ok(OrbitFactors { prec: w, ratios });
        }
        Err(Error::RefinementCap { what: "trigonometric orbit sum".into() })
    }

    /// Finishes [`orbit_sum`](Self::orbit_sum) for one shift.
    pub fn orbit_sum_with(&self, f: &OrbitFactors, phi: &Rational) -> Enclosure {
        let w = f.prec;
        let mut acc = Fx::zero(w);
        for (i, r) in f.ratios.iter().enumerate() {
            let m = BigInt::from(i + 1);
            let ph = cis_turns(&Fx::from_rational(&crate::arith::frac_rat(&(phi * m)), w));
            acc.add_assign(&ph.mul(r).re);
        }
        acc.mul_u64(2).to_enclosure()
    }

    /// Parses a coefficient file: one `m re im` line per frequency
    /// `m >= 1` (exact rationals, `#` comments).
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, Rational, Rational)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("coefficient line {}: expected `m re im`", i + 1));
            if f.len() != 3 {
                return Err(bad());
            }
            let m: usize = f[0].parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(Error::Parse(format!("coefficient line {}: m must be >= 1", i + 1)));
            }
            let re = parse_rational(f[1]).ok_or_else(bad)?;
            let im = parse_rational(f[2]).ok_or_else(bad)?;
            entries.push((m, re, im));
        }
        let n = entries.iter().map(|e| e.0).max().unwrap_or(0);
        let mut c = vec![(Enclosure::zero(), Enclosure::zero()); n];
        for (m, re, im) in entries {
            c[m - 1] = (Enclosure::point(re), Enclosure::point(im));
        }
        Ok(TrigPolynomial { coeffs: c })
    }

    /// Exact `sum |p_m| * 2` upper bound on `sup |p|` when coefficients are
    /// rational points (uses `|re| + |im| >= |p_m|`).
    pub fn sup_bound(&self) -> Rational {
        let mut s = Rational::zero();
        for (re, im) in &self.coeffs {
            s += re.mag() + im.mag();
        }
        s * BigInt::from(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::cf::ThetaSpec;

    #[test]
    fn cosine_eval_and_norm() {
        let p = TrigPolynomial::cosine(3, rat(1, 1));
        let v = p.eval(&rat(1, 6), 80);
        assert!(v.contains(&rat(-1, 1)));
        assert!(p.m_norm(80).contains(&rat(3, 1)));
        assert_eq!(p.coeff(-3), p.coeff(3));
    }

    #[test]
    fn orbit_sum_matches_direct() {
        let t = Theta::new(ThetaSpec::golden());
        let p = TrigPolynomial::new(vec![
            (Enclosure::point(rat(1, 3)), Enclosure::point(rat(-1, 5))),
            (Enclosure::zero(), Enclosure::point(rat(2, 7))),
        ]);
        let phi = rat(1, 9);
        let q = 40u64;
        let s = p.orbit_sum(&t, &phi, &BigInt::from(q), 64).unwrap();
        let th = t.enclosure_bits(200).unwrap();
        let mut direct = Enclosure::zero();
        for k in 0..q {
            let x = th.scale(&crate::arith::int(k)).add_rat(&phi);
            direct = direct + p.eval(&x.mid(), 120);
        }
        assert!(s.intersects(&direct));
        assert!(crate::arith::rat_to_f64(&s.width()) < 1e-12);
    }

    #[test]
    fn parse_rejects_zero_frequency() {
        assert!(TrigPolynomial::parse("0 1 0").is_err());
        let p = TrigPolynomial::parse("# cos\n2 1/2 0\n").unwrap();
        assert_eq!(p.degree(), 2);
    }
}
