use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{ceil_rat, int, ln_upper, rat, Rational, LN2_HI, PI_HI, PI_LO};
use crate::error::{Error, Result};
use crate::report::{big_str, rat_str};

/// One level of the bump schedule. `eps = 1/L`, and the bump `h_n` is one
/// full sine period on `[x_{n-1}, x_n]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub n: usize,
    #[serde(with = "big_str")]
    pub l: BigInt,
    #[serde(with = "rat_str")]
    pub eps: Rational,
    #[serde(with = "rat_str")]
    pub x: Rational,
    /// Upper bound on `Var[f_n']`.
    #[serde(with = "rat_str")]
    pub var_deriv: Rational,
    /// Fejer degree `N_n`.
    #[serde(with = "big_str")]
    pub degree: BigInt,
    /// Certified upper bound on `int |f_n' - p_n'|`, at most `1/n`.
    #[serde(with = "rat_str")]
    pub l1_error: Rational,
    /// Integer upper bound on `M[p_n]`.
    #[serde(with = "big_str")]
    pub mbar: BigInt,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BumpSchedule {
    pub levels: Vec<Level>,
    /// `L_{n_max + 1}`, so that `x* <= x_{n_max} + 2/L_{n_max+1}`.
    #[serde(with = "big_str")]
    pub next_l: BigInt,
}

/// Upper bound on `int_{-1/2}^{1/2} K_N(t) |t| dt` (Fejer kernel):
/// `(1 + 2 ln(N+1)) / (4(N+1))`.
///
/// Exactly, the integral is `(2/pi^2) (sum_{odd m>N} 1/m^2 +
/// (1/(N+1)) sum_{odd m<=N} 1/m)`, which is at most
/// `(4 + ln(N+1)) / (pi^2 (N+1))`; that is below the stated bound for
/// `N >= 1`.
pub fn fejer_moment_bound(n: &BigInt) -> Rational {
    let np1 = n + 1u32;
    (Rational::one() + ln_upper(&np1) * int(2)) / Rational::from_integer(np1 * 4u32)
}

/// Smallest `N >= 1` with `var * fejer_moment_bound(N) <= tol`.
///
/// With `r = N+1` in `[2^e, 2^{e+1})` the tangent-line log bound makes the
/// condition `var (2e ln2 - 1)/(4r) + var/2^{e+1} <= tol`, decreasing in
/// `r`, so each bit class is solved in closed form and the first feasible
/// class gives the minimum.
pub fn fejer_degree(var: &Rational, tol: &Rational) -> Result<BigInt> {
    assert!(tol.is_positive());
    let ln2 = rat(LN2_HI.0, LN2_HI.1);
    for e in 1u32..4096 {
        let pe = BigInt::one() << e;
        let slack = tol - var / Rational::from_integer(&pe * 2u32);
        if !slack.is_positive() {
            continue;
        }
        let c = var * (&ln2 * int(2 * e) - Rational::one()) / int(4);
        let r_min = ceil_rat(&(c / slack)).max(pe.clone());
        if r_min < (&pe << 1u32) {
            let n = (r_min - 1u32).max(BigInt::one());
            debug_assert!(var * fejer_moment_bound(&n) <= *tol);
            return Ok(n);
        }
    }
    Err(Error::budget("Fejer degree", "more than 2^4096", "2^4096"))
}

impl BumpSchedule {
    /// Builds levels `1..=n_max` (`n_max >= 1`).
    pub fn build(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Precondition("n_max must be at least 1".into()));
        }
        let pi_hi = rat(PI_HI.0, PI_HI.1);
        let pi_lo = rat(PI_LO.0, PI_LO.1);
        let mut levels: Vec<Level> = Vec::with_capacity(n_max);
        let mut l = BigInt::from(2);
        let mut x = Rational::zero();
        let mut var = Rational::zero();
        let mut l1_norm = Rational::zero();
        loop {
            let n = levels.len() + 1;
            x += Rational::new(BigInt::one(), l.clone());
            // h_n' = (2 pi L/n) cos(...) on one period: two end jumps and
            // interior variation 4 * amplitude.
            var += &pi_hi * Rational::from_integer(&l * 12u32) / int(n as u64);
            l1_norm += rat(4, n as i64);
            let tol = rat(1, n as i64);
            let degree = fejer_degree(&var, &tol)?;
            let l1_error = &var * fejer_moment_bound(&degree);
            // |f_n'^(m)| <= min(Var f_n' / (2 pi |m|), ||f_n'||_1), and
            // M[p_n] <= sum_{0<|m|<=N} |f_n'^(m)| / (2 pi).
            let by_var = &var * (Rational::one() + ln_upper(&degree)) / (&pi_lo * &pi_lo * int(2));
            let by_l1 = Rational::from_integer(degree.clone()) * &l1_norm / &pi_lo;
            let mbar = ceil_rat(&by_var.min(by_l1)).max(BigInt::one());
            levels.push(Level {
                n,
                l: l.clone(),
                eps: Rational::new(BigInt::one(), l.clone()),
                x: x.clone(),
                var_deriv: var.clone(),
                degree,
                l1_error,
                mbar,
            });
            // L_{n+1} = L_n * max(2 N_n, n * Mbar_{n-2}), Mbar_{-1} = Mbar_0 = 1.
            let cur = &levels[n - 1];
            let m_prev = if n >= 3 { levels[n - 3].mbar.clone() } else { BigInt::one() };
            let factor = (&cur.degree * 2u32).max(m_prev * BigInt::from(n));
            let next = &l * factor;
            if n == n_max {
                return Ok(BumpSchedule { levels, next_l: next });
            }
            l = next;
        }
    }

    pub fn n_max(&self) -> usize {
        self.levels.len()
    }

    /// Level `n` in `1..=n_max`.
    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n - 1]
    }

    pub fn eps(&self, n: usize) -> Rational {
        if n == self.n_max() + 1 {
            Rational::new(BigInt::one(), self.next_l.clone())
        } else {
            self.level(n).eps.clone()
        }
    }

    /// `x_n`, with `x_0 = 0`.
    pub fn x(&self, n: usize) -> Rational {
        if n == 0 {
            Rational::zero()
        } else {
            self.level(n).x.clone()
        }
    }

    /// Upper bound on `x*`: `x_{n_max} + 2 eps_{n_max+1}`.
    pub fn x_star_upper(&self) -> Rational {
        self.x(self.n_max()) + self.eps(self.n_max() + 1) * int(2)
    }

    /// The schedule invariants, checked exactly: halving, tail domination
    /// `sum_{j>n} eps_j <= eps_n`, `x_n < 1`, `L_n | L_{n+1}` and the
    /// certificate `l1_error <= 1/n`.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Precondition(m));
        let nm = self.n_max();
        for n in 1..=nm {
            let lv = self.level(n);
            if self.eps(n + 1) * int(2) > lv.eps {
                return fail(format!("eps_{} > eps_{n}/2", n + 1));
            }
            let mut tail = self.eps(nm + 1) * int(2);
            for j in n + 1..=nm {
                tail += self.eps(j);
            }
            if tail > lv.eps {
                return fail(format!("tail after level {n} exceeds eps_{n}"));
            }
            if lv.x >= Rational::one() {
                return fail(format!("x_{n} >= 1"));
            }
            let next_l = if n == nm { &self.next_l } else { &self.level(n + 1).l };
            if !next_l.is_multiple_of(&lv.l) {
                return fail(format!("L_{n} does not divide L_{}", n + 1));
            }
            if lv.l1_error > rat(1, n as i64) {
                return fail(format!("L1 certificate at level {n} above 1/{n}"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("schedule serializes")
    }
}

/// `sum_{j<=n} 4/j`, the exact variation of `f_n`.
pub fn partial_variation(n: usize) -> Rational {
    (1..=n).map(|j| rat(4, j as i64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_levels() {
        let s = BumpSchedule::build(4).unwrap();
        assert_eq!(s.level(1).x, rat(1, 2));
        assert_eq!(s.level(1).degree, BigInt::from(232));
        assert_eq!(s.level(2).l, BigInt::from(928));
        s.check_invariants().unwrap();
    }

    #[test]
    fn degree_grows_with_accuracy() {
        let v = rat(1000, 1);
        let a = fejer_degree(&v, &rat(1, 10)).unwrap();
        let b = fejer_degree(&v, &rat(1, 20)).unwrap();
        assert!(b >= a);
        // minimality
        let prev = &a - 1u32;
        assert!(prev < BigInt::one() || &v * fejer_moment_bound(&prev) > rat(1, 10));
    }

    #[test]
    fn variation_sums() {
        assert_eq!(partial_variation(1), rat(4, 1));
        assert_eq!(partial_variation(2), rat(6, 1));
        assert!(partial_variation(20) > rat(10, 1));
    }
}
