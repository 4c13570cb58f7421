use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::BumpSchedule;
use crate::arith::{cis_turns, frac_rat, pi_fx, rat, sin_turns, CFx, Enclosure, Fx, Rational};
use crate::error::{Error, Result};
use crate::trigpoly::TrigPolynomial;

impl BumpSchedule {
    /// `h_n(x) = (1/n) sin(2 pi L_n (x - x_{n-1}))` on `[x_{n-1}, x_n]`,
    /// zero elsewhere; `x` is read modulo 1.
    pub fn bump_eval(&self, n: usize, x: &Rational, prec: u32) -> Enclosure {
        let x = frac_rat(x);
        let (a, b) = (self.x(n - 1), self.x(n));
        if x < a || x > b {
            return Enclosure::zero();
        }
        let arg = frac_rat(&((&x - &a) * Rational::from_integer(self.level(n).l.clone())));
        sin_turns(&Fx::from_rational(&arg, prec)).to_enclosure().scale(&rat(1, n as i64))
    }

    /// `f(x) = sum_j h_j(x)`. Supports tile `[0, x*)`, so at most one bump
    /// is nonzero; beyond `x_{n_max}` the value is only known to lie in
    /// `[-1/(n_max+1), 1/(n_max+1)]`, and it is `0` past the certified
    /// upper bound on `x*`.
    pub fn eval_f(&self, x: &Rational, prec: u32) -> Enclosure {
        let x = frac_rat(x);
        let nm = self.n_max();
        if x >= self.x_star_upper() {
            return Enclosure::zero();
        }
        if x > self.x(nm) {
            let t = rat(1, nm as i64 + 1);
            return Enclosure::new(-&t, t);
        }
        for n in 1..=nm {
            if x <= self.x(n) {
                return self.bump_eval(n, &x, prec);
            }
        }
        unreachable!("x <= x_{{n_max}} was checked")
    }

    /// Interval version of [`BumpSchedule::eval_f`] for a fixed-point input
    /// of any width.
    pub fn eval_f_fx(&self, x: &Fx) -> Fx {
        let p = x.prec();
        let n0 = x.floor_lo();
        let y = x.add_int(&-n0);
        let one = BigInt::one() << p;
        if y.hi_raw() >= &one {
            if y.width_ulps() >= one {
                let t = Fx::one(p);
                return t.neg().hull(&t);
            }
            // Split at the integer; f(0) = f(1) = 0 keeps this exact.
            let left = Fx::from_raw(y.lo_raw().clone(), one.clone(), p);
            let right = Fx::from_raw(BigInt::zero(), y.hi_raw() - &one, p);
            return self.eval_unit(&left).hull(&self.eval_unit(&right));
        }
        self.eval_unit(&y)
    }

    fn eval_unit(&self, y: &Fx) -> Fx {
        let p = y.prec();
        let nm = self.n_max();
        let lo_of = |r: &Rational| Fx::from_rational(r, p);
        let mut out: Option<Fx> = None;
        let put = |v: Fx, out: &mut Option<Fx>| {
            *out = Some(match out.take() {
                Some(o) => o.hull(&v),
                None => v,
            })
        };
        for n in 1..=nm {
            let a = lo_of(&self.x(n - 1));
            let b = lo_of(&self.x(n));
            if y.hi_raw() < a.lo_raw() || y.lo_raw() > b.hi_raw() {
                continue;
            }
            let arg = y.sub(&a).mul_int(&self.level(n).l);
            let v = sin_turns(&arg).div_u64(n as u64);
            let inside = y.lo_raw() >= a.hi_raw() && y.hi_raw() <= b.lo_raw();
            put(if inside { v } else { v.hull(&Fx::zero(p)) }, &mut out);
        }
        let xs = lo_of(&self.x(nm));
        let xu = lo_of(&self.x_star_upper());
        if !(y.hi_raw() < xs.lo_raw() || y.lo_raw() > xu.hi_raw()) {
            let t = Fx::one(p).div_u64(nm as u64 + 1);
            put(t.neg().hull(&t), &mut out);
        }
        out.unwrap_or_else(|| Fx::zero(p))
    }

    /// Fourier coefficient `int_0^1 h_n(x) e(-mx) dx`.
    ///
    /// With `a = x_{n-1}`, `L = L_n`, `E = e(-m/L)`:
    /// `e(-m a) (1/n) (1 - E) L / (2 pi (L^2 - m^2))`, and `-i/(2L)` times
    /// `e(-m a)/n` at `m = L` (conjugate at `m = -L`).
    pub fn fourier_coeff_bump(&self, n: usize, m: &BigInt, prec: u32) -> CFx {
        let lv = self.level(n);
        let l = &lv.l;
        let w = prec + 2 * l.bits() as u32 + 16;
        let a = self.x(n - 1);
        let mr = Rational::from_integer(m.clone());
        let phase = cis_turns(&Fx::from_rational(&frac_rat(&(-(&mr * &a))), w));
        let core = if m.abs() == *l {
            let v = Fx::one(w).div_int(&(l * 2u32));
            if m.is_positive() {
                CFx::new(Fx::zero(w), v.neg())
            } else {
                CFx::new(Fx::zero(w), v)
            }
        } else {
            let e = cis_turns(&Fx::from_rational(&frac_rat(&(-&mr / Rational::from_integer(l.clone()))), w));
            let one_minus = CFx::one(w).sub(&e);
            let den = (l * l - m * m) * 2u32;
            let scale = Fx::from_int(l, w).mul(&pi_fx(w).mul_int(&den).recip().expect("L != |m|"));
            one_minus.mul_real(&scale)
        };
        phase.mul(&core).mul_rat(&rat(1, n as i64)).with_prec(prec)
    }

    /// Fejer coefficient `p_{n,m} = (1 - |m|/(N_n+1)) sum_{j<=n} h_j^(m)`.
    pub fn pn_coeff(&self, n: usize, m: &BigInt, prec: u32) -> CFx {
        let nn = &self.level(n).degree;
        if m.is_zero() || m.abs() > *nn {
            return CFx::zero(prec);
        }
        let mut s = CFx::zero(prec + 8);
        for j in 1..=n {
            s.add_assign(&self.fourier_coeff_bump(j, m, prec + 8));
        }
        let np1 = nn + 1u32;
        let w = Rational::new(&np1 - m.abs(), np1);
        s.mul_rat(&w).with_prec(prec)
    }

    /// Materializes `p_n` if `N_n <= cap`.
    pub fn build_pn(&self, n: usize, cap: u64, prec: u32) -> Result<TrigPolynomial> {
        let nn = &self.level(n).degree;
        if *nn > BigInt::from(cap) {
            return Err(Error::DegreeCap { degree: nn.to_string(), cap });
        }
        let deg: u64 = nn.try_into().expect("below cap");
        let coeffs = (1..=deg)
            .map(|m| {
                let c = self.pn_coeff(n, &BigInt::from(m), prec);
                (c.re.to_enclosure(), c.im.to_enclosure())
            })
            .collect();
        Ok(TrigPolynomial::new(coeffs))
    }

    /// `f_n'(x)` at a rational point inside a bump's interior (used by
    /// quadrature oracles and diagnostics).
    pub fn deriv_f_n(&self, n: usize, x: &Rational, prec: u32) -> Enclosure {
        let x = frac_rat(x);
        for j in 1..=n {
            let (a, b) = (self.x(j - 1), self.x(j));
            if x > a && x < b {
                let l = &self.level(j).l;
                let arg = frac_rat(&((&x - &a) * Rational::from_integer(l.clone())));
                let c = crate::arith::cos_turns(&Fx::from_rational(&arg, prec));
                let amp = pi_fx(prec).mul_int(&(l * 2u32)).div_u64(j as u64);
                return c.mul(&amp).to_enclosure();
            }
        }
        Enclosure::zero()
    }
}
