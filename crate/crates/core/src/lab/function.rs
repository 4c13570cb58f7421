use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ModulusBound;
use crate::arith::{cis_turns, cos_turns, int, rat, CFx, Enclosure, Fx, Rational, PI_HI};
use crate::cf::Theta;
use crate::error::{Error, Result};
use crate::t1::BumpSchedule;
use crate::t2::{refined_mean, SegmentTree, DEFAULT_EXTRA_LEVELS};
use crate::trigpoly::TrigPolynomial;

/// A 1-periodic function with a sound interval evaluator.
pub trait PeriodicFunction: Send + Sync {
    fn name(&self) -> String;

    /// Encloses `f` over the interval `x` (any real, any width).
    fn eval(&self, x: &Fx) -> Result<Fx>;

    /// Exact value at the orbit point `{k theta + phi}` when the function
    /// knows it symbolically.
    fn eval_orbit(&self, _k: u64, _phi: &Rational, _prec: u32) -> Option<Fx> {
        None
    }

    /// Values at `{k theta + phi}` for `k in start..end` when the function
    /// has a faster route than pointwise [`eval`](Self::eval). `th` and
    /// `ph` enclose `theta` and `phi`.
    fn eval_run(&self, _th: &Fx, _ph: &Fx, _start: u64, _end: u64, _prec: u32) -> Option<Vec<Fx>> {
        None
    }

    /// Upper bound on `Var[f]` over one period.
    fn variation(&self) -> Option<Rational> {
        None
    }

    fn modulus(&self) -> Option<ModulusBound> {
        None
    }

    /// `f(x) = f(-x)`.
    fn is_even(&self) -> bool {
        false
    }

    /// Exact `int_0^1 f`.
    fn mean(&self) -> Option<Rational> {
        Some(Rational::zero())
    }
}

fn pi_hi() -> Rational {
    rat(PI_HI.0, PI_HI.1)
}

/// Hull of `unit` over the pieces of `x mod 1` inside `[0, 1]`; `global`
/// when `x` is a full period or wider.
fn eval_periodic(x: &Fx, global: impl Fn(u32) -> Fx, unit: impl Fn(&Fx) -> Fx) -> Fx {
    let p = x.prec();
    let y = x.reduce_mod1();
    let one = BigInt::one() << p;
    if y.width_ulps() >= one {
        return global(p);
    }
    if y.hi_raw() > &one {
        let left = Fx::from_raw(y.lo_raw().clone(), one.clone(), p);
        let right = Fx::from_raw(BigInt::zero(), y.hi_raw() - &one, p);
        return unit(&left).hull(&unit(&right));
    }
    unit(&y)
}

/// Steps between exact recomputations in [`cis_run`]. Each step by a box
/// multiplication can widen by up to `sqrt 2`.
const RESTART: u64 = 32;

/// `e(m (k theta + phi))` for `k in start..end`, stepping by `e(m theta)`.
fn cis_run(th: &Fx, ph: &Fx, m: u64, start: u64, end: u64, prec: u32) -> Vec<CFx> {
    let w = prec + RESTART as u32 / 2 + 8;
    let at = |k: u64| cis_turns(&th.mul_u64(k).add(ph).mul_u64(m).reduce_mod1().with_prec(w));
    let step = cis_turns(&th.mul_u64(m).reduce_mod1().with_prec(w));
    let mut out = Vec::with_capacity((end - start) as usize);
    let mut z = CFx::zero(w);
    for k in start..end {
        z = if (k - start).is_multiple_of(RESTART) { at(k) } else { z.mul(&step) };
        out.push(z.clone());
    }
    out
}

pub struct ZeroFn;

impl PeriodicFunction for ZeroFn {
    fn name(&self) -> String {
        "zero".into()
    }
    fn eval(&self, x: &Fx) -> Result<Fx> {
        Ok(Fx::zero(x.prec()))
    }
    fn variation(&self) -> Option<Rational> {
        Some(Rational::zero())
    }
    fn modulus(&self) -> Option<ModulusBound> {
        Some(ModulusBound::Zero)
    }
    fn is_even(&self) -> bool {
        true
    }
}

/// `cos(2 pi m x)`.
pub struct Cosine {
    pub m: u64,
}

impl PeriodicFunction for Cosine {
    fn name(&self) -> String {
        if self.m == 1 {
            "cos1".into()
        } else {
            format!("cosM:{}", self.m)
        }
    }
    fn eval(&self, x: &Fx) -> Result<Fx> {
        Ok(cos_turns(&x.mul_u64(self.m).reduce_mod1()))
    }
    fn eval_run(&self, th: &Fx, ph: &Fx, start: u64, end: u64, prec: u32) -> Option<Vec<Fx>> {
        Some(cis_run(th, ph, self.m, start, end, prec).into_iter().map(|z| z.re.with_prec(prec)).collect())
    }
    fn variation(&self) -> Option<Rational> {
        Some(int(4 * self.m))
    }
    fn modulus(&self) -> Option<ModulusBound> {
        Some(ModulusBound::lipschitz(pi_hi() * int(2 * self.m)))
    }
    fn is_even(&self) -> bool {
        true
    }
}

/// A finite Fourier series with exact coefficients.
pub struct Fourier {
    pub label: String,
    pub poly: TrigPolynomial,
}

impl Fourier {
    fn lipschitz(&self) -> Rational {
        // sup |p'| <= 2 pi sum_{m != 0} |m p_m| = 2 pi M[p].
        let mut s = Rational::zero();
        for (m, (re, im)) in self.poly.coeffs().iter().enumerate() {
            s += (re.mag() + im.mag()) * int(2 * (m as u64 + 1));
        }
        s * pi_hi() * int(2)
    }
}

impl PeriodicFunction for Fourier {
    fn name(&self) -> String {
        self.label.clone()
    }
    fn eval(&self, x: &Fx) -> Result<Fx> {
        let p = x.prec();
        let mut acc = Fx::zero(p);
        for (i, (re, im)) in self.poly.coeffs().iter().enumerate() {
            if re.is_point() && re.lo().is_zero() && im.is_point() && im.lo().is_zero() {
                continue;
            }
            let c = CFx::new(Fx::from_enclosure(re, p), Fx::from_enclosure(im, p));
            let e = cis_turns(&x.mul_u64(i as u64 + 1).reduce_mod1());
            acc.add_assign(&c.mul(&e).re);
        }
        Ok(acc.mul_u64(2))
    }
    fn eval_run(&self, th: &Fx, ph: &Fx, start: u64, end: u64, prec: u32) -> Option<Vec<Fx>> {
        let mut acc = vec![Fx::zero(prec); (end - start) as usize];
        for (i, (re, im)) in self.poly.coeffs().iter().enumerate() {
            if re.is_point() && re.lo().is_zero() && im.is_point() && im.lo().is_zero() {
                continue;
            }
            let c = CFx::new(Fx::from_enclosure(re, prec), Fx::from_enclosure(im, prec));
            for (a, z) in acc.iter_mut().zip(cis_run(th, ph, i as u64 + 1, start, end, prec)) {
                a.add_assign(&c.mul(&z.with_prec(prec)).re);
            }
        }
        Some(acc.into_iter().map(|a| a.mul_u64(2)).collect())
    }
    fn variation(&self) -> Option<Rational> {
        Some(self.lipschitz())
    }
    fn modulus(&self) -> Option<ModulusBound> {
        Some(ModulusBound::lipschitz(self.lipschitz()))
    }
    fn is_even(&self) -> bool {
        self.poly.coeffs().iter().all(|(_, im)| im.is_point() && im.lo().is_zero())
    }
}

/// Continuous zero-mean triangle wave: rises from `-1/2` at 0 to `1/2` at
/// `1 - eta`, then falls back to `-1/2` at 1. `Var = 2`.
pub struct Sawtooth {
    pub eta: Rational,
}

impl Sawtooth {
    fn at(&self, y: &Fx) -> Fx {
        let p = y.prec();
        let half = Fx::one(p).div_u64(2);
        let top = Rational::one() - &self.eta;
        if y.hi_rat() <= top {
            y.mul_rat(&top.recip()).sub(&half)
        } else {
            half.sub(&y.sub(&Fx::from_rational(&top, p)).mul_rat(&self.eta.recip()))
        }
    }
}

impl PeriodicFunction for Sawtooth {
    fn name(&self) -> String {
        "sawtooth".into()
    }
    fn eval(&self, x: &Fx) -> Result<Fx> {
        let top = Rational::one() - &self.eta;
        Ok(eval_periodic(
            x,
            |p| Fx::one(p).div_u64(2).neg().hull(&Fx::one(p).div_u64(2)),
            |y| {
                let p = y.prec();
                let lo = Fx::from_raw(y.lo_raw().clone(), y.lo_raw().clone(), p);
                let hi = Fx::from_raw(y.hi_raw().clone(), y.hi_raw().clone(), p);
                let mut r = self.at(&lo).hull(&self.at(&hi));
                if y.lo_rat() <= top && top <= y.hi_rat() {
                    r = r.hull(&Fx::one(p).div_u64(2));
                }
                r
            },
        ))
    }
    fn variation(&self) -> Option<Rational> {
        Some(int(2))
    }
    fn modulus(&self) -> Option<ModulusBound> {
        let top = Rational::one() - &self.eta;
        Some(ModulusBound::lipschitz(top.recip().max(self.eta.recip())))
    }
}

/// The continuous function of unbounded variation from the bump schedule.
pub struct T1F {
    pub schedule: Arc<BumpSchedule>,
}

impl PeriodicFunction for T1F {
    fn name(&self) -> String {
        "t1:f".into()
    }
    fn eval(&self, x: &Fx) -> Result<Fx> {
        Ok(self.schedule.eval_f_fx(x))
    }
}

/// `g_theta = f_theta - int f_theta` from a materialized tree. Exact at
/// the tree's own orbit points when `phi = 0`; elsewhere bracketed by the
/// tree values and monotonicity on each side of `theta`.
pub struct T2G {
    tree: SegmentTree,
    /// Sorted tree positions, then the sentinel 1.
    positions: Vec<Fx>,
    mean: Enclosure,
}

impl T2G {
    pub fn build(theta: &Theta, nu: usize, budget: u64) -> Result<Self> {
        let tree = SegmentTree::build(theta, nu, budget)?;
        let mean = refined_mean(theta, nu + DEFAULT_EXTRA_LEVELS, 1 << 22)?.enclosure;
        let prec = 96 + 2 * (64 - (tree.len() as u64).leading_zeros());
        let th = theta.enclosure_bits(prec + 8)?;
        let mut positions: Vec<Fx> =
            tree.order.points.iter().map(|p| Fx::from_enclosure(&p.value(&th), prec)).collect();
        positions.push(Fx::one(prec));
        Ok(T2G { tree, positions, mean })
    }

    pub fn tree(&self) -> &SegmentTree {
        &self.tree
    }

    pub fn mean(&self) -> &Enclosure {
        &self.mean
    }

    fn minus_mean(&self, f: Fx) -> Fx {
        f.sub(&Fx::from_enclosure(&self.mean, f.prec()))
    }

    fn unit(&self, y: &Fx) -> Fx {
        let p = y.prec();
        let (ylo, yhi) = (y.lo_rat(), y.hi_rat());
        // Bracket y between tree points certainly at or outside its ends.
        let j_lo = self.positions.partition_point(|x| x.hi_rat() <= ylo).saturating_sub(1);
        let j_hi = self.positions.partition_point(|x| x.lo_rat() < yhi).min(self.positions.len() - 1);
        let (a, b) = (self.tree.value_at(j_lo), self.tree.value_at(j_hi));
        let mut r = Enclosure::spanning(a.clone(), b.clone());
        let t = self.tree.theta_rank();
        if j_lo < t && t < j_hi {
            r = r.hull_point(&Rational::zero());
        }
        self.minus_mean(Fx::from_enclosure(&r, p))
    }
}

impl PeriodicFunction for T2G {
    fn name(&self) -> String {
        format!("t2:g:{}", self.tree.level)
    }
    fn eval(&self, x: &Fx) -> Result<Fx> {
        Ok(eval_periodic(x, |p| self.minus_mean(Fx::zero(p).hull(&Fx::one(p))), |y| self.unit(y)))
    }
    fn eval_orbit(&self, k: u64, phi: &Rational, prec: u32) -> Option<Fx> {
        if !phi.is_zero() || k >= self.tree.len() as u64 {
            return None;
        }
        Some(self.minus_mean(Fx::from_rational(self.tree.value_of_k(k), prec)))
    }
    fn variation(&self) -> Option<Rational> {
        Some(int(2))
    }
}

/// The registry names that are finite Fourier series: `zero`, `cos1`,
/// `cosM:k` and `file:PATH`.
pub fn lookup_fourier(name: &str) -> Result<TrigPolynomial> {
    if name == "zero" {
        return Ok(TrigPolynomial::zero());
    }
    if name == "cos1" {
        return Ok(TrigPolynomial::cosine(1, Rational::one()));
    }
    if let Some(k) = name.strip_prefix("cosM:") {
        let m: usize = k.parse().map_err(|_| Error::Parse(format!("unknown function `{name}`")))?;
        if m == 0 {
            return Err(Error::Parse(format!("unknown function `{name}`")));
        }
        return Ok(TrigPolynomial::cosine(m, Rational::one()));
    }
    if let Some(path) = name.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read coefficient file {path}: {e}")))?;
        return TrigPolynomial::parse(&text);
    }
    Err(Error::Precondition(format!("`{name}` is not a finite Fourier series")))
}

/// Default level of the `t2:g` tree.
pub const T2G_DEFAULT_LEVEL: usize = 5;

/// Resolves a registry name: `zero`, `cos1`, `cosM:k`, `sawtooth`, `t1:f`,
/// `t2:g[:nu]`, or `file:PATH` (Fourier coefficient file).
pub fn lookup(name: &str, theta: &Theta) -> Result<Arc<dyn PeriodicFunction>> {
    let bad = || Error::Parse(format!("unknown function `{name}`"));
    Ok(match name {
        "zero" => Arc::new(ZeroFn),
        "cos1" => Arc::new(Cosine { m: 1 }),
        "sawtooth" => Arc::new(Sawtooth { eta: rat(1, 10) }),
        "t1:f" => Arc::new(T1F { schedule: Arc::new(BumpSchedule::build(crate::t1::DEFAULT_N_MAX)?) }),
        _ => {
            if let Some(k) = name.strip_prefix("cosM:") {
                let m: u64 = k.parse().map_err(|_| bad())?;
                if m == 0 {
                    return Err(bad());
                }
                Arc::new(Cosine { m })
            } else if let Some(rest) = name.strip_prefix("t2:g") {
                let nu = match rest.strip_prefix(':') {
                    Some(v) => v.parse().map_err(|_| bad())?,
                    None if rest.is_empty() => T2G_DEFAULT_LEVEL,
                    None => return Err(bad()),
                };
                Arc::new(T2G::build(theta, nu, crate::t2::TREE_BUDGET)?)
            } else if let Some(path) = name.strip_prefix("file:") {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read coefficient file {path}: {e}")))?;
                Arc::new(Fourier { label: name.to_string(), poly: TrigPolynomial::parse(&text)? })
            } else {
                return Err(bad());
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::ThetaSpec;

    fn pt(r: Rational) -> Fx {
        Fx::from_rational(&r, 96)
    }

    #[test]
    fn sawtooth_shape() {
        let s = Sawtooth { eta: rat(1, 10) };
        assert!(s.eval(&pt(rat(0, 1))).unwrap().to_enclosure().contains(&rat(-1, 2)));
        assert!(s.eval(&pt(rat(9, 10))).unwrap().to_enclosure().contains(&rat(1, 2)));
        assert!(s.eval(&pt(rat(19, 20))).unwrap().to_enclosure().contains(&rat(0, 1)));
        assert!(s.eval(&pt(rat(7, 5))).unwrap().intersects(&s.eval(&pt(rat(2, 5))).unwrap()));
        // An interval across the peak reaches 1/2.
        let w = pt(rat(17, 20)).hull(&pt(rat(19, 20)));
        assert!(s.eval(&w).unwrap().to_enclosure().contains(&rat(1, 2)));
    }

    #[test]
    fn fourier_parity() {
        let even = Fourier { label: "c".into(), poly: TrigPolynomial::parse("1 1/2 0").unwrap() };
        let odd = Fourier { label: "s".into(), poly: TrigPolynomial::parse("1 0 -1/2").unwrap() };
        assert!(even.is_even());
        assert!(!odd.is_even());
        // 1 0 -1/2 is sin(2 pi x).
        assert!(odd.eval(&pt(rat(1, 4))).unwrap().to_enclosure().contains(&rat(1, 1)));
    }

    #[test]
    fn t2g_orbit_values_exact() {
        let t = Theta::new(ThetaSpec::tichy_fast());
        let g = T2G::build(&t, 3, 100).unwrap();
        let v = g.eval_orbit(1, &Rational::zero(), 96).unwrap();
        assert!(!v.to_enclosure().contains_zero());
        let th = t.enclosure_bits(120).unwrap();
        let at_theta = g.eval(&Fx::from_enclosure(&th, 96)).unwrap();
        assert!(at_theta.intersects(&v));
    }

    #[test]
    fn registry_names() {
        let t = Theta::new(ThetaSpec::golden());
        for n in ["zero", "cos1", "cosM:3", "sawtooth"] {
            assert_eq!(lookup(n, &t).unwrap().name(), n);
        }
        assert!(lookup("cosM:0", &t).is_err());
        assert!(lookup("nope", &t).is_err());
    }
}
