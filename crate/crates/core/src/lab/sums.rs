use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::function::PeriodicFunction;
use crate::arith::{frac_rat, int, rat, Enclosure, Fx, Rational, PI_HI, PI_LO};
use crate::cf::{Theta, DEFAULT_REFINEMENT_CAP};
use crate::error::{Error, Result};
use crate::orbit::{discrepancy_of, orbit_discrepancy};
use crate::report::{big_str, rat_str, Check, Verdict};
use crate::t1::window_count;
use crate::trigpoly::TrigPolynomial;

/// Points per rayon task.
const CHUNK: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumReport {
    pub function: String,
    /// Sum over `start <= k < end`.
    pub start: u64,
    pub end: u64,
    #[serde(with = "rat_str")]
    pub phi: Rational,
    pub sum: Enclosure,
    /// Working precision in bits.
    pub precision: u32,
    /// Terms taken from the function's exact orbit values.
    pub exact_terms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

fn bits(n: u64) -> u32 {
    64 - n.leading_zeros()
}

/// `sum_{k<q} f(k theta + phi)`.
pub fn birkhoff_sum(f: &dyn PeriodicFunction, theta: &Theta, phi: &Rational, q: u64, budget: u64) -> Result<SumReport> {
    birkhoff_sum_range(f, theta, phi, 0, q, budget)
}

/// `sum_{start<=k<end} f(k theta + phi)`, evaluated in parallel chunks and
/// added in index order.
pub fn birkhoff_sum_range(
    f: &dyn PeriodicFunction,
    theta: &Theta,
    phi: &Rational,
    start: u64,
    end: u64,
    budget: u64,
) -> Result<SumReport> {
    if end < start {
        return Err(Error::Precondition(format!("range {start}..{end} is reversed")));
    }
    if end - start > budget {
        return Err(Error::budget("Birkhoff sum", end - start, budget));
    }
    let t0 = Instant::now();
    let run = run_sums(f, theta, phi, &[start, end])?;
    Ok(SumReport {
        function: f.name(),
        start,
        end,
        phi: phi.clone(),
        sum: run.sums[0].to_enclosure(),
        precision: run.prec,
        exact_terms: run.exact_terms,
        elapsed_ms: Some(t0.elapsed().as_millis() as u64),
    })
}

/// `sum_{k<c} f(k theta + phi)` for each checkpoint `c`, in one pass.
pub fn birkhoff_prefix_sums(
    f: &dyn PeriodicFunction,
    theta: &Theta,
    phi: &Rational,
    checkpoints: &[u64],
    budget: u64,
) -> Result<Vec<Enclosure>> {
    let mut cuts: Vec<u64> = std::iter::once(0).chain(checkpoints.iter().copied()).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let last = *cuts.last().expect("non-empty");
    if last > budget {
        return Err(Error::budget("Birkhoff sum", last, budget));
    }
    let run = run_sums(f, theta, phi, &cuts)?;
    let mut prefix = Vec::with_capacity(cuts.len());
    let mut acc = Fx::zero(run.prec);
    prefix.push(acc.to_enclosure());
    for s in &run.sums {
        acc.add_assign(s);
        prefix.push(acc.to_enclosure());
    }
    Ok(checkpoints.iter().map(|c| prefix[cuts.binary_search(c).expect("a cut")].clone()).collect())
}

struct RunSums {
    /// Sum over each `cuts[i]..cuts[i+1]`.
    sums: Vec<Fx>,
    prec: u32,
    exact_terms: u64,
}

fn run_sums(f: &dyn PeriodicFunction, theta: &Theta, phi: &Rational, cuts: &[u64]) -> Result<RunSums> {
    let end = *cuts.last().expect("non-empty");
    let prec = 96 + 2 * bits(end);
    // k * theta loses bits(k) bits.
    let wide = prec + bits(end) + 8;
    let th = theta.fx(wide)?;
    let ph = Fx::from_rational(&frac_rat(phi), wide);
    let mut tasks: Vec<(usize, u64, u64)> = Vec::new();
    for (i, w) in cuts.windows(2).enumerate() {
        let mut a = w[0];
        while a < w[1] {
            let b = (a + CHUNK).min(w[1]);
            tasks.push((i, a, b));
            a = b;
        }
    }
    let parts: Vec<Result<(Fx, u64)>> = tasks
        .par_iter()
        .map(|&(_, a, b)| {
            let mut acc = Fx::zero(prec);
            let mut exact = 0u64;
            if let Some(vals) = f.eval_run(&th, &ph, a, b, prec) {
                for v in &vals {
                    acc.add_assign(&v.with_prec(prec));
                }
                return Ok((acc, 0));
            }
            for k in a..b {
                let v = match f.eval_orbit(k, phi, prec) {
                    Some(v) => {
                        exact += 1;
                        v
                    }
                    None => {
                        let x = th.mul_u64(k).add(&ph).reduce_mod1().with_prec(prec);
                        f.eval(&x).map_err(|e| Error::Evaluation { k, detail: e.to_string() })?
                    }
                };
                acc.add_assign(&v.with_prec(prec));
            }
            Ok((acc, exact))
        })
        .collect();
    let mut sums = vec![Fx::zero(prec); cuts.len().saturating_sub(1)];
    let mut exact_terms = 0;
    for (&(i, _, _), p) in tasks.iter().zip(parts) {
        let (s, e) = p?;
        sums[i].add_assign(&s);
        exact_terms += e;
    }
    Ok(RunSums { sums, prec, exact_terms })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KoksmaReport {
    pub function: String,
    pub points: u64,
    pub sum: Enclosure,
    #[serde(with = "rat_str")]
    pub mean: Rational,
    #[serde(with = "rat_str")]
    pub variation: Rational,
    /// `N D*_N` (unnormalized star discrepancy).
    pub discrepancy: Enclosure,
    /// `|sum - N mean| <= Var[f] N D*_N`.
    pub check: Check,
}

fn koksma_inputs(f: &dyn PeriodicFunction) -> Result<(Rational, Rational)> {
    let var = f.variation().ok_or_else(|| Error::Precondition(format!("{} has no variation bound", f.name())))?;
    let mean = f.mean().ok_or_else(|| Error::Precondition(format!("{} has no exact mean", f.name())))?;
    Ok((var, mean))
}

fn koksma_report(f: &dyn PeriodicFunction, n: u64, sum: Enclosure, disc: Enclosure) -> Result<KoksmaReport> {
    let (variation, mean) = koksma_inputs(f)?;
    let dev = sum.add_rat(&-(&mean * int(n)));
    let check = Check::abs_le(dev, disc.scale(&variation));
    Ok(KoksmaReport { function: f.name(), points: n, sum, mean, variation, discrepancy: disc, check })
}

/// Koksma's inequality on the first `q` orbit points.
pub fn koksma_check(f: &dyn PeriodicFunction, theta: &Theta, phi: &Rational, q: u64, budget: u64) -> Result<KoksmaReport> {
    koksma_inputs(f)?;
    let sum = birkhoff_sum(f, theta, phi, q, budget)?.sum;
    let disc = orbit_discrepancy(theta, phi, q)?;
    koksma_report(f, q, sum, disc)
}

/// Koksma's inequality on arbitrary points of `[0, 1)`.
pub fn koksma_check_points(f: &dyn PeriodicFunction, points: &[Enclosure], prec: u32) -> Result<KoksmaReport> {
    koksma_inputs(f)?;
    let mut sum = Fx::zero(prec);
    for (k, p) in points.iter().enumerate() {
        let v = f
            .eval(&Fx::from_enclosure(p, prec))
            .map_err(|e| Error::Evaluation { k: k as u64, detail: e.to_string() })?;
        sum.add_assign(&v);
    }
    koksma_report(f, points.len() as u64, sum.to_enclosure(), discrepancy_of(points))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowReport {
    pub l: usize,
    #[serde(with = "big_str")]
    pub q_l: BigInt,
    #[serde(with = "rat_str")]
    pub a: Rational,
    #[serde(with = "rat_str")]
    pub b: Rational,
    #[serde(with = "rat_str")]
    pub phi: Rational,
    /// `#{k < Q_l : {k theta + phi} in [a, b)}`, exact.
    #[serde(with = "big_str")]
    pub count: BigInt,
    pub at_most_two: Verdict,
}

/// Counts orbit points of `[a, b)` for `k < Q_l` under the hypothesis
/// `||Q_{l-1} theta|| > (b - a) / 2`, which is certified first.
pub fn window_count_bound(theta: &Theta, l: usize, a: &Rational, b: &Rational, phi: &Rational) -> Result<WindowReport> {
    if l == 0 {
        return Err(Error::Precondition("l must be at least 1".into()));
    }
    if a > b || b - a >= int(1) {
        return Err(Error::Precondition(format!("window [{a}, {b}) must satisfy a <= b < a + 1")));
    }
    let half = (b - a) * rat(1, 2);
    let mut certified = false;
    for depth in 6..6 + DEFAULT_REFINEMENT_CAP {
        match Verdict::gt_rat(&theta.quality(l - 1, depth)?, &half) {
            Verdict::Holds => {
                certified = true;
                break;
            }
            Verdict::Violated => break,
            Verdict::Undecided => continue,
        }
    }
    if !certified {
        return Err(Error::Precondition(format!("||Q_{} theta|| > |I|/2 not certified for |I| = {}", l - 1, b - a)));
    }
    let q_l = theta.q(l as i64)?;
    let count = window_count(theta, phi, a, b, &q_l)?;
    let at_most_two = Verdict::from_bool(count <= BigInt::from(2));
    Ok(WindowReport { l, q_l, a: a.clone(), b: b.clone(), phi: phi.clone(), count, at_most_two })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrigBoundReport {
    pub degree: usize,
    pub nu: usize,
    #[serde(with = "big_str")]
    pub q: BigInt,
    #[serde(with = "rat_str")]
    pub phi: Rational,
    pub m_norm: Enclosure,
    /// `|sum| <= (pi/2) M[p] ||Q theta|| / ||Q_nu theta||`.
    pub check: Check,
}

/// `(pi/2) M[p] ||Q theta|| / ||Q_nu theta||`.
pub fn trig_bound(p: &TrigPolynomial, theta: &Theta, nu: usize, q: &BigInt) -> Result<Enclosure> {
    let th = theta.enclosure_bits(2 * q.bits() as u32 + 128)?;
    let dist = Theta::dist_to_int(q, &th);
    let half_pi = Enclosure::new(rat(PI_LO.0, 2 * PI_LO.1), rat(PI_HI.0, 2 * PI_HI.1));
    let num = half_pi * p.m_norm(96) * dist;
    Ok(num.checked_div(&theta.quality_tight(nu)?).expect("quality is positive"))
}

/// Checks the trigonometric-sum bound; needs `deg p < Q_{nu+1}`.
pub fn trig_poly_sum_bound(p: &TrigPolynomial, theta: &Theta, nu: usize, q: &BigInt, phi: &Rational) -> Result<TrigBoundReport> {
    require_degree(p, theta, nu)?;
    let sum = p.orbit_sum(theta, phi, q, 64)?;
    let bound = trig_bound(p, theta, nu, q)?;
    Ok(TrigBoundReport {
        degree: p.degree(),
        nu,
        q: q.clone(),
        phi: phi.clone(),
        m_norm: p.m_norm(96),
        check: Check::abs_le(sum, bound),
    })
}

pub(crate) fn require_degree(p: &TrigPolynomial, theta: &Theta, nu: usize) -> Result<()> {
    let next = theta.q(nu as i64 + 1)?;
    if BigInt::from(p.degree()) >= next {
        return Err(Error::Precondition(format!("degree {} is not below Q_{} = {next}", p.degree(), nu + 1)));
    }
    Ok(())
}

/// Smallest `nu` with `deg p < Q_{nu+1}`.
pub(crate) fn least_nu_for_degree(p: &TrigPolynomial, theta: &Theta) -> Result<usize> {
    let mut nu = 0;
    while require_degree(p, theta, nu).is_err() {
        nu += 1;
        if nu > 4096 {
            return Err(Error::Precondition("degree too large for the quotient list".into()));
        }
    }
    Ok(nu)
}

impl SumReport {
    /// The same report without timing, for reproducible output.
    pub fn untimed(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    use crate::cf::ThetaSpec;
    use crate::lab::function::{Cosine, Fourier, Sawtooth, ZeroFn};

    fn golden() -> Theta {
        Theta::new(ThetaSpec::golden())
    }

    #[test]
    fn cosine_sum_matches_closed_form() {
        let t = golden();
        let phi = rat(1, 3);
        let direct = birkhoff_sum(&Cosine { m: 1 }, &t, &phi, 1000, 1 << 20).unwrap();
        let closed = TrigPolynomial::cosine(1, rat(1, 1)).orbit_sum(&t, &phi, &BigInt::from(1000), 64).unwrap();
        assert!(direct.sum.intersects(&closed));
        assert!(direct.sum.width() < rat(1, 1 << 40));
    }

    #[test]
    fn prefix_sums_match_direct() {
        let t = golden();
        let f = Cosine { m: 2 };
        let z = Rational::zero();
        let p = birkhoff_prefix_sums(&f, &t, &z, &[10, 3, 4096 + 7], 1 << 20).unwrap();
        for (c, e) in [10u64, 3, 4096 + 7].iter().zip(&p) {
            assert!(e.intersects(&birkhoff_sum(&f, &t, &z, *c, 1 << 20).unwrap().sum));
        }
    }

    #[test]
    fn fast_runs_agree_with_pointwise() {
        let t = golden();
        let th = t.fx(200).unwrap();
        let ph = Fx::from_rational(&rat(2, 7), 200);
        let f = Fourier { label: "p".into(), poly: TrigPolynomial::parse("1 1/2 1/3\n3 -1/5 0").unwrap() };
        let run = f.eval_run(&th, &ph, 1000, 1100, 128).unwrap();
        for (i, v) in run.iter().enumerate() {
            let x = th.mul_u64(1000 + i as u64).add(&ph).reduce_mod1().with_prec(128);
            let p = f.eval(&x).unwrap();
            assert!(v.intersects(&p));
            assert!(v.to_enclosure().width() < rat(1, 1 << 60));
        }
    }

    #[test]
    fn ranges_add_up() {
        let t = golden();
        let f = Sawtooth { eta: rat(1, 10) };
        let z = Rational::zero();
        let all = birkhoff_sum(&f, &t, &z, 5000, 1 << 20).unwrap().sum;
        let a = birkhoff_sum_range(&f, &t, &z, 0, 1234, 1 << 20).unwrap().sum;
        let b = birkhoff_sum_range(&f, &t, &z, 1234, 5000, 1 << 20).unwrap().sum;
        assert!(all.intersects(&(a + b)));
        assert!(birkhoff_sum(&f, &t, &z, 5000, 100).is_err());
    }

    #[test]
    fn koksma_holds_for_sawtooth() {
        let r = koksma_check(&Sawtooth { eta: rat(1, 10) }, &golden(), &rat(1, 7), 2000, 1 << 20).unwrap();
        assert_eq!(r.check.verdict, Verdict::Holds);
        let z = koksma_check(&ZeroFn, &golden(), &rat(0, 1), 10, 100).unwrap();
        assert!(z.check.value.is_point());
    }

    #[test]
    fn window_lemma() {
        let t = golden();
        // ||Q_4 theta|| ~ 0.0902 for golden; a window of width 1/6 qualifies.
        let r = window_count_bound(&t, 5, &rat(1, 10), &rat(4, 15), &rat(0, 1)).unwrap();
        assert_eq!(r.at_most_two, Verdict::Holds);
        assert!(window_count_bound(&t, 5, &rat(0, 1), &rat(1, 2), &rat(0, 1)).is_err());
    }

    #[test]
    fn trig_lemma() {
        let t = golden();
        let p = TrigPolynomial::cosine(3, rat(1, 2));
        let r = trig_poly_sum_bound(&p, &t, 4, &BigInt::from(21), &rat(2, 9)).unwrap();
        assert_eq!(r.check.verdict, Verdict::Holds);
        assert!(trig_poly_sum_bound(&p, &t, 1, &BigInt::from(21), &rat(2, 9)).is_err());
    }
}
