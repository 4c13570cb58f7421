use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::function::PeriodicFunction;
use super::sums::{birkhoff_prefix_sums, birkhoff_sum, birkhoff_sum_range, least_nu_for_degree, trig_bound};
use super::ModulusBound;
use crate::arith::{int, rat, rat_to_string, Enclosure, Rational};
use crate::cf::{condition_oo1o_trace, Theta};
use crate::error::{Error, Result};
use crate::report::{big_str, rat_str, Check, Verdict};
use crate::trigpoly::TrigPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// A pair was found and every check holds.
    Certified,
    /// A pair was found but some check is undecided.
    Undecided,
    /// A pair was found and some check is certainly false.
    Violated,
    /// No qualifying pair within the explored range.
    Inconclusive,
}

impl Outcome {
    fn of(v: Verdict) -> Self {
        match v {
            Verdict::Holds => Outcome::Certified,
            Verdict::Undecided => Outcome::Undecided,
            Verdict::Violated => Outcome::Violated,
        }
    }

    pub fn verdict(self) -> Verdict {
        match self {
            Outcome::Certified => Verdict::Holds,
            Outcome::Violated => Verdict::Violated,
            Outcome::Undecided | Outcome::Inconclusive => Verdict::Undecided,
        }
    }
}

/// A subsequence sum at one convergent denominator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSum {
    pub nu: usize,
    pub q: u64,
    pub sum: Enclosure,
}

/// Densest window of width `w` over the sum midpoints; ties go to the
/// window holding the smallest `nu`. Returns the chosen `nu` (ascending)
/// and the window centre.
pub fn densest_window(sums: &[LevelSum], w: &Rational) -> (Vec<usize>, Rational) {
    if sums.is_empty() {
        return (Vec::new(), Rational::zero());
    }
    let mut mids: Vec<(Rational, usize)> = sums.iter().map(|s| (s.sum.mid(), s.nu)).collect();
    mids.sort();
    let mut best: Option<(usize, usize, usize)> = None; // (count, min nu, start)
    let mut j = 0;
    for i in 0..mids.len() {
        j = j.max(i);
        while j + 1 < mids.len() && &mids[j + 1].0 - &mids[i].0 <= *w {
            j += 1;
        }
        let count = j - i + 1;
        let min_nu = mids[i..=j].iter().map(|m| m.1).min().expect("non-empty");
        let better = match best {
            None => true,
            Some((c, n, _)) => count > c || (count == c && min_nu < n),
        };
        if better {
            best = Some((count, min_nu, i));
        }
    }
    let (count, _, i) = best.expect("non-empty");
    let window = &mids[i..i + count];
    let centre = (&window[0].0 + &window[count - 1].0) * rat(1, 2);
    let mut nus: Vec<usize> = window.iter().map(|m| m.1).collect();
    nus.sort_unstable();
    (nus, centre)
}

/// Largest `nu` with `Q_nu + extra <= budget`.
fn nu_top(theta: &Theta, nu_max: usize, budget: u64, extra: u64) -> Result<usize> {
    let mut top = 0;
    for nu in 0..=nu_max {
        match theta.q_u64(nu as i64)? {
            Some(q) if q.saturating_add(extra) <= budget => top = nu,
            _ => break,
        }
    }
    Ok(top)
}

fn q_of(theta: &Theta, nu: usize) -> Result<u64> {
    Ok(theta.q_u64(nu as i64)?.expect("checked against the budget"))
}

/// `sum_{k < Q_nu + extra} f(k theta)` for `nu = 0..=top`, in one pass.
fn level_sums(f: &dyn PeriodicFunction, theta: &Theta, top: usize, extra: u64, budget: u64) -> Result<Vec<LevelSum>> {
    let qs: Vec<u64> = (0..=top).map(|nu| q_of(theta, nu)).collect::<Result<_>>()?;
    let cps: Vec<u64> = qs.iter().map(|q| q + extra).collect();
    let sums = birkhoff_prefix_sums(f, theta, &Rational::zero(), &cps, budget)?;
    Ok(qs.into_iter().zip(sums).enumerate().map(|(nu, (q, sum))| LevelSum { nu, q, sum }).collect())
}

fn require_modulus(f: &dyn PeriodicFunction) -> Result<ModulusBound> {
    f.modulus().ok_or_else(|| Error::Precondition(format!("{} has no modulus of continuity bound", f.name())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop1Pair {
    pub nu_m: usize,
    pub nu_n: usize,
    /// `Q(m) = Q_{nu_n} - Q_{nu_m}`.
    pub q_m: u64,
    /// `|S_{nu_n} - S_{nu_m}|`.
    pub cluster_gap: Enclosure,
    /// `Q_{nu_m} (omega(||Q_{nu_n} theta||) + omega(||Q_{nu_m} theta||))`.
    pub shift_bound: Enclosure,
    /// `|sum_{k<Q(m)} f(k theta)| <= cluster_gap + shift_bound`.
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop1Report {
    pub function: String,
    #[serde(with = "rat_str")]
    pub tol: Rational,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// `Q_nu omega(||Q_nu theta||)` per explored `nu`.
    pub trace: Vec<Enclosure>,
    /// `S_nu = sum_{k<Q_nu} f(k theta)`.
    pub sums: Vec<LevelSum>,
    #[serde(with = "rat_str")]
    pub gamma: Rational,
    pub cluster: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<Prop1Pair>,
}

/// The subsequence argument with `phi = 0`: cluster `S_nu`, take a pair
/// `nu_m < nu_n` from the cluster with `2 Q_{nu_m} omega(||Q_{nu_m} theta||) < tol`
/// minimising the certified bound, and sum directly up to `Q(m)`.
pub fn prop1_experiment(f: &dyn PeriodicFunction, theta: &Theta, nu_max: usize, tol: &Rational, budget: u64) -> Result<Prop1Report> {
    let modulus = require_modulus(f)?;
    let top = nu_top(theta, nu_max, budget, 0)?;
    let trace = condition_oo1o_trace(theta, &modulus, 0..=top)?;
    let mut report = Prop1Report {
        function: f.name(),
        tol: tol.clone(),
        outcome: Outcome::Inconclusive,
        reason: None,
        trace: trace.clone(),
        sums: Vec::new(),
        gamma: Rational::zero(),
        cluster: Vec::new(),
        pair: None,
    };
    let small = |nu: usize| trace[nu].hi() * int(2) < *tol;
    if !(0..=top).any(small) {
        report.reason = Some(format!("2 Q_nu omega(||Q_nu theta||) stays above {} for nu <= {top}", rat_to_string(tol)));
        return Ok(report);
    }
    report.sums = level_sums(f, theta, top, 0, budget)?;
    let (cluster, gamma) = densest_window(&report.sums, tol);
    report.gamma = gamma;
    report.cluster = cluster.clone();

    let mut best: Option<(Rational, usize, usize, Enclosure, Enclosure)> = None;
    for (i, &m) in cluster.iter().enumerate() {
        if !small(m) {
            continue;
        }
        let qm = q_of(theta, m)?;
        let om = modulus.eval(&theta.quality_tight(m)?);
        for &n in &cluster[i + 1..] {
            if q_of(theta, n)? <= qm {
                continue;
            }
            let gap = (&report.sums[n].sum - &report.sums[m].sum).abs();
            let shift = (modulus.eval(&theta.quality_tight(n)?) + om.clone()).scale(&int(qm));
            let hi = gap.hi() + shift.hi();
            if best.as_ref().is_none_or(|b| hi < b.0) {
                best = Some((hi, m, n, gap, shift));
            }
        }
    }
    let Some((_, m, n, gap, shift)) = best else {
        report.reason = Some("no cluster pair with a qualifying nu_m".into());
        return Ok(report);
    };
    let q_m = q_of(theta, n)? - q_of(theta, m)?;
    let direct = birkhoff_sum(f, theta, &Rational::zero(), q_m, budget)?.sum;
    let check = Check::abs_le(direct, &gap + &shift);
    report.outcome = Outcome::of(check.verdict);
    report.pair = Some(Prop1Pair { nu_m: m, nu_n: n, q_m, cluster_gap: gap, shift_bound: shift, check });
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop2Checks {
    /// `|T_{nu_m} - gamma| < eps`.
    pub near_gamma_m: Check,
    /// `||Q_{nu_n} theta|| < delta`.
    pub small_shift: Check,
    /// `|T_{nu_n} - gamma| < eps`.
    pub near_gamma_n: Check,
    /// `|sum_{k=0}^{Q_{nu_m}} f(k theta - Q_{nu_n} theta) - T_{nu_m}| <= 2 eps`.
    pub shift_sum: Check,
    /// `|sum_{k<Q(m)} f(k theta)| < 4 eps`.
    #[serde(rename = "final")]
    pub final_sum: Check,
}

impl Prop2Checks {
    pub fn verdict(&self) -> Verdict {
        Verdict::all([
            self.near_gamma_m.verdict,
            self.small_shift.verdict,
            self.near_gamma_n.verdict,
            self.shift_sum.verdict,
            self.final_sum.verdict,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop2Report {
    pub function: String,
    #[serde(with = "rat_str")]
    pub epsilon: Rational,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// `T_nu = sum_{k=0}^{Q_nu} f(k theta)` (upper index included).
    pub sums: Vec<LevelSum>,
    #[serde(with = "rat_str")]
    pub gamma: Rational,
    pub cluster: Vec<usize>,
    pub nu_m: Option<usize>,
    pub nu_n: Option<usize>,
    pub q_m: Option<u64>,
    /// `delta = eps / (c Q_{nu_m})` for a Lipschitz constant `c`.
    #[serde(with = "opt_rat")]
    pub delta: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Prop2Checks>,
}

mod opt_rat {
    use serde::Serializer;

    use crate::arith::{rat_to_string, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&rat_to_string(r)),
            None => s.serialize_none(),
        }
    }
}

/// The even-function argument: `T_{nu_m}` and `T_{nu_n}` near the cluster
/// centre, `||Q_{nu_n} theta|| < eps / (c Q_{nu_m})`, then
/// `|sum_{k<Q(m)} f(k theta)| < 4 eps` checked directly.
///
/// The shifted sum is computed as `sum_{k=Q(m)}^{Q_{nu_n}} f(k theta)`, which
/// equals `sum_{k=0}^{Q_{nu_m}} f(k theta - Q_{nu_n} theta)` for even `f`.
pub fn prop2_experiment(f: &dyn PeriodicFunction, theta: &Theta, nu_max: usize, eps: &Rational, budget: u64) -> Result<Prop2Report> {
    if !f.is_even() {
        return Err(Error::Precondition(format!("{} is not flagged even", f.name())));
    }
    if *eps <= Rational::zero() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    let modulus = require_modulus(f)?;
    let top = nu_top(theta, nu_max, budget, 1)?;
    let zero = Rational::zero();
    let sums = level_sums(f, theta, top, 1, budget)?;
    let (cluster, gamma) = densest_window(&sums, eps);
    let mut report = Prop2Report {
        function: f.name(),
        epsilon: eps.clone(),
        outcome: Outcome::Inconclusive,
        reason: None,
        sums,
        gamma: gamma.clone(),
        cluster: cluster.clone(),
        nu_m: None,
        nu_n: None,
        q_m: None,
        delta: None,
        checks: None,
    };
    let g = Enclosure::point(gamma);
    let e = Enclosure::point(eps.clone());
    let near = |nu: usize, sums: &[LevelSum]| Check::abs_lt(&sums[nu].sum - &g, e.clone());
    for (i, &m) in cluster.iter().enumerate() {
        let qm = q_of(theta, m)?;
        if !near(m, &report.sums).verdict.holds() {
            continue;
        }
        let delta = match &modulus {
            // Any shift keeps f unchanged.
            ModulusBound::Zero => int(1),
            ModulusBound::Lipschitz { c } => eps / (c * int(qm)),
        };
        for &n in &cluster[i + 1..] {
            let qn = q_of(theta, n)?;
            if qn <= qm {
                continue;
            }
            let small_shift = Check::lt(theta.quality_tight(n)?, Enclosure::point(delta.clone()));
            let near_n = near(n, &report.sums);
            if !small_shift.verdict.holds() || !near_n.verdict.holds() {
                continue;
            }
            let q_m = qn - qm;
            let shifted = birkhoff_sum_range(f, theta, &zero, q_m, qn + 1, budget)?.sum;
            let shift_sum = Check::abs_le(&shifted - &report.sums[m].sum, e.scale(&int(2)));
            let direct = birkhoff_sum(f, theta, &zero, q_m, budget)?.sum;
            let final_sum = Check::abs_lt(direct, e.scale(&int(4)));
            let checks = Prop2Checks { near_gamma_m: near(m, &report.sums), small_shift, near_gamma_n: near_n, shift_sum, final_sum };
            report.outcome = Outcome::of(checks.verdict());
            report.nu_m = Some(m);
            report.nu_n = Some(n);
            report.q_m = Some(q_m);
            report.delta = Some(delta);
            report.checks = Some(checks);
            return Ok(report);
        }
    }
    report.reason = Some(format!("no pair in the cluster with Q_nu + 1 <= {budget}"));
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub nu: usize,
    #[serde(with = "big_str")]
    pub q: BigInt,
    /// Grid point attaining the largest `|sum|`.
    #[serde(with = "rat_str")]
    pub phi: Rational,
    pub sum: Enclosure,
    /// The trigonometric-sum bound at `Q = Q_nu`.
    pub bound: Enclosure,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanTable {
    pub function: String,
    pub grid: u32,
    /// Grid maxima are lower bounds for the supremum over `phi`.
    pub grid_max_is_lower_bound: bool,
    pub rows: Vec<ScanRow>,
}

/// `max_phi |sum_{k<Q_nu} p(k theta + phi)|` over `phi = j / grid`, per `nu`.
pub fn theorem_a_scan(
    label: &str,
    p: &TrigPolynomial,
    theta: &Theta,
    nus: std::ops::RangeInclusive<usize>,
    grid: u32,
) -> Result<ScanTable> {
    if grid == 0 {
        return Err(Error::Precondition("grid size must be positive".into()));
    }
    let least = least_nu_for_degree(p, theta)?;
    let mut rows = Vec::new();
    for nu in nus {
        let q = theta.q(nu as i64)?;
        let factors = p.orbit_factors(theta, &q, 64)?;
        let mut best: Option<(Rational, Rational, Enclosure)> = None;
        for j in 0..grid {
            let phi = rat(j as i64, grid as i64);
            let s = p.orbit_sum_with(&factors, &phi);
            let m = s.mag();
            if best.as_ref().is_none_or(|b| m > b.0) {
                best = Some((m, phi, s));
            }
        }
        let (_, phi, sum) = best.expect("grid is non-empty");
        let bound = trig_bound(p, theta, least, &q)?;
        let verdict = Verdict::abs_le(&sum, &bound);
        rows.push(ScanRow { nu, q, phi, sum, bound, verdict });
    }
    Ok(ScanTable { function: label.to_string(), grid, grid_max_is_lower_bound: true, rows })
}

/// CSV with header `nu,Q,phi,sum_lo,sum_hi,bound,verdict`; `bound` is the
/// upper end of the bound enclosure.
pub fn scan_csv(scan: &ScanTable) -> String {
    let mut s = String::from("nu,Q,phi,sum_lo,sum_hi,bound,verdict\n");
    for r in &scan.rows {
        let sum = r.sum.outward(crate::arith::REPORT_BITS);
        let bound = r.bound.outward(crate::arith::REPORT_BITS);
        let v = serde_json::to_value(r.verdict).expect("verdict serializes");
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.nu,
            r.q,
            rat_to_string(&r.phi),
            rat_to_string(sum.lo()),
            rat_to_string(sum.hi()),
            rat_to_string(bound.hi()),
            v.as_str().expect("string"),
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::ThetaSpec;
    use crate::lab::function::{Cosine, Sawtooth, ZeroFn};

    fn sum(nu: usize, v: Rational) -> LevelSum {
        LevelSum { nu, q: 1, sum: Enclosure::point(v) }
    }

    #[test]
    fn densest_window_ties_to_small_nu() {
        let s = vec![sum(0, rat(0, 1)), sum(1, rat(5, 1)), sum(2, rat(1, 100)), sum(3, rat(501, 100))];
        let (c, g) = densest_window(&s, &rat(1, 10));
        assert_eq!(c, vec![0, 2]);
        assert_eq!(g, rat(1, 200));
    }

    #[test]
    fn prop1_golden_is_inconclusive() {
        let t = Theta::new(ThetaSpec::golden());
        let r = prop1_experiment(&Cosine { m: 1 }, &t, 30, &rat(1, 10), 1 << 20).unwrap();
        assert_eq!(r.outcome, Outcome::Inconclusive);
        assert!(r.sums.is_empty());
    }

    #[test]
    fn prop1_zero_is_trivial() {
        let t = Theta::new(ThetaSpec::tichy_slow());
        let r = prop1_experiment(&ZeroFn, &t, 6, &rat(1, 10), 1 << 20).unwrap();
        assert_eq!(r.outcome, Outcome::Certified);
        let p = r.pair.unwrap();
        assert!(p.check.value.is_point() && p.check.bound.is_point());
    }

    #[test]
    fn prop2_rejects_non_even() {
        let t = Theta::new(ThetaSpec::golden());
        assert!(prop2_experiment(&Sawtooth { eta: rat(1, 10) }, &t, 20, &rat(1, 20), 1000).is_err());
    }

    #[test]
    fn prop2_zero_passes() {
        let t = Theta::new(ThetaSpec::golden());
        let r = prop2_experiment(&ZeroFn, &t, 10, &rat(1, 20), 1000).unwrap();
        assert_eq!(r.outcome, Outcome::Certified);
    }

    #[test]
    fn scan_zero_and_csv_header() {
        let t = Theta::new(ThetaSpec::golden());
        let s = theorem_a_scan("zero", &TrigPolynomial::zero(), &t, 1..=3, 8).unwrap();
        assert!(s.rows.iter().all(|r| r.sum == Enclosure::zero()));
        assert!(scan_csv(&s).starts_with("nu,Q,phi,sum_lo,sum_hi,bound,verdict\n"));
    }
}
