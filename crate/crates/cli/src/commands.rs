use std::fmt::Write;

use ergosum::arith::{parse_rational, rat, rat_to_string, Rational};
use ergosum::cf::{determinant_ok, verify_q12, Theta, ThetaSpec};
use ergosum::lab::{
    birkhoff_sum, koksma_check, lookup, lookup_fourier, prop1_experiment, prop2_experiment, scan_csv, theorem_a_scan,
};
use ergosum::orbit::{gaps_csv, orbit_discrepancy, sorted_orbit, sorted_orbit_discrepancy, three_gap_profile};
use ergosum::t1::{partial_variation, BumpSchedule, DEFAULT_N_MAX, DEGREE_CAP};
use ergosum::t2::{sum_bound_verify, trend, SegmentTree, DEFAULT_EXTRA_LEVELS, TREE_BUDGET};
use ergosum::{Enclosure, Verdict};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::args::{Command, Settings};
use crate::output::Output;

/// Default budget for Birkhoff sums and experiments (terms).
const SUM_BUDGET: u64 = 1_000_000;
/// Default depth cap for the `Q_{nu+1} ||Q_nu theta|| > 1/2` check.
const Q12_DEPTH: usize = 16;

type CmdResult = Result<Output, String>;

fn err(e: ergosum::Error) -> String {
    e.to_string()
}

pub fn theta_of(s: &Settings) -> Result<Theta, String> {
    let name = s.theta.as_deref().ok_or("missing --theta")?;
    if let Some(spec) = ThetaSpec::builtin(name) {
        return Ok(Theta::new(spec));
    }
    let text = std::fs::read_to_string(name).map_err(|e| {
        format!("`{name}` is neither a built-in spec ({}) nor a readable file: {e}", ThetaSpec::builtin_names().join(", "))
    })?;
    Ok(Theta::new(ThetaSpec::parse(&text).map_err(err)?))
}

fn rational(v: Option<&str>, what: &str, default: Rational) -> Result<Rational, String> {
    match v {
        None => Ok(default),
        Some(t) => parse_rational(t).ok_or_else(|| format!("--{what}: `{t}` is not a rational p/q")),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn q_u64(theta: &Theta, nu: usize) -> Result<u64, String> {
    theta.q_u64(nu as i64).map_err(err)?.ok_or_else(|| format!("Q_{nu} does not fit in 64 bits"))
}

/// `Q` from `--Q`, else `Q_nu` from `--nu`.
fn count(s: &Settings, theta: &Theta) -> Result<u64, String> {
    match (s.q, s.nu) {
        (Some(q), _) => Ok(q),
        (None, Some(nu)) => q_u64(theta, nu),
        (None, None) => Err("missing --Q (or --nu for Q = Q_nu)".into()),
    }
}

pub fn run(cmd: &Command, s: &Settings) -> CmdResult {
    let theta = theta_of(s)?;
    match cmd {
        Command::Cf(_) => cf(&theta, s),
        Command::Gaps(_) => gaps(&theta, s),
        Command::Disc(_) => disc(&theta, s),
        Command::T1Build(_) => t1_build(s),
        Command::T1Verify(_) => t1_verify(&theta, s),
        Command::T2Build(_) => t2_build(&theta, s),
        Command::T2Verify(_) => t2_verify(&theta, s),
        Command::Sum(_) => sum(&theta, s),
        Command::Koksma(_) => koksma(&theta, s),
        Command::Prop1(_) => prop1(&theta, s),
        Command::Prop2(_) => prop2(&theta, s),
        Command::Thma(_) => thma(&theta, s),
    }
}

fn cf(theta: &Theta, s: &Settings) -> CmdResult {
    let nu_max = s.nu.unwrap_or(10);
    let mut rows = Vec::new();
    let mut csv = String::from("nu,a,P,Q,quality_lo,quality_hi,q12\n");
    let mut verdict = Verdict::from_bool(determinant_ok(theta, nu_max).map_err(err)?);
    for nu in 0..=nu_max {
        let c = theta.convergent(nu as i64).map_err(err)?;
        let a = theta.a(nu).map_err(err)?;
        let quality = theta.quality_tight(nu).map_err(err)?.outward(ergosum::arith::REPORT_BITS);
        let q12 = verify_q12(theta, nu, Q12_DEPTH).map_err(err)?;
        verdict = verdict.and(q12.verdict);
        let _ = writeln!(
            csv,
            "{nu},{a},{},{},{},{},{}",
            c.p,
            c.q,
            rat_to_string(quality.lo()),
            rat_to_string(quality.hi()),
            to_json(&q12.verdict).as_str().expect("string"),
        );
        rows.push(json!({ "convergent": c, "a": a.to_string(), "quality": quality, "q12": q12 }));
    }
    let report = json!({ "label": theta.spec().label, "levels": rows });
    Ok(Output::json(verdict, report).with_csv(csv))
}

fn gaps(theta: &Theta, s: &Settings) -> CmdResult {
    let budget = s.budget_q.unwrap_or(SUM_BUDGET);
    let nus: Vec<usize> = match s.nu {
        Some(nu) => vec![nu],
        None => (1..=theta.last_nu_with_q_at_most(budget).map_err(err)?).collect(),
    };
    let mut profiles = Vec::new();
    let mut verdict = Verdict::Holds;
    for nu in nus {
        if nu == 0 {
            return Err("--nu must be at least 1 for the gap profile".into());
        }
        let orbit = sorted_orbit(theta, nu, budget).map_err(err)?;
        let p = three_gap_profile(theta, &orbit).map_err(err)?;
        let (q, prev) = (q_u64(theta, nu)?, q_u64(theta, nu - 1)?);
        verdict = verdict.and(Verdict::from_bool(p.count_short == q - prev && p.count_long == prev));
        profiles.push(p);
    }
    let csv = gaps_csv(&profiles);
    Ok(Output::json(verdict, to_json(&profiles)).with_csv(csv).csv_default())
}

fn disc(theta: &Theta, s: &Settings) -> CmdResult {
    let budget = s.budget_q.unwrap_or(SUM_BUDGET);
    let phi = rational(s.phi.as_deref(), "phi", Rational::zero())?;
    let q = count(s, theta)?;
    if q > budget {
        return Err(format!("budget exceeded: {q} points, budget is {budget}"));
    }
    // At Q = Q_nu with no shift the certified-sorted orbit avoids sorting.
    let at_level = s.q.is_none() && phi.is_zero();
    let d = match (at_level, s.nu) {
        (true, Some(nu)) => sorted_orbit_discrepancy(theta, &sorted_orbit(theta, nu, budget).map_err(err)?),
        _ => orbit_discrepancy(theta, &phi, q),
    }
    .map_err(err)?;
    let mut report = json!({ "Q": q, "phi": rat_to_string(&phi), "discrepancy": d });
    let mut verdict = Verdict::Holds;
    if s.q.is_none() {
        let v = Verdict::le(&d, &Enclosure::from_int(2));
        report["le_2"] = to_json(&v);
        verdict = v;
    }
    Ok(Output::json(verdict, report))
}

fn t1_build(s: &Settings) -> CmdResult {
    let n_max = s.n_max.unwrap_or(DEFAULT_N_MAX);
    let sched = BumpSchedule::build(n_max).map_err(err)?;
    let invariants = Verdict::from_bool(sched.check_invariants().is_ok());
    let l1 = Verdict::all(sched.levels.iter().map(|l| Verdict::from_bool(l.l1_error <= rat(1, l.n as i64))));
    let pv = partial_variation(20);
    let pv_ok = Verdict::from_bool(pv > rat(10, 1));
    let report = json!({
        "schedule": sched.to_json(),
        "invariants": invariants,
        "l1_error_le_1_over_n": l1,
        "partial_variation_20": rat_to_string(&pv),
        "partial_variation_20_gt_10": pv_ok,
    });
    Ok(Output::json(Verdict::all([invariants, l1, pv_ok]), report))
}

fn t1_verify(theta: &Theta, s: &Settings) -> CmdResult {
    let sched = BumpSchedule::build(s.n_max.unwrap_or(DEFAULT_N_MAX)).map_err(err)?;
    let phi = rational(s.phi.as_deref(), "phi", Rational::zero())?;
    let nus = match s.nu {
        Some(nu) => vec![nu],
        None => sched.resolvable_nus(theta, 2, 64).map_err(err)?,
    };
    if nus.is_empty() {
        return Err("no resolvable nu".into());
    }
    let mut reports = Vec::new();
    let mut verdict = Verdict::Holds;
    for nu in nus {
        let r = sched.decomposition_verify(theta, nu, &phi, DEGREE_CAP).map_err(err)?;
        verdict = verdict.and(r.verdict());
        reports.push(r);
    }
    Ok(Output::json(verdict, to_json(&reports)))
}

fn t2_build(theta: &Theta, s: &Settings) -> CmdResult {
    let nu = s.nu.unwrap_or(5);
    let tree = SegmentTree::build(theta, nu, s.budget_q.unwrap_or(TREE_BUDGET)).map_err(err)?;
    let invariants = tree.check_invariants();
    let verdict = Verdict::from_bool(invariants.is_ok());
    let mut csv = String::from("k,left_k,left_m,right_k,right_m,f_left,f_right,kind,side\n");
    let (mut jumps, mut constants) = (0usize, 0usize);
    for seg in tree.segments() {
        let kind = to_json(&seg.kind);
        let side = seg.side.map(|x| to_json(&x).as_str().expect("string").to_string()).unwrap_or_default();
        match seg.kind {
            ergosum::t2::Kind::Jump => jumps += 1,
            ergosum::t2::Kind::Constant => constants += 1,
        }
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            seg.k,
            seg.left_point.k,
            seg.left_point.m,
            seg.right_point.k,
            seg.right_point.m,
            rat_to_string(&seg.f_left),
            rat_to_string(&seg.f_right),
            kind.as_str().expect("string"),
            side,
        );
    }
    let report = json!({
        "nu": nu,
        "Q": tree.len(),
        "theta_rank": tree.theta_rank(),
        "jump_segments": jumps,
        "constant_segments": constants,
        "f_sum": rat_to_string(&tree.f_sum()),
        "invariants": verdict,
        "invariant_error": invariants.err().map(|e| e.to_string()),
    });
    Ok(Output::json(verdict, report).with_csv(csv))
}

fn t2_verify(theta: &Theta, s: &Settings) -> CmdResult {
    let nu = s.nu.unwrap_or(5);
    let budget = s.budget_q.unwrap_or(TREE_BUDGET);
    let r = sum_bound_verify(theta, nu, DEFAULT_EXTRA_LEVELS, budget).map_err(err)?;
    let mut report = to_json(&r);
    report["deviation"] = to_json(&r.deviation());
    // Informational: the bound is not claimed to shrink monotonically.
    if nu >= 4 {
        let shallow = sum_bound_verify(theta, nu - 2, DEFAULT_EXTRA_LEVELS, budget).map_err(err)?;
        report["trend"] = json!({
            "against_nu": nu - 2,
            "deviation_against": shallow.deviation(),
            "smaller": trend(&shallow, &r),
        });
    }
    Ok(Output::json(r.verdict(), report))
}

fn function_name(s: &Settings) -> &str {
    s.f.as_deref().unwrap_or("cos1")
}

fn sum(theta: &Theta, s: &Settings) -> CmdResult {
    let f = lookup(function_name(s), theta).map_err(err)?;
    let phi = rational(s.phi.as_deref(), "phi", Rational::zero())?;
    let q = count(s, theta)?;
    let mut r = birkhoff_sum(f.as_ref(), theta, &phi, q, s.budget_q.unwrap_or(SUM_BUDGET)).map_err(err)?;
    if s.no_timestamp {
        r = r.untimed();
    }
    Ok(Output::json(Verdict::Holds, to_json(&r)))
}

fn koksma(theta: &Theta, s: &Settings) -> CmdResult {
    let f = lookup(function_name(s), theta).map_err(err)?;
    let phi = rational(s.phi.as_deref(), "phi", Rational::zero())?;
    let q = count(s, theta)?;
    let r = koksma_check(f.as_ref(), theta, &phi, q, s.budget_q.unwrap_or(SUM_BUDGET)).map_err(err)?;
    Ok(Output::json(r.check.verdict, to_json(&r)))
}

fn prop1(theta: &Theta, s: &Settings) -> CmdResult {
    let f = lookup(function_name(s), theta).map_err(err)?;
    let tol = rational(s.tol.as_deref(), "tol", rat(1, 10))?;
    let r = prop1_experiment(f.as_ref(), theta, s.nu.unwrap_or(60), &tol, s.budget_q.unwrap_or(SUM_BUDGET))
        .map_err(err)?;
    Ok(Output::json(r.outcome.verdict(), to_json(&r)))
}

fn prop2(theta: &Theta, s: &Settings) -> CmdResult {
    let f = lookup(function_name(s), theta).map_err(err)?;
    let eps = rational(s.tol.as_deref(), "tol", rat(1, 20))?;
    let r = prop2_experiment(f.as_ref(), theta, s.nu.unwrap_or(60), &eps, s.budget_q.unwrap_or(SUM_BUDGET))
        .map_err(err)?;
    Ok(Output::json(r.outcome.verdict(), to_json(&r)))
}

fn thma(theta: &Theta, s: &Settings) -> CmdResult {
    let name = function_name(s);
    let p = lookup_fourier(name).map_err(err)?;
    let scan = theorem_a_scan(name, &p, theta, 1..=s.nu.unwrap_or(12), s.grid.unwrap_or(1024)).map_err(err)?;
    let verdict = Verdict::all(scan.rows.iter().map(|r| r.verdict));
    let csv = scan_csv(&scan);
    Ok(Output::json(verdict, to_json(&scan)).with_csv(csv).csv_default())
}
