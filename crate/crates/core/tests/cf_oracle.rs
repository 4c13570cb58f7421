mod common;

use ergosum::cf::{verify_q12, Theta, ThetaSpec};
use ergosum::Verdict;
use num_bigint::BigInt;
use rug::Float;

use common::{denominators, from_rational, meets, quotients, theta as oracle_theta, to_rational, ulp, PREC};

const SPECS: [&str; 4] = ["GOLDEN", "SQRT2", "TICHY-SLOW", "TICHY-FAST"];

fn theta(label: &str) -> Theta {
    Theta::new(ThetaSpec::builtin(label).unwrap())
}

fn big(x: &rug::Integer) -> BigInt {
    x.to_string().parse().unwrap()
}

#[test]
fn quotients_and_denominators_match_recurrence_oracle() {
    for label in SPECS {
        let n = if label == "TICHY-FAST" { 9 } else { 20 };
        let t = theta(label);
        for (i, a) in quotients(label, n).iter().enumerate() {
            assert_eq!(t.a(i + 1).unwrap(), big(a), "{label} a_{}", i + 1);
        }
        for (i, q) in denominators(label, n).iter().enumerate() {
            assert_eq!(t.q(i as i64).unwrap(), big(q), "{label} Q_{i}");
        }
    }
}

#[test]
fn tichy_fast_frozen_values() {
    let t = theta("TICHY-FAST");
    let q: Vec<BigInt> = (3..=5).map(|i| t.q(i).unwrap()).collect();
    assert_eq!(q, [5, 62, 6205].map(BigInt::from));
    assert_eq!(t.a(6).unwrap(), BigInt::from(19220));
}

#[test]
fn theta_enclosures_contain_oracle() {
    for label in SPECS {
        let t = theta(label);
        let x = oracle_theta(label);
        for nu in 1..8 {
            let e = t.enclosure_at(nu).unwrap();
            assert!(e.contains(&to_rational(&x)), "{label} nu = {nu}");
        }
        for bits in [64, 200, 400, 640] {
            let e = t.enclosure_bits(bits).unwrap();
            assert!(meets(&e, &x, &ulp(PREC - 4)), "{label} {bits} bits");
            assert!(from_rational(&e.width()) <= ulp(bits));
        }
    }
}

#[test]
fn quality_contains_oracle_distance() {
    for label in SPECS {
        let t = theta(label);
        let th = oracle_theta(label);
        let top = if label == "TICHY-FAST" { 6 } else { 15 };
        let qs = denominators(label, top + 1);
        // nu >= 1: ||Q_0 theta|| = 1 - theta is not |Q_0 theta - P_0| here
        for nu in 1..top {
            // beyond this the oracle cannot resolve ||Q_nu theta|| ~ 1/Q_{nu+1}
            if qs[nu].significant_bits() + qs[nu + 1].significant_bits() > PREC - 64 {
                break;
            }
            let x = Float::with_val(PREC, &th * &qs[nu]);
            let r = Float::with_val(PREC, x.clone().round());
            let d = Float::with_val(PREC, x - r).abs();
            for depth in [1, 3, 6] {
                let e = t.quality(nu, depth).unwrap();
                // theta carries relative error 2^-PREC, scaled by Q_nu
                let err = ulp(PREC - 4 - qs[nu].significant_bits());
                assert!(meets(&e, &d, &err), "{label} nu = {nu} depth = {depth}");
            }
        }
    }
}

#[test]
fn golden_quality_nu4() {
    let e = theta("GOLDEN").quality(4, 40).unwrap();
    let (lo, hi) = e.to_f64_pair();
    assert!(lo > 0.0901699437 && hi < 0.0901699438, "{lo} {hi}");
}

#[test]
fn alpha_tails_contain_oracle() {
    // alpha_{nu+1} = ||Q_{nu-1} theta|| / ||Q_nu theta||
    for label in ["GOLDEN", "SQRT2", "TICHY-SLOW"] {
        let t = theta(label);
        let th = oracle_theta(label);
        let qs = denominators(label, 12);
        let dist = |q: &rug::Integer| {
            let x = Float::with_val(PREC, &th * q);
            let r = x.clone().round();
            Float::with_val(PREC, x - r).abs()
        };
        for nu in 2..11 {
            let a = Float::with_val(PREC, dist(&qs[nu - 1]) / dist(&qs[nu]));
            let e = t.alpha(nu, 8).unwrap();
            // relative error Q_nu Q_{nu+1} 2^-PREC on a ratio of size ~a_{nu+1}
            let b = qs[nu].significant_bits() + qs[nu + 1].significant_bits() * 2;
            assert!(meets(&e, &a, &ulp(PREC - 8 - b)), "{label} nu = {nu}");
        }
    }
    let golden = theta("GOLDEN").alpha(3, 30).unwrap();
    let phi = (Float::with_val(PREC, 5).sqrt() + 1u32) / 2u32;
    assert!(golden.contains(&to_rational(&phi)));
    assert!(from_rational(golden.hi()) - from_rational(golden.lo()) < 1e-10);
}

#[test]
fn q12_certified_up_to_twenty() {
    for label in SPECS {
        let t = theta(label);
        for nu in 0..=20 {
            let o = verify_q12(&t, nu, 16).unwrap();
            assert_eq!(o.verdict, Verdict::Holds, "{label} nu = {nu}");
            assert!(o.depth <= 16);
        }
    }
}

#[test]
fn spec_text_round_trip() {
    for label in SPECS {
        let s = ThetaSpec::builtin(label).unwrap();
        assert_eq!(ThetaSpec::parse(&s.to_text()).unwrap(), s);
    }
    let exhausted = Theta::new(ThetaSpec::parse("label=FIN\na0=0\nhead=1,2\n").unwrap());
    assert!(exhausted.a(3).is_err());
}
