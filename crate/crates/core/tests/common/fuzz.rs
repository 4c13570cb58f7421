//! Randomized (f, theta, Q, phi) cases for the soundness checks, paired
//! with their MPFR twins.

use std::sync::Arc;

use ergosum::cf::{Theta, ThetaSpec};
use ergosum::lab::{birkhoff_sum, koksma_check, Cosine, Fourier, PeriodicFunction, Sawtooth, ZeroFn};
use ergosum::trigpoly::TrigPolynomial;
use ergosum::{Enclosure, Rational, Verdict};
use num_bigint::BigInt;
use rand::Rng;
use rug::Float;

use super::{direct_sum, meets, sum_error, theta as oracle_theta, OracleFn, PREC};

pub const SPECS: [&str; 4] = ["GOLDEN", "SQRT2", "TICHY-SLOW", "TICHY-FAST"];

pub struct Case {
    pub f: Arc<dyn PeriodicFunction>,
    pub oracle: OracleFn,
    pub spec: &'static str,
    pub q: u64,
    pub phi: (i64, i64),
}

impl std::fmt::Debug for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} Q={} phi={}/{}", self.f.name(), self.spec, self.q, self.phi.0, self.phi.1)
    }
}

fn small_rat<R: Rng>(rng: &mut R) -> (i64, i64) {
    (rng.gen_range(-5..=5), rng.gen_range(1..=8))
}

pub fn random_case<R: Rng>(rng: &mut R, q_max: u64) -> Case {
    let (f, oracle): (Arc<dyn PeriodicFunction>, OracleFn) = match rng.gen_range(0..5) {
        0 => (Arc::new(ZeroFn), OracleFn::Zero),
        1 => (Arc::new(Cosine { m: 1 }), OracleFn::Cos(1)),
        2 => {
            let m = rng.gen_range(2..=7);
            (Arc::new(Cosine { m }), OracleFn::Cos(m))
        }
        3 => {
            let (n, d) = [(1, 10), (1, 3), (1, 2), (7, 8)][rng.gen_range(0..4)];
            (
                Arc::new(Sawtooth { eta: Rational::new(n.into(), d.into()) }),
                OracleFn::Saw { eta_num: n as u64, eta_den: d as u64 },
            )
        }
        _ => {
            let deg = rng.gen_range(1..=4);
            let c: Vec<((i64, i64), (i64, i64))> = (0..deg).map(|_| (small_rat(rng), small_rat(rng))).collect();
            let r = |(n, d): (i64, i64)| Enclosure::point(Rational::new(BigInt::from(n), BigInt::from(d)));
            let poly = TrigPolynomial::new(c.iter().map(|&(a, b)| (r(a), r(b))).collect());
            (Arc::new(Fourier { label: "file:fuzz".into(), poly }), OracleFn::Fourier(c))
        }
    };
    // log-uniform Q in [1, q_max]
    let q = (rng.gen_range(0.0..(q_max as f64).ln()).exp() as u64).clamp(1, q_max);
    let den = rng.gen_range(1..=1000);
    Case { f, oracle, spec: SPECS[rng.gen_range(0..4)], q, phi: (rng.gen_range(0..den), den) }
}

pub struct Outcome {
    pub contains_oracle: bool,
    /// `None` when the function has no variation bound.
    pub koksma: Option<Verdict>,
}

pub fn run_case(c: &Case, thetas: &[(&'static str, Theta, Float)]) -> Outcome {
    let (_, theta, th) = thetas.iter().find(|t| t.0 == c.spec).expect("spec");
    let phi = Rational::new(c.phi.0.into(), c.phi.1.into());
    let sum = birkhoff_sum(c.f.as_ref(), theta, &phi, c.q, 1 << 20).expect("sum").sum;
    let ph = Float::with_val(PREC, c.phi.0) / c.phi.1;
    let want = direct_sum(&c.oracle, th, &ph, 0, c.q);
    // The oracle is only known to within its error ball; an enclosure that
    // misses the ball is certainly wrong.
    let contains_oracle = meets(&sum, &want, &sum_error(c.q));
    let koksma = c.f.variation().map(|_| koksma_check(c.f.as_ref(), theta, &phi, c.q, 1 << 20).expect("koksma").check.verdict);
    Outcome { contains_oracle, koksma }
}

pub fn thetas() -> Vec<(&'static str, Theta, Float)> {
    SPECS.iter().map(|&s| (s, Theta::new(ThetaSpec::builtin(s).unwrap()), oracle_theta(s))).collect()
}
