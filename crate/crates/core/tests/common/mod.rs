//! Test oracles built on MPFR/GMP (`rug`). Nothing here calls into the
//! library's arithmetic; conversions go through decimal strings.
#![allow(dead_code)]

pub mod fejer;
pub mod fuzz;
pub mod t2sim;

use std::str::FromStr;

use ergosum::{Enclosure, Rational};
use num_bigint::BigInt;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};

/// About 210 significant digits.
pub const PREC: u32 = 700;

/// Partial quotients `a_1, a_2, ...` of a built-in spec, from the
/// defining rule.
pub struct Quotients {
    label: String,
    /// `Q_0, Q_1, ...` so far.
    q: Vec<Integer>,
}

impl Quotients {
    pub fn new(label: &str) -> Self {
        Quotients { label: label.to_string(), q: vec![Integer::from(1)] }
    }
}

impl Iterator for Quotients {
    type Item = Integer;
    fn next(&mut self) -> Option<Integer> {
        let i = self.q.len();
        let q = &self.q;
        let ai = match self.label.as_str() {
            "GOLDEN" => Integer::from(1),
            "SQRT2" => Integer::from(2),
            "TICHY-SLOW" | "TICHY-FAST" if i <= 2 => Integer::from(1),
            "TICHY-SLOW" => (Integer::from(i - 1) * &q[i - 2]).max(Integer::from(1)),
            "TICHY-FAST" => (Integer::from(i - 1) * q[i - 2].clone().pow(2u32)).max(Integer::from(1)),
            other => panic!("no oracle for {other}"),
        };
        let prev2 = if i >= 2 { q[i - 2].clone() } else { Integer::from(0) };
        let qi = Integer::from(&ai * &q[i - 1]) + prev2;
        self.q.push(qi);
        Some(ai)
    }
}

pub fn quotients(label: &str, n: usize) -> Vec<Integer> {
    Quotients::new(label).take(n).collect()
}

/// `Q_0..=Q_n`.
pub fn denominators(label: &str, n: usize) -> Vec<Integer> {
    let a = quotients(label, n);
    let mut q = vec![Integer::from(1)];
    let mut prev = Integer::from(0);
    for ai in a {
        let next = Integer::from(&ai * q.last().unwrap()) + &prev;
        prev = q.last().unwrap().clone();
        q.push(next);
    }
    q
}

/// `theta` to `PREC` bits: a convergent `P/Q` with `Q^2 > 2^(PREC+16)`.
pub fn theta(label: &str) -> Float {
    let (mut p0, mut q0) = (Integer::from(1), Integer::from(0));
    let (mut p1, mut q1) = (Integer::from(0), Integer::from(1));
    for a in Quotients::new(label) {
        let p2 = Integer::from(&a * &p1) + &p0;
        let q2 = Integer::from(&a * &q1) + &q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if q1.significant_bits() > PREC / 2 + 16 {
            break;
        }
    }
    Float::with_val(PREC, &p1) / Float::with_val(PREC, &q1)
}

pub fn frac(x: &Float) -> Float {
    let f = x.clone().floor();
    Float::with_val(PREC, x - f)
}

pub fn two_pi() -> Float {
    Float::with_val(PREC, Constant::Pi) * 2u32
}

/// Registered test functions, evaluated in MPFR.
#[derive(Clone, Debug)]
pub enum OracleFn {
    Zero,
    Cos(u64),
    /// Triangle wave with peak at `1 - eta`.
    Saw { eta_num: u64, eta_den: u64 },
    /// `2 sum_m (re_m cos 2 pi m x - im_m sin 2 pi m x)`, coefficients
    /// as `(num, den)` pairs.
    Fourier(Vec<((i64, i64), (i64, i64))>),
}

impl OracleFn {
    pub fn eval(&self, x: &Float) -> Float {
        let y = frac(x);
        match self {
            OracleFn::Zero => Float::with_val(PREC, 0),
            OracleFn::Cos(m) => (two_pi() * *m * y).cos(),
            OracleFn::Saw { eta_num, eta_den } => {
                let eta = Float::with_val(PREC, *eta_num) / *eta_den;
                let top = Float::with_val(PREC, 1) - &eta;
                if y <= top {
                    Float::with_val(PREC, &y / &top) - 0.5f64
                } else {
                    Float::with_val(PREC, 0.5f64) - Float::with_val(PREC, &y - &top) / &eta
                }
            }
            OracleFn::Fourier(c) => {
                let mut s = Float::with_val(PREC, 0);
                for (i, ((rn, rd), (in_, id))) in c.iter().enumerate() {
                    let arg = two_pi() * (i as u64 + 1) * &y;
                    let re = Float::with_val(PREC, *rn) / *rd;
                    let im = Float::with_val(PREC, *in_) / *id;
                    s += re * arg.clone().cos() - im * arg.sin();
                }
                s * 2u32
            }
        }
    }
}

/// `sum_{k<q} f({k theta + phi})` by direct summation.
pub fn direct_sum(f: &OracleFn, theta: &Float, phi: &Float, start: u64, end: u64) -> Float {
    let mut s = Float::with_val(PREC, 0);
    for k in start..end {
        let x = Float::with_val(PREC, theta * k) + phi;
        s += f.eval(&x);
    }
    s
}

/// Error budget of [`direct_sum`]: a generous `terms * 2^(40-PREC)`.
pub fn sum_error(terms: u64) -> Float {
    Float::with_val(PREC, terms.max(1)) * Float::with_val(PREC, Float::i_exp(1, 40 - PREC as i32))
}

pub fn to_rational(x: &Float) -> Rational {
    let r = x.to_rational().expect("finite");
    let n = BigInt::from_str(&r.numer().to_string()).unwrap();
    let d = BigInt::from_str(&r.denom().to_string()).unwrap();
    Rational::new(n, d)
}

pub fn from_rational(r: &Rational) -> Float {
    let q = rug::Rational::from((
        Integer::from_str(&r.numer().to_string()).unwrap(),
        Integer::from_str(&r.denom().to_string()).unwrap(),
    ));
    Float::with_val(PREC, q)
}

/// `[x - err, x + err]` lies inside `e`.
pub fn encloses(e: &Enclosure, x: &Float, err: &Float) -> bool {
    let lo = to_rational(&Float::with_val(PREC, x - err));
    let hi = to_rational(&Float::with_val(PREC, x + err));
    e.lo() <= &lo && &hi <= e.hi()
}

/// `|x - y| <= tol`.
pub fn close(x: &Float, y: &Float, tol: f64) -> bool {
    Float::with_val(PREC, x - y).abs() <= tol
}

/// Star discrepancy `sup_gamma |#{x <= gamma} - N gamma|` of points on the
/// grid `j / g`, by checking every grid value and every left limit.
pub fn grid_discrepancy(points: &[u64], g: u64) -> rug::Rational {
    let n = points.len() as u64;
    let mut best = rug::Rational::new();
    for j in 0..=g {
        let le = points.iter().filter(|&&p| p <= j).count() as u64;
        let lt = points.iter().filter(|&&p| p < j).count() as u64;
        let ng = rug::Rational::from((Integer::from(n * j), Integer::from(g)));
        for c in [le, lt] {
            let d = (rug::Rational::from(c) - &ng).abs();
            if d > best {
                best = d;
            }
        }
    }
    best
}

pub fn rug_to_rational(r: &rug::Rational) -> Rational {
    Rational::new(
        BigInt::from_str(&r.numer().to_string()).unwrap(),
        BigInt::from_str(&r.denom().to_string()).unwrap(),
    )
}

/// `e` meets `[x - err, x + err]`: the weakest claim an oracle with
/// absolute error `err` supports.
pub fn meets(e: &Enclosure, x: &Float, err: &Float) -> bool {
    let lo = to_rational(&Float::with_val(PREC, x - err));
    let hi = to_rational(&Float::with_val(PREC, x + err));
    e.lo() <= &hi && &lo <= e.hi()
}

/// `2^-bits`.
pub fn ulp(bits: u32) -> Float {
    Float::with_val(PREC, Float::i_exp(1, -(bits as i32)))
}
