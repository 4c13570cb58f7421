//! `int_0^1 |f_1' - sigma_N f_1'|` for the first bump `f_1 = sin 4 pi x` on
//! `[0, 1/2]`, from its closed-form Fourier series.
//!
//! With `g = f_1' - p_1'` and `F = f_1 - p_1`, `int |g|` is the sum of
//! `|F(b) - F(a)|` over the pieces between sign changes of `g` and the
//! breakpoints 0, 1/2, 1. Roots are located in f64 and `F` is evaluated in
//! MPFR; `F` is stationary at a root, so a root error `d` moves the result
//! by `O(|g'| d^2)`, far below 1e-20. A missed root pair can only lower
//! the value.

use rug::float::Constant;
use rug::Float;

use super::PREC;

/// Fejer weight and cosine amplitude of odd frequency `m`:
/// `f_1 = (1/2) sin 4 pi x + sum_{m odd} 4 / (pi (4 - m^2)) cos 2 pi m x`.
fn odd_amp(m: u64) -> f64 {
    4.0 / (std::f64::consts::PI * (4.0 - (m * m) as f64))
}

fn weight(m: u64, n: u64) -> f64 {
    1.0 - m as f64 / (n + 1) as f64
}

/// `g(x)` in f64, for root bracketing only.
fn g64(x: f64, n: u64) -> f64 {
    use std::f64::consts::PI;
    let f1 = if x > 0.0 && x < 0.5 { 4.0 * PI * (4.0 * PI * x).cos() } else { 0.0 };
    let mut p = if n >= 2 { weight(2, n) * 2.0 * PI * (4.0 * PI * x).cos() } else { 0.0 };
    for m in (1..=n).step_by(2) {
        p -= weight(m, n) * odd_amp(m) * 2.0 * PI * m as f64 * (2.0 * PI * m as f64 * x).sin();
    }
    f1 - p
}

/// `F(x) = f_1(x) - p_1(x)` in MPFR.
fn big_f(x: &Float, n: u64) -> Float {
    let pi = Float::with_val(PREC, Constant::Pi);
    let half = Float::with_val(PREC, 0.5);
    let four_pi_x = Float::with_val(PREC, &pi * x) * 4u32;
    let f1 = if *x > 0 && *x < half { four_pi_x.clone().sin() } else { Float::with_val(PREC, 0) };
    let np1 = Float::with_val(PREC, n + 1);
    let w = |m: u64| Float::with_val(PREC, 1) - Float::with_val(PREC, m) / &np1;
    let mut p = Float::with_val(PREC, 0);
    if n >= 2 {
        p += w(2) * four_pi_x.sin() / 2u32;
    }
    for m in (1..=n).step_by(2) {
        let amp = Float::with_val(PREC, 4) / (Float::with_val(PREC, &pi) * (4i64 - (m * m) as i64));
        let arg = Float::with_val(PREC, &pi * x) * (2 * m);
        p += w(m) * amp * arg.cos();
    }
    f1 - p
}

fn roots(a: f64, b: f64, n: u64, per_unit: u64) -> Vec<f64> {
    let steps = ((b - a) * per_unit as f64).ceil() as u64;
    let h = (b - a) / steps as f64;
    let mut out = Vec::new();
    // stay off the breakpoints, where g jumps
    let at = |i: u64| a + h * i as f64;
    let mut prev = (at(0) + h * 1e-6, g64(at(0) + h * 1e-6, n));
    for i in 1..=steps {
        let x = if i == steps { b - h * 1e-6 } else { at(i) };
        let y = g64(x, n);
        if y == 0.0 || (y < 0.0) != (prev.1 < 0.0) {
            let (mut lo, mut hi) = (prev.0, x);
            let neg_lo = prev.1 < 0.0;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if (g64(mid, n) < 0.0) == neg_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = (x, y);
    }
    out
}

/// `int_0^1 |f_1' - sigma_N f_1'|` with `per_unit` bracketing points per
/// unit length.
pub fn fejer_l1_level1(degree: u64, per_unit: u64) -> Float {
    let mut pts = vec![0.0];
    pts.extend(roots(0.0, 0.5, degree, per_unit));
    pts.push(0.5);
    pts.extend(roots(0.5, 1.0, degree, per_unit));
    pts.push(1.0);
    let vals: Vec<Float> = pts
        .iter()
        .map(|&x| {
            // 0.5 and 1.0 are exact in binary
            big_f(&Float::with_val(PREC, x), degree)
        })
        .collect();
    let mut s = Float::with_val(PREC, 0);
    for w in vals.windows(2) {
        s += Float::with_val(PREC, &w[1] - &w[0]).abs();
    }
    s
}

/// Closed-form Fourier coefficient `(re, im)` of `f_1` at `m >= 1`.
pub fn f1_coeff(m: u64) -> (Float, Float) {
    let pi = Float::with_val(PREC, Constant::Pi);
    match m {
        2 => (Float::with_val(PREC, 0), Float::with_val(PREC, -0.25)),
        m if m % 2 == 1 => (Float::with_val(PREC, 2) / (pi * (4i64 - (m * m) as i64)), Float::with_val(PREC, 0)),
        _ => (Float::with_val(PREC, 0), Float::with_val(PREC, 0)),
    }
}
