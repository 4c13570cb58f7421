//! sin/cos of `2*pi*x` for fixed-point interval `x` ("turns").
//!
//! Arguments in turns keep the reduction exact: `x mod 1` and the octant
//! split are integer operations on the dyadic endpoints. Only the final
//! Taylor stage sees pi, through a Machin enclosure.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CFx, Fx};

const GUARD: u32 = 24;

/// `arctan(1/x)` scaled by `2^w`, as `(lo, hi)` integers.
fn arctan_recip(x: u32, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << w;
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut pow = one.clone() / BigInt::from(x); // floor(2^w / x^(2k+1)), k=0
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    let mut terms: u64 = 0;
    loop {
        let t = &pow / BigInt::from(2 * k + 1);
        if t.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            sum += &t;
        } else {
            sum -= &t;
        }
        terms += 1;
        pow = &pow / &x2;
        k += 1;
    }
    // Each truncated term is off by less than 2 ulps (two floors); the
    // alternating tail after the last nonzero term is below 1 ulp.
    let slack = BigInt::from(2 * terms + 2);
    (&sum - &slack, &sum + &slack)
}

/// Enclosure of pi at precision `prec`, cached per precision.
pub fn pi_fx(prec: u32) -> Fx {
    static CACHE: OnceLock<Mutex<HashMap<u32, Fx>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&prec) {
        return p.clone();
    }
    let w = prec + 16;
    let (a_lo, a_hi) = arctan_recip(5, w);
    let (b_lo, b_hi) = arctan_recip(239, w);
    // pi = 16 atan(1/5) - 4 atan(1/239)
    let lo = a_lo * 16 - b_hi * 4;
    let hi = a_hi * 16 - b_lo * 4;
    let p = Fx::from_raw(lo, hi, w).with_prec(prec);
    cache.lock().unwrap().insert(prec, p.clone());
    p
}

/// `sin(t)` and `cos(t)` for `t = 2*pi*u`, `u = num * 2^-w` exact with
/// `0 <= u <= 1/8`. Returns enclosures at precision `w`.
fn taylor_turns(num: &BigInt, w: u32, want_sin: bool) -> Fx {
    debug_assert!(!num.is_negative());
    if num.is_zero() {
        return if want_sin { Fx::zero(w) } else { Fx::one(w) };
    }
    let two_pi = pi_fx(w).mul_u64(2);
    let t = Fx::from_raw(
        super::floor_shr(&(two_pi.lo_raw() * num), w),
        super::ceil_shr(&(two_pi.hi_raw() * num), w),
        w,
    );
    let t2 = t.sqr();
    let stop = BigInt::one();
    let (mut term, mut k) = if want_sin {
        (t.clone(), 1u64)
    } else {
        (Fx::one(w), 0u64)
    };
    let mut sum = term.clone();
    let mut sign_neg = false;
    loop {
        // term_{k+2} = term_k * t^2 / ((k+1)(k+2))
        term = term.mul(&t2).div_u64((k + 1) * (k + 2));
        k += 2;
        sign_neg = !sign_neg;
        if term.hi_raw() <= &stop {
            // Alternating series with decreasing terms (t < 1): the tail is
            // bounded by the first omitted term.
            let r = term.hi_raw().clone() + 1u32;
            return sum.widen(&r);
        }
        if sign_neg {
            sum = sum.sub(&term);
        } else {
            sum = sum.add(&term);
        }
    }
}

/// sin and cos of `2*pi*x` at an exact dyadic point `x = num * 2^-prec`.
fn sincos_point(num: &BigInt, prec: u32, want_sin: bool) -> Fx {
    let w = prec + GUARD;
    let full = BigInt::one() << prec;
    let r = num.mod_floor(&full);
    // Work at precision w so quarter/eighth boundaries are exact.
    let r_w = &r << GUARD;
    let quarter = BigInt::one() << (w - 2);
    let eighth = BigInt::one() << (w - 3);
    let (q, s) = r_w.div_mod_floor(&quarter);
    let q: u32 = q.try_into().unwrap_or(0);
    // Within the quadrant, angle 2*pi*s with s in [0, 1/4).
    let need_sin_of_s = match (q, want_sin) {
        (0, true) | (2, true) => true,
        (1, true) | (3, true) => false,
        (0, false) | (2, false) => false,
        _ => true,
    };
    let negate = match (q, want_sin) {
        (0, _) => false,
        (1, true) => false,
        (1, false) => true,
        (2, _) => true,
        (3, true) => true,
        _ => false,
    };
    let v = if s <= eighth {
        taylor_turns(&s, w, need_sin_of_s)
    } else {
        // sin(2 pi s) = cos(2 pi (1/4 - s)) and vice versa.
        let u = &quarter - &s;
        taylor_turns(&u, w, !need_sin_of_s)
    };
    let v = if negate { v.neg() } else { v };
    v.with_prec(prec).clamp_unit()
}

/// Returns true if some `n + c/8` (integer `n`) lies in `[lo, hi]`, both
/// given as raw integers at precision `prec`.
fn hits_eighth(lo: &BigInt, hi: &BigInt, prec: u32, eighths: u32) -> bool {
    // Work at prec+3 so c/8 is exact.
    let full = BigInt::one() << (prec + 3);
    let c = BigInt::from(eighths) << prec;
    let a: BigInt = (lo << 3u32) - &c;
    let b: BigInt = (hi << 3u32) - &c;
    // exists integer n with a <= n*full <= b
    let n = -((-a).div_floor(&full));
    n * full <= b
}

fn trig_interval(x: &Fx, want_sin: bool) -> Fx {
    let p = x.prec();
    let unit = BigInt::one() << p;
    let w = x.width_ulps();
    if w >= (&unit >> 1u32) {
        return Fx::from_raw(-&unit, unit, p);
    }
    let a = sincos_point(x.lo_raw(), p, want_sin);
    if w.is_zero() {
        return a;
    }
    // Narrow inputs: one evaluation plus the Lipschitz bound 2*pi < 7.
    if w.bits() * 2 < p as u64 {
        let r = w * 7u32 + 1u32;
        return a.widen(&r).clamp_unit();
    }
    let b = sincos_point(x.hi_raw(), p, want_sin);
    let mut out = a.hull(&b);
    // Extremum locations in turns: sin has max at 1/4, min at 3/4;
    // cos has max at 0, min at 1/2.
    let (max_at, min_at) = if want_sin { (2, 6) } else { (0, 4) };
    if hits_eighth(x.lo_raw(), x.hi_raw(), p, max_at) {
        out = out.hull(&Fx::one(p));
    }
    if hits_eighth(x.lo_raw(), x.hi_raw(), p, min_at) {
        out = out.hull(&Fx::one(p).neg());
    }
    out
}

/// Enclosure of `sin(2*pi*x)`.
pub fn sin_turns(x: &Fx) -> Fx {
    trig_interval(x, true)
}

/// Enclosure of `cos(2*pi*x)`.
pub fn cos_turns(x: &Fx) -> Fx {
    trig_interval(x, false)
}

/// Enclosure of `e(x) = exp(2*pi*i*x)`.
pub fn cis_turns(x: &Fx) -> CFx {
    CFx::new(cos_turns(x), sin_turns(x))
}
