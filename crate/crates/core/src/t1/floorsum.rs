//! Floor sums `sum_{k<n} w^k floor((p k + r)/q)` in `O(log)` monoid
//! products (the "universal Euclid" recursion).
//!
//! The lattice path of `y = floor((p x + r)/q)`, `x = 1..l`, is the word
//! `U^{y(1)-y(0)} R U^{y(2)-y(1)} R ...`. Any monoid evaluated on that word
//! can be computed by recursing on `(p, q)` like Euclid's algorithm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::CFx;

pub trait Monoid: Clone {
    fn identity(&self) -> Self;
    fn op(&self, o: &Self) -> Self;

    fn pow(&self, e: &BigInt) -> Self {
        let mut out = self.identity();
        if e.is_zero() {
            return out;
        }
        let mut base = self.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                out = out.op(&base);
            }
            if i + 1 < bits {
                base = base.op(&base);
            }
        }
        out
    }
}

/// Product over the word for `x = 1..=l`, `0 <= r < q`, `p >= 0`.
pub fn euclid<M: Monoid>(p: &BigInt, q: &BigInt, r: &BigInt, l: &BigInt, u: &M, rr: &M) -> M {
    debug_assert!(r.sign() != num_bigint::Sign::Minus && r < q);
    if l.is_zero() {
        return u.identity();
    }
    if p >= q {
        let (d, m) = p.div_mod_floor(q);
        let rr2 = u.pow(&d).op(rr);
        return euclid(&m, q, r, l, u, &rr2);
    }
    let m = (l * p + r) / q;
    if m.is_zero() {
        return rr.pow(l);
    }
    let cnt = l - (q * &m - r - 1u32) / p;
    let t = q - r - 1u32;
    let (lead, r2) = t.div_mod_floor(p);
    rr.pow(&lead)
        .op(u)
        .op(&euclid(q, p, &r2, &(&m - 1u32), rr, u))
        .op(&rr.pow(&cnt))
}

/// `(#R, #U, sum over R of #U before it)`.
#[derive(Clone, Debug)]
struct Count {
    n: BigInt,
    y: BigInt,
    s: BigInt,
}

impl Monoid for Count {
    fn identity(&self) -> Self {
        Count { n: BigInt::zero(), y: BigInt::zero(), s: BigInt::zero() }
    }
    fn op(&self, o: &Self) -> Self {
        Count { n: &self.n + &o.n, y: &self.y + &o.y, s: &self.s + &o.s + &self.y * &o.n }
    }
}

/// `(#U, w^{#R}, sum_R w^{x}, sum_R w^{x} y)` where `x` counts earlier
/// `R`s and `y` earlier `U`s.
#[derive(Clone, Debug)]
struct Weighted {
    y: BigInt,
    zx: CFx,
    s0: CFx,
    s1: CFx,
}

impl Monoid for Weighted {
    fn identity(&self) -> Self {
        let p = self.zx.prec();
        Weighted { y: BigInt::zero(), zx: CFx::one(p), s0: CFx::zero(p), s1: CFx::zero(p) }
    }
    fn op(&self, o: &Self) -> Self {
        let s1 = o.s1.add(&o.s0.mul_int(&self.y));
        Weighted {
            y: &self.y + &o.y,
            zx: self.zx.mul(&o.zx),
            s0: self.s0.add(&self.zx.mul(&o.s0)),
            s1: self.s1.add(&self.zx.mul(&s1)),
        }
    }
}

/// Splits `floor((p k + r)/q)` for `k = x - 1` into a constant `s` and the
/// normalized `floor((p x + r')/q)`, `0 <= r' < q`.
fn normalize(p: &BigInt, q: &BigInt, r: &BigInt) -> (BigInt, BigInt) {
    (r - p).div_mod_floor(q)
}

/// `sum_{k=0}^{n-1} floor((p k + r)/q)` for `p >= 0`, `q > 0`.
pub fn floor_sum(p: &BigInt, q: &BigInt, r: &BigInt, n: &BigInt) -> BigInt {
    assert!(q > &BigInt::zero() && p >= &BigInt::zero());
    let (s, r2) = normalize(p, q, r);
    let id = Count { n: BigInt::zero(), y: BigInt::zero(), s: BigInt::zero() };
    let u = Count { y: BigInt::one(), ..id.clone() };
    let rr = Count { n: BigInt::one(), ..id };
    let out = euclid(p, q, &r2, n, &u, &rr);
    out.s + s * n
}

/// `sum_{k=0}^{n-1} w^k floor((p k + r)/q)` and `sum_{k<n} w^k`.
pub fn weighted_floor_sum(p: &BigInt, q: &BigInt, r: &BigInt, n: &BigInt, w: &CFx) -> (CFx, CFx) {
    assert!(q > &BigInt::zero() && p >= &BigInt::zero());
    let prec = w.prec();
    let (s, r2) = normalize(p, q, r);
    let u = Weighted { y: BigInt::one(), zx: CFx::one(prec), s0: CFx::zero(prec), s1: CFx::zero(prec) };
    let rr = Weighted { y: BigInt::zero(), zx: w.clone(), s0: CFx::one(prec), s1: CFx::zero(prec) };
    let out = euclid(p, q, &r2, n, &u, &rr);
    let total = out.s1.add(&out.s0.mul_int(&s));
    (total, out.s0)
}
