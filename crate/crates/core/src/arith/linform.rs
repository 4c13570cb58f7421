use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{Signed, Zero};

use super::{Enclosure, Rational};

/// Exact affine form `a + b*theta` in the irrational `theta`.
///
/// Orbit positions `k*theta - m` and every length or integral built from
/// them are affine in `theta` with rational coefficients, so sums of
/// thousands of them stay exact until the final evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinForm {
    pub a: Rational,
    pub b: Rational,
}

impl LinForm {
    pub fn new(a: Rational, b: Rational) -> Self {
        LinForm { a, b }
    }

    pub fn constant(a: Rational) -> Self {
        LinForm { a, b: Rational::zero() }
    }

    pub fn zero() -> Self {
        LinForm::default()
    }

    pub fn scale(&self, c: &Rational) -> LinForm {
        LinForm { a: &self.a * c, b: &self.b * c }
    }

    /// Evaluates with `theta` in the given enclosure.
    pub fn eval(&self, theta: &Enclosure) -> Enclosure {
        let t = if self.b.is_negative() {
            (&self.b * theta.hi(), &self.b * theta.lo())
        } else {
            (&self.b * theta.lo(), &self.b * theta.hi())
        };
        Enclosure::new(&self.a + t.0, &self.a + t.1)
    }
}

impl Add for &LinForm {
    type Output = LinForm;
    fn add(self, o: &LinForm) -> LinForm {
        LinForm { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &LinForm {
    type Output = LinForm;
    fn sub(self, o: &LinForm) -> LinForm {
        LinForm { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Neg for &LinForm {
    type Output = LinForm;
    fn neg(self) -> LinForm {
        LinForm { a: -&self.a, b: -&self.b }
    }
}

impl AddAssign<&LinForm> for LinForm {
    fn add_assign(&mut self, o: &LinForm) {
        self.a += &o.a;
        self.b += &o.b;
    }
}

/// A real known to lie between two affine forms, `lo(theta) <= x <= hi(theta)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinInterval {
    pub lo: LinForm,
    pub hi: LinForm,
}

impl LinInterval {
    pub fn exact(f: LinForm) -> Self {
        LinInterval { lo: f.clone(), hi: f }
    }

    pub fn zero() -> Self {
        LinInterval::default()
    }

    /// `[min(c1,c2) * len, max(c1,c2) * len]` for a nonnegative length form.
    pub fn bracket(c1: &Rational, c2: &Rational, len: &LinForm) -> Self {
        let (a, b) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        LinInterval { lo: len.scale(a), hi: len.scale(b) }
    }

    pub fn add_assign(&mut self, o: &LinInterval) {
        self.lo += &o.lo;
        self.hi += &o.hi;
    }

    pub fn add_exact(&mut self, f: &LinForm) {
        self.lo += f;
        self.hi += f;
    }

    /// Encloses the value for `theta` in the given enclosure.
    pub fn eval(&self, theta: &Enclosure) -> Enclosure {
        let l = self.lo.eval(theta);
        let h = self.hi.eval(theta);
        Enclosure::new(l.lo().clone(), h.hi().clone().max(l.lo().clone()))
    }
}
