use super::Fx;

/// Rectangular complex interval over [`Fx`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFx {
    pub re: Fx,
    pub im: Fx,
}

impl CFx {
    pub fn new(re: Fx, im: Fx) -> Self {
        assert_eq!(re.prec(), im.prec());
        CFx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        CFx::new(Fx::zero(prec), Fx::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        CFx::new(Fx::one(prec), Fx::zero(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> CFx {
        CFx::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn add(&self, o: &CFx) -> CFx {
        CFx::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn add_assign(&mut self, o: &CFx) {
        self.re.add_assign(&o.re);
        self.im.add_assign(&o.im);
    }

    pub fn sub(&self, o: &CFx) -> CFx {
        CFx::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> CFx {
        CFx::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> CFx {
        CFx::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &CFx) -> CFx {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        CFx::new(re, im)
    }

    pub fn mul_real(&self, r: &Fx) -> CFx {
        CFx::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn mul_int(&self, n: &num_bigint::BigInt) -> CFx {
        CFx::new(self.re.mul_int(n), self.im.mul_int(n))
    }

    pub fn mul_rat(&self, r: &super::Rational) -> CFx {
        CFx::new(self.re.mul_rat(r), self.im.mul_rat(r))
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> CFx {
        CFx::new(self.im.neg(), self.re.clone())
    }

    /// `|z|^2` as a real interval.
    pub fn norm_sqr(&self) -> Fx {
        self.re.sqr().add(&self.im.sqr())
    }

    /// `|z|`.
    pub fn abs(&self) -> Fx {
        self.norm_sqr().sqrt()
    }

    /// Division; `None` if the divisor's modulus enclosure touches zero.
    pub fn div(&self, o: &CFx) -> Option<CFx> {
        let d = o.norm_sqr().recip()?;
        Some(self.mul(&o.conj()).mul_real(&d))
    }
}
