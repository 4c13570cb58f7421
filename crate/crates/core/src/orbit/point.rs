use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::arith::{floor_rat, int, Enclosure, LinForm, Rational};
use crate::cf::{Theta, DEFAULT_REFINEMENT_CAP};
use crate::error::{Error, Result};

/// The symbolic orbit point `k theta - m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SymPoint {
    pub k: u64,
    pub m: i64,
}

impl SymPoint {
    pub const ORIGIN: SymPoint = SymPoint { k: 0, m: 0 };
    /// The right end `1 = 0*theta - (-1)` of the unit interval.
    pub const SENTINEL: SymPoint = SymPoint { k: 0, m: -1 };

    pub fn form(&self) -> LinForm {
        LinForm::new(int(-self.m), int(self.k))
    }

    pub fn value(&self, theta: &Enclosure) -> Enclosure {
        self.form().eval(theta)
    }
}

/// A point `{k theta + phi} = k theta + phi - m` with a certified value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub k: u64,
    pub m: i64,
    pub value: Enclosure,
}

/// Iterator over `{k theta + phi}` for `k < q`, each point's enclosure at
/// most `2^-64` wide.
pub fn orbit_stream(theta: &Theta, phi: &Rational, q: u64) -> Result<impl Iterator<Item = Result<OrbitPoint>>> {
    if *phi < Rational::from_integer(BigInt::from(0)) || *phi >= Rational::one() {
        return Err(Error::Precondition("phi must lie in [0, 1)".into()));
    }
    let bits = 66 + 64 - (q.max(1)).leading_zeros();
    let theta = theta.clone();
    let phi = phi.clone();
    let mut enc = theta.enclosure_bits(bits)?;
    let mut extra_bits = 0u32;
    let mut k = 0u64;
    Ok(std::iter::from_fn(move || {
        if k >= q {
            return None;
        }
        let kk = int(k);
        loop {
            let v = enc.scale(&kk).add_rat(&phi);
            let (a, b) = (floor_rat(v.lo()), floor_rat(v.hi()));
            if a == b {
                let m = match a.to_i64() {
                    Some(m) => m,
                    None => return Some(Err(Error::Precondition("orbit index overflows i64".into()))),
                };
                let value = v.add_rat(&-int(m));
                let p = OrbitPoint { k, m, value };
                k += 1;
                return Some(Ok(p));
            }
            // The point sits too close to an integer for the current
            // enclosure; tighten theta.
            extra_bits += 16;
            if extra_bits as usize > 16 * DEFAULT_REFINEMENT_CAP {
                return Some(Err(Error::RefinementCap { what: format!("floor(k theta + phi) at k = {k}") }));
            }
            enc = match theta.enclosure_bits(bits + extra_bits) {
                Ok(e) => e,
                Err(e) => return Some(Err(e)),
            };
        }
    }))
}
