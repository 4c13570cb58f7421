use serde::Serialize;

use crate::arith::{Enclosure, Rational};

/// A certified upper bound `omega(delta)` for a modulus of continuity.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum ModulusBound {
    /// `omega = 0` (constant functions).
    Zero,
    /// `omega(delta) = c * delta`.
    Lipschitz {
        #[serde(with = "crate::report::rat_str")]
        c: Rational,
    },
}

impl ModulusBound {
    pub fn lipschitz(c: Rational) -> Self {
        ModulusBound::Lipschitz { c }
    }

    /// Encloses `omega` over the enclosure `delta` (monotone, so the image
    /// is `[omega(lo), omega(hi)]`).
    pub fn eval(&self, delta: &Enclosure) -> Enclosure {
        match self {
            ModulusBound::Zero => Enclosure::zero(),
            ModulusBound::Lipschitz { c } => delta.scale(c),
        }
    }
}
