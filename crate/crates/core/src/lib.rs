//! Certified arithmetic for Birkhoff sums over irrational rotations.
//!
//! Everything real-valued travels as an [`Enclosure`] (exact rational
//! interval) or, in hot loops, as a fixed-point interval [`arith::Fx`].
//! Irrationals are given by continued fractions ([`cf::ThetaSpec`]) and
//! never rounded to floats.

pub mod arith;
pub mod cf;
pub mod error;
pub mod lab;
pub mod orbit;
pub mod report;
pub mod t1;
pub mod t2;
pub mod trigpoly;

pub use arith::{Enclosure, Rational};
pub use error::{Error, Result};
pub use report::{Check, Verdict};
