//! Continued fractions: specs, convergents, enclosures of theta, of
//! `||Q_nu theta||` and of the tails `alpha_{nu+1}`, and the hypothesis
//! checks built on them.

mod conditions;
mod spec;
mod theta;

pub use conditions::{condition_oo1_trace, condition_oo1o_trace, determinant_ok, verify_q12, Q12Outcome};
pub use spec::{FormulaKind, TailRule, ThetaSpec};
pub use theta::{Convergent, Theta, DEFAULT_REFINEMENT_CAP};
