//! Extreme zeros of orthogonal polynomials from their three-term recurrence.
//!
//! The crate is organised bottom-up:
//!
//! * [`families`] describes coefficient sequences `(a_k, b_k, c_k)` in the
//!   supported normal forms and ships the classical builtin families.
//! * [`evalkernel`] evaluates `p_k(x)` with power-of-two rescaling and the
//!   Turán-type expressions built from consecutive values.
//! * [`zerofinder`] computes ground-truth zeros by Sturm bisection on the
//!   recurrence itself, plus Rayleigh-quotient lower certificates.
//! * [`bounds`] implements the closed-form extreme-zero bounds together with
//!   exact checkers for their hypotheses.
//! * [`verifier`] is a seeded harness that measures identity residuals,
//!   nonnegativity and bound containment.

// Negated comparisons are used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod evalkernel;
pub mod families;
mod roots;
pub mod verifier;
pub mod zerofinder;

pub use bounds::{
    BoundName, BoundResult, ConditionId, ConditionReport, Coverage, DConvention, Side, Verdict,
};
pub use error::{Error, Result};
pub use evalkernel::{EvalState, TuranValue};
pub use families::{
    make_builtin, Coefficients, CoefficientKind, DifferenceProfile, RecurrenceForm,
    RecurrenceSpec, Sequence,
};
pub use verifier::{Subject, VerificationReport};
pub use zerofinder::{JacobiMatrix, RayleighCertificate, ZeroSet};
