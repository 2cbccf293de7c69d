use crate::families::RecurrenceForm;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coefficient index {index} is beyond the table capacity (last index {last})")]
    CapacityExceeded { index: usize, last: usize },

    #[error("{name}_{index} = {value} violates the positivity constraints of the {form:?} form")]
    Positivity {
        name: char,
        index: usize,
        value: f64,
        form: RecurrenceForm,
    },

    #[error("c_k decreases at index {index}")]
    Decreasing { index: usize },

    #[error("x = {x} is a zero of p_{k}")]
    ZeroOfP { k: usize, x: f64 },

    #[error("window has length {got}, expected {expected}")]
    WindowLength { expected: usize, got: usize },

    #[error("{what} requires a {expected:?} recurrence, got {found:?}")]
    FormMismatch {
        what: &'static str,
        expected: RecurrenceForm,
        found: RecurrenceForm,
    },

    #[error("degree {k} is below the minimum {min}")]
    Degree { k: usize, min: usize },

    #[error("relative tolerance {0} is below 1e-14")]
    Tolerance(f64),

    #[error("bisection bracket failure: {0}")]
    Bracket(String),

    #[error("the trial vector is zero")]
    ZeroVector,
}
