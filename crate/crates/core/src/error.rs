//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by exact-arithmetic and reconstruction operations.
///
/// Everything in this crate is total on valid inputs; errors signal either a
/// domain violation (dividing by a multi-term algebraic number, taking the
/// series square root of something that has none) or a failed validation
/// (an interpolation degree bound that turned out too small).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a multi-term algebraic number is not supported: {0}")]
    MultiTermDivision(String),
    #[error("series has no representable square root: {0}")]
    NoSeriesSqrt(String),
    #[error("series constant term is zero, cannot invert")]
    ZeroConstantTerm,
    #[error("radicand {0} exceeds the supported bound 10^15")]
    RadicandTooLarge(i128),
    #[error("invalid half-integer label: {0}")]
    BadLabel(String),
    #[error("interpolation grid too small: need {needed} distinct coordinates, got {got}")]
    GridTooSmall { needed: usize, got: usize },
    #[error("degree bound {bound} exceeded: held-out sample at {point} not reproduced")]
    DegreeBoundExceeded { bound: usize, point: String },
    #[error("J_max = {jmax} too small: nonzero coefficient found in the top shell")]
    JMaxTooSmall { jmax: u32 },
    #[error("reduced matrix element vanishes for J = {j_op}, j = {weight}")]
    ZeroReducedElement { j_op: u32, weight: String },
    #[error("unknown generator label: {0}")]
    UnknownGenerator(String),
    #[error("vanishing classical Pochhammer symbol: ({x})_{n}")]
    ZeroPochhammer { x: String, n: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
