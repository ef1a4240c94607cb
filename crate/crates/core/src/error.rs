use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the admissible domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `1 + δ·c` is (numerically) zero, so the two-source normalization diverges.
    #[error("degenerate scenario: 1 + delta*c = {denominator:e} (delta = {delta}, c = {c})")]
    Degenerate {
        delta: f64,
        c: f64,
        denominator: f64,
    },

    /// A detector event that has zero probability in the single-photon model.
    #[error("invalid detector event: {0}")]
    InvalidEvent(String),

    /// The spatial grid cannot resolve the states to the required accuracy.
    #[error("grid accuracy error: {0}")]
    Accuracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
