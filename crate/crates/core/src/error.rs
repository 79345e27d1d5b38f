use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("mode index {mode} out of range for a {modes}-mode space")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    /// The heralding pattern has (numerically) zero probability.
    #[error("herald never fires (success probability {p_d:e})")]
    HeraldNeverFires { p_d: f64 },

    /// The closed forms are 0/0 at this point.
    #[error("degenerate parameter point nbar = {nbar}, T = {transmissivity}")]
    Degenerate { nbar: f64, transmissivity: f64 },

    #[error("intensity gain is undefined for zero input mean photon number")]
    UndefinedGain,

    #[error("formula evaluated outside its domain: {0}")]
    Domain(String),

    #[error("wigner grid has {points} points, cap is {cap}")]
    GridTooLarge { points: usize, cap: usize },
}
