//! Error types shared across the crate.

use thiserror::Error;

/// Invalid user-facing configuration (grids, schemes, problems, training).
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("degenerate domain: x_left = {x_left} must be strictly below x_right = {x_right}")]
    DegenerateDomain { x_left: f64, x_right: f64 },
    #[error("grid too coarse: {n_cells} cells, need at least {min}")]
    TooFewCells { n_cells: usize, min: usize },
    #[error("invalid scheme configuration: {0}")]
    Scheme(String),
    #[error("invalid training configuration: {0}")]
    Train(String),
    #[error("invalid problem configuration: {0}")]
    Problem(String),
}

/// Network construction and checkpoint errors.
#[derive(Debug, Error)]
pub enum NnError {
    #[error(
        "layer {layer} shape mismatch: weight matrix is {rows}x{cols}, \
         layer sizes require {want_rows}x{want_cols}"
    )]
    ShapeMismatch {
        layer: usize,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("network has fewer than two layer sizes")]
    TooFewLayers,
    #[error("network expects {found} inputs and {out} outputs, need 4 and 3")]
    BadEndpoints { found: usize, out: usize },
    #[error("non-finite parameter in layer {layer}")]
    NonFinite { layer: usize },
    #[error("checkpoint io: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint parse: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("checkpoint invalid: {0}")]
    Invalid(String),
}

/// Failures of the optimization loop.
#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid training configuration: {0}")]
    Config(String),
    #[error(
        "non-finite loss {loss} at epoch {epoch}, step {step}; \
         aborting with the last finite parameter set"
    )]
    NonFiniteLoss {
        epoch: usize,
        step: usize,
        loss: f64,
        /// Parameters from just before the failing step.
        last_good: Box<crate::nn::NetworkParams>,
    },
}

/// Failures of a time integration run.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("inadmissible state at t = {t}: cell {cell:?} has rho = {rho}, p = {p}")]
    Inadmissible {
        t: f64,
        cell: (usize, usize),
        rho: f64,
        p: f64,
    },
    #[error("non-finite value at t = {t} in cell {cell:?}, variable {var}")]
    NonFinite {
        t: f64,
        cell: (usize, usize),
        var: usize,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
}
