//! Fifth-order WENO schemes with a learned nonlinear-weight compensation term.
//!
//! The crate implements the classical WENO5-JS and WENO5-Z finite-difference
//! reconstructions together with their neural variants WENO5-JS-NN and
//! WENO5-Z-NN, in which a small multilayer perceptron adds a data-dependent
//! compensation to the nonlinear weights before renormalization. Around that
//! sit the pieces needed to train and verify such schemes:
//!
//! * [`grid`] / [`field`] — uniform grids, conserved-state containers and
//!   boundary handling (periodic, zero-gradient, reflective, fixed and a
//!   moving oblique-shock boundary),
//! * [`weno`] — candidate fluxes, smoothness indicators and weight functions,
//! * [`nn`] — the Delta-layer features, MLP forward pass, weight
//!   compensation, reverse-mode gradients and checkpoint serialization,
//! * [`train`] — dataset generation, reference interface fluxes, the
//!   reconstruction / TVD / anti-dissipation / regularization losses and the
//!   Adam training loop,
//! * [`adr`] — a time-independent approximate dispersion relation giving the
//!   modified wavenumber of nonlinear schemes, plus the associated spectral
//!   error bound,
//! * [`solver`] — method-of-lines integration of scalar advection and the
//!   1D/2D Euler equations with characteristic-wise reconstruction, global
//!   Lax-Friedrichs splitting and SSP-RK3.

pub mod adr;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod nn;
pub mod solver;
pub mod tape;
pub mod train;
pub mod weno;

pub use error::{ConfigError, NnError, SolverError, TrainError};
pub use field::{BoundaryKind, StateField, GHOST_WIDTH};
pub use grid::{make_grid, Grid1D, Grid2D};
pub use weno::{SchemeConfig, SchemeKind};
