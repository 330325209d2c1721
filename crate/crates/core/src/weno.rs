//! Fifth-order WENO reconstruction.
//!
//! The interface value at `i + 1/2` is a convex combination of three
//! third-order candidate fluxes on the substencils
//! `S0 = {i-2, i-1, i}`, `S1 = {i-1, i, i+1}`, `S2 = {i, i+1, i+2}`:
//!
//! ```text
//! f0 =  1/3 f_{i-2} - 7/6 f_{i-1} + 11/6 f_i
//! f1 = -1/6 f_{i-1} + 5/6 f_i    +  1/3 f_{i+1}
//! f2 =  1/3 f_i     + 5/6 f_{i+1} - 1/6 f_{i+2}
//! ```
//!
//! With the ideal weights `d = (0.1, 0.6, 0.3)` the combination reduces to
//! the fifth-order upwind scheme. The JS weights are
//! `alpha_k = d_k / (beta_k + eps)^p`, the Z weights
//! `alpha_k = d_k (1 + (tau5 / (beta_k + eps))^q)` with
//! `tau5 = |beta2 - beta0|`; both are normalized to sum to one. The NN kinds
//! add a learned compensation to the base weights before renormalizing.

use crate::error::ConfigError;
use crate::nn::{self, NetworkParams};
use crate::tape::Scalar;

/// Five consecutive flux samples `(f_{i-2}, .., f_{i+2})` feeding one
/// interface reconstruction.
pub type Stencil5 = [f64; 5];

/// Three convex substencil weights; routines returning one guarantee
/// `w_k >= 0` and `sum w_k = 1` up to round-off.
pub type WeightTriple = [f64; 3];

/// Ideal weights recovering the fifth-order upwind scheme.
pub const IDEAL_WEIGHTS: WeightTriple = [0.1, 0.6, 0.3];

/// Classic epsilon for WENO-JS.
pub const EPSILON_JS: f64 = 1e-6;
/// Epsilon for WENO-Z, small enough that `tau5 / beta` dominates.
pub const EPSILON_Z: f64 = 1e-40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// Ideal weights everywhere (the linear UP5 scheme).
    Linear,
    Js,
    Z,
    JsNn,
    ZNn,
}

impl SchemeKind {
    /// The classical scheme providing the base weights.
    pub fn base(self) -> SchemeKind {
        match self {
            SchemeKind::JsNn => SchemeKind::Js,
            SchemeKind::ZNn => SchemeKind::Z,
            k => k,
        }
    }

    pub fn is_nn(self) -> bool {
        matches!(self, SchemeKind::JsNn | SchemeKind::ZNn)
    }

    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::Linear => "linear",
            SchemeKind::Js => "weno5-js",
            SchemeKind::Z => "weno5-z",
            SchemeKind::JsNn => "weno5-js-nn",
            SchemeKind::ZNn => "weno5-z-nn",
        }
    }

    pub fn parse(s: &str) -> Result<SchemeKind, ConfigError> {
        match s {
            "linear" => Ok(SchemeKind::Linear),
            "weno5-js" => Ok(SchemeKind::Js),
            "weno5-z" => Ok(SchemeKind::Z),
            "weno5-js-nn" => Ok(SchemeKind::JsNn),
            "weno5-z-nn" => Ok(SchemeKind::ZNn),
            other => Err(ConfigError::Scheme(format!(
                "unknown scheme '{other}' (expected linear|weno5-js|weno5-z|weno5-js-nn|weno5-z-nn)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub epsilon: f64,
    pub p: i32,
    pub q: i32,
    pub network: Option<NetworkParams>,
}

impl SchemeConfig {
    pub fn linear() -> Self {
        SchemeConfig {
            kind: SchemeKind::Linear,
            epsilon: EPSILON_JS,
            p: 2,
            q: 1,
            network: None,
        }
    }

    pub fn js() -> Self {
        SchemeConfig {
            kind: SchemeKind::Js,
            epsilon: EPSILON_JS,
            p: 2,
            q: 1,
            network: None,
        }
    }

    pub fn z() -> Self {
        SchemeConfig {
            kind: SchemeKind::Z,
            epsilon: EPSILON_Z,
            p: 2,
            q: 1,
            network: None,
        }
    }

    pub fn js_nn(network: NetworkParams) -> Self {
        SchemeConfig {
            kind: SchemeKind::JsNn,
            network: Some(network),
            ..SchemeConfig::js()
        }
    }

    pub fn z_nn(network: NetworkParams) -> Self {
        SchemeConfig {
            kind: SchemeKind::ZNn,
            network: Some(network),
            ..SchemeConfig::z()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.epsilon > 0.0) {
            return Err(ConfigError::Scheme(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.p < 1 || self.q < 1 {
            return Err(ConfigError::Scheme(format!(
                "powers p, q must be at least 1, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if self.kind.is_nn() && self.network.is_none() {
            return Err(ConfigError::Scheme(format!(
                "scheme '{}' requires a network checkpoint",
                self.kind.label()
            )));
        }
        Ok(())
    }
}

/// Jiang-Shu smoothness indicators `(beta0, beta1, beta2)`; each is a
/// non-negative quadratic form of the stencil.
pub fn smoothness_indicators(s: &Stencil5) -> [f64; 3] {
    let b0 = 13.0 / 12.0 * (s[0] - 2.0 * s[1] + s[2]).powi(2)
        + 0.25 * (s[0] - 4.0 * s[1] + 3.0 * s[2]).powi(2);
    let b1 =
        13.0 / 12.0 * (s[1] - 2.0 * s[2] + s[3]).powi(2) + 0.25 * (s[1] - s[3]).powi(2);
    let b2 = 13.0 / 12.0 * (s[2] - 2.0 * s[3] + s[4]).powi(2)
        + 0.25 * (3.0 * s[2] - 4.0 * s[3] + s[4]).powi(2);
    [b0, b1, b2]
}

/// The three third-order interface values.
pub fn candidate_fluxes(s: &Stencil5) -> [f64; 3] {
    let f0 = s[0] / 3.0 - 7.0 / 6.0 * s[1] + 11.0 / 6.0 * s[2];
    let f1 = -s[1] / 6.0 + 5.0 / 6.0 * s[2] + s[3] / 3.0;
    let f2 = s[2] / 3.0 + 5.0 / 6.0 * s[3] - s[4] / 6.0;
    [f0, f1, f2]
}

fn normalize(alpha: [f64; 3]) -> WeightTriple {
    let sum = alpha[0] + alpha[1] + alpha[2];
    [alpha[0] / sum, alpha[1] / sum, alpha[2] / sum]
}

/// WENO-JS weights: `alpha_k = d_k / (beta_k + eps)^p`, normalized.
pub fn weights_js(beta: &[f64; 3], cfg: &SchemeConfig) -> WeightTriple {
    let mut alpha = [0.0; 3];
    for k in 0..3 {
        alpha[k] = IDEAL_WEIGHTS[k] / (beta[k] + cfg.epsilon).powi(cfg.p);
    }
    normalize(alpha)
}

/// WENO-Z weights: `alpha_k = d_k (1 + (tau5/(beta_k + eps))^q)` with the
/// global measure `tau5 = |beta2 - beta0|`, normalized.
pub fn weights_z(beta: &[f64; 3], cfg: &SchemeConfig) -> WeightTriple {
    let tau5 = (beta[2] - beta[0]).abs();
    let mut alpha = [0.0; 3];
    for k in 0..3 {
        alpha[k] = IDEAL_WEIGHTS[k] * (1.0 + (tau5 / (beta[k] + cfg.epsilon)).powi(cfg.q));
    }
    normalize(alpha)
}

/// Convex combination of candidate fluxes.
pub fn combine<S: Scalar>(candidates: &[f64; 3], w: &[S; 3]) -> S {
    w[0] * candidates[0] + w[1] * candidates[1] + w[2] * candidates[2]
}

/// The weight triple the configured scheme assigns to this stencil.
pub fn interface_weights(s: &Stencil5, cfg: &SchemeConfig) -> WeightTriple {
    match cfg.kind {
        SchemeKind::Linear => IDEAL_WEIGHTS,
        SchemeKind::Js => weights_js(&smoothness_indicators(s), cfg),
        SchemeKind::Z => weights_z(&smoothness_indicators(s), cfg),
        SchemeKind::JsNn | SchemeKind::ZNn => {
            let net = cfg
                .network
                .as_ref()
                .expect("NN scheme without network; SchemeConfig::validate rejects this");
            let beta = smoothness_indicators(s);
            let base = match cfg.kind {
                SchemeKind::JsNn => weights_js(&beta, cfg),
                _ => weights_z(&beta, cfg),
            };
            let feats = nn::delta_features(s, net.eps1());
            let comp = net.forward(&feats);
            nn::compensate_and_normalize(base, comp)
        }
    }
}

/// Reconstructs the interface value at `i + 1/2` from the upwind stencil.
pub fn reconstruct_interface(s: &Stencil5, cfg: &SchemeConfig) -> f64 {
    combine(&candidate_fluxes(s), &interface_weights(s, cfg))
}
