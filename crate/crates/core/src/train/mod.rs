//! Dataset generation, loss terms and the Adam training loop.
//!
//! The total loss is
//!
//! ```text
//! L = L_r + lambda_TVD * L_TVD + lambda_diss * L_diss + lambda_W * ||W||^2
//! ```
//!
//! with `||W||^2` summing squared weight-matrix entries only. Reference
//! hyperparameters: `(lambda_TVD, lambda_diss) = (80, 700)` for the JS base
//! and `(5, 200)` for the Z base, batch size 800, initial learning rate
//! 1e-3 with exponential decay, `lambda_W = 1e-8`.

pub mod dataset;
pub mod losses;

pub use dataset::{
    generate_dataset, generate_dataset_with, SampleFamily, TrainingSample, TRAIN_NX,
};
pub use losses::{
    loss_dissipation, loss_reconstruction, loss_tvd, nn_interface_value, weight_norm_sq,
};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{ConfigError, TrainError};
use crate::nn::{GradientSet, MlpParams, NetworkParams, DEFAULT_EPS1, DEFAULT_LAYER_SIZES};
use crate::weno::{SchemeConfig, SchemeKind};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub lambda_tvd: f64,
    pub lambda_diss: f64,
    pub lambda_w: f64,
    pub batch_size: usize,
    pub lr0: f64,
    pub lr_decay: f64,
    pub epochs: usize,
    pub seed: u64,
    /// CFL of the single forward-Euler step inside the TVD penalty.
    pub tvd_cfl: f64,
    /// Grid size of the dissipation-penalty wavenumber sweep.
    pub adr_grid: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda_tvd: 5.0,
            lambda_diss: 200.0,
            lambda_w: 1e-8,
            batch_size: 800,
            lr0: 1e-3,
            lr_decay: 0.98,
            epochs: 500,
            seed: 7,
            tvd_cfl: 0.4,
            adr_grid: 100,
        }
    }
}

impl TrainConfig {
    /// Reference penalties for the JS base: `(80, 700)`.
    pub fn js_nn_reference() -> Self {
        TrainConfig {
            lambda_tvd: 80.0,
            lambda_diss: 700.0,
            ..TrainConfig::default()
        }
    }

    /// Reference penalties for the Z base: `(5, 200)`.
    pub fn z_nn_reference() -> Self {
        TrainConfig::default()
    }

    pub fn validate(&self, dataset_len: usize) -> Result<(), ConfigError> {
        if self.batch_size == 0 || self.batch_size > dataset_len {
            return Err(ConfigError::Train(format!(
                "batch_size {} must be in 1..={dataset_len}",
                self.batch_size
            )));
        }
        if !(self.lr0 > 0.0) {
            return Err(ConfigError::Train(format!("lr0 must be positive, got {}", self.lr0)));
        }
        if !(self.lr_decay > 0.0 && self.lr_decay <= 1.0) {
            return Err(ConfigError::Train(format!(
                "lr_decay must lie in (0, 1], got {}",
                self.lr_decay
            )));
        }
        if self.epochs == 0 {
            return Err(ConfigError::Train("epochs must be at least 1".into()));
        }
        if !(self.tvd_cfl > 0.0 && self.tvd_cfl <= 1.0) {
            return Err(ConfigError::Train(format!(
                "tvd_cfl must lie in (0, 1], got {}",
                self.tvd_cfl
            )));
        }
        if self.adr_grid < 4 || self.adr_grid % 2 != 0 {
            return Err(ConfigError::Train(format!(
                "adr_grid must be even and at least 4, got {}",
                self.adr_grid
            )));
        }
        if self.lambda_tvd < 0.0 || self.lambda_diss < 0.0 || self.lambda_w < 0.0 {
            return Err(ConfigError::Train("penalty weights must be non-negative".into()));
        }
        Ok(())
    }
}

/// Loss components of one epoch (means over its optimizer steps).
/// `w_norm_sq` is the unweighted `||W||^2`; `total` applies the lambdas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub l_r: f64,
    pub l_tvd: f64,
    pub l_diss: f64,
    pub w_norm_sq: f64,
    pub total: f64,
    pub lr: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub params: NetworkParams,
    pub history: Vec<EpochStats>,
}

/// Adam with the usual defaults (0.9, 0.999, 1e-8).
struct Adam {
    m: GradientSet,
    v: GradientSet,
    t: i32,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(shape: &MlpParams<f64>) -> Self {
        Adam {
            m: GradientSet::zeros_like(shape),
            v: GradientSet::zeros_like(shape),
            t: 0,
        }
    }

    fn step(&mut self, params: &mut MlpParams<f64>, grad: &GradientSet, lr: f64) {
        self.t += 1;
        let bc1 = 1.0 - Self::BETA1.powi(self.t);
        let bc2 = 1.0 - Self::BETA2.powi(self.t);
        let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
            *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
            *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
            *p -= lr * (*m / bc1) / ((*v / bc2).sqrt() + Self::EPS);
        };
        for l in 0..params.weights.len() {
            for i in 0..params.weights[l].len() {
                update(
                    &mut params.weights[l][i],
                    grad.weights[l][i],
                    &mut self.m.weights[l][i],
                    &mut self.v.weights[l][i],
                );
            }
            for i in 0..params.biases[l].len() {
                update(
                    &mut params.biases[l][i],
                    grad.biases[l][i],
                    &mut self.m.biases[l][i],
                    &mut self.v.biases[l][i],
                );
            }
        }
    }
}

/// Weighted total of precomputed components.
pub fn total_loss_value(l_r: f64, l_tvd: f64, l_diss: f64, w_norm_sq: f64, cfg: &TrainConfig) -> f64 {
    l_r + cfg.lambda_tvd * l_tvd + cfg.lambda_diss * l_diss + cfg.lambda_w * w_norm_sq
}

/// Evaluates the total loss of a batch without building any tape.
pub fn total_loss(
    batch: &[&TrainingSample],
    mlp: &MlpParams<f64>,
    base: &SchemeConfig,
    cfg: &TrainConfig,
) -> f64 {
    let l_r = loss_reconstruction(batch, mlp, base, DEFAULT_EPS1);
    let l_tvd = loss_tvd(batch, mlp, base, DEFAULT_EPS1, cfg.tvd_cfl);
    let l_diss = loss_dissipation(mlp, base, DEFAULT_EPS1, cfg.adr_grid);
    total_loss_value(l_r, l_tvd, l_diss, weight_norm_sq(mlp), cfg)
}

/// Adam optimization of the compensation network over shuffled mini-batches;
/// reproducible from `cfg.seed`. Aborts on a non-finite loss, carrying the
/// last finite parameter set in the error.
pub fn train(
    dataset: &[TrainingSample],
    cfg: &TrainConfig,
    base: &SchemeConfig,
) -> Result<TrainOutput, TrainError> {
    cfg.validate(dataset.len()).map_err(|e| TrainError::Config(e.to_string()))?;
    if !matches!(base.kind, SchemeKind::Js | SchemeKind::Z) {
        return Err(TrainError::Config(format!(
            "base scheme must be weno5-js or weno5-z, got {}",
            base.kind.label()
        )));
    }

    let eps1 = DEFAULT_EPS1;
    let mut mlp = MlpParams::glorot(&DEFAULT_LAYER_SIZES, cfg.seed);
    let mut adam = Adam::new(&mlp);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut indices: Vec<usize> = (0..dataset.len()).collect();

    for epoch in 0..cfg.epochs {
        let lr = cfg.lr0 * cfg.lr_decay.powi(epoch as i32);
        indices.shuffle(&mut rng);
        let mut sums = [0.0f64; 5]; // l_r, l_tvd, l_diss, w2, total
        let mut steps = 0usize;

        for chunk in indices.chunks(cfg.batch_size) {
            let batch: Vec<&TrainingSample> = chunk.iter().map(|&i| &dataset[i]).collect();
            let last_good = mlp.clone();

            let (l_r, mut grad) = losses::grad_reconstruction(&batch, &mlp, base, eps1);
            let l_tvd = if cfg.lambda_tvd > 0.0 {
                let (v, g) = losses::grad_tvd(&batch, &mlp, base, eps1, cfg.tvd_cfl);
                grad.add_scaled(&g, cfg.lambda_tvd);
                v
            } else {
                loss_tvd(&batch, &mlp, base, eps1, cfg.tvd_cfl)
            };
            let l_diss = if cfg.lambda_diss > 0.0 {
                let (v, g) = losses::grad_dissipation(&mlp, base, eps1, cfg.adr_grid);
                grad.add_scaled(&g, cfg.lambda_diss);
                v
            } else {
                loss_dissipation(&mlp, base, eps1, cfg.adr_grid)
            };
            let w2 = if cfg.lambda_w > 0.0 {
                let (v, g) = losses::grad_weight_reg(&mlp);
                grad.add_scaled(&g, cfg.lambda_w);
                v
            } else {
                weight_norm_sq(&mlp)
            };

            let total = total_loss_value(l_r, l_tvd, l_diss, w2, cfg);
            if !total.is_finite() || !grad.is_finite() {
                return Err(TrainError::NonFiniteLoss {
                    epoch,
                    step: steps,
                    loss: total,
                    last_good: Box::new(
                        NetworkParams::new(last_good, eps1)
                            .expect("previous parameters were validated"),
                    ),
                });
            }

            adam.step(&mut mlp, &grad, lr);
            for (s, v) in sums.iter_mut().zip([l_r, l_tvd, l_diss, w2, total]) {
                *s += v;
            }
            steps += 1;
        }

        let inv = 1.0 / steps as f64;
        history.push(EpochStats {
            epoch,
            l_r: sums[0] * inv,
            l_tvd: sums[1] * inv,
            l_diss: sums[2] * inv,
            w_norm_sq: sums[3] * inv,
            total: sums[4] * inv,
            lr,
        });
    }

    let params = NetworkParams::new(mlp, eps1)
        .map_err(|e| TrainError::Config(format!("trained parameters invalid: {e}")))?;
    Ok(TrainOutput { params, history })
}

/// Dataset size specification of a training run.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    #[serde(default = "default_tanh")]
    pub tanh: usize,
    #[serde(default = "default_sine")]
    pub sine: usize,
    #[serde(default = "default_poly")]
    pub poly: usize,
    #[serde(default = "default_dataset_seed")]
    pub seed: u64,
}

fn default_tanh() -> usize {
    2000
}
fn default_sine() -> usize {
    1000
}
fn default_poly() -> usize {
    1000
}
fn default_dataset_seed() -> u64 {
    2024
}

impl Default for DatasetSpec {
    fn default() -> Self {
        DatasetSpec {
            tanh: default_tanh(),
            sine: default_sine(),
            poly: default_poly(),
            seed: default_dataset_seed(),
        }
    }
}

impl DatasetSpec {
    pub fn generate(&self) -> Vec<TrainingSample> {
        generate_dataset_with(self.seed, self.tanh, self.sine, self.poly)
    }
}

/// TOML training configuration file. `base` and the two penalty weights are
/// required; everything else has the reference defaults.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainFileConfig {
    /// "JS" or "Z".
    pub base: String,
    pub lambda_tvd: f64,
    pub lambda_diss: f64,
    #[serde(default = "default_lambda_w")]
    pub lambda_w: f64,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    #[serde(default = "default_lr0")]
    pub lr0: f64,
    #[serde(default = "default_decay")]
    pub lr_decay: f64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tvd_cfl")]
    pub tvd_cfl: f64,
    #[serde(default = "default_adr_grid")]
    pub adr_grid: usize,
    #[serde(default)]
    pub dataset: DatasetSpec,
}

fn default_lambda_w() -> f64 {
    1e-8
}
fn default_batch() -> usize {
    800
}
fn default_lr0() -> f64 {
    1e-3
}
fn default_decay() -> f64 {
    0.98
}
fn default_epochs() -> usize {
    500
}
fn default_seed() -> u64 {
    7
}
fn default_tvd_cfl() -> f64 {
    0.4
}
fn default_adr_grid() -> usize {
    100
}

impl TrainFileConfig {
    pub fn parse(toml_str: &str) -> Result<Self, ConfigError> {
        toml::from_str(toml_str).map_err(|e| ConfigError::Train(e.to_string()))
    }

    /// Splits into the base scheme, optimizer configuration and dataset spec.
    pub fn resolve(&self) -> Result<(SchemeConfig, TrainConfig, DatasetSpec), ConfigError> {
        let base = match self.base.as_str() {
            "JS" => SchemeConfig::js(),
            "Z" => SchemeConfig::z(),
            other => {
                return Err(ConfigError::Train(format!(
                    "base must be \"JS\" or \"Z\", got \"{other}\""
                )))
            }
        };
        let cfg = TrainConfig {
            lambda_tvd: self.lambda_tvd,
            lambda_diss: self.lambda_diss,
            lambda_w: self.lambda_w,
            batch_size: self.batch_size,
            lr0: self.lr0,
            lr_decay: self.lr_decay,
            epochs: self.epochs,
            seed: self.seed,
            tvd_cfl: self.tvd_cfl,
            adr_grid: self.adr_grid,
        };
        Ok((base, cfg, self.dataset.clone()))
    }
}
