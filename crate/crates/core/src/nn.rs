//! Learned weight compensation: Delta-layer features, MLP forward pass,
//! clip-and-renormalize, parameter gradients and checkpoint serialization.
//!
//! The network maps the four normalized jumps of a five-point stencil to a
//! compensation triple added to the base JS/Z weights:
//!
//! ```text
//! D~_j = |f_{i-2+j} - f_{i-3+j}|,   D_j = D~_j / max(max_j D~_j, eps1)
//! w~_k = relu(w*_k + wNN_k),        w_k = w~_k / sum_l w~_l
//! ```
//!
//! Hidden layers use ReLU, the output layer is affine. Gradients are
//! reverse-mode over the [`crate::tape`] module; inference stays in plain
//! `f64` and never allocates a tape.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::NnError;
use crate::tape::{Scalar, Tape, Var};
use crate::weno::{Stencil5, WeightTriple};

/// Default Delta-layer denominator floor.
pub const DEFAULT_EPS1: f64 = 1e-30;
/// Default architecture: 4 inputs, three hidden layers of 30, 3 outputs.
pub const DEFAULT_LAYER_SIZES: [usize; 5] = [4, 30, 30, 30, 3];

/// MLP weights and biases, generic over the scalar so the same forward pass
/// serves `f64` inference and taped training.
///
/// `weights[l]` is row-major `layer_sizes[l+1] x layer_sizes[l]`.
#[derive(Debug, Clone)]
pub struct MlpParams<S> {
    pub layer_sizes: Vec<usize>,
    pub weights: Vec<Vec<S>>,
    pub biases: Vec<Vec<S>>,
}

impl MlpParams<f64> {
    pub fn zeros(layer_sizes: &[usize]) -> Self {
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for l in 0..layer_sizes.len() - 1 {
            weights.push(vec![0.0; layer_sizes[l + 1] * layer_sizes[l]]);
            biases.push(vec![0.0; layer_sizes[l + 1]]);
        }
        MlpParams {
            layer_sizes: layer_sizes.to_vec(),
            weights,
            biases,
        }
    }

    /// Glorot-uniform weights, zero biases, reproducible from `seed`.
    pub fn glorot(layer_sizes: &[usize], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = MlpParams::zeros(layer_sizes);
        for l in 0..layer_sizes.len() - 1 {
            let bound = (6.0 / (layer_sizes[l] + layer_sizes[l + 1]) as f64).sqrt();
            for w in p.weights[l].iter_mut() {
                *w = rng.random_range(-bound..bound);
            }
        }
        p
    }

    pub fn n_params(&self) -> usize {
        self.weights.iter().map(Vec::len).sum::<usize>()
            + self.biases.iter().map(Vec::len).sum::<usize>()
    }

    fn validate(&self) -> Result<(), NnError> {
        if self.layer_sizes.len() < 2 {
            return Err(NnError::TooFewLayers);
        }
        let n_in = self.layer_sizes[0];
        let n_out = *self.layer_sizes.last().unwrap();
        if n_in != 4 || n_out != 3 {
            return Err(NnError::BadEndpoints {
                found: n_in,
                out: n_out,
            });
        }
        let n_layers = self.layer_sizes.len() - 1;
        if self.weights.len() != n_layers || self.biases.len() != n_layers {
            return Err(NnError::ShapeMismatch {
                layer: self.weights.len().min(self.biases.len()),
                rows: 0,
                cols: 0,
                want_rows: self.layer_sizes.get(1).copied().unwrap_or(0),
                want_cols: self.layer_sizes[0],
            });
        }
        for l in 0..n_layers {
            let (rows, cols) = (self.layer_sizes[l + 1], self.layer_sizes[l]);
            if self.weights[l].len() != rows * cols || self.biases[l].len() != rows {
                return Err(NnError::ShapeMismatch {
                    layer: l,
                    rows: self.weights[l].len() / cols.max(1),
                    cols,
                    want_rows: rows,
                    want_cols: cols,
                });
            }
            if self.weights[l].iter().chain(&self.biases[l]).any(|v| !v.is_finite()) {
                return Err(NnError::NonFinite { layer: l });
            }
        }
        Ok(())
    }
}

/// Validated, immutable network parameters with a content checksum.
#[derive(Debug, Clone)]
pub struct NetworkParams {
    mlp: MlpParams<f64>,
    eps1: f64,
    theta_id: String,
}

impl NetworkParams {
    /// Shape and finiteness are checked here, not at call time.
    pub fn new(mlp: MlpParams<f64>, eps1: f64) -> Result<Self, NnError> {
        mlp.validate()?;
        if !(eps1 > 0.0) {
            return Err(NnError::Invalid(format!("eps1 must be positive, got {eps1}")));
        }
        let theta_id = checksum(&mlp);
        Ok(NetworkParams {
            mlp,
            eps1,
            theta_id,
        })
    }

    pub fn zeros(layer_sizes: &[usize]) -> Self {
        NetworkParams::new(MlpParams::zeros(layer_sizes), DEFAULT_EPS1)
            .expect("zero network of a valid architecture")
    }

    pub fn glorot(layer_sizes: &[usize], seed: u64) -> Self {
        NetworkParams::new(MlpParams::glorot(layer_sizes, seed), DEFAULT_EPS1)
            .expect("random network of a valid architecture")
    }

    pub fn mlp(&self) -> &MlpParams<f64> {
        &self.mlp
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn theta_id(&self) -> &str {
        &self.theta_id
    }

    pub fn forward(&self, features: &[f64; 4]) -> [f64; 3] {
        mlp_forward(&self.mlp, features)
    }
}

fn checksum(mlp: &MlpParams<f64>) -> String {
    let mut h = Sha256::new();
    for &s in &mlp.layer_sizes {
        h.update((s as u64).to_le_bytes());
    }
    for l in 0..mlp.weights.len() {
        for v in mlp.weights[l].iter().chain(&mlp.biases[l]) {
            h.update(v.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

/// Delta-layer features: absolute consecutive jumps normalized by the
/// largest jump (floored at `eps1`), so `0 <= D_j <= 1` and the features are
/// invariant under positive scaling of the stencil.
pub fn delta_features(s: &Stencil5, eps1: f64) -> [f64; 4] {
    let raw = [
        (s[1] - s[0]).abs(),
        (s[2] - s[1]).abs(),
        (s[3] - s[2]).abs(),
        (s[4] - s[3]).abs(),
    ];
    let denom = raw.iter().fold(eps1, |a, &b| a.max(b));
    [
        raw[0] / denom,
        raw[1] / denom,
        raw[2] / denom,
        raw[3] / denom,
    ]
}

/// Forward pass: affine + ReLU hidden layers, affine identity output.
pub fn mlp_forward<S: Scalar>(p: &MlpParams<S>, x: &[f64; 4]) -> [S; 3] {
    let n_layers = p.weights.len();
    debug_assert_eq!(p.layer_sizes[0], 4);
    debug_assert_eq!(*p.layer_sizes.last().unwrap(), 3);

    // First layer reads the plain-f64 feature vector.
    let mut hidden: Vec<S> = {
        let rows = p.layer_sizes[1];
        (0..rows)
            .map(|r| {
                let row = &p.weights[0][r * 4..(r + 1) * 4];
                let mut acc = row[0] * x[0];
                for c in 1..4 {
                    acc = acc + row[c] * x[c];
                }
                acc + p.biases[0][r]
            })
            .collect()
    };
    if n_layers > 1 {
        for h in hidden.iter_mut() {
            *h = h.relu();
        }
    }

    for l in 1..n_layers {
        let (rows, cols) = (p.layer_sizes[l + 1], p.layer_sizes[l]);
        let mut next: Vec<S> = Vec::with_capacity(rows);
        for r in 0..rows {
            let row = &p.weights[l][r * cols..(r + 1) * cols];
            let mut acc = row[0] * hidden[0];
            for c in 1..cols {
                acc = acc + row[c] * hidden[c];
            }
            next.push(acc + p.biases[l][r]);
        }
        if l + 1 < n_layers {
            for h in next.iter_mut() {
                *h = h.relu();
            }
        }
        hidden = next;
    }
    [hidden[0], hidden[1], hidden[2]]
}

/// Clip-and-renormalize used inside the training graph: no special cases
/// besides the zero-sum fallback, which freezes the weights at the base
/// triple (zero gradient there by construction).
pub fn compensate_generic<S: Scalar>(w_star: WeightTriple, w_nn: [S; 3]) -> [S; 3] {
    let t0 = (w_nn[0] + w_star[0]).relu();
    let t1 = (w_nn[1] + w_star[1]).relu();
    let t2 = (w_nn[2] + w_star[2]).relu();
    let sum = t0 + t1 + t2;
    if sum.value() <= 0.0 {
        return [
            sum.lift(w_star[0]),
            sum.lift(w_star[1]),
            sum.lift(w_star[2]),
        ];
    }
    [t0 / sum, t1 / sum, t2 / sum]
}

/// Inference-path compensation. A compensation of exactly zero returns the
/// base weights bit-for-bit, which is the exact-arithmetic value of the
/// clip-and-renormalize map and keeps zero-network NN schemes identical to
/// their classical bases.
pub fn compensate_and_normalize(w_star: WeightTriple, w_nn: [f64; 3]) -> WeightTriple {
    if w_nn == [0.0; 3] {
        return w_star;
    }
    compensate_generic(w_star, w_nn)
}

/// Per-parameter gradients, shaped like the network they came from.
#[derive(Debug, Clone)]
pub struct GradientSet {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl GradientSet {
    pub fn zeros_like(p: &MlpParams<f64>) -> Self {
        GradientSet {
            weights: p.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            biases: p.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &GradientSet, scale: f64) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += scale * y;
            }
        }
        for (a, b) in self.biases.iter_mut().zip(&other.biases) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += scale * y;
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for w in self.weights.iter_mut().flatten() {
            *w *= s;
        }
        for b in self.biases.iter_mut().flatten() {
            *b *= s;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.weights
            .iter()
            .flatten()
            .chain(self.biases.iter().flatten())
            .all(|v| v.is_finite())
    }
}

/// Lifts parameters onto a tape as leaves, in canonical order (per layer:
/// all weights row-major, then all biases). [`extract_gradients`] relies on
/// the same order.
pub fn lift_params<'t>(tape: &'t Tape, p: &MlpParams<f64>) -> MlpParams<Var<'t>> {
    let mut weights = Vec::with_capacity(p.weights.len());
    let mut biases = Vec::with_capacity(p.biases.len());
    for l in 0..p.weights.len() {
        weights.push(p.weights[l].iter().map(|&v| tape.var(v)).collect());
        biases.push(p.biases[l].iter().map(|&v| tape.var(v)).collect());
    }
    MlpParams {
        layer_sizes: p.layer_sizes.clone(),
        weights,
        biases,
    }
}

/// Reads the leaf gradients of parameters lifted by [`lift_params`] back
/// into network shape.
pub fn extract_gradients(grads: &[f64], shape: &MlpParams<f64>) -> GradientSet {
    let mut out = GradientSet::zeros_like(shape);
    let mut k = 0;
    for l in 0..shape.weights.len() {
        for g in out.weights[l].iter_mut() {
            *g = grads[k];
            k += 1;
        }
        for g in out.biases[l].iter_mut() {
            *g = grads[k];
            k += 1;
        }
    }
    out
}

/// Reverse-mode gradient of `loss(params)`. The closure builds the loss on
/// the provided tape from the lifted parameters; a non-finite loss is an
/// error carrying the offending value.
pub fn gradient<F>(params: &MlpParams<f64>, loss: F) -> Result<(f64, GradientSet), NnError>
where
    F: for<'t> FnOnce(&'t Tape, &MlpParams<Var<'t>>) -> Var<'t>,
{
    let tape = Tape::new();
    let lifted = lift_params(&tape, params);
    let out = loss(&tape, &lifted);
    let value = out.value();
    if !value.is_finite() {
        return Err(NnError::Invalid(format!("non-finite loss value {value}")));
    }
    let grads = tape.gradients(out);
    Ok((value, extract_gradients(&grads, params)))
}

/// On-disk checkpoint. JSON with shortest round-trip float formatting, so
/// parameters survive save/load at full double precision.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema_version: u32,
    /// "JS" or "Z".
    pub base_scheme: String,
    pub layer_sizes: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub eps1: f64,
    pub training_config_digest: String,
    pub theta_id: String,
}

pub const CHECKPOINT_SCHEMA_VERSION: u32 = 1;

impl Checkpoint {
    pub fn from_params(
        params: &NetworkParams,
        base: crate::weno::SchemeKind,
        training_config_digest: &str,
    ) -> Self {
        let base_scheme = match base.base() {
            crate::weno::SchemeKind::Js => "JS",
            crate::weno::SchemeKind::Z => "Z",
            other => panic!("checkpoint base must be JS or Z, got {}", other.label()),
        };
        Checkpoint {
            schema_version: CHECKPOINT_SCHEMA_VERSION,
            base_scheme: base_scheme.to_string(),
            layer_sizes: params.mlp.layer_sizes.clone(),
            weights: params.mlp.weights.clone(),
            biases: params.mlp.biases.clone(),
            eps1: params.eps1,
            training_config_digest: training_config_digest.to_string(),
            theta_id: params.theta_id.clone(),
        }
    }

    /// Validates shapes and the stored checksum, returning the parameters
    /// and the base scheme they were trained against.
    pub fn into_params(self) -> Result<(NetworkParams, crate::weno::SchemeKind), NnError> {
        if self.schema_version != CHECKPOINT_SCHEMA_VERSION {
            return Err(NnError::Invalid(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let base = match self.base_scheme.as_str() {
            "JS" => crate::weno::SchemeKind::Js,
            "Z" => crate::weno::SchemeKind::Z,
            other => {
                return Err(NnError::Invalid(format!(
                    "base_scheme must be JS or Z, got '{other}'"
                )))
            }
        };
        let mlp = MlpParams {
            layer_sizes: self.layer_sizes,
            weights: self.weights,
            biases: self.biases,
        };
        let params = NetworkParams::new(mlp, self.eps1)?;
        if params.theta_id != self.theta_id {
            return Err(NnError::Invalid(format!(
                "checksum mismatch: stored {}, recomputed {}",
                self.theta_id, params.theta_id
            )));
        }
        Ok((params, base))
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), NnError> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self, NnError> {
        let json = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&json)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn delta_feature_examples() {
        assert_eq!(delta_features(&[1.0; 5], DEFAULT_EPS1), [0.0; 4]);
        assert_eq!(
            delta_features(&[0.0, 0.0, 0.0, 1.0, 1.0], DEFAULT_EPS1),
            [0.0, 0.0, 1.0, 0.0]
        );
        assert_eq!(
            delta_features(&[0.0, 2.0, 4.0, 6.0, 8.0], DEFAULT_EPS1),
            [1.0; 4]
        );
    }

    #[test]
    fn delta_features_scale_invariant() {
        let s = [0.3, -0.2, 0.9, 1.4, -0.8];
        let base = delta_features(&s, DEFAULT_EPS1);
        for lambda in [1e-6, 1e6] {
            let scaled: Stencil5 = std::array::from_fn(|i| lambda * s[i]);
            let d = delta_features(&scaled, DEFAULT_EPS1);
            for j in 0..4 {
                assert_relative_eq!(d[j], base[j], max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn forward_zero_network_and_bias_passthrough() {
        let zero = MlpParams::zeros(&[4, 30, 30, 30, 3]);
        assert_eq!(mlp_forward(&zero, &[0.3, 0.1, 0.9, 0.0]), [0.0; 3]);

        let mut single = MlpParams::zeros(&[4, 3]);
        single.biases[0] = vec![0.1, -0.2, 0.3];
        let out = mlp_forward(&single, &[7.0, -2.0, 0.0, 1.0]);
        assert_eq!(out, [0.1, -0.2, 0.3]);
    }

    #[test]
    fn forward_hand_built_network() {
        // 4 -> 1 -> 3: hidden pre-activation 0.5, ReLU keeps it, output 2*0.5.
        let mut p = MlpParams::zeros(&[4, 1, 3]);
        p.weights[0] = vec![1.0, 1.0, 1.0, 1.0];
        p.biases[0] = vec![-0.5];
        p.weights[1] = vec![2.0, 0.0, 0.0];
        let out = mlp_forward(&p, &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(out, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn compensate_examples() {
        let w = compensate_and_normalize([0.1, 0.6, 0.3], [0.0, 0.0, 0.0]);
        assert_eq!(w, [0.1, 0.6, 0.3]);

        let w = compensate_and_normalize([0.1, 0.6, 0.3], [-0.2, 0.0, 0.0]);
        assert_relative_eq!(w[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(w[1], 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(w[2], 1.0 / 3.0, max_relative = 1e-14);

        // All clipped: fall back to the base triple.
        let w = compensate_and_normalize([0.1, 0.6, 0.3], [-1.0, -1.0, -1.0]);
        assert_eq!(w, [0.1, 0.6, 0.3]);
    }

    #[test]
    fn compensate_output_is_valid_triple() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let w_nn = [
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            ];
            let w = compensate_and_normalize([0.1, 0.6, 0.3], w_nn);
            assert!((w[0] + w[1] + w[2] - 1.0).abs() <= 1e-12);
            assert!(w.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        let mut p = MlpParams::zeros(&[4, 8, 3]);
        p.weights[1].pop();
        assert!(matches!(
            NetworkParams::new(p, DEFAULT_EPS1),
            Err(NnError::ShapeMismatch { layer: 1, .. })
        ));

        let p = MlpParams::zeros(&[5, 8, 3]);
        assert!(matches!(
            NetworkParams::new(p, DEFAULT_EPS1),
            Err(NnError::BadEndpoints { .. })
        ));

        let mut p = MlpParams::zeros(&[4, 8, 3]);
        p.weights[0][0] = f64::NAN;
        assert!(matches!(
            NetworkParams::new(p, DEFAULT_EPS1),
            Err(NnError::NonFinite { layer: 0 })
        ));
    }

    fn quadratic_loss<'t>(_tape: &'t Tape, p: &MlpParams<Var<'t>>) -> Var<'t> {
        let mut it = p.weights.iter().flatten().chain(p.biases.iter().flatten());
        let first = *it.next().unwrap();
        let mut acc = first * first;
        for &v in it {
            acc = acc + v * v;
        }
        acc
    }

    #[test]
    fn gradient_of_quadratic_is_two_params() {
        let p = MlpParams::glorot(&[4, 8, 3], 3);
        let (val, g) = gradient(&p, quadratic_loss).unwrap();
        let expect: f64 = p
            .weights
            .iter()
            .flatten()
            .chain(p.biases.iter().flatten())
            .map(|v| v * v)
            .sum();
        assert_relative_eq!(val, expect, max_relative = 1e-13);
        for l in 0..p.weights.len() {
            for (gw, w) in g.weights[l].iter().zip(&p.weights[l]) {
                assert_relative_eq!(*gw, 2.0 * w, max_relative = 1e-13);
            }
            for (gb, b) in g.biases[l].iter().zip(&p.biases[l]) {
                assert_relative_eq!(*gb, 2.0 * b, max_relative = 1e-13, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let p = MlpParams::glorot(&[4, 8, 3], 5);
        let (val, g) = gradient(&p, |tape, _| tape.var(4.25)).unwrap();
        assert_eq!(val, 4.25);
        assert!(g
            .weights
            .iter()
            .flatten()
            .chain(g.biases.iter().flatten())
            .all(|&v| v == 0.0));
    }

    #[test]
    fn forward_gradient_matches_finite_differences() {
        // Loss: sum of squared compensated weights over a few stencils,
        // exercising the full feature -> MLP -> normalize chain.
        let stencils: [Stencil5; 3] = [
            [0.0, 0.1, 0.9, 1.0, 1.1],
            [1.0, 0.5, 0.2, 0.3, 0.9],
            [-1.0, -0.5, 0.0, 0.5, 1.0],
        ];
        let w_star = [0.1, 0.6, 0.3];
        let loss_f64 = |p: &MlpParams<f64>| -> f64 {
            stencils
                .iter()
                .map(|s| {
                    let feats = delta_features(s, DEFAULT_EPS1);
                    let w = compensate_generic(w_star, mlp_forward(p, &feats));
                    w[0] * w[0] + 2.0 * w[1] * w[1] + 3.0 * w[2] * w[2]
                })
                .sum()
        };

        let p = MlpParams::glorot(&[4, 8, 3], 17);
        let (val, g) = gradient(&p, |_tape, lp| {
            let mut acc: Option<Var<'_>> = None;
            for s in &stencils {
                let feats = delta_features(s, DEFAULT_EPS1);
                let w = compensate_generic(w_star, mlp_forward(lp, &feats));
                let term = w[0] * w[0] + w[1] * w[1] * 2.0 + w[2] * w[2] * 3.0;
                acc = Some(match acc {
                    None => term,
                    Some(a) => a + term,
                });
            }
            acc.unwrap()
        })
        .unwrap();
        assert_relative_eq!(val, loss_f64(&p), max_relative = 1e-12);

        let h = 1e-6;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let l = rng.random_range(0..p.weights.len());
            let in_weights = rng.random_bool(0.7);
            let idx = if in_weights {
                rng.random_range(0..p.weights[l].len())
            } else {
                rng.random_range(0..p.biases[l].len())
            };
            let mut lo = p.clone();
            let mut hi = p.clone();
            if in_weights {
                lo.weights[l][idx] -= h;
                hi.weights[l][idx] += h;
            } else {
                lo.biases[l][idx] -= h;
                hi.biases[l][idx] += h;
            }
            let fdg = (loss_f64(&hi) - loss_f64(&lo)) / (2.0 * h);
            let adg = if in_weights {
                g.weights[l][idx]
            } else {
                g.biases[l][idx]
            };
            let denom = adg.abs().max(fdg.abs());
            assert!(
                (adg - fdg).abs() <= 1e-4 * denom.max(1e-8),
                "layer {l} idx {idx}: ad {adg} vs fd {fdg}"
            );
        }
    }

    #[test]
    fn checkpoint_round_trips_bitwise() {
        let params = NetworkParams::glorot(&[4, 30, 30, 30, 3], 99);
        let ckpt = Checkpoint::from_params(&params, crate::weno::SchemeKind::Z, "digest");
        let json = serde_json::to_string(&ckpt).unwrap();
        let back: Checkpoint = serde_json::from_str(&json).unwrap();
        let (restored, base) = back.into_params().unwrap();
        assert_eq!(base, crate::weno::SchemeKind::Z);
        assert_eq!(restored.theta_id(), params.theta_id());
        for l in 0..params.mlp.weights.len() {
            for (a, b) in restored.mlp.weights[l].iter().zip(&params.mlp.weights[l]) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn checkpoint_rejects_tampering() {
        let params = NetworkParams::glorot(&[4, 8, 3], 7);
        let mut ckpt = Checkpoint::from_params(&params, crate::weno::SchemeKind::Js, "d");
        ckpt.weights[0][0] += 1.0;
        assert!(matches!(ckpt.into_params(), Err(NnError::Invalid(_))));
    }
}
