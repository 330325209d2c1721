//! The four loss terms: interface reconstruction error, single-step TVD
//! penalty, anti-dissipation penalty and weight-matrix regularization.
//!
//! Every term exists in two flavors sharing one generic kernel: a plain
//! `f64` evaluation for monitoring, and a taped evaluation whose reverse
//! sweep yields parameter gradients. Batch terms are sharded per sample
//! (the dissipation term per wavenumber) and reduced in a fixed order, so
//! values and gradients are reproducible regardless of thread count.

use rayon::prelude::*;

use crate::adr::modified_wavenumber_parts;
use crate::nn::{
    self, delta_features, extract_gradients, lift_params, mlp_forward, GradientSet, MlpParams,
};
use crate::solver::total_variation;
use crate::tape::{Scalar, Tape, Var};
use crate::weno::{
    candidate_fluxes, combine, smoothness_indicators, weights_js, weights_z, SchemeConfig,
    SchemeKind, Stencil5, WeightTriple,
};

use super::dataset::{TrainingSample, TRAIN_NX};

/// Tape capacity hint: one sample touches `TRAIN_NX` stencils, each costing
/// roughly `4 * hidden^2` nodes for the default architecture.
const TAPE_HINT: usize = 600_000;

/// Base (classical) weights for the stencil; `base.kind` must not be an NN
/// kind.
pub(crate) fn base_weights(s: &Stencil5, base: &SchemeConfig) -> WeightTriple {
    match base.kind {
        SchemeKind::Linear => crate::weno::IDEAL_WEIGHTS,
        SchemeKind::Js => weights_js(&smoothness_indicators(s), base),
        SchemeKind::Z => weights_z(&smoothness_indicators(s), base),
        k => panic!("base scheme must be classical, got {}", k.label()),
    }
}

/// Interface value of the NN-compensated scheme; the stencil data stays in
/// `f64`, only the network parameters carry the scalar type.
pub fn nn_interface_value<S: Scalar>(
    s: &Stencil5,
    base: &SchemeConfig,
    mlp: &MlpParams<S>,
    eps1: f64,
) -> S {
    let w_star = base_weights(s, base);
    let feats = delta_features(s, eps1);
    let w_nn = mlp_forward(mlp, &feats);
    let w = nn::compensate_generic(w_star, w_nn);
    combine(&candidate_fluxes(s), &w)
}

fn periodic_stencil(vals: &[f64], center: usize) -> Stencil5 {
    let n = vals.len();
    std::array::from_fn(|m| vals[(center + n + m - 2) % n])
}

/// All `TRAIN_NX` periodic interface values of one sample.
fn sample_interfaces<S: Scalar>(
    sample: &TrainingSample,
    base: &SchemeConfig,
    mlp: &MlpParams<S>,
    eps1: f64,
) -> Vec<S> {
    let nodes = &sample.grid_values[..TRAIN_NX];
    (0..TRAIN_NX)
        .map(|i| nn_interface_value(&periodic_stencil(nodes, i), base, mlp, eps1))
        .collect()
}

fn sum<S: Scalar>(terms: impl IntoIterator<Item = S>) -> Option<S> {
    let mut acc: Option<S> = None;
    for t in terms {
        acc = Some(match acc {
            None => t,
            Some(a) => a + t,
        });
    }
    acc
}

/// Per-sample sum of squared interface errors (not yet averaged).
fn reconstruction_term<S: Scalar>(
    sample: &TrainingSample,
    base: &SchemeConfig,
    mlp: &MlpParams<S>,
    eps1: f64,
) -> S {
    let fhat = sample_interfaces(sample, base, mlp, eps1);
    sum(fhat.iter().enumerate().map(|(i, &f)| {
        let e = f - sample.reference_fluxes[i];
        e * e
    }))
    .expect("TRAIN_NX > 0")
}

/// Squared TVD hinge of one forward-Euler advection step of the sample.
fn tvd_term<S: Scalar>(
    sample: &TrainingSample,
    base: &SchemeConfig,
    mlp: &MlpParams<S>,
    eps1: f64,
    cfl: f64,
) -> S {
    let nodes = &sample.grid_values[..TRAIN_NX];
    let tv0 = total_variation(nodes, true);
    let fhat = sample_interfaces(sample, base, mlp, eps1);
    // Linear advection with a = 1: dt = cfl * dx, so dt/dx = cfl.
    let u_new: Vec<S> = (0..TRAIN_NX)
        .map(|i| {
            let im = (i + TRAIN_NX - 1) % TRAIN_NX;
            (fhat[i] - fhat[im]) * (-cfl) + nodes[i]
        })
        .collect();
    let tv_new = sum((0..TRAIN_NX).map(|i| {
        let ip = (i + 1) % TRAIN_NX;
        (u_new[ip] - u_new[i]).abs()
    }))
    .expect("TRAIN_NX > 0");
    let hinge = (tv_new - tv0).relu();
    hinge * hinge
}

/// Squared anti-dissipation hinge at one reduced wavenumber.
fn dissipation_term<S: Scalar>(
    base: &SchemeConfig,
    mlp: &MlpParams<S>,
    eps1: f64,
    n: usize,
    grid_n: usize,
) -> S {
    let (_, im) =
        modified_wavenumber_parts(|s| nn_interface_value(s, base, mlp, eps1), n, grid_n);
    let hinge = im.relu();
    hinge * hinge
}

/// Mean squared interface reconstruction error over the batch.
pub fn loss_reconstruction(
    batch: &[&TrainingSample],
    mlp: &MlpParams<f64>,
    base: &SchemeConfig,
    eps1: f64,
) -> f64 {
    let total: f64 = batch
        .par_iter()
        .map(|s| reconstruction_term(s, base, mlp, eps1))
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    total / (batch.len() * TRAIN_NX) as f64
}

/// Mean squared TVD violation after one forward-Euler advection step.
pub fn loss_tvd(
    batch: &[&TrainingSample],
    mlp: &MlpParams<f64>,
    base: &SchemeConfig,
    eps1: f64,
    cfl: f64,
) -> f64 {
    let total: f64 = batch
        .par_iter()
        .map(|s| tvd_term(s, base, mlp, eps1, cfl))
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    total / batch.len() as f64
}

/// Mean squared anti-dissipation over all supported wavenumbers; the n = 0
/// term vanishes identically.
pub fn loss_dissipation(
    mlp: &MlpParams<f64>,
    base: &SchemeConfig,
    eps1: f64,
    grid_n: usize,
) -> f64 {
    let total: f64 = (0..=grid_n / 2)
        .into_par_iter()
        .map(|n| dissipation_term(base, mlp, eps1, n, grid_n))
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    total / (grid_n / 2) as f64
}

/// Squared Frobenius norm of the weight matrices (biases excluded).
pub fn weight_norm_sq(mlp: &MlpParams<f64>) -> f64 {
    mlp.weights.iter().flatten().map(|w| w * w).sum()
}

/// One taped shard: builds `term` from lifted parameters, runs the reverse
/// sweep and returns `(value, gradients)`.
fn taped_shard<F>(mlp: &MlpParams<f64>, build: F) -> (f64, GradientSet)
where
    F: for<'t> FnOnce(&'t Tape, &MlpParams<Var<'t>>) -> Var<'t>,
{
    let tape = Tape::with_capacity(TAPE_HINT);
    let lifted = lift_params(&tape, mlp);
    let out = build(&tape, &lifted);
    let grads = tape.gradients(out);
    (out.value(), extract_gradients(&grads, mlp))
}

fn reduce_shards(
    shards: Vec<(f64, GradientSet)>,
    scale: f64,
    mlp: &MlpParams<f64>,
) -> (f64, GradientSet) {
    let mut grad = GradientSet::zeros_like(mlp);
    let mut value = 0.0;
    for (v, g) in &shards {
        value += v;
        grad.add_scaled(g, 1.0);
    }
    grad.scale(scale);
    (value * scale, grad)
}

pub fn grad_reconstruction(
    batch: &[&TrainingSample],
    mlp: &MlpParams<f64>,
    base: &SchemeConfig,
    eps1: f64,
) -> (f64, GradientSet) {
    let shards: Vec<_> = batch
        .par_iter()
        .map(|s| taped_shard(mlp, |_tape, p| reconstruction_term(s, base, p, eps1)))
        .collect();
    reduce_shards(shards, 1.0 / (batch.len() * TRAIN_NX) as f64, mlp)
}

pub fn grad_tvd(
    batch: &[&TrainingSample],
    mlp: &MlpParams<f64>,
    base: &SchemeConfig,
    eps1: f64,
    cfl: f64,
) -> (f64, GradientSet) {
    let shards: Vec<_> = batch
        .par_iter()
        .map(|s| taped_shard(mlp, |_tape, p| tvd_term(s, base, p, eps1, cfl)))
        .collect();
    reduce_shards(shards, 1.0 / batch.len() as f64, mlp)
}

pub fn grad_dissipation(
    mlp: &MlpParams<f64>,
    base: &SchemeConfig,
    eps1: f64,
    grid_n: usize,
) -> (f64, GradientSet) {
    let shards: Vec<_> = (0..=grid_n / 2)
        .into_par_iter()
        .map(|n| taped_shard(mlp, |_tape, p| dissipation_term(base, p, eps1, n, grid_n)))
        .collect();
    reduce_shards(shards, 1.0 / (grid_n / 2) as f64, mlp)
}

pub fn grad_weight_reg(mlp: &MlpParams<f64>) -> (f64, GradientSet) {
    taped_shard(mlp, |_tape, p| {
        sum(p.weights.iter().flatten().map(|&w| w * w)).expect("network has weights")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::DEFAULT_EPS1;
    use crate::train::dataset::{generate_dataset_with, SampleFamily};
    use approx::assert_relative_eq;

    fn tanh_sample(a: f64) -> TrainingSample {
        let dx = super::super::dataset::train_dx();
        let grid_values = (0..=TRAIN_NX).map(|i| (a * (-1.0 + i as f64 * dx)).tanh()).collect();
        let reference_fluxes = (0..TRAIN_NX)
            .map(|i| {
                super::super::dataset::reference_interface_flux(
                    SampleFamily::Tanh,
                    &[a],
                    -1.0 + (i as f64 + 0.5) * dx,
                    dx,
                )
            })
            .collect();
        TrainingSample {
            family: SampleFamily::Tanh,
            params: vec![a],
            grid_values,
            reference_fluxes,
        }
    }

    #[test]
    fn reconstruction_loss_zero_when_predicting_reference() {
        // A constant profile reconstructs exactly and its reference equals
        // the constant, so the loss vanishes.
        let sample = TrainingSample {
            family: SampleFamily::Poly,
            params: vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
            grid_values: vec![0.5; TRAIN_NX + 1],
            reference_fluxes: vec![0.5; TRAIN_NX],
        };
        let mlp = MlpParams::zeros(&[4, 8, 3]);
        let l = loss_reconstruction(&[&sample], &mlp, &SchemeConfig::z(), DEFAULT_EPS1);
        assert!(l < 1e-28, "loss = {l}");
    }

    #[test]
    fn reconstruction_loss_is_mean_of_squares() {
        // Shift every reference by 0.1: all interface errors are 0.1 up to
        // the scheme's own (tiny, smooth-data) reconstruction error.
        let mut sample = TrainingSample {
            family: SampleFamily::Poly,
            params: vec![0.25, 0.0, 0.0, 0.0, 0.0, 0.0],
            grid_values: vec![0.25; TRAIN_NX + 1],
            reference_fluxes: vec![0.25; TRAIN_NX],
        };
        for r in sample.reference_fluxes.iter_mut() {
            *r += 0.1;
        }
        let mlp = MlpParams::zeros(&[4, 8, 3]);
        let l = loss_reconstruction(&[&sample], &mlp, &SchemeConfig::z(), DEFAULT_EPS1);
        assert_relative_eq!(l, 0.01, max_relative = 1e-12);

        // Duplicating every sample leaves the mean unchanged.
        let l2 = loss_reconstruction(&[&sample, &sample], &mlp, &SchemeConfig::z(), DEFAULT_EPS1);
        assert_relative_eq!(l2, l, max_relative = 1e-15);
    }

    #[test]
    fn tvd_loss_zero_on_constant_sample() {
        let sample = TrainingSample {
            family: SampleFamily::Poly,
            params: vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            grid_values: vec![1.0; TRAIN_NX + 1],
            reference_fluxes: vec![1.0; TRAIN_NX],
        };
        let mlp = MlpParams::zeros(&[4, 8, 3]);
        let l = loss_tvd(&[&sample], &mlp, &SchemeConfig::z(), DEFAULT_EPS1, 0.4);
        assert_eq!(l, 0.0);
    }

    #[test]
    fn tvd_loss_zero_network_matches_classical_pipeline() {
        // The zero network reduces the NN pipeline to the classical scheme
        // (up to one renormalization round-off); assert the TVD penalty
        // matches a classical-scheme evaluation of the same step.
        let sample = tanh_sample(80.0);
        let mlp = MlpParams::zeros(&[4, 30, 30, 30, 3]);
        let base = SchemeConfig::z();
        let nn_value = loss_tvd(&[&sample], &mlp, &base, DEFAULT_EPS1, 0.4);

        let nodes = &sample.grid_values[..TRAIN_NX];
        let tv0 = total_variation(nodes, true);
        let fhat: Vec<f64> = (0..TRAIN_NX)
            .map(|i| {
                crate::weno::reconstruct_interface(&periodic_stencil(nodes, i), &base)
            })
            .collect();
        let u_new: Vec<f64> = (0..TRAIN_NX)
            .map(|i| {
                let im = (i + TRAIN_NX - 1) % TRAIN_NX;
                nodes[i] - 0.4 * (fhat[i] - fhat[im])
            })
            .collect();
        let classical = (total_variation(&u_new, true) - tv0).max(0.0).powi(2);
        assert_relative_eq!(nn_value, classical, max_relative = 1e-10, epsilon = 1e-14);
    }

    #[test]
    fn dissipation_loss_zero_for_upwind_base() {
        // The ideal-weight scheme has Im Phi <= 0 at every wavenumber, so
        // the hinge never activates.
        let mlp = MlpParams::zeros(&[4, 8, 3]);
        let l = loss_dissipation(&mlp, &SchemeConfig::linear(), DEFAULT_EPS1, 64);
        assert_eq!(l, 0.0);
    }

    #[test]
    fn value_and_taped_paths_agree() {
        let data = generate_dataset_with(5, 4, 3, 3);
        let batch: Vec<&TrainingSample> = data.iter().collect();
        let mlp = MlpParams::glorot(&[4, 10, 3], 3);
        let base = SchemeConfig::z();

        let v = loss_reconstruction(&batch, &mlp, &base, DEFAULT_EPS1);
        let (gv, _) = grad_reconstruction(&batch, &mlp, &base, DEFAULT_EPS1);
        assert_relative_eq!(v, gv, max_relative = 1e-12);

        let v = loss_tvd(&batch, &mlp, &base, DEFAULT_EPS1, 0.4);
        let (gv, _) = grad_tvd(&batch, &mlp, &base, DEFAULT_EPS1, 0.4);
        assert_relative_eq!(v, gv, max_relative = 1e-12, epsilon = 1e-15);

        let v = loss_dissipation(&mlp, &base, DEFAULT_EPS1, 32);
        let (gv, _) = grad_dissipation(&mlp, &base, DEFAULT_EPS1, 32);
        assert_relative_eq!(v, gv, max_relative = 1e-12, epsilon = 1e-15);

        let v = weight_norm_sq(&mlp);
        let (gv, g) = grad_weight_reg(&mlp);
        assert_relative_eq!(v, gv, max_relative = 1e-13);
        for l in 0..mlp.weights.len() {
            for (gw, w) in g.weights[l].iter().zip(&mlp.weights[l]) {
                assert_relative_eq!(*gw, 2.0 * w, max_relative = 1e-13);
            }
            assert!(g.biases[l].iter().all(|&b| b == 0.0));
        }
    }

    /// Central-difference check of one loss gradient on random coordinates.
    fn check_gradient<VF, GF>(mlp: &MlpParams<f64>, value: VF, grad: GF, n_coords: usize, seed: u64)
    where
        VF: Fn(&MlpParams<f64>) -> f64,
        GF: Fn(&MlpParams<f64>) -> (f64, GradientSet),
    {
        use rand::{Rng, SeedableRng};
        let (_, g) = grad(mlp);
        let h = 1e-6;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..n_coords {
            let l = rng.random_range(0..mlp.weights.len());
            let in_w = rng.random_bool(0.8);
            let idx = if in_w {
                rng.random_range(0..mlp.weights[l].len())
            } else {
                rng.random_range(0..mlp.biases[l].len())
            };
            let mut lo = mlp.clone();
            let mut hi = mlp.clone();
            let (slot_lo, slot_hi) = if in_w {
                (&mut lo.weights[l][idx], &mut hi.weights[l][idx])
            } else {
                (&mut lo.biases[l][idx], &mut hi.biases[l][idx])
            };
            *slot_lo -= h;
            *slot_hi += h;
            let fd = (value(&hi) - value(&lo)) / (2.0 * h);
            let ad = if in_w { g.weights[l][idx] } else { g.biases[l][idx] };
            let denom = ad.abs().max(fd.abs());
            assert!(
                (ad - fd).abs() <= 1e-4 * denom.max(1e-8),
                "layer {l} idx {idx} (weights: {in_w}): ad {ad} vs fd {fd}"
            );
        }
    }

    #[test]
    fn loss_gradients_match_finite_differences() {
        let data = generate_dataset_with(11, 3, 3, 2);
        let batch: Vec<&TrainingSample> = data.iter().collect();
        let mlp = MlpParams::glorot(&[4, 8, 3], 19);
        let base = SchemeConfig::z();
        let eps1 = DEFAULT_EPS1;

        check_gradient(
            &mlp,
            |p| loss_reconstruction(&batch, p, &base, eps1),
            |p| grad_reconstruction(&batch, p, &base, eps1),
            30,
            100,
        );
        check_gradient(
            &mlp,
            |p| loss_tvd(&batch, p, &base, eps1, 0.4),
            |p| grad_tvd(&batch, p, &base, eps1, 0.4),
            30,
            101,
        );
        check_gradient(
            &mlp,
            |p| loss_dissipation(p, &base, eps1, 32),
            |p| grad_dissipation(p, &base, eps1, 32),
            30,
            102,
        );
        check_gradient(
            &mlp,
            weight_norm_sq,
            |p| grad_weight_reg(p),
            30,
            103,
        );
    }
}
