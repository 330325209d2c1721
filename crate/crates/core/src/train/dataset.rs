//! Training dataset: canonical 1D flux profiles sampled on a fixed grid,
//! with high-order reference interface values.
//!
//! Three families mimic the local features of conservation-law solutions:
//! steep `tanh(ax)` profiles standing in for discontinuities, sinusoids
//! `sin(b pi x + phi)` covering the learned wavenumber band, and degree-5
//! polynomials for generic smooth data. Every sample lives on `[-1, 1]`
//! with 100 cells (101 nodes); the reference interface flux comes from the
//! sliding-average expansion
//!
//! ```text
//! h = f - dx^2/24 f_xx + 7 dx^4/5760 f_xxxx + O(dx^6)
//! ```
//!
//! with the derivatives evaluated symbolically per family.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Training domain and resolution.
pub const TRAIN_DOMAIN: (f64, f64) = (-1.0, 1.0);
pub const TRAIN_NX: usize = 100;

/// Node spacing of the training grid.
pub fn train_dx() -> f64 {
    (TRAIN_DOMAIN.1 - TRAIN_DOMAIN.0) / TRAIN_NX as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFamily {
    /// `tanh(a x)`, params `[a]`.
    Tanh,
    /// `sin(b pi x + phi)`, params `[b, phi]`.
    Sine,
    /// `sum_k c_k x^k`, params `[c0, .., c5]`.
    Poly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSample {
    pub family: SampleFamily,
    pub params: Vec<f64>,
    /// Node values `f(x_i)`, `x_i = -1 + i dx`, `i = 0..=100`.
    pub grid_values: Vec<f64>,
    /// Reference interface values `h(x_{i+1/2})`, `i = 0..100`.
    pub reference_fluxes: Vec<f64>,
}

impl TrainingSample {
    pub fn reference_flux(&self, interface_index: usize) -> f64 {
        self.reference_fluxes[interface_index]
    }
}

pub fn family_value(family: SampleFamily, params: &[f64], x: f64) -> f64 {
    match family {
        SampleFamily::Tanh => (params[0] * x).tanh(),
        SampleFamily::Sine => (params[0] * std::f64::consts::PI * x + params[1]).sin(),
        SampleFamily::Poly => params.iter().rev().fold(0.0, |acc, c| acc * x + c),
    }
}

pub fn family_d2(family: SampleFamily, params: &[f64], x: f64) -> f64 {
    match family {
        SampleFamily::Tanh => {
            let a = params[0];
            let t = (a * x).tanh();
            -2.0 * a * a * t * (1.0 - t * t)
        }
        SampleFamily::Sine => {
            let w = params[0] * std::f64::consts::PI;
            -w * w * family_value(family, params, x)
        }
        SampleFamily::Poly => {
            let c = params;
            2.0 * c[2] + 6.0 * c[3] * x + 12.0 * c[4] * x * x + 20.0 * c[5] * x * x * x
        }
    }
}

pub fn family_d4(family: SampleFamily, params: &[f64], x: f64) -> f64 {
    match family {
        SampleFamily::Tanh => {
            let a = params[0];
            let t = (a * x).tanh();
            8.0 * a.powi(4) * t * (1.0 - t * t) * (2.0 - 3.0 * t * t)
        }
        SampleFamily::Sine => {
            let w = params[0] * std::f64::consts::PI;
            w.powi(4) * family_value(family, params, x)
        }
        SampleFamily::Poly => 24.0 * params[4] + 120.0 * params[5] * x,
    }
}

/// Truncated sliding-average expansion of the exact interface flux.
pub fn reference_interface_flux(family: SampleFamily, params: &[f64], x: f64, dx: f64) -> f64 {
    family_value(family, params, x) - dx * dx / 24.0 * family_d2(family, params, x)
        + 7.0 * dx.powi(4) / 5760.0 * family_d4(family, params, x)
}

fn build_sample(family: SampleFamily, params: Vec<f64>) -> TrainingSample {
    let dx = train_dx();
    let grid_values = (0..=TRAIN_NX)
        .map(|i| family_value(family, &params, TRAIN_DOMAIN.0 + i as f64 * dx))
        .collect();
    let reference_fluxes = (0..TRAIN_NX)
        .map(|i| {
            let x = TRAIN_DOMAIN.0 + (i as f64 + 0.5) * dx;
            reference_interface_flux(family, &params, x, dx)
        })
        .collect();
    TrainingSample {
        family,
        params,
        grid_values,
        reference_fluxes,
    }
}

/// Generates `n_tanh + n_sine + n_poly` samples, reproducible from `seed`.
pub fn generate_dataset_with(
    seed: u64,
    n_tanh: usize,
    n_sine: usize,
    n_poly: usize,
) -> Vec<TrainingSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n_tanh + n_sine + n_poly);
    for _ in 0..n_tanh {
        let mag = rng.random_range(50.0..100.0);
        let a = if rng.random_bool(0.5) { mag } else { -mag };
        out.push(build_sample(SampleFamily::Tanh, vec![a]));
    }
    for _ in 0..n_sine {
        let b = rng.random_range(1.0..18.0);
        let phi = rng.random_range(0.0..2.0 * std::f64::consts::PI);
        out.push(build_sample(SampleFamily::Sine, vec![b, phi]));
    }
    for _ in 0..n_poly {
        let c: Vec<f64> = (0..6)
            .map(|k| {
                let bound = 1.0 / (k as f64 + 1.0);
                rng.random_range(-bound..bound)
            })
            .collect();
        out.push(build_sample(SampleFamily::Poly, c));
    }
    out
}

/// The full dataset: 2000 tanh, 1000 sine, 1000 polynomial samples.
pub fn generate_dataset(seed: u64) -> Vec<TrainingSample> {
    generate_dataset_with(seed, 2000, 1000, 1000)
}
