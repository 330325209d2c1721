//! Time-independent approximate dispersion relation.
//!
//! For a scheme applied to the linear advection of a pure harmonic on a
//! periodic grid of `N` nodes, the modified wavenumber at reduced wavenumber
//! `phi_n = 2 pi n / N` is
//!
//! ```text
//! Phi(phi_n) = -i * delta * F[f'_j](phi_n) / (a * F[u](w_n)),
//! ```
//!
//! where `f'_j = (fhat_{j+1/2} - fhat_{j-1/2}) / delta` is the scheme's
//! discrete derivative and `F` the DFT coefficient. Nonlinear schemes are
//! applied to the real and imaginary parts `cos(w x)` and `sin(w x)`
//! separately. `Re(Phi) - phi` is the dispersion error and `Im(Phi)` the
//! dissipation (negative: damping; positive: anti-dissipation).
//!
//! The spectral error obeys the bound
//!
//! ```text
//! |Phi(phi_n) - phi_n| <= (1/a) * sqrt( (8/N) * sum_j [ (fhat - h)^2 at the
//!                         four interface/part combinations of cell j ] )
//! ```
//!
//! with `h` the exact interface function of the harmonic, i.e. the inverse
//! of the sliding average: `h(x) = (w d/2)/sin(w d/2) * e^{iwx}`.

use num_complex::Complex64;

use crate::tape::Scalar;
use crate::weno::{reconstruct_interface, SchemeConfig, Stencil5};

/// One point of a scheme's numerical spectrum.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumSample {
    /// Reduced wavenumber in `[0, pi]`.
    pub phi: f64,
    /// Modified wavenumber.
    pub modified: Complex64,
}

impl SpectrumSample {
    pub fn dispersion_err(&self) -> f64 {
        self.modified.re - self.phi
    }

    pub fn dissipation(&self) -> f64 {
        self.modified.im
    }
}

/// DFT coefficient `(1/N) sum_j samples_j e^{-i 2 pi n j / N}` by direct
/// summation; the sweeps here never exceed a few hundred nodes.
pub fn dft_coefficient(samples: &[Complex64], n: usize) -> Complex64 {
    let len = samples.len();
    assert!(2 * n <= len, "mode {n} out of range for {len} samples");
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, s) in samples.iter().enumerate() {
        let theta = -2.0 * std::f64::consts::PI * (n as f64) * (j as f64) / len as f64;
        acc += s * Complex64::new(theta.cos(), theta.sin());
    }
    acc / len as f64
}

/// Real-signal convenience wrapper around [`dft_coefficient`].
pub fn dft_coefficient_real(samples: &[f64], n: usize) -> Complex64 {
    let complex: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft_coefficient(&complex, n)
}

fn periodic_stencil(vals: &[f64], center: usize) -> Stencil5 {
    let n = vals.len();
    std::array::from_fn(|m| vals[(center + n + m - 2) % n])
}

/// Harmonic node samples `cos(2 pi n j / N)` and `sin(2 pi n j / N)`.
fn harmonic_fields(n: usize, grid_n: usize) -> (Vec<f64>, Vec<f64>) {
    let phi = 2.0 * std::f64::consts::PI * n as f64 / grid_n as f64;
    let cos: Vec<f64> = (0..grid_n).map(|j| (phi * j as f64).cos()).collect();
    let sin: Vec<f64> = (0..grid_n).map(|j| (phi * j as f64).sin()).collect();
    (cos, sin)
}

/// `(Re Phi, Im Phi)` for an arbitrary reconstruction, generic over the
/// scalar so the training loss can run the same sweep on a tape. `recon`
/// maps the upwind stencil around interface `j + 1/2` to the interface
/// value; advection speed is 1.
pub fn modified_wavenumber_parts<S, F>(mut recon: F, n: usize, grid_n: usize) -> (S, S)
where
    S: Scalar,
    F: FnMut(&Stencil5) -> S,
{
    assert!(grid_n % 2 == 0, "ADR grid must be even");
    assert!(2 * n <= grid_n, "mode {n} out of range for N = {grid_n}");
    let delta = 2.0 * std::f64::consts::PI / grid_n as f64;
    let phi = 2.0 * std::f64::consts::PI * n as f64 / grid_n as f64;
    let (cos_field, sin_field) = harmonic_fields(n, grid_n);

    let fhat_r: Vec<S> = (0..grid_n)
        .map(|j| recon(&periodic_stencil(&cos_field, j)))
        .collect();
    let fhat_i: Vec<S> = (0..grid_n)
        .map(|j| recon(&periodic_stencil(&sin_field, j)))
        .collect();

    // Phi = -i * delta * F[f'] with F[u] = 1 and a = 1. Writing the DFT
    // coefficient as X + iY gives Re Phi = delta * Y, Im Phi = -delta * X.
    let mut re_acc: Option<S> = None;
    let mut im_acc: Option<S> = None;
    for j in 0..grid_n {
        let jm = (j + grid_n - 1) % grid_n;
        let deriv_r = (fhat_r[j] - fhat_r[jm]) / delta;
        let deriv_i = (fhat_i[j] - fhat_i[jm]) / delta;
        let theta = phi * j as f64;
        let (c, s) = (theta.cos(), theta.sin());
        let re_term = deriv_i * c - deriv_r * s;
        let im_term = deriv_r * c + deriv_i * s;
        re_acc = Some(match re_acc {
            None => re_term,
            Some(a) => a + re_term,
        });
        im_acc = Some(match im_acc {
            None => im_term,
            Some(a) => a + im_term,
        });
    }
    let scale = delta / grid_n as f64;
    (
        re_acc.unwrap() * scale,
        -(im_acc.unwrap() * scale),
    )
}

/// Modified wavenumber of the configured scheme at mode `n` of an `N`-node
/// periodic grid.
pub fn modified_wavenumber(scheme: &SchemeConfig, n: usize, grid_n: usize) -> SpectrumSample {
    let (re, im) = modified_wavenumber_parts(|s| reconstruct_interface(s, scheme), n, grid_n);
    SpectrumSample {
        phi: 2.0 * std::f64::consts::PI * n as f64 / grid_n as f64,
        modified: Complex64::new(re, im),
    }
}

/// Full spectrum over `n = 0 ..= N/2`.
pub fn spectrum(scheme: &SchemeConfig, grid_n: usize) -> Vec<SpectrumSample> {
    (0..=grid_n / 2)
        .map(|n| modified_wavenumber(scheme, n, grid_n))
        .collect()
}

/// `(|Phi(phi_n) - phi_n|, bound)` where the bound aggregates the
/// reconstruction errors against the exact interface function of the
/// harmonic.
pub fn spectral_error_bound(scheme: &SchemeConfig, n: usize, grid_n: usize) -> (f64, f64) {
    let sample = modified_wavenumber(scheme, n, grid_n);
    let phi = sample.phi;
    let error = (sample.modified - Complex64::new(phi, 0.0)).norm();

    let (cos_field, sin_field) = harmonic_fields(n, grid_n);
    let fhat_r: Vec<f64> = (0..grid_n)
        .map(|j| reconstruct_interface(&periodic_stencil(&cos_field, j), scheme))
        .collect();
    let fhat_i: Vec<f64> = (0..grid_n)
        .map(|j| reconstruct_interface(&periodic_stencil(&sin_field, j), scheme))
        .collect();

    // Exact interface values from the sliding-average inverse of e^{iwx}.
    let amp = if n == 0 {
        1.0
    } else {
        (0.5 * phi) / (0.5 * phi).sin()
    };
    let h_r: Vec<f64> = (0..grid_n)
        .map(|j| amp * ((j as f64 + 0.5) * phi).cos())
        .collect();
    let h_i: Vec<f64> = (0..grid_n)
        .map(|j| amp * ((j as f64 + 0.5) * phi).sin())
        .collect();

    let mut acc = 0.0;
    for j in 0..grid_n {
        let jp = j;
        let jm = (j + grid_n - 1) % grid_n;
        acc += (fhat_r[jp] - h_r[jp]).powi(2)
            + (fhat_r[jm] - h_r[jm]).powi(2)
            + (fhat_i[jp] - h_i[jp]).powi(2)
            + (fhat_i[jm] - h_i[jm]).powi(2);
    }
    let bound = (8.0 / grid_n as f64 * acc).sqrt();
    (error, bound)
}
