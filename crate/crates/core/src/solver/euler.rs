//! Euler-equation kernels: physical fluxes, global Lax-Friedrichs splitting,
//! Roe averages and the characteristic decomposition used by the
//! finite-difference reconstruction.
//!
//! Conserved variables are `(rho, rho u, E)` in 1D and
//! `(rho, rho u, rho v, E)` in 2D with `E = p/(gamma-1) + rho |vel|^2 / 2`.

use crate::weno::{reconstruct_interface, SchemeConfig, Stencil5};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

pub fn pressure_1d(u: &[f64; 3], gamma: f64) -> f64 {
    (gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0])
}

pub fn pressure_2d(u: &[f64; 4], gamma: f64) -> f64 {
    (gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
}

pub fn sound_speed(rho: f64, p: f64, gamma: f64) -> f64 {
    (gamma * p / rho).sqrt()
}

pub fn flux_1d(u: &[f64; 3], gamma: f64) -> [f64; 3] {
    let vel = u[1] / u[0];
    let p = pressure_1d(u, gamma);
    [u[1], u[1] * vel + p, vel * (u[2] + p)]
}

pub fn flux_2d(u: &[f64; 4], gamma: f64, axis: Axis) -> [f64; 4] {
    let p = pressure_2d(u, gamma);
    match axis {
        Axis::X => {
            let vel = u[1] / u[0];
            [u[1], u[1] * vel + p, u[2] * vel, vel * (u[3] + p)]
        }
        Axis::Y => {
            let vel = u[2] / u[0];
            [u[2], u[1] * vel, u[2] * vel + p, vel * (u[3] + p)]
        }
    }
}

/// Global Lax-Friedrichs splitting `f± = (f ± alpha u) / 2`; the parts sum
/// back to `f` and are purely one-signed when `alpha` bounds the wave speed.
pub fn lf_split(f: f64, u: f64, alpha: f64) -> (f64, f64) {
    (0.5 * (f + alpha * u), 0.5 * (f - alpha * u))
}

/// Square-root-density averaged primitives at an interface.
#[derive(Debug, Clone, Copy)]
pub struct Roe1D {
    pub rho: f64,
    pub u: f64,
    pub h: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Roe2D {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub h: f64,
    pub c: f64,
}

/// Roe average of two admissible states; `None` when the averaged sound
/// speed is not real.
pub fn roe_average_1d(l: &[f64; 3], r: &[f64; 3], gamma: f64) -> Option<Roe1D> {
    let (sl, sr) = (l[0].sqrt(), r[0].sqrt());
    let wl = sl / (sl + sr);
    let wr = 1.0 - wl;
    let (ul, ur) = (l[1] / l[0], r[1] / r[0]);
    let hl = (l[2] + pressure_1d(l, gamma)) / l[0];
    let hr = (r[2] + pressure_1d(r, gamma)) / r[0];
    let u = wl * ul + wr * ur;
    let h = wl * hl + wr * hr;
    let c2 = (gamma - 1.0) * (h - 0.5 * u * u);
    if !(c2 > 0.0) {
        return None;
    }
    Some(Roe1D {
        rho: sl * sr,
        u,
        h,
        c: c2.sqrt(),
    })
}

pub fn roe_average_2d(l: &[f64; 4], r: &[f64; 4], gamma: f64) -> Option<Roe2D> {
    let (sl, sr) = (l[0].sqrt(), r[0].sqrt());
    let wl = sl / (sl + sr);
    let wr = 1.0 - wl;
    let (ul, ur) = (l[1] / l[0], r[1] / r[0]);
    let (vl, vr) = (l[2] / l[0], r[2] / r[0]);
    let hl = (l[3] + pressure_2d(l, gamma)) / l[0];
    let hr = (r[3] + pressure_2d(r, gamma)) / r[0];
    let u = wl * ul + wr * ur;
    let v = wl * vl + wr * vr;
    let h = wl * hl + wr * hr;
    let c2 = (gamma - 1.0) * (h - 0.5 * (u * u + v * v));
    if !(c2 > 0.0) {
        return None;
    }
    Some(Roe2D {
        rho: sl * sr,
        u,
        v,
        h,
        c: c2.sqrt(),
    })
}

/// Eigenvalues and left/right eigenvector matrices of the flux Jacobian at
/// an averaged state; `left * right = I` and
/// `right * diag(lambda) * left = dF/dU`.
#[derive(Debug, Clone)]
pub struct Eigen<const N: usize> {
    pub lambda: [f64; N],
    pub right: [[f64; N]; N],
    pub left: [[f64; N]; N],
}

pub fn eigensystem_1d(avg: &Roe1D, gamma: f64) -> Eigen<3> {
    let (u, h, c) = (avg.u, avg.h, avg.c);
    let b1 = (gamma - 1.0) / (c * c);
    let b2 = 0.5 * b1 * u * u;
    let right = [
        [1.0, 1.0, 1.0],
        [u - c, u, u + c],
        [h - u * c, 0.5 * u * u, h + u * c],
    ];
    let left = [
        [
            0.5 * (b2 + u / c),
            -0.5 * (b1 * u + 1.0 / c),
            0.5 * b1,
        ],
        [1.0 - b2, b1 * u, -b1],
        [
            0.5 * (b2 - u / c),
            0.5 * (-b1 * u + 1.0 / c),
            0.5 * b1,
        ],
    ];
    Eigen {
        lambda: [u - c, u, u + c],
        right,
        left,
    }
}

fn eigensystem_2d_x(u: f64, v: f64, h: f64, c: f64, gamma: f64) -> Eigen<4> {
    let ek = 0.5 * (u * u + v * v);
    let b1 = (gamma - 1.0) / (c * c);
    let b2 = b1 * ek;
    let right = [
        [1.0, 1.0, 0.0, 1.0],
        [u - c, u, 0.0, u + c],
        [v, v, 1.0, v],
        [h - u * c, ek, v, h + u * c],
    ];
    let left = [
        [
            0.5 * (b2 + u / c),
            -0.5 * (b1 * u + 1.0 / c),
            -0.5 * b1 * v,
            0.5 * b1,
        ],
        [1.0 - b2, b1 * u, b1 * v, -b1],
        [-v, 0.0, 1.0, 0.0],
        [
            0.5 * (b2 - u / c),
            0.5 * (-b1 * u + 1.0 / c),
            -0.5 * b1 * v,
            0.5 * b1,
        ],
    ];
    Eigen {
        lambda: [u - c, u, u, u + c],
        right,
        left,
    }
}

/// The y-direction system follows from the x-direction one by swapping the
/// momentum components: `dG/dU = P A(P U) P` with `P` the swap permutation,
/// so the right matrix permutes rows and the left matrix permutes columns.
pub fn eigensystem_2d(avg: &Roe2D, gamma: f64, axis: Axis) -> Eigen<4> {
    match axis {
        Axis::X => eigensystem_2d_x(avg.u, avg.v, avg.h, avg.c, gamma),
        Axis::Y => {
            let e = eigensystem_2d_x(avg.v, avg.u, avg.h, avg.c, gamma);
            let perm = [0usize, 2, 1, 3];
            let mut right = [[0.0; 4]; 4];
            let mut left = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    right[i][j] = e.right[perm[i]][j];
                    left[i][j] = e.left[i][perm[j]];
                }
            }
            Eigen {
                lambda: e.lambda,
                right,
                left,
            }
        }
    }
}

/// Characteristic-wise WENO flux at one interface from the six-cell window
/// `i-2 ..= i+3`: project the split fluxes onto the left eigenvectors of the
/// Roe average, reconstruct the plus part on the upwind stencil and the
/// minus part on the mirrored stencil, then project back.
pub fn characteristic_flux<const NV: usize>(
    window: &[[f64; NV]; 6],
    fluxes: &[[f64; NV]; 6],
    eig: &Eigen<NV>,
    alpha: f64,
    scheme: &SchemeConfig,
) -> [f64; NV] {
    let mut field_flux = [0.0; NV];
    for cf in 0..NV {
        let mut gp = [0.0; 6];
        let mut gm = [0.0; 6];
        for m in 0..6 {
            let mut fp = 0.0;
            let mut fm = 0.0;
            for v in 0..NV {
                let (plus, minus) = lf_split(fluxes[m][v], window[m][v], alpha);
                fp += eig.left[cf][v] * plus;
                fm += eig.left[cf][v] * minus;
            }
            gp[m] = fp;
            gm[m] = fm;
        }
        let plus_stencil: Stencil5 = [gp[0], gp[1], gp[2], gp[3], gp[4]];
        let minus_stencil: Stencil5 = [gm[5], gm[4], gm[3], gm[2], gm[1]];
        field_flux[cf] = reconstruct_interface(&plus_stencil, scheme)
            + reconstruct_interface(&minus_stencil, scheme);
    }
    let mut out = [0.0; NV];
    for v in 0..NV {
        let mut acc = 0.0;
        for cf in 0..NV {
            acc += eig.right[v][cf] * field_flux[cf];
        }
        out[v] = acc;
    }
    out
}
