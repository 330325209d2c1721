//! Method-of-lines integration of scalar advection and the 1D/2D Euler
//! equations.
//!
//! Spatial discretization is conservative finite differences: the
//! divergence `-(fhat_{i+1/2} - fhat_{i-1/2}) / dx` with interface values
//! from the configured WENO scheme, global Lax-Friedrichs flux splitting
//! and (for Euler) the Roe characteristic decomposition at each face. Time
//! integration is the three-stage SSP Runge-Kutta scheme with CFL-limited
//! steps. 2D runs sweep dimension by dimension.

pub mod euler;
pub mod problems;

pub use euler::{
    characteristic_flux, eigensystem_1d, eigensystem_2d, flux_1d, flux_2d, lf_split,
    pressure_1d, pressure_2d, roe_average_1d, roe_average_2d, sound_speed, Axis, Eigen, Roe1D,
    Roe2D,
};
pub use problems::{advection_convergence, ConvergenceRow, ConvergenceScheme};

use rayon::prelude::*;

use crate::error::SolverError;
use crate::field::{pad_line, BoundaryKind, ObliqueShock, StateField, GHOST_WIDTH};
use crate::grid::{Grid1D, Grid2D};
use crate::weno::{reconstruct_interface, SchemeConfig, Stencil5};

/// Total variation `sum |u_{i+1} - u_i|`, closing the loop when `periodic`.
pub fn total_variation(values: &[f64], periodic: bool) -> f64 {
    assert!(values.len() >= 2, "total variation needs at least two samples");
    let mut tv = 0.0;
    for w in values.windows(2) {
        tv += (w[1] - w[0]).abs();
    }
    if periodic {
        tv += (values[0] - values[values.len() - 1]).abs();
    }
    tv
}

/// Governing equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum System {
    /// `u_t + (a u)_x = 0`.
    Advection { speed: f64 },
    Euler,
}

/// Extra right-hand-side terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceTerm {
    None,
    /// Adds `(0, 0, rho, rho v)`: unit gravity along +y.
    RayleighTaylor,
}

/// Boundary treatment of one 2D edge, possibly split along the transverse
/// coordinate (the double Mach reflection bottom wall).
#[derive(Debug, Clone)]
pub enum EdgeBc {
    Uniform(BoundaryKind),
    SplitAtX {
        x_split: f64,
        left: Box<BoundaryKind>,
        right: Box<BoundaryKind>,
    },
}

impl EdgeBc {
    fn resolve(&self, transverse: f64) -> &BoundaryKind {
        match self {
            EdgeBc::Uniform(bc) => bc,
            EdgeBc::SplitAtX { x_split, left, right } => {
                if transverse <= *x_split {
                    left
                } else {
                    right
                }
            }
        }
    }
}

pub type Ic1 = Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>;
pub type Ic2 = Box<dyn Fn(f64, f64) -> Vec<f64> + Send + Sync>;

pub enum Layout {
    One {
        grid: Grid1D,
        ic: Ic1,
        bc: (BoundaryKind, BoundaryKind),
    },
    Two {
        grid: Grid2D,
        ic: Ic2,
        bc_x: (BoundaryKind, BoundaryKind),
        bc_y: (EdgeBc, EdgeBc),
        source: SourceTerm,
    },
}

/// A fully specified benchmark problem.
pub struct ProblemSpec {
    pub name: String,
    pub gamma: f64,
    pub cfl: f64,
    pub t_final: f64,
    pub system: System,
    pub layout: Layout,
}

impl ProblemSpec {
    pub fn n_vars(&self) -> usize {
        match (&self.system, &self.layout) {
            (System::Advection { .. }, Layout::One { .. }) => 1,
            (System::Euler, Layout::One { .. }) => 3,
            (System::Euler, Layout::Two { .. }) => 4,
            (System::Advection { .. }, Layout::Two { .. }) => {
                panic!("scalar advection is 1D only")
            }
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.gamma > 1.0) {
            return Err(crate::error::ConfigError::Problem(format!(
                "gamma must exceed 1, got {}",
                self.gamma
            ))
            .into());
        }
        if !(self.t_final > 0.0) {
            return Err(crate::error::ConfigError::Problem(format!(
                "t_final must be positive, got {}",
                self.t_final
            ))
            .into());
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(crate::error::ConfigError::Problem(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            ))
            .into());
        }
        Ok(())
    }

    /// Samples the initial condition at cell centers.
    pub fn initial_field(&self) -> StateField {
        let nv = self.n_vars();
        match &self.layout {
            Layout::One { grid, ic, .. } => {
                let mut field = StateField::new_1d(grid.clone(), nv);
                for i in 0..grid.n_cells {
                    let state = ic(grid.cell_center(i));
                    assert_eq!(state.len(), nv, "initial condition variable count");
                    field.cell_mut(i).copy_from_slice(&state);
                }
                field
            }
            Layout::Two { grid, ic, .. } => {
                let mut field = StateField::new_2d(grid.clone(), nv);
                for j in 0..grid.y.n_cells {
                    for i in 0..grid.x.n_cells {
                        let state = ic(grid.x.cell_center(i), grid.y.cell_center(j));
                        assert_eq!(state.len(), nv, "initial condition variable count");
                        field.cell2_mut(i, j).copy_from_slice(&state);
                    }
                }
                field
            }
        }
    }
}

/// Admissibility scan plus max wave speed of a 1D Euler state array.
fn max_speed_1d(values: &[f64], gamma: f64, t: f64) -> Result<f64, SolverError> {
    let mut alpha: f64 = 0.0;
    for (i, cell) in values.chunks_exact(3).enumerate() {
        let u: &[f64; 3] = cell.try_into().unwrap();
        let p = pressure_1d(u, gamma);
        if !(u[0] > 0.0 && p > 0.0) || !p.is_finite() {
            return Err(SolverError::Inadmissible {
                t,
                cell: (i, 0),
                rho: u[0],
                p,
            });
        }
        alpha = alpha.max((u[1] / u[0]).abs() + sound_speed(u[0], p, gamma));
    }
    Ok(alpha)
}

/// Max directional wave speeds `(max |u|+c, max |v|+c)` of a 2D field.
fn max_speeds_2d(
    values: &[f64],
    nx: usize,
    gamma: f64,
    t: f64,
) -> Result<(f64, f64), SolverError> {
    let mut ax: f64 = 0.0;
    let mut ay: f64 = 0.0;
    for (k, cell) in values.chunks_exact(4).enumerate() {
        let u: &[f64; 4] = cell.try_into().unwrap();
        let p = pressure_2d(u, gamma);
        if !(u[0] > 0.0 && p > 0.0) || !p.is_finite() {
            return Err(SolverError::Inadmissible {
                t,
                cell: (k % nx, k / nx),
                rho: u[0],
                p,
            });
        }
        let c = sound_speed(u[0], p, gamma);
        ax = ax.max((u[1] / u[0]).abs() + c);
        ay = ay.max((u[2] / u[0]).abs() + c);
    }
    Ok((ax, ay))
}

/// Scalar upwind/downwind split reconstruction of `a u` at one interface.
fn scalar_interface_flux(padded: &[f64], k: usize, speed: f64, scheme: &SchemeConfig) -> f64 {
    let alpha = speed.abs();
    let mut fp = [0.0; 6];
    let mut fm = [0.0; 6];
    for m in 0..6 {
        let u = padded[k + m];
        let (p, q) = lf_split(speed * u, u, alpha);
        fp[m] = p;
        fm[m] = q;
    }
    let plus: Stencil5 = [fp[0], fp[1], fp[2], fp[3], fp[4]];
    let minus: Stencil5 = [fm[5], fm[4], fm[3], fm[2], fm[1]];
    reconstruct_interface(&plus, scheme) + reconstruct_interface(&minus, scheme)
}

fn rhs_advection_1d(
    values: &[f64],
    grid: &Grid1D,
    speed: f64,
    scheme: &SchemeConfig,
    bc: (&BoundaryKind, &BoundaryKind),
    t: f64,
) -> Vec<f64> {
    let n = grid.n_cells;
    let padded = pad_line(values, 1, GHOST_WIDTH, bc.0, bc.1, None, 0.0, t);
    let fluxes: Vec<f64> = (0..=n)
        .map(|k| scalar_interface_flux(&padded, k, speed, scheme))
        .collect();
    (0..n)
        .map(|i| -(fluxes[i + 1] - fluxes[i]) / grid.dx)
        .collect()
}

fn euler_interface_flux_1d(
    padded: &[f64],
    k: usize,
    alpha: f64,
    gamma: f64,
    scheme: &SchemeConfig,
    t: f64,
) -> Result<[f64; 3], SolverError> {
    let window: [[f64; 3]; 6] =
        std::array::from_fn(|m| padded[(k + m) * 3..(k + m) * 3 + 3].try_into().unwrap());
    let fluxes: [[f64; 3]; 6] = std::array::from_fn(|m| flux_1d(&window[m], gamma));
    let avg = roe_average_1d(&window[2], &window[3], gamma).ok_or(SolverError::Inadmissible {
        t,
        cell: (k, 0),
        rho: 0.5 * (window[2][0] + window[3][0]),
        p: f64::NAN,
    })?;
    let eig = eigensystem_1d(&avg, gamma);
    Ok(characteristic_flux(&window, &fluxes, &eig, alpha, scheme))
}

fn rhs_euler_1d(
    values: &[f64],
    grid: &Grid1D,
    scheme: &SchemeConfig,
    bc: (&BoundaryKind, &BoundaryKind),
    t: f64,
    gamma: f64,
) -> Result<Vec<f64>, SolverError> {
    let n = grid.n_cells;
    let alpha = max_speed_1d(values, gamma, t)?;
    let padded = pad_line(values, 3, GHOST_WIDTH, bc.0, bc.1, Some(1), 0.0, t);
    let fluxes = if n >= 512 {
        (0..=n)
            .into_par_iter()
            .map(|k| euler_interface_flux_1d(&padded, k, alpha, gamma, scheme, t))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        (0..=n)
            .map(|k| euler_interface_flux_1d(&padded, k, alpha, gamma, scheme, t))
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut out = vec![0.0; n * 3];
    for i in 0..n {
        for v in 0..3 {
            out[i * 3 + v] = -(fluxes[i + 1][v] - fluxes[i][v]) / grid.dx;
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn rhs_euler_2d(
    values: &[f64],
    grid: &Grid2D,
    scheme: &SchemeConfig,
    bc_x: (&BoundaryKind, &BoundaryKind),
    bc_y: (&EdgeBc, &EdgeBc),
    source: SourceTerm,
    t: f64,
    gamma: f64,
) -> Result<Vec<f64>, SolverError> {
    let (nx, ny) = (grid.x.n_cells, grid.y.n_cells);
    let nv = 4;
    let (alpha_x, alpha_y) = max_speeds_2d(values, nx, gamma, t)?;

    // x sweep, one padded pencil per row.
    let x_contrib: Vec<Vec<f64>> = (0..ny)
        .into_par_iter()
        .map(|j| -> Result<Vec<f64>, SolverError> {
            let row = &values[j * nx * nv..(j + 1) * nx * nv];
            let y_coord = grid.y.cell_center(j);
            let padded = pad_line(row, nv, GHOST_WIDTH, bc_x.0, bc_x.1, Some(1), y_coord, t);
            let mut fluxes = Vec::with_capacity(nx + 1);
            for k in 0..=nx {
                let window: [[f64; 4]; 6] = std::array::from_fn(|m| {
                    padded[(k + m) * nv..(k + m) * nv + nv].try_into().unwrap()
                });
                let phys: [[f64; 4]; 6] =
                    std::array::from_fn(|m| flux_2d(&window[m], gamma, Axis::X));
                let avg = roe_average_2d(&window[2], &window[3], gamma).ok_or(
                    SolverError::Inadmissible {
                        t,
                        cell: (k, j),
                        rho: 0.5 * (window[2][0] + window[3][0]),
                        p: f64::NAN,
                    },
                )?;
                let eig = eigensystem_2d(&avg, gamma, Axis::X);
                fluxes.push(characteristic_flux(&window, &phys, &eig, alpha_x, scheme));
            }
            let mut row_out = vec![0.0; nx * nv];
            for i in 0..nx {
                for v in 0..nv {
                    row_out[i * nv + v] = -(fluxes[i + 1][v] - fluxes[i][v]) / grid.x.dx;
                }
            }
            Ok(row_out)
        })
        .collect::<Result<Vec<_>, _>>()?;

    // y sweep, one padded pencil per column.
    let y_contrib: Vec<Vec<f64>> = (0..nx)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>, SolverError> {
            let x_coord = grid.x.cell_center(i);
            let mut col = vec![0.0; ny * nv];
            for j in 0..ny {
                col[j * nv..(j + 1) * nv]
                    .copy_from_slice(&values[(j * nx + i) * nv..(j * nx + i) * nv + nv]);
            }
            let padded = pad_line(
                &col,
                nv,
                GHOST_WIDTH,
                bc_y.0.resolve(x_coord),
                bc_y.1.resolve(x_coord),
                Some(2),
                x_coord,
                t,
            );
            let mut fluxes = Vec::with_capacity(ny + 1);
            for k in 0..=ny {
                let window: [[f64; 4]; 6] = std::array::from_fn(|m| {
                    padded[(k + m) * nv..(k + m) * nv + nv].try_into().unwrap()
                });
                let phys: [[f64; 4]; 6] =
                    std::array::from_fn(|m| flux_2d(&window[m], gamma, Axis::Y));
                let avg = roe_average_2d(&window[2], &window[3], gamma).ok_or(
                    SolverError::Inadmissible {
                        t,
                        cell: (i, k),
                        rho: 0.5 * (window[2][0] + window[3][0]),
                        p: f64::NAN,
                    },
                )?;
                let eig = eigensystem_2d(&avg, gamma, Axis::Y);
                fluxes.push(characteristic_flux(&window, &phys, &eig, alpha_y, scheme));
            }
            let mut col_out = vec![0.0; ny * nv];
            for j in 0..ny {
                for v in 0..nv {
                    col_out[j * nv + v] = -(fluxes[j + 1][v] - fluxes[j][v]) / grid.y.dx;
                }
            }
            Ok(col_out)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = vec![0.0; nx * ny * nv];
    for j in 0..ny {
        out[j * nx * nv..(j + 1) * nx * nv].copy_from_slice(&x_contrib[j]);
    }
    for (i, col) in y_contrib.iter().enumerate() {
        for j in 0..ny {
            for v in 0..nv {
                out[(j * nx + i) * nv + v] += col[j * nv + v];
            }
        }
    }

    if source == SourceTerm::RayleighTaylor {
        for (k, cell) in values.chunks_exact(nv).enumerate() {
            out[k * nv + 2] += cell[0]; // rho
            out[k * nv + 3] += cell[2]; // rho v
        }
    }
    Ok(out)
}

/// Semidiscrete right-hand side of the problem at state `values`, time `t`.
pub fn rhs(
    problem: &ProblemSpec,
    scheme: &SchemeConfig,
    values: &[f64],
    t: f64,
) -> Result<Vec<f64>, SolverError> {
    match (&problem.system, &problem.layout) {
        (System::Advection { speed }, Layout::One { grid, bc, .. }) => Ok(rhs_advection_1d(
            values,
            grid,
            *speed,
            scheme,
            (&bc.0, &bc.1),
            t,
        )),
        (System::Euler, Layout::One { grid, bc, .. }) => {
            rhs_euler_1d(values, grid, scheme, (&bc.0, &bc.1), t, problem.gamma)
        }
        (System::Euler, Layout::Two { grid, bc_x, bc_y, source, .. }) => rhs_euler_2d(
            values,
            grid,
            scheme,
            (&bc_x.0, &bc_x.1),
            (&bc_y.0, &bc_y.1),
            *source,
            t,
            problem.gamma,
        ),
        _ => panic!("unsupported system/layout combination"),
    }
}

/// One SSP-RK3 step:
/// `u1 = u + dt L(u)`, `u2 = 3/4 u + 1/4 (u1 + dt L(u1))`,
/// `u_next = 1/3 u + 2/3 (u2 + dt L(u2))`, stage times `t`, `t+dt`, `t+dt/2`.
pub fn rk3_step<F>(u: &[f64], t: f64, dt: f64, rhs_fn: &mut F) -> Result<Vec<f64>, SolverError>
where
    F: FnMut(&[f64], f64) -> Result<Vec<f64>, SolverError>,
{
    assert!(dt > 0.0, "rk3 step needs dt > 0");
    let l0 = rhs_fn(u, t)?;
    let u1: Vec<f64> = u.iter().zip(&l0).map(|(a, b)| a + dt * b).collect();
    let l1 = rhs_fn(&u1, t + dt)?;
    let u2: Vec<f64> = u
        .iter()
        .zip(u1.iter().zip(&l1))
        .map(|(a, (b, c))| 0.75 * a + 0.25 * (b + dt * c))
        .collect();
    let l2 = rhs_fn(&u2, t + 0.5 * dt)?;
    Ok(u
        .iter()
        .zip(u2.iter().zip(&l2))
        .map(|(a, (b, c))| a / 3.0 + 2.0 / 3.0 * (b + dt * c))
        .collect())
}

/// CFL-limited step size. 1D: `cfl dx / max|lambda|`; 2D:
/// `cfl / (max_x/dx + max_y/dy)`. A quiescent field falls back to
/// `cfl * dx`.
pub fn compute_dt(problem: &ProblemSpec, values: &[f64], t: f64) -> Result<f64, SolverError> {
    let cfl = problem.cfl;
    match (&problem.system, &problem.layout) {
        (System::Advection { speed }, Layout::One { grid, .. }) => {
            let a = speed.abs();
            Ok(if a > 0.0 { cfl * grid.dx / a } else { cfl * grid.dx })
        }
        (System::Euler, Layout::One { grid, .. }) => {
            let alpha = max_speed_1d(values, problem.gamma, t)?;
            Ok(if alpha > 0.0 {
                cfl * grid.dx / alpha
            } else {
                cfl * grid.dx
            })
        }
        (System::Euler, Layout::Two { grid, .. }) => {
            let (ax, ay) = max_speeds_2d(values, grid.x.n_cells, problem.gamma, t)?;
            let denom = ax / grid.x.dx + ay / grid.y.dx;
            Ok(if denom > 0.0 {
                cfl / denom
            } else {
                cfl * grid.x.dx
            })
        }
        _ => panic!("unsupported system/layout combination"),
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub field: StateField,
    pub t: f64,
    pub steps: usize,
    pub snapshots: Vec<(f64, StateField)>,
}

fn scan_finite(values: &[f64], nv: usize, nx: usize, t: f64) -> Result<(), SolverError> {
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        let cell = bad / nv;
        return Err(SolverError::NonFinite {
            t,
            cell: (cell % nx, cell / nx),
            var: bad % nv,
        });
    }
    Ok(())
}

/// Integrates the problem to `t_final`, recording clones of the state at
/// the requested intermediate times (each hit exactly by clamping `dt`).
pub fn run_with_snapshots(
    problem: &ProblemSpec,
    scheme: &SchemeConfig,
    snapshot_times: &[f64],
) -> Result<RunResult, SolverError> {
    problem.validate()?;
    scheme.validate().map_err(SolverError::Config)?;
    let mut field = problem.initial_field();
    let nv = field.n_vars;
    let nx = field.nx();

    let mut events: Vec<f64> = snapshot_times
        .iter()
        .copied()
        .filter(|&s| s > 0.0 && s < problem.t_final)
        .collect();
    events.sort_by(|a, b| a.partial_cmp(b).unwrap());
    events.push(problem.t_final);

    let mut rhs_fn = |u: &[f64], stage_t: f64| -> Result<Vec<f64>, SolverError> {
        rhs(problem, scheme, u, stage_t)
    };

    let mut t = 0.0;
    let mut steps = 0usize;
    let mut snapshots = Vec::new();
    for &target in &events {
        while t < target {
            let dt_cfl = compute_dt(problem, &field.values, t)?;
            let remaining = target - t;
            let (dt, lands) = if dt_cfl >= remaining {
                (remaining, true)
            } else {
                (dt_cfl, false)
            };
            field.values = rk3_step(&field.values, t, dt, &mut rhs_fn)?;
            t = if lands { target } else { t + dt };
            steps += 1;
            scan_finite(&field.values, nv, nx, t)?;
        }
        if target < problem.t_final {
            snapshots.push((target, field.clone()));
        }
    }
    Ok(RunResult {
        field,
        t,
        steps,
        snapshots,
    })
}

/// Integrates the problem to its final time.
pub fn run(problem: &ProblemSpec, scheme: &SchemeConfig) -> Result<RunResult, SolverError> {
    run_with_snapshots(problem, scheme, &[])
}

/// The Mach-10 oblique-shock boundary for the double Mach reflection top
/// wall: the 60-degree shock foot starts at x = 1/6 on the bottom wall and
/// its top-wall trace moves at horizontal speed 20/sqrt(3).
pub fn double_mach_top_bc(gamma: f64) -> ObliqueShock {
    let s3 = 3.0f64.sqrt();
    let pre = vec![1.4, 0.0, 0.0, 1.0 / (gamma - 1.0)];
    let (rho, u, v, p) = post_shock_state();
    let post = vec![
        rho,
        rho * u,
        rho * v,
        p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v),
    ];
    ObliqueShock {
        x_at_wall_t0: 1.0 / 6.0 + 1.0 / s3,
        speed_x: 20.0 / s3,
        pre,
        post,
    }
}

/// Post-shock primitives of the Mach-10, 60-degree oblique shock.
pub fn post_shock_state() -> (f64, f64, f64, f64) {
    let deg60 = std::f64::consts::PI / 3.0;
    (8.0, 8.25 * deg60.sin(), -8.25 * deg60.cos(), 116.5)
}

#[cfg(test)]
mod tests {
    use super::problems;
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn total_variation_basics() {
        assert_eq!(total_variation(&[2.0; 8], false), 0.0);
        assert_eq!(total_variation(&[0.0, 0.0, 1.0, 1.0], false), 1.0);
        // One period of A sin: TV about 4A.
        let a = 1.7;
        let n = 400;
        let vals: Vec<f64> = (0..n)
            .map(|i| a * (2.0 * std::f64::consts::PI * i as f64 / n as f64).sin())
            .collect();
        assert_relative_eq!(total_variation(&vals, true), 4.0 * a, max_relative = 1e-3);
    }

    #[test]
    fn rk3_amplification_matches_cubic_truncation() {
        // u' = lambda u: one step must amplify by 1 + z + z^2/2 + z^3/6.
        let lambda = -0.83;
        let dt = 0.37;
        let mut rhs_fn = |u: &[f64], _t: f64| -> Result<Vec<f64>, SolverError> {
            Ok(u.iter().map(|v| lambda * v).collect())
        };
        let u1 = rk3_step(&[1.0], 0.0, dt, &mut rhs_fn).unwrap();
        let z = lambda * dt;
        let expect = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
        assert_relative_eq!(u1[0], expect, max_relative = 1e-14);
    }

    #[test]
    fn rk3_identity_and_linearity() {
        let mut zero_rhs =
            |u: &[f64], _t: f64| -> Result<Vec<f64>, SolverError> { Ok(vec![0.0; u.len()]) };
        let u = vec![0.3, -1.2, 5.0];
        assert_eq!(rk3_step(&u, 0.0, 0.1, &mut zero_rhs).unwrap(), u);

        // Linear L: step(au + bv) = a step(u) + b step(v).
        let m = [[0.0, 1.0], [-1.0, 0.0]];
        let mut lin = |u: &[f64], _t: f64| -> Result<Vec<f64>, SolverError> {
            Ok(vec![
                m[0][0] * u[0] + m[0][1] * u[1],
                m[1][0] * u[0] + m[1][1] * u[1],
            ])
        };
        let a = [1.0, 0.5];
        let b = [-0.25, 2.0];
        let (ca, cb) = (0.7, -1.3);
        let combined: Vec<f64> = (0..2).map(|i| ca * a[i] + cb * b[i]).collect();
        let sa = rk3_step(&a, 0.0, 0.2, &mut lin).unwrap();
        let sb = rk3_step(&b, 0.0, 0.2, &mut lin).unwrap();
        let sc = rk3_step(&combined, 0.0, 0.2, &mut lin).unwrap();
        for i in 0..2 {
            assert_relative_eq!(sc[i], ca * sa[i] + cb * sb[i], max_relative = 1e-13);
        }
    }

    #[test]
    fn dt_arithmetic_and_scaling() {
        // rho = 1, u = 0, p = 1, gamma = 1.4, dx = 0.01, cfl = 0.4.
        let problem = problems::uniform_euler_1d(100, 0.0);
        let field = problem.initial_field();
        let dt = compute_dt(&problem, &field.values, 0.0).unwrap();
        assert_relative_eq!(dt, 0.004 / 1.4f64.sqrt(), max_relative = 1e-13);

        let problem2 = problems::uniform_euler_1d(200, 0.0);
        let field2 = problem2.initial_field();
        let dt2 = compute_dt(&problem2, &field2.values, 0.0).unwrap();
        assert_relative_eq!(dt2, 0.5 * dt, max_relative = 1e-13);
    }

    #[test]
    fn constant_fields_have_zero_rhs() {
        // 1D Euler with nonzero velocity.
        let problem = problems::uniform_euler_1d(64, 0.3);
        let field = problem.initial_field();
        let scheme = SchemeConfig::js();
        let out = rhs(&problem, &scheme, &field.values, 0.0).unwrap();
        for v in &out {
            assert!(v.abs() <= 1e-13, "rhs = {v}");
        }

        // 2D free stream.
        let problem = problems::uniform_euler_2d(16, 12, 0.3, -0.2);
        let field = problem.initial_field();
        let out = rhs(&problem, &scheme, &field.values, 0.0).unwrap();
        for v in &out {
            assert!(v.abs() <= 1e-13, "2d rhs = {v}");
        }
    }

    #[test]
    fn periodic_advection_conserves_and_returns() {
        let problem = problems::sine_advection(100);
        let scheme = SchemeConfig::z();
        let field0 = problem.initial_field();
        let mass0: f64 = field0.values.iter().sum();
        let result = run(&problem, &scheme).unwrap();
        let mass1: f64 = result.field.values.iter().sum();
        assert!(
            (mass1 - mass0).abs() <= 1e-12,
            "mass drift {mass0} -> {mass1}"
        );
        // One period returns the initial profile to fifth-order accuracy.
        let mut max_err: f64 = 0.0;
        for (a, b) in result.field.values.iter().zip(&field0.values) {
            max_err = max_err.max((a - b).abs());
        }
        assert!(max_err < 1e-4, "L_inf after one period = {max_err}");
    }

    #[test]
    fn euler_conservation_periodic() {
        // Smooth periodic 1D Euler: all three conserved sums stay put.
        let problem = problems::smooth_periodic_euler_1d(64);
        let scheme = SchemeConfig::js();
        let field0 = problem.initial_field();
        let mut sums0 = [0.0; 3];
        for cell in field0.values.chunks_exact(3) {
            for v in 0..3 {
                sums0[v] += cell[v];
            }
        }
        let mut values = field0.values.clone();
        let mut rhs_fn =
            |u: &[f64], t: f64| -> Result<Vec<f64>, SolverError> { rhs(&problem, &scheme, u, t) };
        let mut t = 0.0;
        for _ in 0..20 {
            let dt = compute_dt(&problem, &values, t).unwrap();
            values = rk3_step(&values, t, dt, &mut rhs_fn).unwrap();
            t += dt;
            let mut sums = [0.0; 3];
            for cell in values.chunks_exact(3) {
                for v in 0..3 {
                    sums[v] += cell[v];
                }
            }
            for v in 0..3 {
                assert!(
                    (sums[v] - sums0[v]).abs() <= 1e-12 * sums0[v].abs().max(1.0),
                    "variable {v} drifted {} -> {}",
                    sums0[v],
                    sums[v]
                );
            }
        }
    }

    #[test]
    fn zero_network_schemes_match_classical_trajectories() {
        let net = crate::nn::NetworkParams::zeros(&[4, 8, 3]);
        let problem = problems::lax(80);
        let classical = run(&problem, &SchemeConfig::js()).unwrap();
        let nn = run(&problem, &SchemeConfig::js_nn(net)).unwrap();
        for (a, b) in classical.field.values.iter().zip(&nn.field.values) {
            assert_eq!(a.to_bits(), b.to_bits(), "trajectories diverged");
        }
    }

    #[test]
    fn rhs_harmonic_matches_adr_wavenumber() {
        // Advect the harmonic pair cos(wx), sin(wx) on nodes x_j = j*delta:
        // the DFT coefficient of the assembled complex rhs must equal
        // -i * Phi(phi) / delta, the dispersion-analysis prediction.
        use crate::adr::{dft_coefficient, modified_wavenumber};
        use num_complex::Complex64;
        let n_cells = 64;
        let mode = 5;
        let scheme = SchemeConfig::js();
        let cos_problem = problems::harmonic_advection(n_cells, mode, false);
        let sin_problem = problems::harmonic_advection(n_cells, mode, true);
        let out_r = rhs(&cos_problem, &scheme, &cos_problem.initial_field().values, 0.0).unwrap();
        let out_i = rhs(&sin_problem, &scheme, &sin_problem.initial_field().values, 0.0).unwrap();

        let adr = modified_wavenumber(&scheme, mode, n_cells);
        let delta = 2.0 * std::f64::consts::PI / n_cells as f64;
        let expect = -Complex64::i() * adr.modified / delta;
        let complex: Vec<Complex64> = out_r
            .iter()
            .zip(&out_i)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        let got = dft_coefficient(&complex, mode);
        assert!(
            (got - expect).norm() <= 1e-12 * expect.norm().max(1.0),
            "rhs DFT {got} vs ADR {expect}"
        );
    }

    #[test]
    fn rayleigh_taylor_source_term() {
        let problem = problems::uniform_euler_2d_with_source(12, 10, 0.1, -0.3);
        let field = problem.initial_field();
        let scheme = SchemeConfig::js();
        let out = rhs(&problem, &scheme, &field.values, 0.0).unwrap();
        // Uniform state: flux divergence vanishes, only the source remains.
        for (k, cell) in field.values.chunks_exact(4).enumerate() {
            assert!(out[k * 4].abs() <= 1e-13);
            assert!(out[k * 4 + 1].abs() <= 1e-13);
            assert_relative_eq!(out[k * 4 + 2], cell[0], max_relative = 1e-12);
            assert_relative_eq!(out[k * 4 + 3], cell[2], max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    #[test]
    fn run_hits_final_time_exactly_and_snapshots() {
        let problem = problems::sine_advection(50);
        let result = run_with_snapshots(&problem, &SchemeConfig::z(), &[0.25, 0.5]).unwrap();
        assert_eq!(result.t, problem.t_final);
        assert_eq!(result.snapshots.len(), 2);
        assert_eq!(result.snapshots[0].0, 0.25);
        assert_eq!(result.snapshots[1].0, 0.5);
    }

    #[test]
    fn composite_advection_essentially_non_oscillatory() {
        // Classical WENO5-JS keeps the total variation of the composite
        // profile from growing materially over a full cycle.
        let problem = problems::composite_advection(200);
        let field0 = problem.initial_field();
        let tv0 = total_variation(&field0.values, true);
        let result = run(&problem, &SchemeConfig::js()).unwrap();
        let tv1 = total_variation(&result.field.values, true);
        assert!(tv1 - tv0 <= 1e-2, "TV grew from {tv0} to {tv1}");
    }

    #[test]
    fn solver_reports_inadmissible_states() {
        let grid = crate::grid::make_grid(0.0, 1.0, 32).unwrap();
        let problem = ProblemSpec {
            name: "bad".into(),
            gamma: 1.4,
            cfl: 0.4,
            t_final: 0.1,
            system: System::Euler,
            layout: Layout::One {
                grid,
                // Negative pressure on the right half.
                ic: Box::new(|x| {
                    let p = if x < 0.5 { 1.0 } else { -0.2 };
                    vec![1.0, 0.0, p / 0.4]
                }),
                bc: (BoundaryKind::NonReflective, BoundaryKind::NonReflective),
            },
        };
        match run(&problem, &SchemeConfig::js()) {
            Err(SolverError::Inadmissible { cell, .. }) => assert!(cell.0 >= 16),
            other => panic!("expected inadmissible-state error, got {other:?}"),
        }
    }
}
