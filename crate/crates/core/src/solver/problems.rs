//! Built-in benchmark problems and the advection convergence study.
//!
//! Every preset carries its conventional resolution and final time; callers
//! may override the fields afterwards. Initial data is sampled pointwise at
//! cell centers.

use super::{EdgeBc, Layout, ProblemSpec, SourceTerm, System};
use crate::error::{ConfigError, SolverError};
use crate::field::BoundaryKind;
use crate::grid::{make_grid, make_grid_2d};
use crate::weno::SchemeConfig;

fn euler_state_1d(rho: f64, u: f64, p: f64, gamma: f64) -> Vec<f64> {
    vec![rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u]
}

fn euler_state_2d(rho: f64, u: f64, v: f64, p: f64, gamma: f64) -> Vec<f64> {
    vec![
        rho,
        rho * u,
        rho * v,
        p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v),
    ]
}

/// Periodic advection of `sin(2 pi x)` on `[0, 1]` over one period.
pub fn sine_advection(nx: usize) -> ProblemSpec {
    ProblemSpec {
        name: "sine-advection".into(),
        gamma: 1.4,
        cfl: 0.4,
        t_final: 1.0,
        system: System::Advection { speed: 1.0 },
        layout: Layout::One {
            grid: make_grid(0.0, 1.0, nx).expect("valid grid"),
            ic: Box::new(|x| vec![(2.0 * std::f64::consts::PI * x).sin()]),
            bc: (BoundaryKind::Periodic, BoundaryKind::Periodic),
        },
    }
}

/// Periodic advection of a single harmonic on a grid whose cell centers sit
/// at `x_j = j * 2 pi / n`, matching the dispersion-analysis sampling.
pub fn harmonic_advection(nx: usize, mode: usize, use_sin: bool) -> ProblemSpec {
    let delta = 2.0 * std::f64::consts::PI / nx as f64;
    let grid = make_grid(-0.5 * delta, 2.0 * std::f64::consts::PI - 0.5 * delta, nx)
        .expect("valid grid");
    let m = mode as f64;
    ProblemSpec {
        name: "harmonic-advection".into(),
        gamma: 1.4,
        cfl: 0.4,
        t_final: 1.0,
        system: System::Advection { speed: 1.0 },
        layout: Layout::One {
            grid,
            ic: Box::new(move |x| {
                vec![if use_sin { (m * x).sin() } else { (m * x).cos() }]
            }),
            bc: (BoundaryKind::Periodic, BoundaryKind::Periodic),
        },
    }
}

/// Piecewise profile of a Gaussian, a square wave, a triangle and a
/// semi-ellipse, advected periodically on `[-1, 1]`; four time units move
/// the profile through two full domain lengths back onto itself.
pub fn composite_advection(nx: usize) -> ProblemSpec {
    let z = -0.7;
    let small = 0.005;
    let beta = 2.0f64.ln() / (36.0 * small * small);
    let a = 0.5;
    let alpha = 10.0;
    let gauss = move |x: f64, center: f64| (-beta * (x - center) * (x - center)).exp();
    let ellipse = move |x: f64, center: f64| {
        (1.0 - alpha * alpha * (x - center) * (x - center)).max(0.0).sqrt()
    };
    ProblemSpec {
        name: "composite-advection".into(),
        gamma: 1.4,
        cfl: 0.4,
        t_final: 4.0,
        system: System::Advection { speed: 1.0 },
        layout: Layout::One {
            grid: make_grid(-1.0, 1.0, nx).expect("valid grid"),
            ic: Box::new(move |x| {
                let u = if (-0.8..-0.6).contains(&x) {
                    (gauss(x, z - small) + gauss(x, z + small) + 4.0 * gauss(x, z)) / 6.0
                } else if (-0.4..-0.2).contains(&x) {
                    1.0
                } else if (0.0..0.2).contains(&x) {
                    1.0 - (10.0 * (x - 0.1)).abs()
                } else if (0.4..0.6).contains(&x) {
                    (ellipse(x, a - small) + ellipse(x, a + small) + 4.0 * ellipse(x, a)) / 6.0
                } else {
                    0.0
                };
                vec![u]
            }),
            bc: (BoundaryKind::Periodic, BoundaryKind::Periodic),
        },
    }
}

/// Lax shock tube at `t = 0.14`.
pub fn lax(nx: usize) -> ProblemSpec {
    let gamma = 1.4;
    ProblemSpec {
        name: "lax".into(),
        gamma,
        cfl: 0.4,
        t_final: 0.14,
        system: System::Euler,
        layout: Layout::One {
            grid: make_grid(0.0, 1.0, nx).expect("valid grid"),
            ic: Box::new(move |x| {
                if x < 0.5 {
                    euler_state_1d(0.445, 0.698, 3.528, gamma)
                } else {
                    euler_state_1d(0.5, 0.0, 0.571, gamma)
                }
            }),
            bc: (BoundaryKind::NonReflective, BoundaryKind::NonReflective),
        },
    }
}

/// Woodward-Colella interacting blast waves at `t = 0.038`.
pub fn blast_waves(nx: usize) -> ProblemSpec {
    let gamma = 1.4;
    ProblemSpec {
        name: "blast".into(),
        gamma,
        cfl: 0.4,
        t_final: 0.038,
        system: System::Euler,
        layout: Layout::One {
            grid: make_grid(0.0, 1.0, nx).expect("valid grid"),
            ic: Box::new(move |x| {
                let p = if x < 0.1 {
                    1000.0
                } else if x < 0.9 {
                    0.01
                } else {
                    100.0
                };
                euler_state_1d(1.0, 0.0, p, gamma)
            }),
            bc: (BoundaryKind::Reflective, BoundaryKind::Reflective),
        },
    }
}

/// Shu-Osher shock/entropy-wave interaction at `t = 1.8`.
pub fn shu_osher(nx: usize) -> ProblemSpec {
    let gamma = 1.4;
    ProblemSpec {
        name: "shu-osher".into(),
        gamma,
        cfl: 0.4,
        t_final: 1.8,
        system: System::Euler,
        layout: Layout::One {
            grid: make_grid(0.0, 10.0, nx).expect("valid grid"),
            ic: Box::new(move |x| {
                if x < 1.0 {
                    euler_state_1d(3.857, 2.629, 10.333, gamma)
                } else {
                    euler_state_1d(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0, gamma)
                }
            }),
            bc: (BoundaryKind::NonReflective, BoundaryKind::NonReflective),
        },
    }
}

/// Titarev-Toro high-frequency entropy-wave interaction at `t = 5`.
pub fn titarev_toro(nx: usize) -> ProblemSpec {
    let gamma = 1.4;
    ProblemSpec {
        name: "titarev-toro".into(),
        gamma,
        cfl: 0.4,
        t_final: 5.0,
        system: System::Euler,
        layout: Layout::One {
            grid: make_grid(-5.0, 5.0, nx).expect("valid grid"),
            ic: Box::new(move |x| {
                if x < -4.5 {
                    euler_state_1d(1.515695, 0.523346, 1.805, gamma)
                } else {
                    euler_state_1d(
                        1.0 + 0.1 * (20.0 * std::f64::consts::PI * x).sin(),
                        0.0,
                        1.0,
                        gamma,
                    )
                }
            }),
            bc: (BoundaryKind::NonReflective, BoundaryKind::NonReflective),
        },
    }
}

/// 2D Riemann problem (configuration 3) at `t = 0.8`.
pub fn riemann_2d(nx: usize, ny: usize) -> ProblemSpec {
    let gamma = 1.4;
    ProblemSpec {
        name: "riemann2d".into(),
        gamma,
        cfl: 0.4,
        t_final: 0.8,
        system: System::Euler,
        layout: Layout::Two {
            grid: make_grid_2d((0.0, 1.0), (0.0, 1.0), nx, ny).expect("valid grid"),
            ic: Box::new(move |x, y| {
                let (rho, u, v, p) = match (x >= 0.8, y >= 0.8) {
                    (true, true) => (1.5, 0.0, 0.0, 1.5),
                    (false, true) => (0.5323, 1.206, 0.0, 0.3),
                    (false, false) => (0.138, 1.206, 1.206, 0.029),
                    (true, false) => (0.5323, 0.0, 1.206, 0.3),
                };
                euler_state_2d(rho, u, v, p, gamma)
            }),
            bc_x: (BoundaryKind::NonReflective, BoundaryKind::NonReflective),
            bc_y: (
                EdgeBc::Uniform(BoundaryKind::NonReflective),
                EdgeBc::Uniform(BoundaryKind::NonReflective),
            ),
            source: SourceTerm::None,
        },
    }
}

/// Single-mode Rayleigh-Taylor instability at `t = 1.95`, `gamma = 5/3`.
pub fn rayleigh_taylor(nx: usize, ny: usize) -> ProblemSpec {
    let gamma = 5.0 / 3.0;
    ProblemSpec {
        name: "rayleigh-taylor".into(),
        gamma,
        cfl: 0.4,
        t_final: 1.95,
        system: System::Euler,
        layout: Layout::Two {
            grid: make_grid_2d((0.0, 0.25), (0.0, 1.0), nx, ny).expect("valid grid"),
            ic: Box::new(move |x, y| {
                let (rho, p) = if y < 0.5 {
                    (2.0, 2.0 * y + 1.0)
                } else {
                    (1.0, y + 1.5)
                };
                let c = (gamma * p / rho).sqrt();
                let v = -0.025 * c * (8.0 * std::f64::consts::PI * x).cos();
                euler_state_2d(rho, 0.0, v, p, gamma)
            }),
            bc_x: (BoundaryKind::Reflective, BoundaryKind::Reflective),
            bc_y: (
                EdgeBc::Uniform(BoundaryKind::Fixed(euler_state_2d(2.0, 0.0, 0.0, 1.0, gamma))),
                EdgeBc::Uniform(BoundaryKind::Fixed(euler_state_2d(1.0, 0.0, 0.0, 2.5, gamma))),
            ),
            source: SourceTerm::RayleighTaylor,
        },
    }
}

/// Double Mach reflection of a Mach-10 shock at `t = 0.2`.
pub fn double_mach(nx: usize, ny: usize) -> ProblemSpec {
    let gamma = 1.4;
    let (rho_p, u_p, v_p, p_p) = super::post_shock_state();
    let post = euler_state_2d(rho_p, u_p, v_p, p_p, gamma);
    let post_ic = post.clone();
    let s3 = 3.0f64.sqrt();
    ProblemSpec {
        name: "double-mach".into(),
        gamma,
        cfl: 0.4,
        t_final: 0.2,
        system: System::Euler,
        layout: Layout::Two {
            grid: make_grid_2d((0.0, 4.0), (0.0, 1.0), nx, ny).expect("valid grid"),
            ic: Box::new(move |x, y| {
                if x > 1.0 / 6.0 + y / s3 {
                    euler_state_2d(1.4, 0.0, 0.0, 1.0, gamma)
                } else {
                    post_ic.clone()
                }
            }),
            bc_x: (
                BoundaryKind::Fixed(post.clone()),
                BoundaryKind::NonReflective,
            ),
            bc_y: (
                EdgeBc::SplitAtX {
                    x_split: 1.0 / 6.0,
                    left: Box::new(BoundaryKind::Fixed(post)),
                    right: Box::new(BoundaryKind::Reflective),
                },
                EdgeBc::Uniform(BoundaryKind::DoubleMachTop(super::double_mach_top_bc(gamma))),
            ),
            source: SourceTerm::None,
        },
    }
}

/// Uniform free-stream states, used by preservation checks.
pub fn uniform_euler_1d(nx: usize, u: f64) -> ProblemSpec {
    let gamma = 1.4;
    ProblemSpec {
        name: "uniform-1d".into(),
        gamma,
        cfl: 0.4,
        t_final: 1.0,
        system: System::Euler,
        layout: Layout::One {
            grid: make_grid(0.0, 1.0, nx).expect("valid grid"),
            ic: Box::new(move |_| euler_state_1d(1.0, u, 1.0, gamma)),
            bc: (BoundaryKind::Periodic, BoundaryKind::Periodic),
        },
    }
}

pub fn uniform_euler_2d(nx: usize, ny: usize, u: f64, v: f64) -> ProblemSpec {
    let gamma = 1.4;
    ProblemSpec {
        name: "uniform-2d".into(),
        gamma,
        cfl: 0.4,
        t_final: 1.0,
        system: System::Euler,
        layout: Layout::Two {
            grid: make_grid_2d((0.0, 1.0), (0.0, 1.0), nx, ny).expect("valid grid"),
            ic: Box::new(move |_, _| euler_state_2d(1.0, u, v, 1.0, gamma)),
            bc_x: (BoundaryKind::Periodic, BoundaryKind::Periodic),
            bc_y: (
                EdgeBc::Uniform(BoundaryKind::Periodic),
                EdgeBc::Uniform(BoundaryKind::Periodic),
            ),
            source: SourceTerm::None,
        },
    }
}

pub fn uniform_euler_2d_with_source(nx: usize, ny: usize, u: f64, v: f64) -> ProblemSpec {
    let mut p = uniform_euler_2d(nx, ny, u, v);
    if let Layout::Two { source, .. } = &mut p.layout {
        *source = SourceTerm::RayleighTaylor;
    }
    p
}

/// Smooth periodic 1D Euler state for conservation checks.
pub fn smooth_periodic_euler_1d(nx: usize) -> ProblemSpec {
    let gamma = 1.4;
    ProblemSpec {
        name: "smooth-euler".into(),
        gamma,
        cfl: 0.4,
        t_final: 0.5,
        system: System::Euler,
        layout: Layout::One {
            grid: make_grid(0.0, 1.0, nx).expect("valid grid"),
            ic: Box::new(move |x| {
                let s = (2.0 * std::f64::consts::PI * x).sin();
                euler_state_1d(1.0 + 0.2 * s, 0.3 * s, 1.0 + 0.1 * s, gamma)
            }),
            bc: (BoundaryKind::Periodic, BoundaryKind::Periodic),
        },
    }
}

/// Named preset lookup used by the command-line runner.
pub fn by_name(name: &str, nx: Option<usize>, ny: Option<usize>) -> Result<ProblemSpec, ConfigError> {
    let p = |default: usize| nx.unwrap_or(default);
    let q = |default: usize| ny.unwrap_or(default);
    match name {
        "composite" => Ok(composite_advection(p(200))),
        "sine" => Ok(sine_advection(p(100))),
        "lax" => Ok(lax(p(200))),
        "blast" => Ok(blast_waves(p(400))),
        "shu-osher" => Ok(shu_osher(p(200))),
        "titarev-toro" => Ok(titarev_toro(p(1000))),
        "riemann2d" => Ok(riemann_2d(p(500), q(500))),
        "rt" => Ok(rayleigh_taylor(p(200), q(800))),
        "dmr" => Ok(double_mach(p(960), q(240))),
        other => Err(ConfigError::Problem(format!(
            "unknown problem '{other}' (expected composite|sine|lax|blast|shu-osher|titarev-toro|riemann2d|rt|dmr)"
        ))),
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &[
        "composite",
        "sine",
        "lax",
        "blast",
        "shu-osher",
        "titarev-toro",
        "riemann2d",
        "rt",
        "dmr",
    ]
}

/// Reconstruction used by the convergence study.
pub enum ConvergenceScheme<'a> {
    Weno(&'a SchemeConfig),
    /// Diagnostic anchor: `fhat_{i+1/2} = f_i`, formally first order.
    FirstOrderUpwind,
}

#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l1: f64,
    pub linf: f64,
    pub l1_order: Option<f64>,
    pub linf_order: Option<f64>,
}

/// Errors and fitted orders for periodic sine advection over one period.
///
/// The step size follows `dt = cfl * dx^(5/3)` so the third-order time
/// integrator does not cap the spatial order of a fifth-order scheme.
pub fn advection_convergence(
    scheme: &ConvergenceScheme<'_>,
    resolutions: &[usize],
    cfl: f64,
) -> Result<Vec<ConvergenceRow>, SolverError> {
    if !resolutions.windows(2).all(|w| w[0] < w[1]) {
        return Err(
            ConfigError::Problem("resolutions must be strictly increasing".into()).into(),
        );
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        let problem = sine_advection(n);
        let (grid, bc) = match &problem.layout {
            super::Layout::One { grid, bc, .. } => (grid.clone(), bc.clone()),
            _ => unreachable!(),
        };
        let field0 = problem.initial_field();
        let dt0 = cfl * grid.dx.powf(5.0 / 3.0);
        let steps = (problem.t_final / dt0).ceil() as usize;
        let dt = problem.t_final / steps as f64;

        let mut values = field0.values.clone();
        let mut rhs_fn = |u: &[f64], t: f64| -> Result<Vec<f64>, SolverError> {
            match scheme {
                ConvergenceScheme::Weno(cfg) => Ok(super::rhs(&problem, cfg, u, t)?),
                ConvergenceScheme::FirstOrderUpwind => {
                    let padded = crate::field::pad_line(
                        u,
                        1,
                        crate::field::GHOST_WIDTH,
                        &bc.0,
                        &bc.1,
                        None,
                        0.0,
                        t,
                    );
                    let g = crate::field::GHOST_WIDTH;
                    Ok((0..u.len())
                        .map(|i| -(padded[g + i] - padded[g + i - 1]) / grid.dx)
                        .collect())
                }
            }
        };
        let mut t = 0.0;
        for _ in 0..steps {
            values = super::rk3_step(&values, t, dt, &mut rhs_fn)?;
            t += dt;
        }

        let mut l1 = 0.0;
        let mut linf: f64 = 0.0;
        for (a, b) in values.iter().zip(&field0.values) {
            let e = (a - b).abs();
            l1 += e * grid.dx;
            linf = linf.max(e);
        }
        let (l1_order, linf_order) = match rows.last() {
            Some(prev) => {
                let ratio = (n as f64 / prev.n as f64).ln();
                (
                    Some((prev.l1 / l1).ln() / ratio),
                    Some((prev.linf / linf).ln() / ratio),
                )
            }
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            n,
            l1,
            linf,
            l1_order,
            linf_order,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weno_z_and_linear_reach_design_order() {
        let z = SchemeConfig::z();
        let rows = advection_convergence(&ConvergenceScheme::Weno(&z), &[25, 50, 100], 0.4).unwrap();
        let order = rows.last().unwrap().l1_order.unwrap();
        assert!(order >= 4.5, "WENO5-Z order {order}");

        let lin = SchemeConfig::linear();
        let rows =
            advection_convergence(&ConvergenceScheme::Weno(&lin), &[25, 50, 100], 0.4).unwrap();
        let order = rows.last().unwrap().l1_order.unwrap();
        assert!((order - 5.0).abs() <= 0.2, "linear order {order}");
    }

    #[test]
    fn first_order_anchor() {
        let rows =
            advection_convergence(&ConvergenceScheme::FirstOrderUpwind, &[50, 100, 200], 0.4)
                .unwrap();
        let order = rows.last().unwrap().l1_order.unwrap();
        assert!((order - 1.0).abs() <= 0.2, "first-order anchor gave {order}");
    }

    #[test]
    fn rejects_unsorted_resolutions() {
        let z = SchemeConfig::z();
        assert!(advection_convergence(&ConvergenceScheme::Weno(&z), &[100, 50], 0.4).is_err());
    }

    #[test]
    fn composite_profile_shape() {
        let problem = composite_advection(200);
        let f = problem.initial_field();
        // Square wave plateau.
        let grid = match &problem.layout {
            super::super::Layout::One { grid, .. } => grid.clone(),
            _ => unreachable!(),
        };
        let at = |x: f64| {
            let i = ((x - grid.x_left) / grid.dx - 0.5).round() as usize;
            f.values[i]
        };
        assert_eq!(at(-0.3), 1.0);
        assert_eq!(at(0.9), 0.0);
        // Triangle apex near x = 0.1.
        assert!(at(0.1) > 0.95);
        // Semi-ellipse peak near x = 0.5.
        assert!(at(0.5) > 0.95);
    }

    #[test]
    fn preset_lookup() {
        for name in preset_names() {
            let nx = Some(16);
            let ny = Some(12);
            let p = by_name(name, nx, ny).unwrap();
            assert_eq!(&p.name, if *name == "rt" { "rayleigh-taylor" } else if *name == "dmr" { "double-mach" } else if *name == "riemann2d" { "riemann2d" } else { p.name.as_str() });
        }
        assert!(by_name("sod", None, None).is_err());
    }

    #[test]
    fn double_mach_ic_matches_boundary_states() {
        let problem = double_mach(96, 24);
        let field = problem.initial_field();
        // Bottom-left cell is post-shock, far-right pre-shock.
        let post = field.cell2(0, 0);
        assert!((post[0] - 8.0).abs() < 1e-12);
        let pre = field.cell2(95, 0);
        assert!((pre[0] - 1.4).abs() < 1e-12);
    }
}
