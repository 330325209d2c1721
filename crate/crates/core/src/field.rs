//! Conserved-state containers and ghost-cell boundary handling.

use crate::grid::{Grid1D, Grid2D};

/// Ghost width used throughout: the five-point stencil around each of the
/// interfaces `i - 1/2` and `i + 1/2` reaches two cells past the boundary
/// cell, plus one for the interface offset.
pub const GHOST_WIDTH: usize = 3;

/// Grid attached to a [`StateField`].
#[derive(Debug, Clone)]
pub enum GridSpec {
    One(Grid1D),
    Two(Grid2D),
}

/// A conserved-variable array over a 1D or 2D grid (interior cells only;
/// ghost layers are produced on demand by [`fill_ghosts`]).
///
/// Storage is row-major: `values[(j * nx + i) * n_vars + v]` in 2D and
/// `values[i * n_vars + v]` in 1D.
#[derive(Debug, Clone)]
pub struct StateField {
    pub grid: GridSpec,
    pub n_vars: usize,
    pub values: Vec<f64>,
    pub ghost_width: usize,
}

impl StateField {
    pub fn new_1d(grid: Grid1D, n_vars: usize) -> Self {
        let values = vec![0.0; grid.n_cells * n_vars];
        StateField {
            grid: GridSpec::One(grid),
            n_vars,
            values,
            ghost_width: GHOST_WIDTH,
        }
    }

    pub fn new_2d(grid: Grid2D, n_vars: usize) -> Self {
        let values = vec![0.0; grid.x.n_cells * grid.y.n_cells * n_vars];
        StateField {
            grid: GridSpec::Two(grid),
            n_vars,
            values,
            ghost_width: GHOST_WIDTH,
        }
    }

    pub fn nx(&self) -> usize {
        match &self.grid {
            GridSpec::One(g) => g.n_cells,
            GridSpec::Two(g) => g.x.n_cells,
        }
    }

    pub fn ny(&self) -> usize {
        match &self.grid {
            GridSpec::One(_) => 1,
            GridSpec::Two(g) => g.y.n_cells,
        }
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_vars..(i + 1) * self.n_vars]
    }

    pub fn cell_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.values[i * self.n_vars..(i + 1) * self.n_vars]
    }

    pub fn cell2(&self, i: usize, j: usize) -> &[f64] {
        let k = j * self.nx() + i;
        self.cell(k)
    }

    pub fn cell2_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let k = j * self.nx() + i;
        self.cell_mut(k)
    }
}

/// Geometry and states of a Mach-10 oblique shock sweeping along the top
/// boundary: at time `t` the shock crosses the wall at
/// `x = x_at_wall_t0 + speed_x * t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObliqueShock {
    pub x_at_wall_t0: f64,
    pub speed_x: f64,
    /// Conserved pre-shock state (written for `x > x_s(t)`).
    pub pre: Vec<f64>,
    /// Conserved post-shock state.
    pub post: Vec<f64>,
}

impl ObliqueShock {
    pub fn wall_position(&self, t: f64) -> f64 {
        self.x_at_wall_t0 + self.speed_x * t
    }
}

/// Per-side boundary treatment.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryKind {
    /// Wrap indices around the domain.
    Periodic,
    /// Zero-gradient extrapolation: ghosts copy the nearest interior cell.
    NonReflective,
    /// Mirror the interior and flip the sign of the wall-normal momentum.
    Reflective,
    /// Ghosts hold the given conserved state.
    Fixed(Vec<f64>),
    /// Time-dependent split between pre- and post-shock states.
    DoubleMachTop(ObliqueShock),
}

/// Extends one pencil of `n_vars`-sized cells by `ghost` cells on each end.
///
/// `normal_mom` is the index of the momentum component normal to the wall
/// (`None` for scalar fields); `transverse` is the pencil's coordinate along
/// the other axis, used by [`BoundaryKind::DoubleMachTop`]. Interior values
/// are copied verbatim into the middle of the returned buffer.
pub fn pad_line(
    interior: &[f64],
    n_vars: usize,
    ghost: usize,
    lo: &BoundaryKind,
    hi: &BoundaryKind,
    normal_mom: Option<usize>,
    transverse: f64,
    t: f64,
) -> Vec<f64> {
    assert_eq!(interior.len() % n_vars, 0, "pencil length not a multiple of n_vars");
    let n = interior.len() / n_vars;
    assert!(n >= 1);
    let mut out = vec![0.0; (n + 2 * ghost) * n_vars];
    out[ghost * n_vars..(ghost + n) * n_vars].copy_from_slice(interior);

    let write = |out: &mut [f64], cell: usize, state: &[f64]| {
        out[cell * n_vars..(cell + 1) * n_vars].copy_from_slice(state);
    };
    let mirror = |src: &[f64]| {
        let mut s = src.to_vec();
        if let Some(m) = normal_mom {
            s[m] = -s[m];
        }
        s
    };
    let interior_cell = |i: usize| &interior[i * n_vars..(i + 1) * n_vars];

    for side in 0..2 {
        let bc = if side == 0 { lo } else { hi };
        for k in 1..=ghost {
            // Ghost cell `k` steps outside the boundary on this side.
            let dst = if side == 0 { ghost - k } else { ghost + n + k - 1 };
            match bc {
                BoundaryKind::Periodic => {
                    let src = if side == 0 {
                        (n as isize - k as isize).rem_euclid(n as isize) as usize
                    } else {
                        (k - 1) % n
                    };
                    write(&mut out, dst, interior_cell(src));
                }
                BoundaryKind::NonReflective => {
                    let src = if side == 0 { 0 } else { n - 1 };
                    write(&mut out, dst, interior_cell(src));
                }
                BoundaryKind::Reflective => {
                    let src = if side == 0 { k - 1 } else { n - k };
                    let state = mirror(interior_cell(src));
                    write(&mut out, dst, &state);
                }
                BoundaryKind::Fixed(state) => {
                    assert_eq!(state.len(), n_vars, "fixed boundary state has wrong variable count");
                    write(&mut out, dst, state);
                }
                BoundaryKind::DoubleMachTop(shock) => {
                    assert_eq!(shock.pre.len(), n_vars, "shock state has wrong variable count");
                    let state = if transverse > shock.wall_position(t) {
                        &shock.pre
                    } else {
                        &shock.post
                    };
                    write(&mut out, dst, state);
                }
            }
        }
    }
    out
}

/// Boundary condition pair for one axis (`lo`, `hi`).
#[derive(Debug, Clone)]
pub struct BoundaryPair {
    pub lo: BoundaryKind,
    pub hi: BoundaryKind,
}

/// Boundary conditions for a whole field.
#[derive(Debug, Clone)]
pub enum FieldBc {
    One(BoundaryPair),
    Two { x: BoundaryPair, y: BoundaryPair },
}

/// Returns the interior values extended by `ghost_width` cells per side.
///
/// In 1D the result is a padded pencil. In 2D every interior row is padded in
/// x, then every column of the x-padded array is padded in y, so the corner
/// blocks carry the y-boundary treatment of the adjacent ghost columns.
/// The wall-normal momentum index is 1 in x and 2 in y for Euler fields
/// (4 variables), 1 for 1D Euler fields and absent for scalars.
pub fn fill_ghosts(field: &StateField, bc: &FieldBc, t: f64) -> Vec<f64> {
    let g = field.ghost_width;
    let nv = field.n_vars;
    match (&field.grid, bc) {
        (GridSpec::One(_), FieldBc::One(pair)) => {
            let normal = if nv >= 3 { Some(1) } else { None };
            pad_line(&field.values, nv, g, &pair.lo, &pair.hi, normal, 0.0, t)
        }
        (GridSpec::Two(grid), FieldBc::Two { x, y }) => {
            let (nx, ny) = (grid.x.n_cells, grid.y.n_cells);
            let pnx = nx + 2 * g;
            let pny = ny + 2 * g;
            let mut out = vec![0.0; pnx * pny * nv];
            for j in 0..ny {
                let row = &field.values[j * nx * nv..(j + 1) * nx * nv];
                let y_coord = grid.y.cell_center(j);
                let padded = pad_line(row, nv, g, &x.lo, &x.hi, Some(1), y_coord, t);
                out[(j + g) * pnx * nv..(j + g + 1) * pnx * nv].copy_from_slice(&padded);
            }
            for i in 0..pnx {
                let x_coord = grid.x.x_left + (i as f64 - g as f64 + 0.5) * grid.x.dx;
                let mut col = vec![0.0; ny * nv];
                for j in 0..ny {
                    let src = ((j + g) * pnx + i) * nv;
                    col[j * nv..(j + 1) * nv].copy_from_slice(&out[src..src + nv]);
                }
                let padded = pad_line(&col, nv, g, &y.lo, &y.hi, Some(2), x_coord, t);
                for j in 0..pny {
                    let dst = (j * pnx + i) * nv;
                    out[dst..dst + nv].copy_from_slice(&padded[j * nv..(j + 1) * nv]);
                }
            }
            out
        }
        _ => panic!("boundary specification does not match field dimension"),
    }
}
