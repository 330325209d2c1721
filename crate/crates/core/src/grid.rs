//! Uniform cell-centered grids.

use crate::error::ConfigError;

/// Minimum cell count accepted by [`make_grid`]; a five-point stencil plus
/// interface offsets is meaningless on anything coarser.
pub const MIN_CELLS: usize = 10;

/// A uniform 1D grid of `n_cells` cells on `[x_left, x_right]`.
///
/// Cell centers sit at `x_left + (i + 1/2) * dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub x_left: f64,
    pub x_right: f64,
    pub n_cells: usize,
    pub dx: f64,
    pub cell_centers: Vec<f64>,
}

impl Grid1D {
    pub fn cell_center(&self, i: usize) -> f64 {
        self.cell_centers[i]
    }

    /// Coordinate of the interface between cells `i-1` and `i` (`i` in `0..=n_cells`).
    pub fn interface(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.dx
    }
}

/// A tensor-product 2D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

pub fn make_grid(x_left: f64, x_right: f64, n_cells: usize) -> Result<Grid1D, ConfigError> {
    if !(x_right > x_left) {
        return Err(ConfigError::DegenerateDomain { x_left, x_right });
    }
    if n_cells < MIN_CELLS {
        return Err(ConfigError::TooFewCells {
            n_cells,
            min: MIN_CELLS,
        });
    }
    let dx = (x_right - x_left) / n_cells as f64;
    let cell_centers = (0..n_cells)
        .map(|i| x_left + (i as f64 + 0.5) * dx)
        .collect();
    Ok(Grid1D {
        x_left,
        x_right,
        n_cells,
        dx,
        cell_centers,
    })
}

pub fn make_grid_2d(
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<Grid2D, ConfigError> {
    Ok(Grid2D {
        x: make_grid(x_range.0, x_range.1, nx)?,
        y: make_grid(y_range.0, y_range.1, ny)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spacing_and_centers() {
        let g = make_grid(-1.0, 1.0, 100).unwrap();
        assert_relative_eq!(g.dx, 0.02, max_relative = 1e-15);
        assert_relative_eq!(g.cell_centers[0], -0.99, max_relative = 1e-15);

        let g = make_grid(0.0, 1.0, 200).unwrap();
        assert_relative_eq!(g.dx, 0.005, max_relative = 1e-15);

        let g = make_grid(-5.0, 5.0, 1000).unwrap();
        assert_relative_eq!(g.dx, 0.01, max_relative = 1e-15);
    }

    #[test]
    fn centers_monotone_and_consistent() {
        let g = make_grid(-3.0, 7.0, 37).unwrap();
        assert!(g.dx > 0.0);
        for i in 0..g.n_cells {
            assert_relative_eq!(
                g.cell_center(i),
                g.x_left + (i as f64 + 0.5) * g.dx,
                max_relative = 1e-14
            );
            if i > 0 {
                assert!(g.cell_center(i) > g.cell_center(i - 1));
            }
        }
        assert_relative_eq!(g.interface(0), g.x_left, max_relative = 1e-14);
        assert_relative_eq!(g.interface(g.n_cells), g.x_right, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(
            make_grid(1.0, 1.0, 100),
            Err(ConfigError::DegenerateDomain { .. })
        ));
        assert!(matches!(
            make_grid(2.0, 1.0, 100),
            Err(ConfigError::DegenerateDomain { .. })
        ));
        assert!(matches!(
            make_grid(0.0, 1.0, 9),
            Err(ConfigError::TooFewCells { .. })
        ));
    }
}
