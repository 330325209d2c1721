//! Plot-data writers: CSV tables and plain-text 2D snapshots.
//!
//! Floats print with the shortest representation that round-trips to the
//! same `f64`, so re-reading an output file reproduces the run bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use crate::adr::SpectrumSample;
use crate::field::{GridSpec, StateField};
use crate::solver::{pressure_2d, ConvergenceRow, System};
use crate::train::EpochStats;

/// `phi,re_Phi,im_Phi,dispersion_err,dissipation`
pub fn spectrum_csv(samples: &[SpectrumSample]) -> String {
    let mut out = String::from("phi,re_Phi,im_Phi,dispersion_err,dissipation\n");
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.phi,
            s.modified.re,
            s.modified.im,
            s.dispersion_err(),
            s.dissipation()
        );
    }
    out
}

/// `phi,error,bound` rows of the spectral-error bound sweep.
pub fn bound_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("phi,error,bound\n");
    for (phi, error, bound) in rows {
        let _ = writeln!(out, "{phi},{error},{bound}");
    }
    out
}

/// `epoch,L_r,L_tvd,L_diss,L_reg,total,lr`; `L_reg` is the unweighted
/// `||W||^2`.
pub fn history_csv(history: &[EpochStats]) -> String {
    let mut out = String::from("epoch,L_r,L_tvd,L_diss,L_reg,total,lr\n");
    for h in history {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            h.epoch, h.l_r, h.l_tvd, h.l_diss, h.w_norm_sq, h.total, h.lr
        );
    }
    out
}

/// `nx,l1,l1_order,linf,linf_order` with empty order cells on the first row.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("nx,l1,l1_order,linf,linf_order\n");
    for r in rows {
        let fmt = |o: Option<f64>| o.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            r.l1,
            fmt(r.l1_order),
            r.linf,
            fmt(r.linf_order)
        );
    }
    out
}

/// Per-interface weight triples: `x,w0,w1,w2`.
pub fn weights_csv(rows: &[(f64, [f64; 3])]) -> String {
    let mut out = String::from("x,w0,w1,w2\n");
    for (x, w) in rows {
        let _ = writeln!(out, "{},{},{},{}", x, w[0], w[1], w[2]);
    }
    out
}

/// 1D snapshot: `x,u` for scalar fields, `x,rho,mom,energy,u,p` for Euler.
pub fn snapshot_1d_csv(field: &StateField, system: &System, gamma: f64) -> String {
    let grid = match &field.grid {
        GridSpec::One(g) => g,
        GridSpec::Two(_) => panic!("snapshot_1d_csv needs a 1D field"),
    };
    match system {
        System::Advection { .. } => {
            let mut out = String::from("x,u\n");
            for i in 0..grid.n_cells {
                let _ = writeln!(out, "{},{}", grid.cell_center(i), field.cell(i)[0]);
            }
            out
        }
        System::Euler => {
            let mut out = String::from("x,rho,mom,energy,u,p\n");
            for i in 0..grid.n_cells {
                let c = field.cell(i);
                let u = c[1] / c[0];
                let p = (gamma - 1.0) * (c[2] - 0.5 * c[1] * c[1] / c[0]);
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    grid.cell_center(i),
                    c[0],
                    c[1],
                    c[2],
                    u,
                    p
                );
            }
            out
        }
    }
}

/// 2D snapshot, plain text:
///
/// ```text
/// # 2d snapshot v1
/// nx ny
/// x_left x_right y_left y_right
/// <ny lines of nx rho values>   (row j lists cells (0..nx, j))
/// <ny lines of nx u values>
/// <ny lines of nx v values>
/// <ny lines of nx p values>
/// ```
pub fn snapshot_2d_text(field: &StateField, gamma: f64) -> String {
    let grid = match &field.grid {
        GridSpec::Two(g) => g,
        GridSpec::One(_) => panic!("snapshot_2d_text needs a 2D field"),
    };
    let (nx, ny) = (grid.x.n_cells, grid.y.n_cells);
    let mut out = String::from("# 2d snapshot v1\n");
    let _ = writeln!(out, "{nx} {ny}");
    let _ = writeln!(
        out,
        "{} {} {} {}",
        grid.x.x_left, grid.x.x_right, grid.y.x_left, grid.y.x_right
    );
    let block = |f: &dyn Fn(&[f64]) -> f64| {
        let mut s = String::new();
        for j in 0..ny {
            for i in 0..nx {
                if i > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{}", f(field.cell2(i, j)));
            }
            s.push('\n');
        }
        s
    };
    out.push_str(&block(&|c| c[0]));
    out.push_str(&block(&|c| c[1] / c[0]));
    out.push_str(&block(&|c| c[2] / c[0]));
    out.push_str(&block(&|c| {
        pressure_2d(c.try_into().expect("4 variables"), gamma)
    }));
    out
}

pub fn write_text(path: &Path, content: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, content)
}
