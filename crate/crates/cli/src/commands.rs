//! Implementations of the subcommands.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use weno_nn::adr;
use weno_nn::error::{ConfigError, NnError, SolverError, TrainError};
use weno_nn::field::{pad_line, BoundaryKind, GridSpec};
use weno_nn::grid::make_grid;
use weno_nn::io;
use weno_nn::nn::Checkpoint;
use weno_nn::solver::{self, problems, ConvergenceScheme};
use weno_nn::train::{self, TrainFileConfig};
use weno_nn::weno::{interface_weights, SchemeConfig, SchemeKind, Stencil5};

use crate::manifest::{digest_inputs, RunManifest};

/// Command error with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or input files: exit code 2.
    Config(String),
    /// Numeric failure during a run: exit code 3.
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Numeric(m) => write!(f, "{m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<NnError> for CliError {
    fn from(e: NnError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io: {e}"))
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Config(c) => CliError::Config(c.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::Config(_) => CliError::Config(e.to_string()),
            TrainError::NonFiniteLoss { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

/// Resolves a scheme label plus optional checkpoint into a configuration;
/// NN schemes require a checkpoint whose base matches.
fn resolve_scheme(label: &str, checkpoint: Option<&Path>) -> Result<SchemeConfig, CliError> {
    let kind = SchemeKind::parse(label)?;
    if !kind.is_nn() {
        let cfg = match kind {
            SchemeKind::Linear => SchemeConfig::linear(),
            SchemeKind::Js => SchemeConfig::js(),
            SchemeKind::Z => SchemeConfig::z(),
            _ => unreachable!(),
        };
        return Ok(cfg);
    }
    let path = checkpoint.ok_or_else(|| {
        CliError::Config(format!("scheme '{label}' requires --checkpoint"))
    })?;
    let (params, base) = Checkpoint::load(path)?.into_params()?;
    let cfg = match (kind, base) {
        (SchemeKind::JsNn, SchemeKind::Js) => SchemeConfig::js_nn(params),
        (SchemeKind::ZNn, SchemeKind::Z) => SchemeConfig::z_nn(params),
        _ => {
            return Err(CliError::Config(format!(
                "checkpoint {} was trained against base {}, not usable with scheme '{label}'",
                path.display(),
                base.label()
            )))
        }
    };
    Ok(cfg)
}

fn checkpoint_id(cfg: &SchemeConfig) -> Option<String> {
    cfg.network.as_ref().map(|n| n.theta_id().to_string())
}

pub fn cmd_train(config: &Path, seed: Option<u64>, out_dir: &Path) -> Result<(), CliError> {
    let start = Instant::now();
    let text = std::fs::read_to_string(config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
    let file = TrainFileConfig::parse(&text)?;
    let (base, mut cfg, dataset_spec) = file.resolve()?;
    if let Some(s) = seed {
        cfg.seed = s;
    }

    let inputs = [
        ("config", text.clone()),
        ("seed", cfg.seed.to_string()),
    ];
    let digest = digest_inputs("train", &inputs);

    let dataset = dataset_spec.generate();
    let output = train::train(&dataset, &cfg, &base)?;

    std::fs::create_dir_all(out_dir)?;
    let ckpt_path = out_dir.join("checkpoint.json");
    let ckpt = Checkpoint::from_params(&output.params, base.kind, &digest);
    ckpt.save(&ckpt_path)?;
    let history_path = out_dir.join("loss_history.csv");
    io::write_text(&history_path, &io::history_csv(&output.history))?;

    let mut manifest = RunManifest::new("train", &inputs);
    manifest.scheme = Some(base.kind.label().to_string());
    manifest.checkpoint_id = Some(output.params.theta_id().to_string());
    manifest.wall_time_secs = start.elapsed().as_secs_f64();
    manifest.outputs = vec![
        ckpt_path.display().to_string(),
        history_path.display().to_string(),
    ];
    manifest.write(out_dir)?;

    if let (Some(first), Some(last)) = (output.history.first(), output.history.last()) {
        println!(
            "trained {} epochs: total loss {:.6e} -> {:.6e} (checkpoint {})",
            output.history.len(),
            first.total,
            last.total,
            output.params.theta_id()
        );
    }
    Ok(())
}

pub fn cmd_adr(
    scheme_label: &str,
    checkpoint: Option<&Path>,
    n: usize,
    out_dir: &Path,
) -> Result<(), CliError> {
    let start = Instant::now();
    if n < 4 || n % 2 != 0 {
        return Err(CliError::Config(format!(
            "ADR grid must be even and at least 4, got {n}"
        )));
    }
    let cfg = resolve_scheme(scheme_label, checkpoint)?;
    let samples = adr::spectrum(&cfg, n);
    let bounds: Vec<(f64, f64, f64)> = (0..=n / 2)
        .map(|mode| {
            let (err, bound) = adr::spectral_error_bound(&cfg, mode, n);
            (samples[mode].phi, err, bound)
        })
        .collect();

    std::fs::create_dir_all(out_dir)?;
    let spec_path = out_dir.join(format!("spectrum_{scheme_label}.csv"));
    io::write_text(&spec_path, &io::spectrum_csv(&samples))?;
    let bound_path = out_dir.join(format!("bound_{scheme_label}.csv"));
    io::write_text(&bound_path, &io::bound_csv(&bounds))?;

    let inputs = [
        ("scheme", scheme_label.to_string()),
        ("n", n.to_string()),
        ("checkpoint", checkpoint_id(&cfg).unwrap_or_default()),
    ];
    let mut manifest = RunManifest::new("adr", &inputs);
    manifest.scheme = Some(scheme_label.to_string());
    manifest.checkpoint_id = checkpoint_id(&cfg);
    manifest.grid = Some(n.to_string());
    manifest.wall_time_secs = start.elapsed().as_secs_f64();
    manifest.outputs = vec![
        spec_path.display().to_string(),
        bound_path.display().to_string(),
    ];
    manifest.write(out_dir)?;
    println!(
        "wrote spectrum ({} modes) and bound table for {scheme_label}",
        samples.len()
    );
    Ok(())
}

pub struct RunOverrides {
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub tfinal: Option<f64>,
    pub cfl: Option<f64>,
    pub snapshots: Vec<f64>,
}

pub fn cmd_run(
    problem_name: &str,
    scheme_label: &str,
    checkpoint: Option<&Path>,
    overrides: RunOverrides,
    out_dir: &Path,
) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = resolve_scheme(scheme_label, checkpoint)?;
    let mut problem = problems::by_name(problem_name, overrides.nx, overrides.ny)?;
    if let Some(t) = overrides.tfinal {
        problem.t_final = t;
    }
    if let Some(c) = overrides.cfl {
        problem.cfl = c;
    }

    let result = solver::run_with_snapshots(&problem, &cfg, &overrides.snapshots)?;

    std::fs::create_dir_all(out_dir)?;
    let mut outputs = Vec::new();
    let write_state = |field: &weno_nn::field::StateField,
                           t: f64,
                           tag: &str|
     -> Result<PathBuf, CliError> {
        let path = match &field.grid {
            GridSpec::One(_) => {
                let p = out_dir.join(format!("{problem_name}_{scheme_label}_{tag}.csv"));
                io::write_text(&p, &io::snapshot_1d_csv(field, &problem.system, problem.gamma))?;
                p
            }
            GridSpec::Two(_) => {
                let p = out_dir.join(format!("{problem_name}_{scheme_label}_{tag}.dat"));
                io::write_text(&p, &io::snapshot_2d_text(field, problem.gamma))?;
                p
            }
        };
        let _ = t;
        Ok(path)
    };
    for (t, field) in &result.snapshots {
        let path = write_state(field, *t, &format!("t{t}"))?;
        outputs.push(path.display().to_string());
    }
    let final_path = write_state(&result.field, result.t, "final")?;
    outputs.push(final_path.display().to_string());

    let grid_desc = match &result.field.grid {
        GridSpec::One(g) => g.n_cells.to_string(),
        GridSpec::Two(g) => format!("{}x{}", g.x.n_cells, g.y.n_cells),
    };
    let inputs = [
        ("problem", problem_name.to_string()),
        ("scheme", scheme_label.to_string()),
        ("grid", grid_desc.clone()),
        ("tfinal", problem.t_final.to_string()),
        ("cfl", problem.cfl.to_string()),
        ("checkpoint", checkpoint_id(&cfg).unwrap_or_default()),
        (
            "snapshots",
            overrides
                .snapshots
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        ),
    ];
    let mut manifest = RunManifest::new("run", &inputs);
    manifest.scheme = Some(scheme_label.to_string());
    manifest.checkpoint_id = checkpoint_id(&cfg);
    manifest.grid = Some(grid_desc);
    manifest.t_final = Some(problem.t_final);
    manifest.wall_time_secs = start.elapsed().as_secs_f64();
    manifest.outputs = outputs;
    manifest.write(out_dir)?;
    println!(
        "{problem_name} with {scheme_label}: {} steps to t = {}, wrote {}",
        result.steps,
        result.t,
        final_path.display()
    );
    Ok(())
}

pub fn cmd_convergence(
    scheme_label: &str,
    checkpoint: Option<&Path>,
    resolutions: &[usize],
    cfl: f64,
    first_order: bool,
    out_dir: &Path,
) -> Result<(), CliError> {
    let start = Instant::now();
    let (rows, label) = if first_order {
        (
            solver::advection_convergence(&ConvergenceScheme::FirstOrderUpwind, resolutions, cfl)?,
            "upwind1".to_string(),
        )
    } else {
        let cfg = resolve_scheme(scheme_label, checkpoint)?;
        (
            solver::advection_convergence(&ConvergenceScheme::Weno(&cfg), resolutions, cfl)?,
            scheme_label.to_string(),
        )
    };

    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("convergence_{label}.csv"));
    io::write_text(&path, &io::convergence_csv(&rows))?;

    let inputs = [
        ("scheme", label.clone()),
        (
            "resolutions",
            resolutions
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("cfl", cfl.to_string()),
    ];
    let mut manifest = RunManifest::new("convergence", &inputs);
    manifest.scheme = Some(label);
    manifest.wall_time_secs = start.elapsed().as_secs_f64();
    manifest.outputs = vec![path.display().to_string()];
    manifest.write(out_dir)?;

    for r in &rows {
        match r.l1_order {
            Some(o) => println!("n = {:5}: L1 = {:.3e} (order {:.2})", r.n, r.l1, o),
            None => println!("n = {:5}: L1 = {:.3e}", r.n, r.l1),
        }
    }
    Ok(())
}

/// Probe functions for the weight-distribution study.
fn probe_function(name: &str) -> Result<Box<dyn Fn(f64) -> f64>, CliError> {
    match name {
        // Two-sine profile with a +3 jump at x = 0.5; the smooth part
        // mimics the high-frequency waves of the Shu-Osher density field.
        "probe" => Ok(Box::new(|x: f64| {
            let base = 2.0 / 3.0 * (6.0 * std::f64::consts::PI * x).sin()
                + 0.25 * (1.6 * std::f64::consts::PI * x).sin();
            if x >= 0.5 {
                base + 3.0
            } else {
                base
            }
        })),
        "constant" => Ok(Box::new(|_| 1.0)),
        other => Err(CliError::Config(format!(
            "unknown probe function '{other}' (expected probe|constant)"
        ))),
    }
}

/// Weight triples at every interface of the probe grid on `[0, 2]` with
/// zero-gradient padding.
pub fn weight_distribution(
    f: &dyn Fn(f64) -> f64,
    nx: usize,
    cfg: &SchemeConfig,
) -> Result<Vec<(f64, [f64; 3])>, CliError> {
    let grid = make_grid(0.0, 2.0, nx)?;
    let values: Vec<f64> = (0..nx).map(|i| f(grid.cell_center(i))).collect();
    let padded = pad_line(
        &values,
        1,
        weno_nn::field::GHOST_WIDTH,
        &BoundaryKind::NonReflective,
        &BoundaryKind::NonReflective,
        None,
        0.0,
        0.0,
    );
    Ok((0..=nx)
        .map(|i| {
            // Upwind stencil of the interface between cells i-1 and i.
            let stencil: Stencil5 = padded[i..i + 5].try_into().unwrap();
            (grid.interface(i), interface_weights(&stencil, cfg))
        })
        .collect())
}

pub fn cmd_weights(
    function: &str,
    schemes: &[String],
    checkpoints: &[PathBuf],
    nx: usize,
    out_dir: &Path,
) -> Result<(), CliError> {
    let start = Instant::now();
    let f = probe_function(function)?;
    std::fs::create_dir_all(out_dir)?;

    let mut ckpt_iter = checkpoints.iter();
    let mut outputs = Vec::new();
    let mut ids = Vec::new();
    for label in schemes {
        let kind = SchemeKind::parse(label)?;
        let ckpt = if kind.is_nn() {
            Some(ckpt_iter.next().ok_or_else(|| {
                CliError::Config(format!(
                    "scheme '{label}' needs a --checkpoint (given in order of the NN schemes)"
                ))
            })?)
        } else {
            None
        };
        let cfg = resolve_scheme(label, ckpt.map(|p| p.as_path()))?;
        if let Some(id) = checkpoint_id(&cfg) {
            ids.push(id);
        }
        let rows = weight_distribution(f.as_ref(), nx, &cfg)?;
        let path = out_dir.join(format!("weights_{label}.csv"));
        io::write_text(&path, &io::weights_csv(&rows))?;
        outputs.push(path.display().to_string());
    }

    let inputs = [
        ("function", function.to_string()),
        ("schemes", schemes.join(",")),
        ("nx", nx.to_string()),
        ("checkpoints", ids.join(",")),
    ];
    let mut manifest = RunManifest::new("weights", &inputs);
    manifest.grid = Some(nx.to_string());
    manifest.wall_time_secs = start.elapsed().as_secs_f64();
    manifest.outputs = outputs;
    manifest.write(out_dir)?;
    println!("wrote weight distributions for {} scheme(s)", schemes.len());
    Ok(())
}

pub fn cmd_dataset(
    seed: u64,
    tanh: usize,
    sine: usize,
    poly: usize,
    full: bool,
    out_dir: &Path,
) -> Result<(), CliError> {
    use std::fmt::Write as _;
    let start = Instant::now();
    let data = train::generate_dataset_with(seed, tanh, sine, poly);

    std::fs::create_dir_all(out_dir)?;
    let mut summary = String::from("id,family,params\n");
    for (id, s) in data.iter().enumerate() {
        let family = match s.family {
            train::SampleFamily::Tanh => "tanh",
            train::SampleFamily::Sine => "sine",
            train::SampleFamily::Poly => "poly",
        };
        let params = s
            .params
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let _ = writeln!(summary, "{id},{family},{params}");
    }
    let summary_path = out_dir.join("dataset_summary.csv");
    io::write_text(&summary_path, &summary)?;
    let mut outputs = vec![summary_path.display().to_string()];

    if full {
        let dx = train::dataset::train_dx();
        let mut nodes = String::from("id,i,x,f\n");
        let mut interfaces = String::from("id,i,x,h\n");
        for (id, s) in data.iter().enumerate() {
            for (i, v) in s.grid_values.iter().enumerate() {
                let x = -1.0 + i as f64 * dx;
                let _ = writeln!(nodes, "{id},{i},{x},{v}");
            }
            for (i, h) in s.reference_fluxes.iter().enumerate() {
                let x = -1.0 + (i as f64 + 0.5) * dx;
                let _ = writeln!(interfaces, "{id},{i},{x},{h}");
            }
        }
        let nodes_path = out_dir.join("dataset_nodes.csv");
        io::write_text(&nodes_path, &nodes)?;
        let ifc_path = out_dir.join("dataset_interfaces.csv");
        io::write_text(&ifc_path, &interfaces)?;
        outputs.push(nodes_path.display().to_string());
        outputs.push(ifc_path.display().to_string());
    }

    let inputs = [
        ("seed", seed.to_string()),
        ("tanh", tanh.to_string()),
        ("sine", sine.to_string()),
        ("poly", poly.to_string()),
        ("full", full.to_string()),
    ];
    let mut manifest = RunManifest::new("dataset", &inputs);
    manifest.wall_time_secs = start.elapsed().as_secs_f64();
    manifest.outputs = outputs;
    manifest.write(out_dir)?;
    println!("generated {} samples", data.len());
    Ok(())
}
