//! `kuo` command-line front end: argument parsing, configuration, result
//! caching and table output around `kuo-core`.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use kuo_core::CurveTable;

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "kuo", version, about = "Rayleigh-Kuo spectra, traveling-wave atlas and linear damping for beta-plane Couette flow")]
pub struct Cli {
    /// Flat key = value configuration file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Also write an SVG plot next to --out.
    #[arg(long, global = true)]
    pub plot: bool,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Coarsest grid intervals of the extrapolation ladder.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Tolerance for the command's search or classification.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Worker threads for parameter sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// n-th Rayleigh-Kuo eigenvalue for Couette flow at (beta, c).
    Eigen {
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Transition value, borderline curve, region classification and inversions.
    Atlas {
        #[command(subcommand)]
        cmd: AtlasCommand,
    },
    /// Cut-off perturbed Couette profile and its eigenvalues at c = 0.
    ModifiedFlow {
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 3)]
        modes: usize,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Add the small-gamma sweep table.
        #[arg(long)]
        sweep: bool,
        /// Smallest a with λ₁ = D at this γ (scan then bisect).
        #[arg(long, allow_hyphen_values = true)]
        level: Option<f64>,
        /// Upper end of the a search; defaults to (4D - 6)/(3 b0) + 1.
        #[arg(long)]
        a_max: Option<f64>,
    },
    /// Residual of the first-order bifurcated wave over an amplitude ladder.
    Bifurcate {
        #[arg(long, value_enum, default_value = "couette")]
        profile: BaseProfile,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, value_delimiter = ',', default_values_t = commands::KAPPA_LADDER.to_vec())]
        kappas: Vec<f64>,
        #[arg(long, default_value_t = kuo_core::bifurcation::DEFAULT_NX)]
        nx: usize,
        #[arg(long, default_value_t = 7)]
        control_seed: u64,
    },
    /// Linearized per-mode evolution and velocity decay.
    Damping {
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 100.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-2)]
        dt: f64,
        #[arg(long, value_enum, default_value = "gaussian")]
        data: InitialData,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum AtlasCommand {
    /// β* with λ₁(β*, -1) = 0.
    BetaStar,
    /// Borderline wavenumber α_β over a β range.
    Curve {
        #[arg(long)]
        beta_min: f64,
        #[arg(long)]
        beta_max: f64,
        #[arg(long, default_value_t = 16)]
        points: usize,
    },
    /// Region of (α, β): O, Gamma±, I±.
    Region {
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
    },
    /// β whose critical period equals T.
    #[command(name = "beta-T")]
    BetaT {
        #[arg(long)]
        period: f64,
    },
    /// Speeds c < -1 with λ₁(β, c) = λ0.
    Speed {
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda0: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseProfile {
    Couette,
    Cubic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialData {
    Gaussian,
    Compact,
}

/// Merges the config file (if any) with the flags.
pub fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(r) = cli.resolution {
        cfg.resolution = r;
    }
    if let Some(t) = cli.tol {
        cfg.tolerances.clear();
        cfg.tolerances.insert("default".into(), t);
    }
    if let Some(d) = &cli.cache_dir {
        cfg.cache_dir = Some(d.clone());
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if cli.plot {
        cfg.plot = true;
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = Some(j);
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Computes (or loads from cache) the tables for a parsed command line.
pub fn compute(cli: &Cli, cfg: &RunConfig) -> CliResult<Vec<CurveTable>> {
    let req = commands::describe(&cli.command, cfg);
    let version = env!("CARGO_PKG_VERSION");
    let canonical = format!("kuo {version} {}", req.canonical);
    let key = cache::key(&canonical);
    if let Some(dir) = &cfg.cache_dir {
        if let Some(tables) = cache::load(dir, &key)? {
            return Ok(tables);
        }
    }
    let mut tables = commands::execute(&cli.command, cfg)?;
    for t in &mut tables {
        let mut meta = vec![
            ("tool_version".to_string(), version.to_string()),
            ("request".to_string(), req.canonical.clone()),
        ];
        meta.append(&mut t.meta);
        t.meta = meta;
    }
    if let Some(dir) = &cfg.cache_dir {
        cache::store(dir, &key, &tables)?;
    }
    Ok(tables)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = resolve_config(cli)?;
    if cfg.plot && cli.out.is_none() {
        return Err(CliError::Validation("--plot needs --out to place the SVG".into()));
    }
    if let Some(j) = cfg.jobs {
        // Fails only if a pool already exists, in which case it is reused.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let tables = compute(cli, &cfg)?;
    let text = output::render(&tables, cfg.format);
    match &cli.out {
        Some(path) => write_file(path, &text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))?;
        }
    }
    if cfg.plot {
        let out = cli.out.as_ref().expect("checked above");
        let plottable = commands::describe(&cli.command, &cfg).plottable;
        if plottable {
            for (i, t) in tables.iter().enumerate() {
                let name = if tables.len() == 1 {
                    out.with_extension("svg")
                } else {
                    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
                    out.with_file_name(format!("{stem}-{i}.svg"))
                };
                write_file(&name, &plot::svg(t))?;
            }
        } else {
            log::warn!("single-row result, no plot written");
        }
    }
    Ok(())
}
