//! Subcommand implementations. Each returns its result tables together with a
//! canonical request string used for cache keys and provenance.

use kuo_core::atlas::{SpectralAtlas, BETA_STAR_TOL, BORDERLINE_TOL};
use kuo_core::bifurcation::{construct, first_order_defect, residual_norm};
use kuo_core::damping::{default_sample_times, run_damping_experiment, ModeEnsemble};
use kuo_core::fit::loglog_slope;
use kuo_core::modified_flow::{self, ModifiedFlowParams};
use kuo_core::rayleigh_kuo::{lambda_1_singular, lambda_n_regular, RayleighKuoSpec, ShearProfile, Side};
use kuo_core::table::format_g17;
use kuo_core::{CurveTable, KuoError};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::{AtlasCommand, BaseProfile, Command, InitialData};

/// Tolerance for λ residuals in the speed inversion and β_T searches.
pub const SEARCH_TOL: f64 = 1e-9;

/// Amplitudes of the default bifurcation ladder.
pub const KAPPA_LADDER: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1.25e-3];

/// Residual tolerance of the level-set search.
pub const LEVEL_TOL: f64 = 1e-8;

/// Cut-off widths of the modified-flow sweep.
pub const GAMMA_SWEEP: [f64; 4] = [2e-2, 1e-2, 5e-3, 2.5e-3];

pub struct Request {
    pub canonical: String,
    pub plottable: bool,
}

fn g(x: f64) -> String {
    format_g17(x)
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| g(*x)).collect::<Vec<_>>().join(";")
}

/// Canonical form of a request: everything that can change the numbers.
pub fn describe(cmd: &Command, cfg: &RunConfig) -> Request {
    let body = match cmd {
        Command::Eigen { beta, c, n } => format!("eigen beta={} c={} n={n}", g(*beta), g(*c)),
        Command::Atlas { cmd } => match cmd {
            AtlasCommand::BetaStar => format!("atlas beta-star tol={}", g(cfg.tolerance("beta_star", BETA_STAR_TOL))),
            AtlasCommand::Curve { beta_min, beta_max, points } => format!(
                "atlas curve beta_min={} beta_max={} points={points} tol={}",
                g(*beta_min),
                g(*beta_max),
                g(cfg.tolerance("beta_star", BETA_STAR_TOL))
            ),
            AtlasCommand::Region { alpha, beta } => format!(
                "atlas region alpha={} beta={} tol={} star_tol={}",
                g(*alpha),
                g(*beta),
                g(cfg.tolerance("region", BORDERLINE_TOL)),
                g(cfg.tolerance("beta_star", BETA_STAR_TOL))
            ),
            AtlasCommand::BetaT { period } => format!(
                "atlas beta-T period={} tol={}",
                g(*period),
                g(cfg.tolerance("search", SEARCH_TOL))
            ),
            AtlasCommand::Speed { beta, lambda0 } => format!(
                "atlas speed beta={} lambda0={} tol={}",
                g(*beta),
                list(lambda0),
                g(cfg.tolerance("search", SEARCH_TOL))
            ),
        },
        Command::ModifiedFlow { beta, gamma, a, modes, samples, sweep, level, a_max } => format!(
            "modified-flow beta={} gamma={} a={} modes={modes} samples={samples} sweep={sweep} level={} a_max={} tol={}",
            g(*beta),
            g(*gamma),
            g(*a),
            level.map(g).unwrap_or_default(),
            a_max.map(g).unwrap_or_default(),
            g(cfg.tolerance("level", LEVEL_TOL))
        ),
        Command::Bifurcate { profile, beta, c, kappas, nx, control_seed } => format!(
            "bifurcate profile={profile:?} beta={} c={} kappas={} nx={nx} seed={control_seed}",
            g(*beta),
            g(*c),
            list(kappas)
        ),
        Command::Damping { beta, t_end, dt, data } => format!(
            "damping beta={} t_end={} dt={} data={data:?}",
            g(*beta),
            g(*t_end),
            g(*dt)
        ),
    };
    let plottable = !matches!(cmd, Command::Eigen { .. } | Command::Atlas { cmd: AtlasCommand::BetaStar | AtlasCommand::Region { .. } | AtlasCommand::BetaT { .. } });
    Request {
        canonical: format!(
            "{body} resolution={} eps_schedule={}",
            cfg.resolution,
            list(&cfg.eps_schedule)
        ),
        plottable,
    }
}

pub fn execute(cmd: &Command, cfg: &RunConfig) -> CliResult<Vec<CurveTable>> {
    match cmd {
        Command::Eigen { beta, c, n } => eigen(*beta, *c, *n, cfg),
        Command::Atlas { cmd } => atlas(cmd, cfg),
        Command::ModifiedFlow { beta, gamma, a, modes, samples, sweep, level, a_max } => {
            let mut tables = modified(*beta, *gamma, *a, *modes, *samples, *sweep, cfg)?;
            if let Some(d) = level {
                tables.push(level_set(*beta, *gamma, *d, *a_max, cfg)?);
            }
            Ok(tables)
        }
        Command::Bifurcate { profile, beta, c, kappas, nx, control_seed } => {
            bifurcate(*profile, *beta, *c, kappas, *nx, *control_seed, cfg)
        }
        Command::Damping { beta, t_end, dt, data } => damping(*beta, *t_end, *dt, *data),
    }
}

fn eigen(beta: f64, c: f64, n: usize, cfg: &RunConfig) -> CliResult<Vec<CurveTable>> {
    let mut t = CurveTable::new("n", &["lambda", "error_estimate", "resolution"]);
    t.add_meta("beta", g(beta));
    t.add_meta("c", g(c));
    if c.abs() == 1.0 {
        if n != 1 {
            return Err(CliError::Validation(format!(
                "the endpoint speed c = {c} is supported for n = 1 only"
            )));
        }
        let side = if c < 0.0 { Side::Left } else { Side::Right };
        let s = lambda_1_singular(beta, side, &cfg.eps_schedule, cfg.resolution)?;
        t.add_meta("path", "singular");
        t.add_meta("regularized_limit", g(s.regularized_limit));
        t.add_meta("regularized_error", g(s.regularized_error));
        t.push(vec![1.0, s.value(), s.error_estimate(), cfg.resolution as f64]);
    } else {
        let pair = lambda_n_regular(&RayleighKuoSpec::couette(beta, c), n, cfg.resolution)?;
        t.add_meta("path", "regular");
        t.push(vec![n as f64, pair.value, pair.error_estimate, cfg.resolution as f64]);
    }
    Ok(vec![t])
}

fn atlas(cmd: &AtlasCommand, cfg: &RunConfig) -> CliResult<Vec<CurveTable>> {
    let atlas = SpectralAtlas::new(cfg.settings());
    let star_tol = cfg.tolerance("beta_star", BETA_STAR_TOL);
    let beta_star = atlas.find_beta_star(star_tol)?;
    let table = match cmd {
        AtlasCommand::BetaStar => {
            let (residual, err) = atlas.endpoint_lambda1(beta_star)?;
            let mut t = CurveTable::new("beta_star", &["lambda1_residual", "error_estimate"]);
            t.add_meta("tolerance", g(star_tol));
            t.push(vec![beta_star, residual, err]);
            t
        }
        AtlasCommand::Curve { beta_min, beta_max, points } => {
            if *points < 2 || !(beta_max > beta_min) {
                return Err(CliError::Validation("curve needs beta_max > beta_min and at least 2 points".into()));
            }
            if *beta_min < beta_star {
                return Err(KuoError::BelowThreshold { beta: *beta_min, beta_star }.into());
            }
            let betas: Vec<f64> = (0..*points)
                .map(|i| beta_min + (beta_max - beta_min) * i as f64 / (*points - 1) as f64)
                .collect();
            atlas.alpha_beta_curve(&betas)?
        }
        AtlasCommand::Region { alpha, beta } => {
            let tol = cfg.tolerance("region", BORDERLINE_TOL);
            let v = atlas.classify(*alpha, *beta, tol)?;
            let mut t = CurveTable::new("alpha", &["beta", "beta_star", "alpha_beta", "error_estimate"]);
            t.add_meta("region", v.label);
            t.add_meta("tolerance", g(tol));
            let err = match v.alpha_beta {
                Some(_) => atlas.alpha_beta(beta.abs())?.1,
                None => 0.0,
            };
            t.push(vec![*alpha, *beta, v.beta_star, v.alpha_beta.unwrap_or(f64::NAN), err]);
            t
        }
        AtlasCommand::BetaT { period } => {
            let tol = cfg.tolerance("search", SEARCH_TOL);
            let b = atlas.beta_t(*period, tol)?;
            let (lambda, err) = atlas.endpoint_lambda1(b)?;
            let mut t = CurveTable::new("period", &["beta_t", "lambda1", "error_estimate"]);
            t.push(vec![*period, b, lambda, err]);
            t
        }
        AtlasCommand::Speed { beta, lambda0 } => {
            let tol = cfg.tolerance("search", SEARCH_TOL);
            let mut t = CurveTable::new("lambda0", &["c0", "residual", "error_estimate"]);
            t.add_meta("beta", g(*beta));
            for &l0 in lambda0 {
                let c0 = atlas.speed_for_eigenvalue(*beta, l0, tol)?;
                let (l, err) = atlas.lambda1(*beta, c0)?;
                t.push(vec![l0, c0, l - l0, err]);
            }
            t
        }
    };
    let mut table = table;
    if table.meta_value("beta_star").is_none() {
        table.add_meta("beta_star", g(beta_star));
    }
    Ok(vec![table])
}

fn modified(
    beta: f64,
    gamma: f64,
    a: f64,
    modes: usize,
    samples: usize,
    sweep: bool,
    cfg: &RunConfig,
) -> CliResult<Vec<CurveTable>> {
    let params = ModifiedFlowParams::new(beta, gamma, a)?;
    if samples < 2 || modes == 0 {
        return Err(CliError::Validation("need samples >= 2 and modes >= 1".into()));
    }
    let mut prof = CurveTable::new("y", &["u", "du", "d2u", "q", "error_estimate"]);
    prof.add_meta("table", "profile");
    for i in 0..samples {
        let y = -1.0 + 2.0 * i as f64 / (samples - 1) as f64;
        let [u, du, d2u] = modified_flow::evaluate(&params, y);
        prof.push(vec![y, u, du, d2u, modified_flow::potential(&params, y), 0.0]);
    }

    let b0 = modified_flow::b0();
    let res = params.effective_resolution(cfg.resolution);
    let mut eig = CurveTable::new("n", &["lambda", "error_estimate", "resolution"]);
    eig.add_meta("table", "eigenvalues");
    eig.add_meta("b0", g(b0));
    eig.add_meta("asymptote", g(modified_flow::lambda1_asymptote(a)));
    for n in 1..=modes {
        let pair = modified_flow::lambda_n_modified(params, n, cfg.resolution)?;
        eig.push(vec![n as f64, pair.value, pair.error_estimate, res as f64]);
    }
    let mut tables = vec![prof, eig];

    if sweep {
        let mut t = CurveTable::new("gamma", &["lambda1", "asymptote", "error_estimate", "resolution"]);
        t.add_meta("table", "gamma_sweep");
        for &gm in &GAMMA_SWEEP {
            let Ok(p) = ModifiedFlowParams::new(beta, gm, a) else {
                continue;
            };
            let pair = modified_flow::lambda_n_modified(p, 1, cfg.resolution)?;
            t.push(vec![
                gm,
                pair.value,
                modified_flow::lambda1_asymptote(a),
                pair.error_estimate,
                p.effective_resolution(cfg.resolution) as f64,
            ]);
        }
        // Inf over the sampled widths only: an estimate, not the true C_β.
        let gammas: Vec<f64> = GAMMA_SWEEP
            .iter()
            .copied()
            .filter(|&gm| ModifiedFlowParams::new(beta, gm, 0.0).is_ok())
            .collect();
        if let Ok(c) = modified_flow::c_beta_estimate(beta, &gammas, cfg.resolution) {
            t.add_meta("c_beta_sampled_inf", g(c));
        }
        tables.push(t);
    }
    for t in &mut tables {
        t.add_meta("beta", g(beta));
        t.add_meta("gamma", g(gamma));
        t.add_meta("a", g(a));
    }
    Ok(tables)
}

fn level_set(beta: f64, gamma: f64, d: f64, a_max: Option<f64>, cfg: &RunConfig) -> CliResult<CurveTable> {
    let a_max = a_max.unwrap_or_else(|| modified_flow::default_a_max(d));
    let tol = cfg.tolerance("level", LEVEL_TOL);
    let a = modified_flow::level_set_a_with(beta, gamma, d, a_max, tol, cfg.resolution)?;
    let pair = modified_flow::lambda_n_modified(ModifiedFlowParams::new(beta, gamma, a)?, 1, cfg.resolution)?;
    let mut t = CurveTable::new("d", &["a", "lambda1", "error_estimate"]);
    t.add_meta("table", "level_set");
    t.add_meta("a_max", g(a_max));
    t.add_meta("tolerance", g(tol));
    t.push(vec![d, a, pair.value, pair.error_estimate]);
    t.add_meta("beta", g(beta));
    t.add_meta("gamma", g(gamma));
    Ok(t)
}

fn base_profile(p: BaseProfile) -> ShearProfile {
    match p {
        BaseProfile::Couette => ShearProfile::couette(),
        BaseProfile::Cubic => ShearProfile::from_fn("y + y^3/4", |y| {
            [y + 0.25 * y * y * y, 1.0 + 0.75 * y * y, 1.5 * y]
        }),
    }
}

fn bifurcate(
    profile: BaseProfile,
    beta: f64,
    c: f64,
    kappas: &[f64],
    nx: usize,
    seed: u64,
    cfg: &RunConfig,
) -> CliResult<Vec<CurveTable>> {
    if kappas.len() < 2 || nx < 4 {
        return Err(CliError::Validation("need at least two kappas and nx >= 4".into()));
    }
    let wave = construct(base_profile(profile), beta, c, kappas[0], cfg.resolution)?;
    let control_mode = wave.random_mode(seed);
    let mut t = CurveTable::new("kappa", &["residual", "control_residual", "error_estimate"]);
    let mut res = Vec::new();
    let mut ctl = Vec::new();
    for &k in kappas {
        let w = wave.with_kappa(k);
        let c = w.with_mode(control_mode.clone())?;
        let r = residual_norm(&w, beta, nx);
        let rc = residual_norm(&c, beta, nx);
        res.push(r);
        ctl.push(rc);
        t.push(vec![k, r, rc, first_order_defect(&w, beta)]);
    }
    let abs_k: Vec<f64> = kappas.iter().map(|k| k.abs()).collect();
    t.add_meta("profile", format!("{profile:?}").to_lowercase());
    t.add_meta("beta", g(beta));
    t.add_meta("c", g(c));
    t.add_meta("lambda1", g(wave.eigen.value));
    t.add_meta("alpha0", g(wave.alpha0));
    t.add_meta("period", g(wave.period));
    t.add_meta("slope", g(loglog_slope(&abs_k, &res)?));
    t.add_meta("control_slope", g(loglog_slope(&abs_k, &ctl)?));
    Ok(vec![t])
}

fn damping(beta: f64, t_end: f64, dt: f64, data: InitialData) -> CliResult<Vec<CurveTable>> {
    if !(t_end > 0.0) {
        return Err(CliError::Validation(format!("t_end must be positive, got {t_end}")));
    }
    let ens = match data {
        InitialData::Gaussian => ModeEnsemble::gaussian(),
        InitialData::Compact => ModeEnsemble::compact(),
    };
    let mut t = run_damping_experiment(&ens, beta, t_end, dt, &default_sample_times(t_end))?;
    t.add_meta("data", format!("{data:?}").to_lowercase());
    Ok(vec![t])
}
