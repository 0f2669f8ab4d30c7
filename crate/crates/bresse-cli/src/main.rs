//! `bresse` - numerical laboratory for the thermoelastic Bresse beam
//! in Fourier space: mode simulation, energy/Lyapunov certification,
//! decay envelopes, and Sobolev-norm decay rates.

mod config;
mod output;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use bresse_core::envelope::{self, bound_check, fit_envelope_modes};
use bresse_core::functionals::{
    check_dissipation_set, check_lemma_set, check_proposition, dissipation_residual, fill_energies,
    FunctionalId, LyapunovConfig,
};
use bresse_core::grid::FrequencyGrid;
use bresse_core::model::{classify_speeds, SystemKind};
use bresse_core::rates::{rate_report, GoverningTerm, RateExperiment};
use bresse_core::reconstruct::{InitialProfile, ProfileShape, StateSlot};
use bresse_core::sampling::StateSampler;
use bresse_core::spectral::{build_generator, evolve_trajectory, spectral_abscissa, Trajectory};

use config::RunConfig;
use output::{num, xi_label, CsvFile};

#[derive(Parser)]
#[command(
    name = "bresse",
    version,
    about = "Thermoelastic Bresse beam laboratory in Fourier space"
)]
struct Cli {
    /// Plain-text `key = value` configuration file (parameter names,
    /// optionally kind and seed).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for the random initial states of residual checks.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Permit gamma = 0 (conservative diagnostic configuration).
    #[arg(long, global = true)]
    allow_degenerate: bool,

    /// System kind: type1 or type3.
    #[arg(long, global = true)]
    kind: Option<SystemKind>,

    #[command(flatten)]
    params: ParamFlags,

    #[command(subcommand)]
    command: Command,
}

/// Per-coefficient override flags, mirroring the config file keys.
#[derive(Args)]
struct ParamFlags {
    #[arg(long, global = true)]
    rho1: Option<f64>,
    #[arg(long, global = true)]
    rho2: Option<f64>,
    #[arg(long, global = true)]
    b: Option<f64>,
    #[arg(long, global = true)]
    k: Option<f64>,
    #[arg(long, global = true)]
    k0: Option<f64>,
    #[arg(long, global = true)]
    k1: Option<f64>,
    #[arg(long, global = true)]
    k2: Option<f64>,
    #[arg(long, global = true)]
    l: Option<f64>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    m1: Option<f64>,
    #[arg(long, global = true)]
    m2: Option<f64>,
    #[arg(long, global = true)]
    alpha1: Option<f64>,
    #[arg(long, global = true)]
    alpha2: Option<f64>,
}

impl ParamFlags {
    fn overrides(&self) -> Vec<(String, f64)> {
        [
            ("rho1", self.rho1),
            ("rho2", self.rho2),
            ("b", self.b),
            ("k", self.k),
            ("k0", self.k0),
            ("k1", self.k1),
            ("k2", self.k2),
            ("l", self.l),
            ("gamma", self.gamma),
            ("m1", self.m1),
            ("m2", self.m2),
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
        ]
        .iter()
        .filter_map(|(name, v)| v.map(|v| (name.to_string(), v)))
        .collect()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify the low/high-frequency bounds on the decay envelopes.
    Bounds {
        /// Grid points per region.
        #[arg(long, default_value_t = 10_000)]
        points: usize,
    },
    /// Emit per-mode trajectories as CSV.
    Simulate {
        /// Comma-separated mode frequencies.
        #[arg(long, default_value = "0.1,1,10")]
        xi: String,
        /// Final time of the log-spaced time ladder.
        #[arg(long, default_value_t = 1e3)]
        t_max: f64,
        /// Number of time samples (plus t = 0).
        #[arg(long, default_value_t = 33)]
        n_times: usize,
        #[command(flatten)]
        profile: ProfileFlags,
    },
    /// Fit the pointwise exponential envelope over a mode set.
    Envelope {
        #[arg(long, default_value_t = 0.01)]
        xi_lo: f64,
        #[arg(long, default_value_t = 100.0)]
        xi_hi: f64,
        #[arg(long, default_value_t = 512)]
        modes: usize,
        #[arg(long, default_value_t = 48)]
        times_per_mode: usize,
    },
    /// Certify the dissipation identity, the lemma inequalities, and
    /// the Lyapunov proposition on random trajectories.
    Verify {
        /// Frequencies for the identity and lemma checks.
        #[arg(long, default_value = "0.1,1,10")]
        xi: String,
        /// Random initial states per frequency.
        #[arg(long, default_value_t = 64)]
        states: usize,
        /// Time samples per trajectory (log-spaced in [1e-2, 1e3]).
        #[arg(long, default_value_t = 32)]
        n_times: usize,
        /// Modes for the proposition check (log-spaced in [0.01, 100]).
        #[arg(long, default_value_t = 9)]
        prop_modes: usize,
        /// Random states per proposition mode.
        #[arg(long, default_value_t = 4)]
        prop_states: usize,
        /// Diagnostic fault injection: flip the sign of generator
        /// entry "row,col" before the identity check.
        #[arg(long)]
        inject_sign_flip: Option<String>,
    },
    /// Decay-rate experiment: Sobolev norms, slope fit, verdict.
    Rates {
        #[command(flatten)]
        profile: ProfileFlags,
        /// Derivative order of the measured norm (`k` names the
        /// shear-stiffness parameter).
        #[arg(long, default_value_t = 0)]
        norm_order: u32,
        /// Regularity order quoted in the predicted second term.
        #[arg(long, default_value_t = 4)]
        reg_order: u32,
        #[arg(long, default_value_t = 1e3)]
        window_lo: f64,
        #[arg(long, default_value_t = 1e6)]
        window_hi: f64,
        #[arg(long, default_value_t = 48)]
        n_times: usize,
    },
}

#[derive(Args, Clone)]
struct ProfileFlags {
    /// Profile shape: gaussian, box, band, derivgaussian.
    #[arg(long, default_value = "gaussian")]
    profile: String,
    /// Gaussian width.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Box half-width.
    #[arg(long, default_value_t = 1.0)]
    halfwidth: f64,
    #[arg(long, default_value_t = 10.0)]
    band_lo: f64,
    #[arg(long, default_value_t = 20.0)]
    band_hi: f64,
    #[arg(long, default_value_t = 1)]
    deriv_order: u32,
    /// State slot carrying the profile.
    #[arg(long, default_value = "psi0")]
    slot: String,
}

impl ProfileFlags {
    fn build(&self) -> anyhow::Result<InitialProfile> {
        let shape = match self.profile.to_ascii_lowercase().as_str() {
            "gaussian" => ProfileShape::Gaussian { sigma: self.sigma },
            "box" => ProfileShape::Box {
                halfwidth: self.halfwidth,
            },
            "band" => ProfileShape::Band {
                xi_lo: self.band_lo,
                xi_hi: self.band_hi,
            },
            "derivgaussian" => ProfileShape::DerivGaussian {
                order: self.deriv_order,
                sigma: self.sigma,
            },
            other => bail!("unknown profile `{other}`"),
        };
        let slot: StateSlot = self.slot.parse().map_err(anyhow::Error::msg)?;
        Ok(InitialProfile::new(shape, slot))
    }

    fn describe(&self) -> String {
        format!("{}@{}", self.profile, self.slot)
    }
}

fn parse_xi_list(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .with_context(|| format!("bad frequency `{tok}`"))
        })
        .collect()
}

fn log_times(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut ts = vec![0.0];
    let n = n.max(2);
    let step = (hi / lo).ln() / (n - 1) as f64;
    ts.extend((0..n).map(|i| lo * (step * i as f64).exp()));
    ts
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    let cfg = match RunConfig::resolve(
        cli.config.as_ref(),
        &cli.params.overrides(),
        cli.kind,
        cli.seed,
        cli.threads,
        cli.allow_degenerate,
        cli.out.clone(),
    ) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error kind=config msg=\"{e:#}\"");
            return 2;
        }
    };
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok();
    }
    match dispatch(&cli.command, cfg) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("error kind=verdict msg=\"one or more verdicts failed\"");
            1
        }
        Err(e) => {
            // malformed experiment arguments are configuration errors
            let config_like = e.chain().any(|cause| {
                matches!(
                    cause.downcast_ref::<bresse_core::BresseError>(),
                    Some(
                        bresse_core::BresseError::InvalidGrid(_)
                            | bresse_core::BresseError::InvalidInput(_)
                            | bresse_core::BresseError::BadAssignment { .. }
                    )
                )
            }) || e.downcast_ref::<std::num::ParseFloatError>().is_some();
            if config_like {
                eprintln!("error kind=config msg=\"{e:#}\"");
                2
            } else {
                eprintln!("error kind=runtime msg=\"{e:#}\"");
                1
            }
        }
    }
}

fn dispatch(cmd: &Command, mut cfg: RunConfig) -> anyhow::Result<bool> {
    match cmd {
        Command::Bounds { points } => run_bounds(&mut cfg, *points),
        Command::Simulate {
            xi,
            t_max,
            n_times,
            profile,
        } => run_simulate(&mut cfg, xi, *t_max, *n_times, profile),
        Command::Envelope {
            xi_lo,
            xi_hi,
            modes,
            times_per_mode,
        } => run_envelope(&mut cfg, *xi_lo, *xi_hi, *modes, *times_per_mode),
        Command::Verify {
            xi,
            states,
            n_times,
            prop_modes,
            prop_states,
            inject_sign_flip,
        } => run_verify(
            &mut cfg,
            xi,
            *states,
            *n_times,
            *prop_modes,
            *prop_states,
            inject_sign_flip.as_deref(),
        ),
        Command::Rates {
            profile,
            norm_order,
            reg_order,
            window_lo,
            window_hi,
            n_times,
        } => run_rates(
            &mut cfg,
            profile,
            *norm_order,
            *reg_order,
            (*window_lo, *window_hi),
            *n_times,
        ),
    }
}

fn run_bounds(cfg: &mut RunConfig, points: usize) -> anyhow::Result<bool> {
    cfg.push_extra("cmd", "bounds");
    cfg.push_extra("points", points);
    let regions = bound_check(points);
    let mut file = CsvFile::create(
        &cfg.out_dir,
        "bounds_margins.csv",
        cfg,
        "envelope,region,worst_margin,violations,n_points",
    )?;
    let mut pass = true;
    for r in &regions {
        pass &= r.violations == 0;
        file.row(format_args!(
            "{},{},{},{},{}",
            r.envelope,
            r.region,
            num(r.worst_margin),
            r.violations,
            r.n_points
        ))?;
    }
    let path = file.finish()?;
    println!(
        "bounds: {} regions checked, {} -> {}",
        regions.len(),
        if pass { "all hold" } else { "VIOLATED" },
        path.display()
    );
    Ok(pass)
}

fn run_simulate(
    cfg: &mut RunConfig,
    xi_list: &str,
    t_max: f64,
    n_times: usize,
    profile: &ProfileFlags,
) -> anyhow::Result<bool> {
    let xis = parse_xi_list(xi_list)?;
    let prof = profile.build()?;
    cfg.push_extra("cmd", "simulate");
    cfg.push_extra("xi", xi_list);
    cfg.push_extra("t_max", num(t_max));
    cfg.push_extra("n_times", n_times);
    cfg.push_extra("profile", profile.describe());
    let times = log_times(1e-2, t_max, n_times);
    let dim = cfg.kind.dim();
    let mut header = String::from("t");
    for i in 0..dim {
        header += &format!(",re_u{i},im_u{i}");
    }
    header += ",energy";
    for &xi in &xis {
        let u0 = bresse_core::reconstruct::initial_mode_state(&prof, &cfg.params, cfg.kind, xi)?;
        let mut tr = evolve_trajectory(&cfg.params, cfg.kind, xi, &u0, &times)?;
        fill_energies(&mut tr, &cfg.params);
        let name = format!("mode_{}_{}.csv", cfg.kind, xi_label(xi));
        let mut file = CsvFile::create(&cfg.out_dir, &name, cfg, &header)?;
        for ((t, state), energy) in tr.times.iter().zip(&tr.states).zip(&tr.energies) {
            let mut row = num(*t);
            for z in state.u.iter() {
                row += &format!(",{},{}", num(z.re), num(z.im));
            }
            row += &format!(",{}", num(*energy));
            file.row(format_args!("{row}"))?;
        }
        let path = file.finish()?;
        println!("simulate: xi = {xi} -> {}", path.display());
    }
    Ok(true)
}

fn run_envelope(
    cfg: &mut RunConfig,
    xi_lo: f64,
    xi_hi: f64,
    modes: usize,
    times_per_mode: usize,
) -> anyhow::Result<bool> {
    cfg.push_extra("cmd", "envelope");
    cfg.push_extra("xi_lo", num(xi_lo));
    cfg.push_extra("xi_hi", num(xi_hi));
    cfg.push_extra("modes", modes);
    cfg.push_extra("times_per_mode", times_per_mode);
    let grid = FrequencyGrid::geometric(xi_lo, xi_hi, modes)?;
    let class = classify_speeds(&cfg.params);
    let fit = fit_envelope_modes(
        &cfg.params,
        cfg.kind,
        class,
        grid.nodes(),
        times_per_mode,
        cfg.seed,
    )?;
    let name = format!("envelope_{}_{}.csv", cfg.kind, class);
    let mut file = CsvFile::create(&cfg.out_dir, &name, cfg, "xi,s,abscissa,fitted_beta_local")?;
    let mut consistent = true;
    for &(xi, s, beta_local) in &fit.per_mode {
        let abscissa = spectral_abscissa(&build_generator(&cfg.params, cfg.kind, xi))?;
        consistent &= fit.beta * s <= 2.0 * abscissa.abs();
        file.row(format_args!(
            "{},{},{},{}",
            num(xi),
            num(s),
            num(abscissa),
            num(beta_local)
        ))?;
    }
    file.comment(format_args!(
        "summary beta={} C={} max_violation={} excluded_modes={} spectral_consistent={}",
        num(fit.beta),
        num(fit.c),
        num(fit.max_violation),
        fit.excluded_modes,
        consistent
    ))?;
    let path = file.finish()?;
    let pass = fit.beta > 0.0 && fit.max_violation <= 1e-9 && consistent;
    println!(
        "envelope [{}/{}]: beta = {:.6}, C = {:.3}, max violation = {:.2e}, spectral consistency = {} -> {}",
        cfg.kind,
        class,
        fit.beta,
        fit.c,
        fit.max_violation,
        consistent,
        path.display()
    );
    Ok(pass)
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    cfg: &mut RunConfig,
    xi_list: &str,
    states: usize,
    n_times: usize,
    prop_modes: usize,
    prop_states: usize,
    inject: Option<&str>,
) -> anyhow::Result<bool> {
    let xis = parse_xi_list(xi_list)?;
    cfg.push_extra("cmd", "verify");
    cfg.push_extra("xi", xi_list);
    cfg.push_extra("states", states);
    cfg.push_extra("n_times", n_times);
    cfg.push_extra("prop_modes", prop_modes);
    cfg.push_extra("prop_states", prop_states);
    if let Some(flip) = inject {
        cfg.push_extra("inject_sign_flip", flip);
    }
    let p = &cfg.params;
    let kind = cfg.kind;
    let class = classify_speeds(p);
    let lyap = LyapunovConfig::defaults_for(p, kind);
    let times = log_times(1e-2, 1e3, n_times.max(2) - 1);
    let mut sampler = StateSampler::new(cfg.seed);

    let mut trajectories: Vec<Trajectory> = Vec::new();
    for &xi in &xis {
        for _ in 0..states {
            let u0 = sampler.random_state(kind, xi);
            let mut tr = evolve_trajectory(p, kind, xi, &u0, &times)?;
            fill_energies(&mut tr, p);
            trajectories.push(tr);
        }
    }

    let name = format!("verify_{kind}.csv");
    let mut file = CsvFile::create(
        &cfg.out_dir,
        &name,
        cfg,
        "lemma_id,max_violation,fitted_constant,n_samples",
    )?;
    let mut pass = true;

    // dissipation identity, optionally against a corrupted generator
    let dissipation = if let Some(flip) = inject {
        let (i, j) = parse_entry(flip)?;
        let mut worst = 0.0f64;
        let mut n = 0usize;
        for tr in &trajectories {
            let mut g = build_generator(p, kind, tr.xi);
            if i >= g.matrix.nrows() || j >= g.matrix.ncols() {
                bail!(
                    "entry {i},{j} outside the {}-dimensional generator",
                    kind.dim()
                );
            }
            g.matrix[(i, j)] = -g.matrix[(i, j)];
            for state in &tr.states {
                worst = worst.max(dissipation_residual(&g, state, p));
                n += 1;
            }
        }
        bresse_core::functionals::ResidualReport {
            lemma_id: format!("dissipation_identity(flip {i},{j})"),
            max_violation: worst,
            fitted_constant: 0.0,
            n_samples: n,
        }
    } else {
        check_dissipation_set(&trajectories, p)
    };
    let identity_ok = dissipation.max_violation <= 1e-9;
    pass &= identity_ok;
    file.row(format_args!(
        "{},{},{},{}",
        dissipation.lemma_id,
        num(dissipation.max_violation),
        num(dissipation.fitted_constant),
        dissipation.n_samples
    ))?;
    println!(
        "verify: {} residual {:.3e} ({} samples) -> {}",
        dissipation.lemma_id,
        dissipation.max_violation,
        dissipation.n_samples,
        if identity_ok { "ok" } else { "FAIL" }
    );

    for &lemma in FunctionalId::lemma_set(kind) {
        let report = check_lemma_set(lemma, &trajectories, p, &lyap)?;
        let ok = report.passes();
        pass &= ok;
        file.row(format_args!(
            "{},{},{},{}",
            report.lemma_id,
            num(report.max_violation),
            num(report.fitted_constant),
            report.n_samples
        ))?;
        println!(
            "verify: {} violation {:.3e} at C = {:.4e} -> {}",
            report.lemma_id,
            report.max_violation,
            report.fitted_constant,
            if ok { "ok" } else { "FAIL" }
        );
    }

    // Lyapunov proposition over a frequency ladder with per-mode
    // horizons
    let mut prop_trs = Vec::new();
    for i in 0..prop_modes.max(2) {
        let xi = 0.01 * (100.0f64 / 0.01).powf(i as f64 / (prop_modes.max(2) - 1) as f64);
        let s = envelope::envelope_rate(class, xi);
        let horizon = envelope::envelope_time_samples(s, 31);
        for _ in 0..prop_states {
            let u0 = sampler.random_state(kind, xi);
            let mut tr = evolve_trajectory(p, kind, xi, &u0, &horizon)?;
            fill_energies(&mut tr, p);
            prop_trs.push(tr);
        }
    }
    let prop = check_proposition(&prop_trs, p, &lyap)?;
    let prop_ok = prop.fitted_m > 0.0
        && prop.residual.max_violation <= 0.0
        && prop.beta > 0.0
        && prop.monotonicity_violation <= 0.0;
    pass &= prop_ok;
    file.row(format_args!(
        "{},{},{},{}",
        prop.residual.lemma_id,
        num(prop.residual.max_violation),
        num(prop.residual.fitted_constant),
        prop.residual.n_samples
    ))?;
    println!(
        "verify: proposition M = {:.4e}, C = {:.4e}, N = {:.4e}, beta = {:.4e}, monotone = {} -> {}",
        prop.fitted_m,
        prop.fitted_c,
        prop.fitted_n,
        prop.beta,
        prop.monotonicity_violation <= 0.0,
        if prop_ok { "ok" } else { "FAIL" }
    );

    let path = file.finish()?;
    println!(
        "verify [{kind}/{class}]: {} -> {}",
        if pass { "all checks hold" } else { "FAILED" },
        path.display()
    );
    Ok(pass)
}

fn parse_entry(s: &str) -> anyhow::Result<(usize, usize)> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("expected `row,col`, got `{s}`"))?;
    Ok((i.trim().parse()?, j.trim().parse()?))
}

fn run_rates(
    cfg: &mut RunConfig,
    profile: &ProfileFlags,
    k: u32,
    l: u32,
    window: (f64, f64),
    n_times: usize,
) -> anyhow::Result<bool> {
    let prof = profile.build()?;
    cfg.push_extra("cmd", "rates");
    cfg.push_extra("profile", profile.describe());
    cfg.push_extra("k", k);
    cfg.push_extra("l", l);
    cfg.push_extra("window_lo", num(window.0));
    cfg.push_extra("window_hi", num(window.1));
    cfg.push_extra("n_times", n_times);

    let mut exp = RateExperiment::new(cfg.params, cfg.kind, prof, k);
    exp.l = l;
    exp.window = window;
    exp.n_times = n_times;
    let grid = FrequencyGrid::default_grid();
    let report = rate_report(&exp, &grid)?;

    // norm series with the assembled two-term bound
    let solution = bresse_core::reconstruct::SpectralSolution::new(
        &cfg.params,
        cfg.kind,
        &exp.profile,
        &grid,
    )?;
    let hs = solution.norm(k + l, 0.0)?;
    let l1 = report.l1_init;
    let two_term = |t: f64| {
        let alg = l1
            .map(|v| v * (1.0 + t).powf(report.predicted_l1_slope))
            .unwrap_or(0.0);
        alg + hs * (1.0 + t).powf(report.predicted_reg_slope)
    };
    // fitted constant: smallest multiple of the bound covering the
    // window samples
    let mut c_bound = 0.0f64;
    for (t, n) in report.times.iter().zip(&report.norms) {
        if *t >= window.0 && *t <= window.1 {
            c_bound = c_bound.max(n / two_term(*t));
        }
    }

    let name = format!("norms_{}_k{}.csv", cfg.kind, k);
    let mut file = CsvFile::create(&cfg.out_dir, &name, cfg, "t,k,norm,envelope_bound")?;
    for (t, n) in report.times.iter().zip(&report.norms) {
        file.row(format_args!(
            "{},{},{},{}",
            num(*t),
            k,
            num(*n),
            num(c_bound * two_term(*t))
        ))?;
    }
    let norms_path = file.finish()?;

    let name = format!("rates_{}_k{}.csv", cfg.kind, k);
    let mut file = CsvFile::create(
        &cfg.out_dir,
        &name,
        cfg,
        "kind,class,k,l,fitted_slope,stderr,predicted_l1_slope,predicted_reg_slope,governing,window_lo,window_hi,domination_c,verdict",
    )?;
    file.row(format_args!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        report.kind,
        report.class,
        report.k,
        report.l,
        num(report.fitted_slope),
        num(report.stderr),
        num(report.predicted_l1_slope),
        num(report.predicted_reg_slope),
        match report.governing {
            GoverningTerm::L1 => "l1",
            GoverningTerm::Regularity => "regularity",
        },
        num(report.window.0),
        num(report.window.1),
        num(report.domination_c),
        report.verdict
    ))?;
    let rates_path = file.finish()?;

    println!("rate experiment [{} / {}]", report.kind, report.class);
    println!("  profile            {}", profile.describe());
    println!("  orders             k = {}, l = {}", report.k, report.l);
    println!(
        "  fitted slope       {:.4} +- {:.4} on window [{:.0e}, {:.0e}]",
        report.fitted_slope, report.stderr, report.window.0, report.window.1
    );
    println!(
        "  predicted          l1 term {:.4}, regularity term {:.4} (governing: {:?})",
        report.predicted_l1_slope, report.predicted_reg_slope, report.governing
    );
    if let Some((rate, err)) = report.exp_rate {
        println!(
            "  exponential rate   {:.4e} +- {:.1e} (band-limited data)",
            -rate, err
        );
    }
    println!(
        "  envelope           dominated = {} (C = {:.4}), slope in tolerance = {}",
        report.domination_ok, report.domination_c, report.slope_ok
    );
    println!(
        "  verdict            {}",
        if report.verdict { "pass" } else { "FAIL" }
    );
    println!(
        "  files              {} ; {}",
        rates_path.display(),
        norms_path.display()
    );
    Ok(report.verdict)
}
