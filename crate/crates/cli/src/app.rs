use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use pinchperf_core::oracles::PowerSearch;

use crate::config::{self, RawMap, Settings};
use crate::error::{CliError, CliResult};
use crate::output::{write_table, Format};
use crate::placement_demo::run_placement_demo;
use crate::power_gap::{run_power_gap, write_power_gap_csv};
use crate::sweep::{run_sweep, StrategySpec, SweepSpec};
use crate::validate::{run_validate, ValidationGrid};

#[derive(Debug, Parser)]
#[command(name = "pinchperf", version, about = "Outage, rate and placement analytics for pinching-antenna systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep one parameter and tabulate outage and/or rate per strategy.
    Sweep(SweepArgs),
    /// Check closed forms against quadrature over a parameter grid.
    Validate(ValidateArgs),
    /// Optimal pinching position for one user.
    Placement(PlacementArgs),
    /// Power needed for a target outage at two region lengths.
    PowerGap(PowerGapArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// key = value settings file; falls back to $PINCHPERF_CONFIG.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Absorption coefficient in 1/m (scalar or START:STOP:STEP).
    #[arg(long)]
    pub alpha: Option<String>,
    /// Region length in m (scalar or START:STOP:STEP).
    #[arg(long)]
    pub dx: Option<String>,
    /// Region width in m.
    #[arg(long)]
    pub dy: Option<String>,
    /// Waveguide height in m.
    #[arg(long)]
    pub h: Option<String>,
    /// Number of antennas.
    #[arg(long)]
    pub n_antennas: Option<String>,
    /// SNR threshold (linear).
    #[arg(long)]
    pub gamma_thr: Option<String>,
    /// Carrier frequency in Hz.
    #[arg(long)]
    pub f_c: Option<String>,
    /// Effective refractive index.
    #[arg(long)]
    pub n_eff: Option<String>,
    /// Noise power in dBm.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma2_dbm: Option<String>,
    /// Monte Carlo samples (0 disables Monte Carlo).
    #[arg(long)]
    pub samples: Option<String>,
    /// Monte Carlo seed.
    #[arg(long)]
    pub seed: Option<String>,
}

impl CommonArgs {
    fn layer(&self) -> RawMap {
        let mut m = RawMap::new();
        let mut put = |k: &str, v: &Option<String>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v.clone());
            }
        };
        put("alpha", &self.alpha);
        put("d_x", &self.dx);
        put("d_y", &self.dy);
        put("h", &self.h);
        put("n_antennas", &self.n_antennas);
        put("gamma_thr", &self.gamma_thr);
        put("f_c", &self.f_c);
        put("n_eff", &self.n_eff);
        put("sigma2_dbm", &self.sigma2_dbm);
        put("samples", &self.samples);
        put("seed", &self.seed);
        m
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Transmit SNR in dB (scalar or START:STOP:STEP).
    #[arg(long)]
    pub gamma_t_db: Option<String>,
    /// Strategy, repeatable: pinch-at-user-x, pinch-optimal,
    /// conventional-feed-point, each with an optional @N antenna count.
    #[arg(long)]
    pub strategy: Vec<String>,
    /// Metric, repeatable: outage, rate.
    #[arg(long)]
    pub metric: Vec<String>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Absolute outage tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Relative rate tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub rate_tolerance: f64,
}

#[derive(Debug, Args)]
pub struct PlacementArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// User x-coordinate in m.
    #[arg(long, allow_hyphen_values = true)]
    pub user_x: f64,
    /// User y-coordinate in m.
    #[arg(long, allow_hyphen_values = true)]
    pub user_y: f64,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PowerGapArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Target outage probability.
    #[arg(long, default_value_t = 1e-5)]
    pub target: f64,
    /// Longer region length in m, compared against --dx.
    #[arg(long, default_value_t = 30.0)]
    pub dx_far: f64,
    /// Strategy, repeatable, optional @N suffix.
    #[arg(long)]
    pub strategy: Vec<String>,
    /// Lower end of the searched transmit SNR in dB.
    #[arg(long, default_value_t = 60.0)]
    pub lower_db: f64,
    /// Upper end of the searched transmit SNR in dB.
    #[arg(long, default_value_t = 140.0)]
    pub upper_db: f64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn settings_help() -> String {
    let mut s = String::from("Config keys (key = value, one per line):\n");
    for (k, d, desc) in config::KEYS {
        s.push_str(&format!("  {k:<12} {desc} [default: {d}]\n"));
    }
    s.push_str("\nPrecedence: command-line flag, then config file, then default.\n");
    s.push_str("Exit codes: 0 success, 2 bad input, 3 tolerance violation, 4 convergence failure.");
    s
}

fn settings(common: &CommonArgs, extra: RawMap) -> CliResult<Settings> {
    let mut layer = common.layer();
    layer.extend(extra);
    config::resolve(common.config.as_deref(), &layer)
}

fn open_out(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::BadInput(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sweep(args: &SweepArgs) -> CliResult<()> {
    let mut extra = RawMap::new();
    if let Some(g) = &args.gamma_t_db {
        extra.insert("gamma_t_db".into(), g.clone());
    }
    if !args.strategy.is_empty() {
        extra.insert("strategy".into(), args.strategy.join(","));
    }
    if !args.metric.is_empty() {
        extra.insert("metric".into(), args.metric.join(","));
    }
    if let Some(f) = &args.format {
        extra.insert("format".into(), f.clone());
    }
    let s = settings(&args.common, extra)?;
    let format: Format = s.raw("format").parse()?;
    let spec = SweepSpec::from_settings(&s)?;
    let table = run_sweep(&spec)?;
    let mut out = open_out(args.out.as_deref())?;
    write_table(&table, format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn validate(args: &ValidateArgs) -> CliResult<()> {
    let s = settings(&args.common, RawMap::new())?;
    let base = s.deployment(100.0, s.scalar("alpha")?, s.scalar("d_x")?)?;
    let grid = ValidationGrid {
        gamma_thr: s.f64("gamma_thr")?,
        outage_tolerance: args.tolerance,
        rate_tolerance: args.rate_tolerance,
        ..ValidationGrid::default()
    };
    let report = run_validate(&base, &grid)?;
    print!("{}", report.render());
    let v = report.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(CliError::Tolerance(v.join("; ")))
    }
}

fn placement(args: &PlacementArgs) -> CliResult<()> {
    let s = settings(&args.common, RawMap::new())?;
    let dep = s.deployment(100.0, s.scalar("alpha")?, s.scalar("d_x")?)?;
    let report = run_placement_demo(&dep, args.user_x, args.user_y)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render());
    }
    Ok(())
}

fn power_gap(args: &PowerGapArgs) -> CliResult<()> {
    let mut extra = RawMap::new();
    if !args.strategy.is_empty() {
        extra.insert("strategy".into(), args.strategy.join(","));
    }
    let s = settings(&args.common, extra)?;
    let base = s.deployment(100.0, s.scalar("alpha")?, s.scalar("d_x")?)?;
    let strategies = s
        .list("strategy")
        .iter()
        .map(|x| x.parse())
        .collect::<CliResult<Vec<StrategySpec>>>()?;
    let search = PowerSearch {
        lower_db: args.lower_db,
        upper_db: args.upper_db,
        mc_samples: s.u64("samples")?,
        seed: s.u64("seed")?,
        ..PowerSearch::default()
    };
    let rows = run_power_gap(&base, s.f64("gamma_thr")?, args.target, &strategies, (base.d_x, args.dx_far), &search)?;
    let mut out = open_out(args.out.as_deref())?;
    write_power_gap_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Validate(a) => validate(a),
        Command::Placement(a) => placement(a),
        Command::PowerGap(a) => power_gap(a),
    }
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let help = settings_help();
    let cmd = Cli::command().after_long_help(help);
    let matches = match cmd.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
