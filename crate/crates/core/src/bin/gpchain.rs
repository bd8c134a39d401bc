//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a verification or computation fails,
//! 2 on invalid input.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gpchain::approx::{approx_correction, approx_gp, ApproxParams};
use gpchain::config::{parse_count, parse_number, read_config, set_model_param};
use gpchain::decoherence::decoherence_series;
use gpchain::geophase::{geometric_phase, unperturbed_phase};
use gpchain::output::{emit_csv, render_series_csv, write_csv, write_plot, write_series_csv};
use gpchain::sweep::{run_sweep, Axis, FigureId, FigurePreset, Overlay, SweepSpec, DEFAULT_TOLERANCE};
use gpchain::verify::{verify, Level};
use gpchain::{Error, ModelParams};

#[derive(Parser, Debug)]
#[command(name = "gpchain", version, about = "Geometric phase of a qubit coupled to an XY chain with three-spin interaction")]
struct Cli {
    /// `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Geometric phase along one parameter axis.
    Sweep(SweepArgs),
    /// Reproduce a figure preset (fig1, fig2a..fig2d, fig3, fig4a..fig4d).
    Figure(FigureArgs),
    /// |F(t)| over one quasi period.
    Decoherence(DecoherenceArgs),
    /// Weak-coupling closed form next to the numerical phase.
    Approx(ApproxArgs),
    /// Run the built-in self-checks.
    Verify(VerifyArgs),
}

/// Model parameters. Values accept expressions such as `2pi/3`.
#[derive(Args, Debug, Default)]
struct ModelArgs {
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long = "sites", short = 'N', visible_alias = "n")]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
}

impl ModelArgs {
    fn apply(&self, params: &mut ModelParams) -> Result<(), Error> {
        for (key, value) in [
            ("eta", &self.eta),
            ("gamma", &self.gamma),
            ("alpha", &self.alpha),
            ("lambda", &self.lambda),
            ("g", &self.g),
            ("n", &self.n),
            ("beta", &self.beta),
        ] {
            if let Some(v) = value {
                set_model_param(params, key, v)?;
            }
        }
        Ok(())
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Absolute tolerance of the phase quadrature.
    #[arg(long)]
    tol: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<String>,
    /// CSV destination; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// SVG plot destination.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// alpha | lambda | g | eta | beta | gamma | N
    #[arg(long)]
    axis: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    stop: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// Secondary axis evaluated for every value in --overlay-values.
    #[arg(long)]
    overlay: Option<String>,
    /// Comma-separated overlay values.
    #[arg(long, allow_hyphen_values = true)]
    overlay_values: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct FigureArgs {
    id: String,
    /// Grid size along the swept axis.
    #[arg(long)]
    points: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct DecoherenceArgs {
    /// Number of intervals; steps + 1 samples are written.
    #[arg(long)]
    steps: Option<String>,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
struct ApproxArgs {
    /// Mode cutoff of the expansion (default: all modes).
    #[arg(long)]
    cutoff: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// quick | full
    #[arg(long, default_value = "quick")]
    level: String,
}

enum Failure {
    Input(Error),
    Runtime(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParam { .. } | Error::Parse(_) | Error::Criticality { .. } | Error::DimensionTooLarge { .. } => {
                Failure::Input(e)
            }
            _ => Failure::Runtime(e),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Layered settings: config file entries, then command-line flags.
struct Settings {
    config: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self, Error> {
        let config = match path {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        Ok(Settings { config })
    }

    fn model(&self, mut base: ModelParams, flags: &ModelArgs) -> Result<ModelParams, Error> {
        for (k, v) in &self.config {
            set_model_param(&mut base, k, v)?;
        }
        flags.apply(&mut base)?;
        base.validate()?;
        Ok(base)
    }

    fn pick<'a>(&'a self, flag: &'a Option<String>, key: &str) -> Option<&'a str> {
        flag.as_deref().or_else(|| self.config.get(key).map(String::as_str))
    }

    fn number(&self, flag: &Option<String>, key: &str, default: f64) -> Result<f64, Error> {
        self.pick(flag, key).map_or(Ok(default), parse_number)
    }

    fn count(&self, flag: &Option<String>, key: &str, default: usize) -> Result<usize, Error> {
        self.pick(flag, key).map_or(Ok(default), parse_count)
    }

    fn run(&self, spec: &mut SweepSpec, run: &RunArgs) -> Result<(), Error> {
        spec.tol = self.number(&run.tol, "tol", spec.tol)?;
        if let Some(w) = self.pick(&run.workers, "workers") {
            spec.workers = Some(parse_count(w)?);
        }
        Ok(())
    }
}

fn write_table(table: &gpchain::sweep::SweepTable, run: &RunArgs) -> Result<(), Error> {
    match &run.out {
        Some(path) => write_csv(table, path)?,
        None => {
            let stdout = std::io::stdout();
            emit_csv(table, stdout.lock()).map_err(|e| Error::Io {
                path: PathBuf::from("<stdout>"),
                source: e,
            })?;
        }
    }
    if let Some(path) = &run.plot {
        write_plot(table, path)?;
    }
    if table.failures() > 0 {
        eprintln!("{} of {} points failed; see the # error lines", table.failures(), table.rows.len());
    }
    Ok(())
}

fn sweep(settings: &Settings, args: &SweepArgs) -> Outcome {
    let base = settings.model(ModelParams::default(), &args.model)?;
    let axis: Axis = settings
        .pick(&args.axis, "axis")
        .ok_or_else(|| Error::Parse("sweep needs --axis".into()))?
        .parse()?;
    let current = axis.get(&base);
    let start = settings.number(&args.start, "start", current)?;
    let stop = settings.number(&args.stop, "stop", current)?;
    let points = settings.count(&args.points, "points", 101)?;
    let mut spec = SweepSpec::new(base, axis, start, stop, points);
    if let Some(ov) = settings.pick(&args.overlay, "overlay") {
        let values = settings
            .pick(&args.overlay_values, "overlay_values")
            .ok_or_else(|| Error::Parse("--overlay needs --overlay-values".into()))?
            .split([',', ' '])
            .filter(|s| !s.trim().is_empty())
            .map(parse_number)
            .collect::<Result<Vec<f64>, Error>>()?;
        spec.overlay = Some(Overlay {
            axis: ov.parse()?,
            values,
        });
    }
    settings.run(&mut spec, &args.run)?;
    let table = run_sweep(&spec)?;
    write_table(&table, &args.run)?;
    Ok(())
}

fn figure(settings: &Settings, args: &FigureArgs) -> Outcome {
    let id: FigureId = args.id.parse()?;
    let mut spec = FigurePreset::new(id).spec;
    spec.base = settings.model(spec.base, &args.model)?;
    spec.points = settings.count(&args.points, "points", spec.points)?;
    settings.run(&mut spec, &args.run)?;
    let table = run_sweep(&spec)?;
    write_table(&table, &args.run)?;
    Ok(())
}

fn decoherence(settings: &Settings, args: &DecoherenceArgs) -> Outcome {
    let params = settings.model(ModelParams::default(), &args.model)?;
    let steps = settings.count(&args.steps, "steps", 200)?;
    let series = decoherence_series(&params, steps)?;
    match &args.out {
        Some(path) => write_series_csv(&series, path)?,
        None => print!("{}", render_series_csv(&series)),
    }
    Ok(())
}

fn approx(settings: &Settings, args: &ApproxArgs) -> Outcome {
    let params = settings.model(ModelParams::default(), &args.model)?;
    let cutoff = match settings.pick(&args.cutoff, "cutoff") {
        Some(c) => ApproxParams::new(parse_count(c)?, &params)?,
        None => ApproxParams::all_modes(&params)?,
    }
    .cutoff;
    let tol = settings.number(&args.tol, "tol", DEFAULT_TOLERANCE)?;
    let phi0 = unperturbed_phase(params.beta);
    let estimate = approx_gp(&params, cutoff)?;
    let correction = approx_correction(&params, cutoff)?;
    let numerical = geometric_phase(&params, tol)?;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "cutoff={cutoff}");
    let _ = writeln!(out, "phi0={phi0:.16e}");
    let _ = writeln!(out, "approx_phi={estimate:.16e}");
    let _ = writeln!(out, "approx_correction={correction:.16e}");
    let _ = writeln!(out, "numerical_phi={:.16e}", numerical.raw_phi);
    let _ = writeln!(out, "numerical_correction={:.16e}", numerical.raw_phi - phi0);
    let _ = writeln!(out, "numerical_error={:.16e}", numerical.quadrature_error);
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Outcome {
    let level: Level = args.level.parse()?;
    let report = verify(level);
    println!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = Settings::load(cli.config.as_deref())
        .map_err(Failure::Input)
        .and_then(|settings| match &cli.command {
            Command::Sweep(a) => sweep(&settings, a),
            Command::Figure(a) => figure(&settings, a),
            Command::Decoherence(a) => decoherence(&settings, a),
            Command::Approx(a) => approx(&settings, a),
            Command::Verify(a) => run_verify(a),
        });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
