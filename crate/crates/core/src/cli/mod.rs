//! Command-line front end: `steady`, `spectrum`, `dressed`, `figure`, `verify`.

mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{ConfigFile, GridArgs, ParamArgs};

use crate::acceptance;
use crate::dressed::{analytic_lines, analytic_spectrum, build_dressed, closed_form_weights, DressedLabel, DressedSystem};
use crate::error::Error;
use crate::figures::{self, CurveKind, FIGURE_IDS};
use crate::liouvillian::Liouvillian;
use crate::model::SystemParams;
use crate::spectrum::{Channel, DrivenAtom, FrequencyGrid};
use crate::steadystate::{steady_sweep, write_steady_csv, SweepParam};

pub const THREADS_ENV: &str = "VICFLUOR_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{failed} of {total} acceptance criteria failed")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    /// 2 for bad input, 3 for numerical failures, 1 for a failed gate.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Model(e) => match e {
                Error::InvalidParameter { .. }
                | Error::InvalidGrid(_)
                | Error::InvalidStep(_)
                | Error::RequiresResonance { .. }
                | Error::DegenerateDressing => 2,
                Error::SingularSystem { .. }
                | Error::DegenerateDrive
                | Error::StepTooLarge { .. }
                | Error::SingularResolvent { .. } => 3,
            },
            CliError::Verification { .. } => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(name = "vicfluor", version, about = "Steady states and fluorescence spectra of a two-field driven J=1/2 -> J=1/2 atom")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stationary populations and coherences, optionally over a sweep
    Steady(SteadyArgs),
    /// Fluorescence spectrum from the regression theorem
    Spectrum(SpectrumArgs),
    /// Dressed-state table and optional analytic spectrum (requires delta = 0)
    Dressed(DressedArgs),
    /// Every curve of a reference figure, plus a manifest
    Figure(FigureArgs),
    /// Run the acceptance criteria
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SteadyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Parameter to sweep: delta, omega-a or omega-b
    #[arg(long)]
    pub sweep: Option<SweepParam>,
    #[arg(long = "sweep-min", allow_negative_numbers = true)]
    pub sweep_min: Option<f64>,
    #[arg(long = "sweep-max", allow_negative_numbers = true)]
    pub sweep_max: Option<f64>,
    #[arg(long = "sweep-points", default_value_t = 101)]
    pub sweep_points: usize,
    /// Also write M and C as CSV to this path
    #[arg(long = "dump-liouvillian")]
    pub dump_liouvillian: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// pi or sigma
    #[arg(long)]
    pub channel: Option<Channel>,
    /// Drop the pi interference terms from the detected signal
    #[arg(long = "no-vic-detector")]
    pub no_vic_detector: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DressedArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Channel of the analytic trace
    #[arg(long)]
    pub channel: Option<Channel>,
    /// Write the analytic Lorentzian-sum spectrum to this CSV
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// One of 2a, 2b, 3a, 3b, 4, 5, 6a, 6b, 7
    pub id: String,
    /// Output directory
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run a single criterion
    #[arg(long)]
    pub criterion: Option<u8>,
}

/// Parse `args`, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("vicfluor: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a nonnegative integer, got `{raw}`")))?;
    if n > 0 {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Steady(a) => steady(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Dressed(a) => dressed(a),
        Command::Figure(a) => figure(a),
        Command::Verify(a) => verify(a),
    }
}

/// Writes to `path`, or stdout when absent or `-`.
fn with_output<F>(path: Option<&Path>, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) if p != Path::new("-") => {
            let file = File::create(p).map_err(io_err(p))?;
            let mut w = BufWriter::new(file);
            f(&mut w).and_then(|()| w.flush()).map_err(io_err(p))
        }
        _ => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w).and_then(|()| w.flush()).map_err(io_err(Path::new("<stdout>")))
        }
    }
}

fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    (0..points)
        .map(|k| min + (max - min) * k as f64 / (points - 1) as f64)
        .collect()
}

fn steady(a: SteadyArgs) -> Result<(), CliError> {
    let file = a.params.config_file()?;
    let base = a.params.resolve(&file)?;
    let l = Liouvillian::build(&base);
    if let Some(path) = &a.dump_liouvillian {
        with_output(Some(path), |w| l.write_csv(w))?;
    }
    let (param, values) = match a.sweep {
        Some(param) => {
            let (Some(lo), Some(hi)) = (a.sweep_min, a.sweep_max) else {
                return Err(CliError::Usage("--sweep needs --sweep-min and --sweep-max".into()));
            };
            if a.sweep_points == 0 || !lo.is_finite() || !hi.is_finite() {
                return Err(CliError::Usage("sweep bounds must be finite and --sweep-points positive".into()));
            }
            (param, linspace(lo, hi, a.sweep_points))
        }
        None => (SweepParam::OmegaA, vec![base.omega_a]),
    };
    let states = steady_sweep(&base, param, &values)?;
    let output = a.output.or(file.output);
    with_output(output.as_deref(), |w| write_steady_csv(w, &base, param, &values, &states))
}

fn spectrum(a: SpectrumArgs) -> Result<(), CliError> {
    let file = a.params.config_file()?;
    let p = a.params.resolve(&file)?;
    let grid = a.grid.resolve(&file, &p)?;
    let channel = a.channel.or(file.channel).unwrap_or(Channel::Pi);
    let detector_cross = !(a.no_vic_detector || file.no_vic_detector.unwrap_or(false));
    let trace = DrivenAtom::new(&p)?.spectrum(channel, &grid, detector_cross)?;
    let output = a.output.or(file.output);
    with_output(output.as_deref(), |w| trace.write_csv(w))
}

fn write_dressed_table(w: &mut dyn Write, ds: &DressedSystem, channel: Channel) -> io::Result<()> {
    let p = &ds.params;
    writeln!(
        w,
        "# dressed states: gamma={} gamma12={} omega_a={} omega_b={} phi={}",
        p.gamma, p.gamma12, p.omega_a, p.omega_b, p.phi
    )?;
    writeln!(w, "omega1,{:.11e}", ds.omega1)?;
    writeln!(w, "omega2,{:.11e}", ds.omega2)?;
    writeln!(w)?;
    writeln!(w, "state,eigenvalue,c1,c2,c3,c4,population")?;
    for s in DressedLabel::ALL {
        write!(w, "{s},{:.11e}", ds.eigenvalue(s))?;
        for k in 1..=4 {
            write!(w, ",{:.11e}", ds.coeff(s, k))?;
        }
        writeln!(w, ",{}", ds.population(s))?;
    }
    writeln!(w)?;
    let r = &ds.rates;
    writeln!(w, "rate,value")?;
    for (name, v) in [
        ("Gamma0", r.gamma0),
        ("Gamma", r.gamma),
        ("Gamma_tilde", r.gamma_tilde),
        ("Gamma1", r.gamma1),
        ("Gamma2", r.gamma2),
        ("Gamma3", r.gamma3),
        ("Gamma4", r.gamma4),
        ("Gamma5", r.gamma5),
        ("Gamma6", r.gamma6),
    ] {
        writeln!(w, "{name},{v:.11e}")?;
    }
    writeln!(w)?;
    writeln!(w, "channel,A1,A2,A3,A4,A5,W1,W2")?;
    for ch in [Channel::Pi, Channel::Sigma] {
        let lw = closed_form_weights(ds, ch);
        write!(w, "{ch}")?;
        for x in lw.a.iter().chain([&lw.w1, &lw.w2]) {
            write!(w, ",{x:.11e}")?;
        }
        writeln!(w)?;
    }
    writeln!(w)?;
    writeln!(w, "line,channel,center,width,weight,height")?;
    for line in analytic_lines(ds, channel) {
        writeln!(
            w,
            "{},{channel},{:.11e},{:.11e},{:.11e},{:.11e}",
            line.label,
            line.center,
            line.width,
            line.weight,
            line.height()
        )?;
    }
    Ok(())
}

fn dressed(a: DressedArgs) -> Result<(), CliError> {
    let file = a.params.config_file()?;
    let p = a.params.resolve(&file)?;
    let ds = build_dressed(&p)?;
    if let Some(msg) = ds.secular_advisory() {
        eprintln!("warning: {msg}");
    }
    let channel = a.channel.or(file.channel).unwrap_or(Channel::Pi);
    if let Some(path) = &a.trace {
        let grid = a.grid.resolve(&file, &p)?;
        let trace = analytic_spectrum(&ds, channel, &grid);
        with_output(Some(path), |w| trace.write_csv(w))?;
    }
    let output = a.output.or(file.output);
    with_output(output.as_deref(), |w| write_dressed_table(w, &ds, channel))
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    file: String,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    channel: Option<Channel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<FrequencyGrid>,
    params: &'a SystemParams,
}

#[derive(Serialize)]
struct Manifest<'a> {
    figure: &'a str,
    curves: Vec<ManifestEntry<'a>>,
}

fn figure(a: FigureArgs) -> Result<(), CliError> {
    let fig = figures::figure(&a.id).ok_or_else(|| {
        CliError::Usage(format!("unknown figure `{}` (expected one of {})", a.id, FIGURE_IDS.join(", ")))
    })?;
    std::fs::create_dir_all(&a.output).map_err(io_err(&a.output))?;
    let mut entries = Vec::with_capacity(fig.curves.len());
    for curve in &fig.curves {
        let file = format!("{}.csv", curve.name);
        let path = a.output.join(&file);
        match &curve.kind {
            CurveKind::Populations { param, values } => {
                let states = steady_sweep(&curve.params, *param, values)?;
                with_output(Some(&path), |w| write_steady_csv(w, &curve.params, *param, values, &states))?;
                entries.push(ManifestEntry {
                    file,
                    kind: "populations",
                    channel: None,
                    grid: None,
                    params: &curve.params,
                });
            }
            CurveKind::Spectrum { channel, grid } => {
                let trace = DrivenAtom::new(&curve.params)?.spectrum(*channel, grid, true)?;
                with_output(Some(&path), |w| trace.write_csv(w))?;
                entries.push(ManifestEntry {
                    file,
                    kind: "spectrum",
                    channel: Some(*channel),
                    grid: Some(*grid),
                    params: &curve.params,
                });
            }
        }
    }
    let manifest = Manifest {
        figure: fig.id,
        curves: entries,
    };
    let path = a.output.join(format!("fig{}_manifest.json", fig.id));
    with_output(Some(&path), |w| {
        serde_json::to_writer_pretty(&mut *w, &manifest).map_err(io::Error::other)?;
        writeln!(w)
    })
}

fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let reports = match a.criterion {
        Some(id) => vec![acceptance::run_criterion(id)
            .ok_or_else(|| CliError::Usage(format!("no criterion {id} (expected 1..=12)")))?],
        None => acceptance::run_all(),
    };
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}
