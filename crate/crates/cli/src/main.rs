mod commands;
mod plots;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbitdepth::report::{Config, ReportFormat, Suite};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit status for checks that ran and failed, or computations that errored.
pub const EXIT_FAILED: u8 = 1;
/// Exit status for unusable input: bad config, unparsable words or expressions.
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "orbitdepth",
    version,
    about = "Orbit depth, Laurent certificates and Melnikov checks for F = (x^2-1)(y^2-1)"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Flags that override the JSON config.
#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// JSON config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every randomized identity.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Base level of the real oval, in (0, 0.5).
    #[arg(long, global = true)]
    pub t0: Option<f64>,
    /// Highest representation level in the repr suite.
    #[arg(long = "k-max", global = true)]
    pub k_max: Option<usize>,
    /// Truncation degree of Magnus expansions.
    #[arg(long = "magnus-degree", global = true)]
    pub magnus_degree: Option<usize>,
    /// Comma-separated ε values.
    #[arg(long = "eps-grid", global = true, value_delimiter = ',')]
    pub eps_grid: Option<Vec<f64>>,
    /// Random samples per randomized identity.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Directory for reports and plots; OUTPUT_DIR takes precedence.
    #[arg(long = "output-dir", global = true)]
    pub output_dir: Option<PathBuf>,
    /// Write SVG plots of fit samples and residuals.
    #[arg(long, global = true)]
    pub plots: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free-group words and monodromy.
    #[command(subcommand)]
    Orbit(commands::OrbitCmd),
    /// Laurent representations and depth certificates.
    #[command(subcommand)]
    Repr(commands::ReprCmd),
    /// Exact Wronskian calculus for Melnikov leading terms.
    #[command(subcommand)]
    Mel(commands::MelCmd),
    /// Periods, iterated integrals and holonomy on level curves.
    #[command(subcommand)]
    Num(commands::NumCmd),
    /// Run a check suite and write its report.
    Verify(VerifyArgs),
    /// Run the ordered pipeline of every check and write the report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Orbit,
    Repr,
    Melnikov,
    Numeric,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Orbit => Suite::Orbit,
            SuiteArg::Repr => Suite::Repr,
            SuiteArg::Melnikov => Suite::Melnikov,
            SuiteArg::Numeric => Suite::Numeric,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    /// Shorthand for --k-max.
    #[arg(long)]
    k: Option<usize>,
    /// Report path; defaults to <output dir>/report-<suite>.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Shorthand for --k-max.
    #[arg(long)]
    k: Option<usize>,
}

/// A command failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    pub fn failed(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_FAILED,
            message: message.to_string(),
        }
    }
}

pub type CmdResult = Result<u8, Failure>;

/// Writes to stdout; a closed pipe on the reading end is not an error.
pub fn print_stdout(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::failed(e)),
        _ => Ok(()),
    }
}

/// Default config, then the config file, then flags.
pub fn resolve_config(g: &GlobalArgs, k_override: Option<usize>) -> Result<Config, Failure> {
    let mut cfg = match &g.config {
        Some(path) => Config::from_file(path).map_err(Failure::usage)?,
        None => Config::default(),
    };
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    if let Some(v) = g.t0 {
        cfg.t0 = v;
    }
    if let Some(v) = k_override.or(g.k_max) {
        cfg.k_max = v;
    }
    if let Some(v) = g.magnus_degree {
        cfg.magnus_degree = v;
    }
    if let Some(v) = &g.eps_grid {
        cfg.eps_grid = v.clone();
    }
    if let Some(v) = g.samples {
        cfg.samples = v;
    }
    if let Some(v) = &g.output_dir {
        cfg.output_dir = Some(v.clone());
    }
    cfg.validate().map_err(Failure::usage)?;
    Ok(cfg)
}

fn verify(g: &GlobalArgs, args: &VerifyArgs) -> CmdResult {
    let cfg = resolve_config(g, args.k)?;
    let suite = Suite::from(args.suite);
    let report = orbitdepth::report::run_suite(suite, &cfg).map_err(Failure::usage)?;
    let format = ReportFormat::from(args.format);
    let ext = match format {
        ReportFormat::Json => "json",
        ReportFormat::Csv => "csv",
    };
    let out = args.out.clone().unwrap_or_else(|| {
        orbitdepth::report::output_dir(&cfg).join(format!("report-{suite}.{ext}"))
    });
    print_stdout(&report.summary_table())?;
    report.write(&out, format).map_err(Failure::failed)?;
    eprintln!("report written to {}", out.display());
    Ok(report.exit_code() as u8)
}

fn report(g: &GlobalArgs, args: &ReportArgs) -> CmdResult {
    let cfg = resolve_config(g, args.k)?;
    let report = orbitdepth::report::full_pipeline(&cfg).map_err(Failure::usage)?;
    print_stdout(&report.summary_table())?;
    report
        .write(&args.out, args.format.into())
        .map_err(Failure::failed)?;
    eprintln!("report written to {}", args.out.display());
    Ok(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Orbit(c) => commands::orbit(&cli.global, c),
        Command::Repr(c) => commands::repr(&cli.global, c),
        Command::Mel(c) => commands::mel(&cli.global, c),
        Command::Num(c) => commands::num(&cli.global, c),
        Command::Verify(a) => verify(&cli.global, a),
        Command::Report(a) => report(&cli.global, a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_config() {
        let g = GlobalArgs {
            seed: Some(7),
            k_max: Some(3),
            ..GlobalArgs::default()
        };
        let cfg = resolve_config(&g, Some(4)).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.k_max, 4);
        let bad = GlobalArgs {
            t0: Some(2.0),
            ..GlobalArgs::default()
        };
        assert_eq!(resolve_config(&bad, None).unwrap_err().code, EXIT_USAGE);
    }
}
