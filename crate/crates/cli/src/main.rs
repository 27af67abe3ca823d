use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ptk_cli::commands::{cmd_params, cmd_plot, cmd_sweep, cmd_verify, CliError, Overrides, Regime, ReportFormat};
use ptk_cli::config::SweepMode;

#[derive(Parser)]
#[command(name = "ptk", version, about = "Photon transport through a cavity-coupled qubit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Good,
    Bad,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Single,
    G2,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(clap::Args)]
struct Common {
    /// INI run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in parameter preset instead of a configuration file.
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Extract system parameters and print their provenance.
    Params {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Tabulate single-photon spectra or g² over a frequency grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Number of grid points.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Logarithmic y axis in the SVG.
        #[arg(long)]
        log: bool,
    },
    /// Run the oracle suite; exits 3 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Render an SVG from an existing sweep CSV.
    Plot {
        input: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        log: bool,
    },
}

fn overrides(c: Common) -> Overrides {
    Overrides {
        config: c.config,
        regime: c.regime.map(|r| match r {
            RegimeArg::Good => Regime::Good,
            RegimeArg::Bad => Regime::Bad,
        }),
        out: c.out,
        ..Overrides::default()
    }
}

fn set_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PTK_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("PTK_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    set_threads()?;
    match cli.command {
        Command::Params { common, format } => cmd_params(&Overrides {
            format: format.map(|f| match f {
                FormatArg::Csv => ReportFormat::Csv,
                FormatArg::Jsonl => ReportFormat::JsonLines,
            }),
            ..overrides(common)
        }),
        Command::Sweep { common, svg, grid, mode, log } => cmd_sweep(&Overrides {
            svg,
            grid,
            mode: mode.map(|m| match m {
                ModeArg::Single => SweepMode::Single,
                ModeArg::G2 => SweepMode::G2,
            }),
            log,
            ..overrides(common)
        }),
        Command::Verify { common } => cmd_verify(&overrides(common)),
        Command::Plot { input, svg, log } => cmd_plot(&input, &Overrides { svg, log, ..Overrides::default() }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ptk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
