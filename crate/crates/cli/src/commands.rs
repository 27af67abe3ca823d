use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ptk_core::oracle::{run_verification, OracleReport, Outcome};
use ptk_core::params::{resolve, DeviceSpec, ExtractionReport, ParamSource};
use ptk_core::SystemParams;
use serde::Serialize;
use thiserror::Error;

use crate::config::{parse_config, ConfigError, OutputSpec, RunConfig, SweepMode, SweepSpec};
use crate::output::{config_hash, fmt_num, sweep_table, Table, VERSION};
use crate::svg::{Plot, Series};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("{0}")]
    Domain(String),
    #[error("verification failed: {failed} of {total} checks")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    /// 1 = configuration or IO, 2 = domain, 3 = verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Domain(_) => 2,
            CliError::Verification { .. } => 3,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io { path: path.to_path_buf(), msg: e.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Good,
    Bad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    JsonLines,
}

/// Command-line overrides shared by all subcommands.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub regime: Option<Regime>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub grid: Option<usize>,
    pub mode: Option<SweepMode>,
    pub log: bool,
    pub format: Option<ReportFormat>,
}

/// A resolved run: configuration plus the hash identifying its inputs.
pub struct Run {
    pub config: RunConfig,
    pub hash: String,
}

/// Loads the configuration. `device_presets` picks the device description of a regime
/// rather than its reference parameters.
pub fn load(o: &Overrides, device_presets: bool) -> Result<Run, CliError> {
    let (mut config, mut key) = match (&o.config, o.regime) {
        (Some(_), Some(_)) => return Err(CliError::Usage("--config and --regime are exclusive".into())),
        (None, None) => return Err(CliError::Usage("one of --config or --regime is required".into())),
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            (parse_config(&text)?, text)
        }
        (None, Some(r)) => {
            let source = match (r, device_presets) {
                (Regime::Good, false) => ParamSource::Explicit(SystemParams::good_cavity()),
                (Regime::Bad, false) => ParamSource::Explicit(SystemParams::bad_cavity()),
                (Regime::Good, true) => ParamSource::Device(DeviceSpec::good_cavity()),
                (Regime::Bad, true) => ParamSource::Device(DeviceSpec::bad_cavity()),
            };
            let name = if r == Regime::Good { "good" } else { "bad" };
            let cfg = RunConfig { source, sweep: SweepSpec::default(), output: OutputSpec::default() };
            (cfg, format!("--regime {name}\n"))
        }
    };
    if let Some(n) = o.grid {
        if n < 2 {
            return Err(CliError::Usage("--grid needs at least 2 points".into()));
        }
        config.sweep.points = n;
        key.push_str(&format!("\n--grid {n}"));
    }
    if let Some(m) = o.mode {
        config.sweep.mode = m;
        key.push_str(&format!("\n--mode {}", if m == SweepMode::G2 { "g2" } else { "single" }));
    }
    if o.out.is_some() {
        config.output.csv = o.out.clone();
    }
    if o.svg.is_some() {
        config.output.svg = o.svg.clone();
    }
    config.output.log_scale |= o.log;
    Ok(Run { config, hash: config_hash(&key) })
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| io_err(p, e)),
        None => std::io::stdout().write_all(bytes).map_err(|e| io_err(Path::new("<stdout>"), e)),
    }
}

fn params_of(report: &ExtractionReport) -> SystemParams {
    report.params
}

fn extract(source: &ParamSource) -> Result<ExtractionReport, CliError> {
    resolve(source).map_err(|e| CliError::Domain(e.to_string()))
}

#[derive(Serialize)]
struct ProvenanceLine<'a> {
    quantity: &'a str,
    value: f64,
    unit: &'a str,
    reference: Option<f64>,
    ratio: Option<f64>,
    source: &'a str,
}

pub fn render_provenance(report: &ExtractionReport, format: ReportFormat) -> Vec<u8> {
    let lines: Vec<ProvenanceLine> = report
        .entries
        .iter()
        .map(|e| ProvenanceLine {
            quantity: e.quantity,
            value: e.value,
            unit: e.unit,
            reference: e.reference,
            ratio: e.ratio(),
            source: &e.source,
        })
        .collect();
    let mut out = Vec::new();
    match format {
        ReportFormat::JsonLines => {
            for l in &lines {
                serde_json::to_writer(&mut out, l).expect("serialise to Vec");
                out.push(b'\n');
            }
            for w in &report.warnings {
                serde_json::to_writer(&mut out, &serde_json::json!({ "warning": w })).expect("serialise to Vec");
                out.push(b'\n');
            }
        }
        ReportFormat::Csv => {
            for w in &report.warnings {
                let _ = writeln!(out, "# warning {w}");
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["quantity", "value", "unit", "reference", "ratio", "source"]).expect("write to Vec");
            let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
            for l in &lines {
                w.write_record([l.quantity, &fmt_num(l.value), l.unit, &opt(l.reference), &opt(l.ratio), l.source])
                    .expect("write to Vec");
            }
            out = w.into_inner().expect("flush to Vec");
        }
    }
    out
}

pub fn cmd_params(o: &Overrides) -> Result<(), CliError> {
    let run = load(o, true)?;
    let report = extract(&run.config.source)?;
    let format = o.format.unwrap_or_else(|| match run.config.output.csv.as_ref().and_then(|p| p.extension()) {
        Some(e) if e == "jsonl" || e == "json" => ReportFormat::JsonLines,
        _ => ReportFormat::Csv,
    });
    write_out(run.config.output.csv.as_deref(), &render_provenance(&report, format))
}

/// Line plot of a sweep table against its detuning column.
pub fn plot_table(t: &Table, log_y: bool) -> Result<Plot, String> {
    let xcol = t.header.iter().find(|h| h.starts_with("detuning_")).ok_or("no detuning column")?.clone();
    let x = t.column(&xcol).expect("header present");
    let regime = t.meta("regime").unwrap_or("?");
    let g2 = t.header.iter().any(|h| h.starts_with("g2_"));
    let names: Vec<&str> = if g2 { vec!["g2_11", "g2_22", "g2_21"] } else { vec!["abs_r2", "abs_t2"] };
    let mut series = Vec::new();
    for n in names {
        let y = t.column(n).ok_or_else(|| format!("missing column {n}"))?;
        series.push(Series { name: n.to_string(), y });
    }
    Ok(Plot {
        title: format!("{} sweep, {regime} cavity", if g2 { "g²(τ)" } else { "single photon" }),
        x_label: format!("detuning ({})", xcol.trim_start_matches("detuning_")),
        y_label: if g2 { "g²".into() } else { "|r|², |t|²".into() },
        x,
        series,
        log_y,
        y_range: match (g2, log_y) {
            (true, true) => Some((1e-3, 1e4)),
            (true, false) => Some((0.0, 5.0)),
            (false, true) => Some((1e-6, 1.0)),
            (false, false) => Some((0.0, 1.0)),
        },
    })
}

pub fn cmd_sweep(o: &Overrides) -> Result<(), CliError> {
    let run = load(o, false)?;
    let report = extract(&run.config.source)?;
    let table =
        sweep_table(&params_of(&report), &run.config.sweep, &run.hash).map_err(|e| CliError::Domain(e.to_string()))?;
    write_out(run.config.output.csv.as_deref(), &table.to_bytes())?;
    if let Some(svg) = &run.config.output.svg {
        let plot = plot_table(&table, run.config.output.log_scale).map_err(CliError::Domain)?;
        fs::write(svg, plot.render()).map_err(|e| io_err(svg, e))?;
    }
    Ok(())
}

pub fn cmd_plot(input: &Path, o: &Overrides) -> Result<(), CliError> {
    let f = fs::File::open(input).map_err(|e| io_err(input, e))?;
    let table = Table::from_reader(f).map_err(|e| io_err(input, e))?;
    let plot = plot_table(&table, o.log).map_err(|e| io_err(input, e))?;
    write_out(o.svg.as_deref().or(o.out.as_deref()), plot.render().as_bytes())
}

pub fn render_verification(reports: &[OracleReport]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "analytic", "oracle", "rel_error", "tolerance", "outcome", "runtime_s", "note"])
        .expect("write to Vec");
    for r in reports {
        let outcome = match r.outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skip => "skip",
        };
        w.write_record([
            r.check_name.as_str(),
            &fmt_num(r.analytic_value),
            &fmt_num(r.oracle_value),
            &fmt_num(r.rel_error),
            &fmt_num(r.tolerance),
            outcome,
            &format!("{:.3}", r.runtime_s),
            &r.note,
        ])
        .expect("write to Vec");
    }
    let mut out = format!("# ptk {VERSION}\n").into_bytes();
    out.extend(w.into_inner().expect("flush to Vec"));
    out
}

pub fn cmd_verify(o: &Overrides) -> Result<(), CliError> {
    let run = load(o, false)?;
    let report = extract(&run.config.source)?;
    let reports = run_verification(&params_of(&report));
    write_out(run.config.output.csv.as_deref(), &render_verification(&reports))?;
    let failed = reports.iter().filter(|r| r.outcome == Outcome::Fail).count();
    let skipped = reports.iter().filter(|r| r.outcome == Outcome::Skip).count();
    eprintln!(
        "{} checks: {} passed, {failed} failed, {skipped} skipped",
        reports.len(),
        reports.len() - failed - skipped
    );
    if failed > 0 {
        return Err(CliError::Verification { failed, total: reports.len() });
    }
    Ok(())
}
