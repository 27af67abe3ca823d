//! INI-style run configuration: `[device]` or `[params]`, plus optional `[sweep]` and `[output]`.
//!
//! Dimensional keys carry their unit as a suffix (`g_MHz`, `a_mm`, `tau_ns`). Rates and
//! frequencies are cyclic in the file and angular once parsed.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::PathBuf;

use ini::{Ini, ParseOption, Properties};
use ptk_core::params::{
    ApertureFace, CavityGeometry, Charging, CoaxSpec, DeviceSpec, DipoleSpec, EffectiveLength, JosephsonSpec,
    ParamSource,
};
use ptk_core::SystemParams;
use thiserror::Error;

const H_PLANCK: f64 = ptk_core::constants::PhysicalConstants::codata2018().h_planck;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{field}: {reason}")]
    Validation { field: String, reason: String },
}

fn invalid<T>(field: impl Into<String>, reason: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Validation { field: field.into(), reason: reason.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Single,
    G2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub points: usize,
    /// Grid centre, rad/s. Defaults to ω_c.
    pub center: Option<f64>,
    /// Half-width of the grid, rad/s. Defaults to 3g (good cavity) or 10κ.
    pub half_span: Option<f64>,
    /// Delay for g² sweeps, s.
    pub tau: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { mode: SweepMode::Single, points: 2001, center: None, half_span: None, tau: 0.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputSpec {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub log_scale: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: ParamSource,
    pub sweep: SweepSpec,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Dim {
    Frequency,
    Length,
    Capacitance,
    Time,
    Angle,
}

fn unit_scale(dim: Dim, unit: &str) -> Option<f64> {
    Some(match (dim, unit) {
        (Dim::Frequency, "GHz") => 1e9,
        (Dim::Frequency, "MHz") => 1e6,
        (Dim::Frequency, "kHz") => 1e3,
        (Dim::Frequency, "Hz") => 1.0,
        (Dim::Length, "m") => 1.0,
        (Dim::Length, "mm") => 1e-3,
        (Dim::Length, "um") => 1e-6,
        (Dim::Capacitance, "fF") => 1e-15,
        (Dim::Capacitance, "pF") => 1e-12,
        (Dim::Time, "s") => 1.0,
        (Dim::Time, "us") => 1e-6,
        (Dim::Time, "ns") => 1e-9,
        (Dim::Angle, "deg") => 1.0,
        _ => return None,
    })
}

const DIMENSIONAL: &[(&str, &str, Dim)] = &[
    ("device", "a", Dim::Length),
    ("device", "b", Dim::Length),
    ("device", "d", Dim::Length),
    ("device", "r_in", Dim::Length),
    ("device", "r_out", Dim::Length),
    ("device", "port_z", Dim::Length),
    ("device", "capacitance", Dim::Capacitance),
    ("device", "ec", Dim::Frequency),
    ("device", "ej", Dim::Frequency),
    ("device", "qubit", Dim::Frequency),
    ("device", "dipole_length", Dim::Length),
    ("device", "dipole_x", Dim::Length),
    ("device", "dipole_y", Dim::Length),
    ("device", "dipole_z", Dim::Length),
    ("device", "tilt", Dim::Angle),
    ("params", "omega_c", Dim::Frequency),
    ("params", "omega_q", Dim::Frequency),
    ("params", "g", Dim::Frequency),
    ("params", "kappa", Dim::Frequency),
    ("params", "kappa1", Dim::Frequency),
    ("params", "kappa2", Dim::Frequency),
    ("sweep", "center", Dim::Frequency),
    ("sweep", "half_span", Dim::Frequency),
    ("sweep", "tau", Dim::Time),
];

const PLAIN: &[(&str, &str)] = &[
    ("device", "eps_r"),
    ("device", "face"),
    ("device", "charge_cutoff"),
    ("device", "offset_charge"),
    ("device", "length_model"),
    ("sweep", "mode"),
    ("sweep", "points"),
    ("output", "csv"),
    ("output", "svg"),
    ("output", "log"),
];

/// One section's keys, resolved to SI values. Each key may appear once.
struct Section<'a> {
    name: &'a str,
    values: Vec<(String, String, Option<f64>)>,
    used: BTreeSet<String>,
}

impl<'a> Section<'a> {
    fn new(name: &'a str, props: &Properties, text: &str) -> Result<Self, ConfigError> {
        let mut values = Vec::new();
        let mut seen = BTreeSet::new();
        for (key, value) in props.iter() {
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::Parse {
                    line: last_line_with_key(text, key),
                    msg: format!("duplicate key `{key}` in [{name}]"),
                });
            }
            let field = format!("{name}.{key}");
            if PLAIN.contains(&(name, key)) {
                values.push((key.to_string(), value.to_string(), None));
                continue;
            }
            if let Some(&(_, base, _)) = DIMENSIONAL.iter().find(|(s, b, _)| *s == name && *b == key) {
                return invalid(field, format!("`{base}` needs a unit suffix"));
            }
            let Some((base, unit)) = key.rsplit_once('_') else {
                return invalid(field, "unknown key");
            };
            let Some(&(_, _, dim)) = DIMENSIONAL.iter().find(|(s, b, _)| *s == name && *b == base) else {
                return invalid(field, "unknown key");
            };
            let Some(scale) = unit_scale(dim, unit) else {
                return invalid(field, format!("unit `{unit}` does not fit {dim:?}"));
            };
            values.push((base.to_string(), value.to_string(), Some(scale)));
        }
        Ok(Self { name, values, used: BTreeSet::new() })
    }

    fn raw(&mut self, base: &str) -> Option<(String, Option<f64>)> {
        let hit = self.values.iter().find(|(b, _, _)| b == base).cloned();
        if hit.is_some() {
            self.used.insert(base.to_string());
        }
        hit.map(|(_, v, s)| (v, s))
    }

    fn field(&self, base: &str) -> String {
        format!("{}.{base}", self.name)
    }

    fn number(&mut self, base: &str) -> Result<Option<f64>, ConfigError> {
        let Some((v, scale)) = self.raw(base) else { return Ok(None) };
        match v.trim().parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Some(x * scale.unwrap_or(1.0))),
            _ => invalid(self.field(base), format!("`{v}` is not a finite number")),
        }
    }

    fn required(&mut self, base: &str) -> Result<f64, ConfigError> {
        match self.number(base)? {
            Some(x) => Ok(x),
            None => invalid(self.field(base), "missing"),
        }
    }

    fn list(&mut self, base: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some((v, scale)) = self.raw(base) else { return Ok(None) };
        let mut out = Vec::new();
        for part in v.split(',') {
            match part.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => out.push(x * scale.unwrap_or(1.0)),
                _ => return invalid(self.field(base), format!("`{}` is not a finite number", part.trim())),
            }
        }
        Ok(Some(out))
    }

    fn text(&mut self, base: &str) -> Option<String> {
        self.raw(base).map(|(v, _)| v.trim().to_string())
    }
}

fn last_line_with_key(text: &str, key: &str) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| l.split('=').next().map(str::trim) == Some(key))
        .map(|(i, _)| i + 1)
        .last()
        .unwrap_or(0)
}

fn first_content_line(text: &str) -> usize {
    text.lines()
        .position(|l| {
            let t = l.trim();
            !(t.is_empty() || t.starts_with('#') || t.starts_with(';'))
        })
        .map(|i| i + 1)
        .unwrap_or(0)
}

fn rate(x: f64) -> f64 {
    2.0 * PI * x
}

fn parse_params(mut s: Section) -> Result<SystemParams, ConfigError> {
    let fc = s.required("omega_c")?;
    let fq = s.required("omega_q")?;
    let g = s.required("g")?;
    let (k1, k2) = match (s.number("kappa")?, s.number("kappa1")?, s.number("kappa2")?) {
        (Some(k), None, None) => (k, k),
        (None, Some(a), Some(b)) => (a, b),
        (None, _, _) => return invalid("params.kappa", "give kappa, or both kappa1 and kappa2"),
        (Some(_), _, _) => return invalid("params.kappa", "kappa excludes kappa1/kappa2"),
    };
    SystemParams::new(rate(fc), rate(fq), rate(g), rate(k1), rate(k2)).or_else(|e| invalid("params", e.to_string()))
}

fn parse_device(mut s: Section) -> Result<DeviceSpec, ConfigError> {
    let geometry = CavityGeometry { a: s.required("a")?, b: s.required("b")?, d: s.required("d")? };
    let face = match s.text("face").as_deref() {
        None | Some("opposed") => ApertureFace::Opposed,
        Some("bottom") => ApertureFace::Bottom,
        Some("top") => ApertureFace::Top,
        Some(other) => return invalid("device.face", format!("`{other}` is not bottom, top or opposed")),
    };
    let coax = CoaxSpec {
        r_in: s.required("r_in")?,
        r_out: s.required("r_out")?,
        eps_r: s.required("eps_r")?,
        z_offsets: match s.list("port_z")? {
            Some(v) => v,
            None => return invalid("device.port_z", "missing"),
        },
        face,
    };
    let charging = match (s.number("capacitance")?, s.number("ec")?) {
        (Some(c), None) => Charging::Capacitance(c),
        (None, Some(e)) => Charging::Energy(e * H_PLANCK),
        _ => return invalid("device.capacitance", "give exactly one of capacitance or ec"),
    };
    let josephson = match (s.number("ej")?, s.number("qubit")?) {
        (Some(e), None) => JosephsonSpec::Energy(e * H_PLANCK),
        (None, Some(f)) => JosephsonSpec::TargetFrequency(rate(f)),
        (None, None) => JosephsonSpec::MatchCavity,
        _ => return invalid("device.ej", "ej and qubit are exclusive"),
    };
    let charge_cutoff = match s.number("charge_cutoff")? {
        None => 20,
        Some(n) if n.fract() == 0.0 && n >= 1.0 => n as usize,
        Some(n) => return invalid("device.charge_cutoff", format!("{n} is not a positive integer")),
    };
    let length_model = match s.text("length_model").as_deref() {
        None | Some("half_length") => EffectiveLength::HalfLength,
        Some("sinusoidal") => EffectiveLength::Sinusoidal,
        Some(other) => return invalid("device.length_model", format!("`{other}` is not half_length or sinusoidal")),
    };
    let dipole = DipoleSpec {
        length: s.required("dipole_length")?,
        position: [
            s.number("dipole_x")?.unwrap_or(0.0),
            s.number("dipole_y")?.unwrap_or(0.0),
            s.number("dipole_z")?.unwrap_or(0.0),
        ],
        tilt_deg: s.number("tilt")?.unwrap_or(0.0),
        length_model,
    };
    Ok(DeviceSpec {
        geometry,
        coax,
        charging,
        josephson,
        charge_cutoff,
        offset_charge: s.number("offset_charge")?.unwrap_or(0.0),
        dipole,
        reference: None,
    })
}

fn parse_sweep(mut s: Section) -> Result<SweepSpec, ConfigError> {
    let mode = match s.text("mode").as_deref() {
        None | Some("single") => SweepMode::Single,
        Some("g2") => SweepMode::G2,
        Some(other) => return invalid("sweep.mode", format!("`{other}` is not single or g2")),
    };
    let points = match s.number("points")? {
        None => 2001,
        Some(n) if n.fract() == 0.0 && n >= 2.0 => n as usize,
        Some(n) => return invalid("sweep.points", format!("{n} is not an integer >= 2")),
    };
    let center = s.number("center")?.map(rate);
    let half_span = s.number("half_span")?.map(rate);
    if let Some(h) = half_span {
        if !(h > 0.0) {
            return invalid("sweep.half_span", "must be positive");
        }
    }
    let tau = s.number("tau")?.unwrap_or(0.0);
    if tau < 0.0 {
        return invalid("sweep.tau", "must be non-negative");
    }
    Ok(SweepSpec { mode, points, center, half_span, tau })
}

fn parse_output(mut s: Section) -> Result<OutputSpec, ConfigError> {
    let log_scale = match s.text("log").as_deref() {
        None | Some("false") | Some("no") | Some("0") => false,
        Some("true") | Some("yes") | Some("1") => true,
        Some(other) => return invalid("output.log", format!("`{other}` is not a boolean")),
    };
    Ok(OutputSpec { csv: s.text("csv").map(PathBuf::from), svg: s.text("svg").map(PathBuf::from), log_scale })
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let opt = ParseOption { enabled_escape: false, ..ParseOption::default() };
    let ini = Ini::load_from_str_opt(text, opt)
        .map_err(|e| ConfigError::Parse { line: e.line + 1, msg: e.msg.to_string() })?;

    if !ini.general_section().is_empty() {
        return Err(ConfigError::Parse { line: first_content_line(text), msg: "key outside any section".into() });
    }
    let names: Vec<&str> = ini.sections().flatten().collect();
    if names.is_empty() {
        return Err(ConfigError::Parse { line: text.lines().count(), msg: "no sections".into() });
    }
    for name in &names {
        if !["device", "params", "sweep", "output"].contains(name) {
            return invalid(format!("[{name}]"), "unknown section");
        }
        if ini.section_all(Some(*name)).count() > 1 {
            return invalid(format!("[{name}]"), "section appears more than once");
        }
    }
    let section = |name: &'static str| -> Result<Option<Section>, ConfigError> {
        ini.section(Some(name)).map(|p| Section::new(name, p, text)).transpose()
    };

    let source = match (section("device")?, section("params")?) {
        (Some(_), Some(_)) => return invalid("[device]/[params]", "exactly one of the two may be given"),
        (None, None) => return invalid("[device]/[params]", "one of the two is required"),
        (Some(d), None) => ParamSource::Device(parse_device(d)?),
        (None, Some(p)) => ParamSource::Explicit(parse_params(p)?),
    };
    let sweep = section("sweep")?.map(parse_sweep).transpose()?.unwrap_or_default();
    let output = section("output")?.map(parse_output).transpose()?.unwrap_or_default();
    Ok(RunConfig { source, sweep, output })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_convert_to_angular() {
        let c = parse_config("[params]\nomega_c_GHz = 1\nomega_q_MHz = 1000\ng_kHz = 1\nkappa_Hz = 10\n").unwrap();
        let ParamSource::Explicit(p) = c.source else { panic!() };
        assert_eq!(p.omega_c, 2.0 * PI * 1e9);
        assert_eq!(p.omega_q, p.omega_c);
        assert_eq!(p.kappa1, 2.0 * PI * 10.0);
    }

    #[test]
    fn unit_suffix_is_mandatory() {
        let e = parse_config("[params]\nomega_c = 7.55\n").unwrap_err();
        assert!(matches!(e, ConfigError::Validation { ref field, .. } if field == "params.omega_c"));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let e = parse_config("[params]\nomega_c_mm = 7.55\n").unwrap_err();
        assert!(matches!(e, ConfigError::Validation { .. }));
    }

    #[test]
    fn duplicate_key_reports_line() {
        let e = parse_config("[params]\ng_MHz = 1\ng_MHz = 2\n").unwrap_err();
        assert_eq!(e, ConfigError::Parse { line: 3, msg: "duplicate key `g_MHz` in [params]".into() });
    }

    #[test]
    fn stray_key_reports_line() {
        let e = parse_config("# header\n\nmode = g2\n[sweep]\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 3, .. }));
    }
}
