//! Sweep tables: `#` metadata lines, a header row and numbers printed with 12 significant digits.

use std::f64::consts::PI;
use std::io::Write;

use ptk_core::transport::{sweep_g2, sweep_single, Port, TransportError, PORT_PAIRS};
use ptk_core::SystemParams;
use sha2::{Digest, Sha256};

use crate::config::{SweepMode, SweepSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:.11e}")
    }
}

pub fn config_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Uniform grid as offsets from the centre, so the detuning column is exact.
pub struct Grid {
    pub center: f64,
    pub offsets: Vec<f64>,
}

impl Grid {
    pub fn new(p: &SystemParams, spec: &SweepSpec) -> Self {
        let center = spec.center.unwrap_or(p.omega_c);
        let half = spec.half_span.unwrap_or_else(|| default_half_span(p));
        let n = spec.points;
        let offsets = (0..n).map(|i| half * ((2 * i) as f64 / (n - 1) as f64 - 1.0)).collect();
        Self { center, offsets }
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.offsets.iter().map(|o| self.center + o).collect()
    }
}

/// ±3g in the good-cavity regime, ±10κ otherwise.
pub fn default_half_span(p: &SystemParams) -> f64 {
    if p.is_good_cavity() {
        3.0 * p.g.abs()
    } else {
        10.0 * p.kappa()
    }
}

/// Detuning column unit: MHz for good cavities, kHz for bad.
pub fn detuning_unit(p: &SystemParams) -> (&'static str, f64) {
    if p.is_good_cavity() {
        ("MHz", 1e6)
    } else {
        ("kHz", 1e3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for (k, v) in &self.meta {
            writeln!(out, "# {k} {v}").expect("write to Vec");
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header).expect("write to Vec");
        for r in &self.rows {
            let cells: Vec<String> = self
                .header
                .iter()
                .zip(r)
                .map(|(h, &x)| if h.starts_with("diverged") { format!("{}", x as u8) } else { fmt_num(x) })
                .collect();
            w.write_record(&cells).expect("write to Vec");
        }
        w.into_inner().expect("flush to Vec")
    }

    pub fn from_reader<R: std::io::Read>(mut r: R) -> Result<Self, String> {
        let mut text = String::new();
        r.read_to_string(&mut text).map_err(|e| e.to_string())?;
        let meta = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .filter_map(|l| l[1..].trim().split_once(' ').map(|(k, v)| (k.to_string(), v.to_string())))
            .collect();
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header: Vec<String> = rdr.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| e.to_string())?;
            let row = rec
                .iter()
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|_| format!("line {}: `{c}` is not a number", rec.position().map_or(0, |p| p.line())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self { meta, header, rows })
    }
}

fn port_label(pp: (Port, Port)) -> String {
    format!("{}{}", pp.0.number(), pp.1.number())
}

/// Evaluates the configured sweep. Row order follows the grid for any thread count.
pub fn sweep_table(p: &SystemParams, spec: &SweepSpec, hash: &str) -> Result<Table, TransportError> {
    let grid = Grid::new(p, spec);
    let v = grid.frequencies();
    let (unit, scale) = detuning_unit(p);
    let mut meta = vec![
        ("ptk".to_string(), VERSION.to_string()),
        ("config_sha256".to_string(), hash.to_string()),
        ("regime".to_string(), if p.is_good_cavity() { "good" } else { "bad" }.to_string()),
    ];
    let mut header = vec!["freq_GHz".to_string(), format!("detuning_{unit}")];
    let mut rows: Vec<Vec<f64>> =
        v.iter().zip(&grid.offsets).map(|(&f, &o)| vec![f / (2.0 * PI) / 1e9, o / (2.0 * PI) / scale]).collect();
    match spec.mode {
        SweepMode::Single => {
            meta.push(("mode".into(), "single".into()));
            header.extend(["abs_r2", "abs_t2", "arg_r", "arg_t"].map(String::from));
            for (row, s) in rows.iter_mut().zip(sweep_single(p, &v)?) {
                row.extend([s.r1.norm_sqr(), s.t21.norm_sqr(), s.r1.arg(), s.t21.arg()]);
            }
        }
        SweepMode::G2 => {
            meta.push(("mode".into(), "g2".into()));
            meta.push(("tau_s".into(), fmt_num(spec.tau)));
            header.extend(PORT_PAIRS.iter().map(|&pp| format!("g2_{}", port_label(pp))));
            header.extend(PORT_PAIRS.iter().map(|&pp| format!("diverged_{}", port_label(pp))));
            let per_pair = PORT_PAIRS.iter().map(|&pp| sweep_g2(p, &v, pp, spec.tau)).collect::<Result<Vec<_>, _>>()?;
            for (i, row) in rows.iter_mut().enumerate() {
                row.extend(per_pair.iter().map(|c| c[i].g2[0]));
                row.extend(per_pair.iter().map(|c| if c[i].diverged { 1.0 } else { 0.0 }));
            }
        }
    }
    Ok(Table { meta, header, rows })
}
