use std::f64::consts::PI;

use super::{invalid, ParamsError};
use crate::constants::PhysicalConstants;

const K: PhysicalConstants = PhysicalConstants::codata2018();

/// Rectangular box resonator, dimensions in metres. Origin at the box centre,
/// `a` along x, `b` along y, `d` along z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl CavityGeometry {
    pub fn new(a: f64, b: f64, d: f64) -> Result<Self, ParamsError> {
        let g = Self { a, b, d };
        g.validate()?;
        Ok(g)
    }

    /// 22.86 × 10.16 × 40 mm WR-90 section.
    pub fn reference() -> Self {
        Self { a: 22.86e-3, b: 10.16e-3, d: 40e-3 }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        for (name, v) in [("a", self.a), ("b", self.b), ("d", self.d)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, "cavity dimension must be positive and finite"));
            }
        }
        if !(self.a > self.b && self.d > self.b) {
            return Err(ParamsError::NonFundamental { a: self.a, b: self.b, d: self.d });
        }
        Ok(())
    }

    /// Strict interior test for a point in centred coordinates.
    pub fn contains(&self, p: [f64; 3]) -> bool {
        p[0].abs() < self.a / 2.0 && p[1].abs() < self.b / 2.0 && p[2].abs() < self.d / 2.0
    }

    pub fn volume(&self) -> f64 {
        self.a * self.b * self.d
    }

    /// Resonance of mode (m, n, p) in rad/s, ignoring which polarisations exist.
    fn mode_omega(&self, m: u32, n: u32, p: u32) -> f64 {
        let (m, n, p) = (m as f64, n as f64, p as f64);
        K.c0 * PI * ((m / self.a).powi(2) + (n / self.b).powi(2) + (p / self.d).powi(2)).sqrt()
    }
}

/// The normalised TE101 mode. E is along y with profile `cos(πx/a)·cos(πz/d)` in centred
/// coordinates (equivalently `sin(πx'/a)·sin(πz'/d)` from the wall).
#[derive(Debug, Clone, PartialEq)]
pub struct CavityMode {
    pub omega_c: f64,
    /// Peak field of the unit-energy-normalised mode, m^(-3/2).
    pub norm_amp: f64,
    pub geometry: CavityGeometry,
    /// Ratio of the next resonance above TE101 to ω_c.
    pub next_mode_ratio: f64,
    pub warnings: Vec<String>,
}

impl CavityMode {
    /// Wavenumber ω_c/c0.
    pub fn k(&self) -> f64 {
        self.omega_c / K.c0
    }

    /// y-component of the normalised electric field at a centred position.
    pub fn e_field(&self, p: [f64; 3]) -> f64 {
        let g = &self.geometry;
        self.norm_amp * (PI * p[0] / g.a).cos() * (PI * p[2] / g.d).cos()
    }

    /// Normalised magnetic field `∇×E/k`, components (x, y, z).
    pub fn h_field(&self, p: [f64; 3]) -> [f64; 3] {
        let g = &self.geometry;
        let (ax, az) = (PI * p[0] / g.a, PI * p[2] / g.d);
        let s = self.norm_amp / self.k();
        [s * (PI / g.d) * ax.cos() * az.sin(), 0.0, -s * (PI / g.a) * ax.sin() * az.cos()]
    }
}

/// TE101 resonance and normalisation of an air-filled box.
pub fn cavity_mode(geom: CavityGeometry) -> Result<CavityMode, ParamsError> {
    geom.validate()?;
    let omega_c = geom.mode_omega(1, 0, 1);

    // TE needs p ≥ 1 and (m, n) ≠ (0, 0); TM needs m, n ≥ 1.
    let mut next = f64::INFINITY;
    for m in 0..=3u32 {
        for n in 0..=3u32 {
            for p in 0..=3u32 {
                let te = p >= 1 && (m, n) != (0, 0);
                let tm = m >= 1 && n >= 1;
                if (te || tm) && (m, n, p) != (1, 0, 1) {
                    next = next.min(geom.mode_omega(m, n, p));
                }
            }
        }
    }

    let mut warnings = Vec::new();
    if ((geom.a - geom.d) / geom.a).abs() < 1e-12 {
        warnings.push("a = d: higher TE modes pair up; single-mode treatment relies on TE101 separation".to_string());
    }
    let next_mode_ratio = next / omega_c;
    if next_mode_ratio < 1.1 {
        warnings.push(format!("next cavity mode only {:.1}% above TE101", (next_mode_ratio - 1.0) * 100.0));
    }

    Ok(CavityMode { omega_c, norm_amp: 2.0 / geom.volume().sqrt(), geometry: geom, next_mode_ratio, warnings })
}
