//! Physical parameter extraction: cavity mode, port couplings, transmon spectrum and
//! qubit-cavity coupling, assembled into [`SystemParams`].

mod cavity;
mod dipole;
mod extract;
mod ports;
mod transmon;

pub use cavity::{cavity_mode, CavityGeometry, CavityMode};
pub use dipole::{coupling_g, DipoleCoupling, DipoleSpec, EffectiveLength};
pub use extract::{extract_params, resolve, DeviceSpec, ExtractionReport, JosephsonSpec, ParamSource, ProvenanceEntry};
pub use ports::{coupling_kappa, ApertureFace, CoaxSpec, PortCoupling};
pub use transmon::{asymptotic_omega_q, solve_ej, transmon_spectrum, Charging, TransmonSolution, TransmonSpec};

use thiserror::Error;

use crate::scalar::Real;

/// Errors raised by parameter validation and extraction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("invalid parameter `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("TE101 is not the fundamental mode (need a > b and d > b, got a={a} b={b} d={d})")]
    NonFundamental { a: f64, b: f64, d: f64 },
    #[error("aperture {port} does not fit inside the cavity face")]
    ApertureOutsideFace { port: usize },
    #[error("aperture quadrature not converged (last relative change {rel_change:.3e})")]
    QuadratureNotConverged { rel_change: f64 },
    #[error("transmon truncation not converged (relative change {rel_change:.3e})")]
    NotConverged { rel_change: f64 },
    #[error("no E_J in [E_C, 1e4 E_C] reaches the target qubit frequency")]
    NoBracket,
    #[error("dipole position ({x}, {y}, {z}) m is not strictly inside the cavity")]
    OutsideCavity { x: f64, y: f64, z: f64 },
    #[error("charge matrix element vanishes")]
    ZeroMatrixElement,
}

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> ParamsError {
    ParamsError::Invalid { field, reason: reason.into() }
}

/// Parameters of the port-coupled cavity-qubit model. All rates are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    pub omega_c: T,
    pub omega_q: T,
    /// Qubit-cavity coupling. The sign is a phase convention and never changes observables.
    pub g: T,
    pub kappa1: T,
    pub kappa2: T,
}

impl<T: Real> SystemParams<T> {
    /// Validated constructor: all values finite, decay rates non-negative.
    pub fn new(omega_c: T, omega_q: T, g: T, kappa1: T, kappa2: T) -> Result<Self, ParamsError> {
        let p = Self { omega_c, omega_q, g, kappa1, kappa2 };
        p.validate()?;
        Ok(p)
    }

    /// Equal decay rate through both ports.
    pub fn symmetric_ports(omega_c: T, omega_q: T, g: T, kappa: T) -> Result<Self, ParamsError> {
        Self::new(omega_c, omega_q, g, kappa, kappa)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let fields = [
            ("omega_c", self.omega_c),
            ("omega_q", self.omega_q),
            ("g", self.g),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if self.kappa1 < T::zero() {
            return Err(invalid("kappa1", "must be >= 0"));
        }
        if self.kappa2 < T::zero() {
            return Err(invalid("kappa2", "must be >= 0"));
        }
        Ok(())
    }

    /// `|κ1 − κ2| ≤ 1e-9·max(κ1, κ2)`.
    pub fn symmetric(&self) -> bool {
        (self.kappa1 - self.kappa2).abs() <= T::lit(1e-9) * self.kappa1.max(self.kappa2)
    }

    /// Total cavity decay rate κ1 + κ2.
    pub fn kappa_total(&self) -> T {
        self.kappa1 + self.kappa2
    }

    /// Per-port decay rate for symmetric ports (mean of the two).
    pub fn kappa(&self) -> T {
        (self.kappa1 + self.kappa2) / T::lit(2.0)
    }

    pub fn with_g(mut self, g: T) -> Self {
        self.g = g;
        self
    }

    /// Good-cavity regime: g exceeds the per-port decay rate.
    pub fn is_good_cavity(&self) -> bool {
        self.g.abs() > self.kappa()
    }

    pub fn cast<U: Real>(&self) -> SystemParams<U> {
        let c = |x: T| U::from_f64(x.to_f64().expect("finite")).expect("representable");
        SystemParams {
            omega_c: c(self.omega_c),
            omega_q: c(self.omega_q),
            g: c(self.g),
            kappa1: c(self.kappa1),
            kappa2: c(self.kappa2),
        }
    }

    /// Good-cavity operating point: 7.55 GHz resonances, g/2π = 15.9 MHz, κ/2π = 421.5 kHz per port.
    pub fn good_cavity() -> Self {
        Self::from_cyclic(7.55e9, 7.55e9, 15.9e6, 421.5e3, 421.5e3)
    }

    /// Bad-cavity operating point: as the good cavity with g/2π = 269.3 kHz.
    pub fn bad_cavity() -> Self {
        Self::from_cyclic(7.55e9, 7.55e9, 269.3e3, 421.5e3, 421.5e3)
    }

    /// Builds from cyclic frequencies in Hz.
    pub fn from_cyclic(fc: f64, fq: f64, g: f64, k1: f64, k2: f64) -> Self {
        let w = |f: f64| T::lit(2.0 * std::f64::consts::PI * f);
        Self { omega_c: w(fc), omega_q: w(fq), g: w(g), kappa1: w(k1), kappa2: w(k2) }
    }
}
