use std::f64::consts::PI;

use super::{
    cavity_mode, coupling_g, coupling_kappa, solve_ej, transmon_spectrum, CavityGeometry, CavityMode, Charging,
    CoaxSpec, DipoleCoupling, DipoleSpec, ParamsError, PortCoupling, SystemParams, TransmonSolution, TransmonSpec,
};

/// How the Josephson energy is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JosephsonSpec {
    /// Given directly, J.
    Energy(f64),
    /// Solved so the qubit sits at this angular frequency.
    TargetFrequency(f64),
    /// Solved so the qubit is resonant with the extracted cavity mode.
    MatchCavity,
}

/// Reference values an extraction is compared against (cyclic, Hz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceValues {
    pub f_c: f64,
    pub f_q: f64,
    pub g: f64,
    pub kappa: f64,
}

/// Complete physical description of the device.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceSpec {
    pub geometry: CavityGeometry,
    pub coax: CoaxSpec,
    pub charging: Charging,
    pub josephson: JosephsonSpec,
    pub charge_cutoff: usize,
    pub offset_charge: f64,
    pub dipole: DipoleSpec,
    pub reference: Option<ReferenceValues>,
}

impl DeviceSpec {
    pub fn good_cavity() -> Self {
        Self {
            geometry: CavityGeometry::reference(),
            coax: CoaxSpec::reference(),
            charging: Charging::Capacitance(50.34e-15),
            josephson: JosephsonSpec::MatchCavity,
            charge_cutoff: 20,
            offset_charge: 0.0,
            dipole: DipoleSpec::good_cavity(),
            reference: Some(ReferenceValues { f_c: 7.55e9, f_q: 7.55e9, g: 15.9e6, kappa: 421.5e3 }),
        }
    }

    pub fn bad_cavity() -> Self {
        Self {
            dipole: DipoleSpec::bad_cavity(),
            reference: Some(ReferenceValues { f_c: 7.55e9, f_q: 7.55e9, g: 269.3e3, kappa: 421.5e3 }),
            ..Self::good_cavity()
        }
    }
}

/// One line of the provenance report.
#[derive(Debug, Clone, PartialEq)]
pub struct ProvenanceEntry {
    pub quantity: &'static str,
    /// Value in `unit`.
    pub value: f64,
    pub unit: &'static str,
    pub source: String,
    /// Published value in the same unit, when known.
    pub reference: Option<f64>,
}

impl ProvenanceEntry {
    /// value / reference.
    pub fn ratio(&self) -> Option<f64> {
        self.reference.map(|r| self.value / r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionReport {
    pub params: SystemParams<f64>,
    pub entries: Vec<ProvenanceEntry>,
    pub warnings: Vec<String>,
    pub mode: Option<CavityMode>,
    pub ports: Option<PortCoupling>,
    pub transmon: Option<TransmonSolution>,
    pub dipole: Option<DipoleCoupling>,
}

impl ExtractionReport {
    pub fn entry(&self, quantity: &str) -> Option<&ProvenanceEntry> {
        self.entries.iter().find(|e| e.quantity == quantity)
    }
}

/// Either a device to extract from or explicit parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamSource {
    Device(DeviceSpec),
    Explicit(SystemParams<f64>),
}

const TWO_PI: f64 = 2.0 * PI;
const H_PLANCK: f64 = crate::constants::PhysicalConstants::codata2018().h_planck;

/// Cavity mode, port decay rates, transmon and coupling, assembled with provenance.
pub fn extract_params(device: &DeviceSpec) -> Result<ExtractionReport, ParamsError> {
    let mode = cavity_mode(device.geometry)?;
    let ports = coupling_kappa(&device.geometry, &device.coax, &mode)?;

    let mut spec = TransmonSpec::new(device.charging, 1.0);
    spec.charge_cutoff = device.charge_cutoff;
    spec.offset_charge = device.offset_charge;
    let ec = spec.ec();
    let (ej, ej_source) = match device.josephson {
        JosephsonSpec::Energy(ej) => (ej, "given"),
        JosephsonSpec::TargetFrequency(w) => (solve_ej(ec, w)?, "root solve for target ω_q"),
        JosephsonSpec::MatchCavity => (solve_ej(ec, mode.omega_c)?, "root solve for ω_q = ω_c"),
    };
    spec.ej = ej;
    let transmon = transmon_spectrum(&spec)?;
    let dipole = coupling_g(&mode, &device.dipole, &transmon)?;

    let kappa1 = ports.kappa[0];
    let kappa2 = ports.kappa.get(1).copied().unwrap_or(0.0);
    let params = SystemParams::new(mode.omega_c, transmon.omega_q, dipole.g, kappa1, kappa2)?;

    let r = device.reference;
    let pick = |f: fn(&ReferenceValues) -> f64, scale: f64| r.as_ref().map(|r| f(r) / scale);
    let mut entries = vec![
        ProvenanceEntry {
            quantity: "f_c",
            value: mode.omega_c / TWO_PI / 1e9,
            unit: "GHz",
            source: "TE101 resonance of the box".into(),
            reference: pick(|r| r.f_c, 1e9),
        },
        ProvenanceEntry {
            quantity: "E_C",
            value: ec / H_PLANCK / 1e9,
            unit: "GHz",
            source: match device.charging {
                Charging::Capacitance(_) => "e²/(2C)".into(),
                Charging::Energy(_) => "given".into(),
            },
            reference: None,
        },
        ProvenanceEntry {
            quantity: "E_J",
            value: ej / H_PLANCK / 1e9,
            unit: "GHz",
            source: ej_source.into(),
            reference: None,
        },
        ProvenanceEntry {
            quantity: "f_q",
            value: transmon.omega_q / TWO_PI / 1e9,
            unit: "GHz",
            source: format!("charge-basis diagonalisation, N = {}", device.charge_cutoff),
            reference: pick(|r| r.f_q, 1e9),
        },
        ProvenanceEntry {
            quantity: "n_ge",
            value: transmon.n_ge,
            unit: "1",
            source: "⟨g|n|e⟩, phase fixed non-negative".into(),
            reference: None,
        },
    ];
    for (i, (gp, k)) in ports.g_p.iter().zip(&ports.kappa).enumerate() {
        entries.push(ProvenanceEntry {
            quantity: ["g_p1", "g_p2", "g_p3", "g_p4"].get(i).copied().unwrap_or("g_p"),
            value: *gp,
            unit: "sqrt(Hz)",
            source: "aperture overlap quadrature".into(),
            reference: None,
        });
        entries.push(ProvenanceEntry {
            quantity: ["kappa1", "kappa2", "kappa3", "kappa4"].get(i).copied().unwrap_or("kappa"),
            value: k / TWO_PI / 1e3,
            unit: "kHz",
            source: "2π·g_p²".into(),
            reference: pick(|r| r.kappa, 1e3),
        });
    }
    entries.push(ProvenanceEntry {
        quantity: "g",
        value: dipole.g / TWO_PI / 1e6,
        unit: "MHz",
        source: format!(
            "dipole coupling, ℓ_eff = {:.4} mm, cos(tilt) = {:.6}",
            dipole.effective_length * 1e3,
            dipole.tilt_factor
        ),
        reference: pick(|r| r.g, 1e6),
    });

    let mut warnings = mode.warnings.clone();
    warnings.extend(dipole.warnings.iter().cloned());

    Ok(ExtractionReport {
        params,
        entries,
        warnings,
        mode: Some(mode),
        ports: Some(ports),
        transmon: Some(transmon),
        dipole: Some(dipole),
    })
}

/// Resolves a parameter source. Explicit parameters pass through unchanged.
pub fn resolve(source: &ParamSource) -> Result<ExtractionReport, ParamsError> {
    match source {
        ParamSource::Device(d) => extract_params(d),
        ParamSource::Explicit(p) => {
            p.validate()?;
            let e = |quantity, value, unit| ProvenanceEntry {
                quantity,
                value,
                unit,
                source: "user supplied".into(),
                reference: None,
            };
            Ok(ExtractionReport {
                params: *p,
                entries: vec![
                    e("f_c", p.omega_c / TWO_PI / 1e9, "GHz"),
                    e("f_q", p.omega_q / TWO_PI / 1e9, "GHz"),
                    e("g", p.g / TWO_PI / 1e6, "MHz"),
                    e("kappa1", p.kappa1 / TWO_PI / 1e3, "kHz"),
                    e("kappa2", p.kappa2 / TWO_PI / 1e3, "kHz"),
                ],
                warnings: vec![],
                mode: None,
                ports: None,
                transmon: None,
                dipole: None,
            })
        }
    }
}
