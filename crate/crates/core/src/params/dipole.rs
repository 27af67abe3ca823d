use std::f64::consts::PI;

use super::{invalid, CavityMode, ParamsError, TransmonSolution};
use crate::constants::PhysicalConstants;

const K: PhysicalConstants = PhysicalConstants::codata2018();

/// Effective-length model of the small receiving dipole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EffectiveLength {
    /// ℓ/2, the short-dipole value.
    #[default]
    HalfLength,
    /// (λ/π)·tan(πℓ/(2λ)) for a sinusoidal current distribution.
    Sinusoidal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSpec {
    /// Tip-to-tip length, m.
    pub length: f64,
    /// Centre position in centred cavity coordinates, m.
    pub position: [f64; 3],
    /// Angle between the dipole axis and the mode polarisation (y), degrees.
    pub tilt_deg: f64,
    pub length_model: EffectiveLength,
}

impl DipoleSpec {
    /// 1 mm dipole at the cavity centre, aligned with the field.
    pub fn good_cavity() -> Self {
        Self { length: 1e-3, position: [0.0; 3], tilt_deg: 0.0, length_model: EffectiveLength::HalfLength }
    }

    /// Off-centre placement tilted by 86° to weaken the coupling.
    pub fn bad_cavity() -> Self {
        Self { position: [-6.43e-3, 0.0, -15e-3], tilt_deg: 86.0, ..Self::good_cavity() }
    }

    pub fn effective_length(&self, omega: f64) -> f64 {
        match self.length_model {
            EffectiveLength::HalfLength => self.length / 2.0,
            EffectiveLength::Sinusoidal => {
                let lambda = 2.0 * PI * K.c0 / omega;
                lambda / PI * (PI * self.length / (2.0 * lambda)).tan()
            }
        }
    }
}

/// cos of an angle in degrees, exact at multiples of 90°.
pub(crate) fn cos_deg(deg: f64) -> f64 {
    let r = deg.rem_euclid(360.0);
    if r == 0.0 {
        1.0
    } else if r == 90.0 || r == 270.0 {
        0.0
    } else if r == 180.0 {
        -1.0
    } else {
        r.to_radians().cos()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DipoleCoupling {
    /// Qubit-cavity coupling, rad/s.
    pub g: f64,
    pub effective_length: f64,
    /// Normalised mode field at the dipole, m^(-3/2).
    pub field: f64,
    pub tilt_factor: f64,
    pub warnings: Vec<String>,
}

/// g = 2e·n_ge·√(ω_c/(2ε0ħ))·E_c(r)·ℓ_eff·cos(tilt).
pub fn coupling_g(
    mode: &CavityMode,
    dipole: &DipoleSpec,
    transmon: &TransmonSolution,
) -> Result<DipoleCoupling, ParamsError> {
    let [x, y, z] = dipole.position;
    if !mode.geometry.contains(dipole.position) {
        return Err(ParamsError::OutsideCavity { x, y, z });
    }
    if !(dipole.length > 0.0 && dipole.length.is_finite()) {
        return Err(invalid("dipole_length", "must be positive"));
    }
    if !dipole.tilt_deg.is_finite() {
        return Err(invalid("dipole_tilt", "must be finite"));
    }
    if !(transmon.n_ge.abs() > 1e-12) {
        return Err(ParamsError::ZeroMatrixElement);
    }
    let mut warnings = Vec::new();
    let lambda = 2.0 * PI * K.c0 / mode.omega_c;
    if dipole.length > lambda / 10.0 {
        warnings.push(format!(
            "dipole length {:.3} mm exceeds λ/10 = {:.3} mm; small-dipole model is marginal",
            dipole.length * 1e3,
            lambda * 1e2
        ));
    }
    let effective_length = dipole.effective_length(mode.omega_c);
    let field = mode.e_field(dipole.position);
    let tilt_factor = cos_deg(dipole.tilt_deg);
    // √(ω/(2ε0))/√ħ keeps the intermediate products away from the subnormal range.
    let vacuum = (mode.omega_c / (2.0 * K.eps0)).sqrt() / K.hbar.sqrt();
    let g = 2.0 * K.e_charge * transmon.n_ge * vacuum * field * effective_length * tilt_factor;
    Ok(DipoleCoupling { g, effective_length, field, tilt_factor, warnings })
}
