//! CODATA 2018 physical constants in SI units.

/// Fundamental constants used by the parameter extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum, m/s.
    pub c0: f64,
    /// Vacuum permittivity, F/m.
    pub eps0: f64,
    /// Vacuum permeability, H/m.
    pub mu0: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Elementary charge, C.
    pub e_charge: f64,
    /// Planck constant, J s.
    pub h_planck: f64,
}

impl PhysicalConstants {
    pub const fn codata2018() -> Self {
        const C0: f64 = 299_792_458.0;
        const MU0: f64 = 1.256_637_062_12e-6;
        const H: f64 = 6.626_070_15e-34;
        Self {
            c0: C0,
            // ε0 = 1/(μ0 c0²) keeps the three electromagnetic constants consistent.
            eps0: 1.0 / (MU0 * C0 * C0),
            mu0: MU0,
            hbar: H / (2.0 * std::f64::consts::PI),
            e_charge: 1.602_176_634e-19,
            h_planck: H,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}
