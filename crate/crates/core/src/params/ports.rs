use std::f64::consts::PI;

use super::{invalid, CavityGeometry, CavityMode, ParamsError};
use crate::constants::PhysicalConstants;

const K: PhysicalConstants = PhysicalConstants::codata2018();

/// Broad wall(s) carrying the coaxial apertures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApertureFace {
    /// All apertures on the y = −b/2 wall.
    Bottom,
    /// All apertures on the y = +b/2 wall.
    Top,
    /// Alternating walls starting at the bottom, so a pair at ±z is point-symmetric
    /// about the cavity centre.
    Opposed,
}

/// Coaxial feed lines terminating flush with the cavity wall.
#[derive(Debug, Clone, PartialEq)]
pub struct CoaxSpec {
    pub r_in: f64,
    pub r_out: f64,
    pub eps_r: f64,
    /// Axial aperture centres relative to the cavity centre, one per port (m).
    pub z_offsets: Vec<f64>,
    pub face: ApertureFace,
}

impl CoaxSpec {
    /// 0.05 / 2.5 mm line, ε_r = 22.04, apertures at z = ±10 mm on opposed broad walls.
    pub fn reference() -> Self {
        Self { r_in: 0.05e-3, r_out: 2.5e-3, eps_r: 22.04, z_offsets: vec![-10e-3, 10e-3], face: ApertureFace::Opposed }
    }

    pub fn validate(&self, geom: &CavityGeometry) -> Result<(), ParamsError> {
        if !(self.r_in > 0.0 && self.r_out > self.r_in && self.r_out.is_finite()) {
            return Err(invalid("r_in/r_out", "need 0 < r_in < r_out"));
        }
        if !(self.eps_r >= 1.0 && self.eps_r.is_finite()) {
            return Err(invalid("eps_r", "need eps_r >= 1"));
        }
        if self.z_offsets.is_empty() {
            return Err(invalid("z_offsets", "at least one aperture required"));
        }
        for (i, z) in self.z_offsets.iter().enumerate() {
            if !(z.is_finite() && self.r_out <= geom.a / 2.0 && z.abs() + self.r_out <= geom.d / 2.0) {
                return Err(ParamsError::ApertureOutsideFace { port: i + 1 });
            }
        }
        Ok(())
    }

    /// Normalisation of the TEM field `E = C·ρ̂/ρ` for a delta-normalised standing wave.
    fn tem_amplitude(&self) -> f64 {
        (2.0 / (PI * K.c0 * self.eps_r.sqrt())).sqrt() / (2.0 * PI * (self.r_out / self.r_in).ln()).sqrt()
    }
}

/// Port couplings and the decay rates they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct PortCoupling {
    /// Cavity-port coupling g_p per aperture, in units where κ_p = 2π·g_p².
    pub g_p: Vec<f64>,
    /// Decay rate per port, rad/s.
    pub kappa: Vec<f64>,
    /// Relative change of the last refinement step.
    pub rel_change: f64,
}

struct Frame {
    origin: [f64; 3],
    e1: [f64; 3],
    e2: [f64; 3],
    n: [f64; 3],
}

fn frame(geom: &CavityGeometry, face: ApertureFace, index: usize, z: f64) -> Frame {
    let top = match face {
        ApertureFace::Bottom => false,
        ApertureFace::Top => true,
        ApertureFace::Opposed => index % 2 == 1,
    };
    // The top frame is the point reflection of the bottom one, so mirrored
    // apertures sample exactly negated positions.
    if top {
        Frame { origin: [0.0, geom.b / 2.0, z], e1: [-1.0, 0.0, 0.0], e2: [0.0, 0.0, -1.0], n: [0.0, -1.0, 0.0] }
    } else {
        Frame { origin: [0.0, -geom.b / 2.0, z], e1: [1.0, 0.0, 0.0], e2: [0.0, 0.0, 1.0], n: [0.0, 1.0, 0.0] }
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Midpoint rule on the annulus with `nr × nphi` cells. Returns ∬ H·(ρ̂ × n̂) ρ⁻¹ dS.
fn annulus_sum(mode: &CavityMode, coax: &CoaxSpec, f: &Frame, nr: usize, nphi: usize) -> f64 {
    let dr = (coax.r_out - coax.r_in) / nr as f64;
    let dphi = 2.0 * PI / nphi as f64;
    let mut total = 0.0;
    for j in 0..nphi {
        let phi = (j as f64 + 0.5) * dphi;
        let (s, c) = phi.sin_cos();
        let rho_hat = [c * f.e1[0] + s * f.e2[0], c * f.e1[1] + s * f.e2[1], c * f.e1[2] + s * f.e2[2]];
        let t = cross(rho_hat, f.n);
        let mut ring = 0.0;
        for i in 0..nr {
            let rho = coax.r_in + (i as f64 + 0.5) * dr;
            let p = [
                f.origin[0] + rho * c * f.e1[0] + rho * s * f.e2[0],
                f.origin[1] + rho * c * f.e1[1] + rho * s * f.e2[1],
                f.origin[2] + rho * c * f.e1[2] + rho * s * f.e2[2],
            ];
            let h = mode.h_field(p);
            // E_p ∝ 1/ρ cancels the area element's ρ.
            ring += h[0] * t[0] + h[1] * t[1] + h[2] * t[2];
        }
        total += ring;
    }
    total * dr * dphi
}

/// Port coupling by quadrature of the aperture overlap integral `(c0/2)∬ H_c·(E_p × n̂) dS`,
/// evaluated at the cavity frequency; κ_p = 2π·g_p².
pub fn coupling_kappa(geom: &CavityGeometry, coax: &CoaxSpec, mode: &CavityMode) -> Result<PortCoupling, ParamsError> {
    geom.validate()?;
    coax.validate(geom)?;
    let amp = coax.tem_amplitude() * K.c0 / 2.0;

    let mut g_p = Vec::with_capacity(coax.z_offsets.len());
    let mut worst = 0.0_f64;
    for (idx, &z) in coax.z_offsets.iter().enumerate() {
        let f = frame(geom, coax.face, idx, z);
        let (mut nr, mut nphi) = (8usize, 32usize);
        let mut prev = annulus_sum(mode, coax, &f, nr, nphi);
        let mut converged = None;
        for _ in 0..7 {
            nr *= 2;
            nphi *= 2;
            let next = annulus_sum(mode, coax, &f, nr, nphi);
            let change = ((next - prev) / next).abs();
            // Midpoint error is O(h²); one Richardson step removes the leading term.
            let extrapolated = (4.0 * next - prev) / 3.0;
            prev = next;
            if change < 1e-4 {
                converged = Some((extrapolated, change));
                break;
            }
        }
        match converged {
            Some((v, change)) => {
                worst = worst.max(change);
                g_p.push(amp * v);
            }
            None => {
                return Err(ParamsError::QuadratureNotConverged { rel_change: f64::NAN });
            }
        }
    }
    if worst > 1e-3 {
        return Err(ParamsError::QuadratureNotConverged { rel_change: worst });
    }
    let kappa = g_p.iter().map(|g| 2.0 * PI * g * g).collect();
    Ok(PortCoupling { g_p, kappa, rel_change: worst })
}
