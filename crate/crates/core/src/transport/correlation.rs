use num_complex::Complex;

use super::bound::h_closed;
use super::single::single_response;
use super::{re, Port, TransportError};
use crate::params::SystemParams;
use crate::scalar::Real;

/// Backgrounds below this are reported as divergent rather than divided by.
pub const DIVERGENCE_FLOOR: f64 = 1e-30;

/// Multiple of the input-frequency rounding below which the uncorrelated coefficient counts as zero.
pub const RESOLUTION_FACTOR: f64 = 64.0;

/// Two photons at `u1`, `u2` incident on port 1, detected on `ports` at delays `tau_grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationQuery<T> {
    pub u1: T,
    pub u2: T,
    pub tau_grid: Vec<T>,
    pub ports: (Port, Port),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult<T> {
    pub tau: Vec<T>,
    /// Normalised g²(τ); NaN throughout when `diverged`.
    pub g2: Vec<T>,
    /// Unnormalised G²(τ).
    pub big_g2: Vec<T>,
    /// Uncorrelated envelope G²(τ→∞).
    pub background: T,
    pub diverged: bool,
    /// The one-photon poles were degenerate and H̃ used its series limit.
    pub degenerate_poles: bool,
}

/// G² = 2|c·P̃(τ) + H̃(τ)|² with c the uncorrelated coefficient of the port pair and
/// P̃(τ) = (e^{−iΔτ} + e^{iΔτ})/(2√2π), Δ = (u1 − u2)/2.
pub fn correlation<T: Real>(
    p: &SystemParams<T>,
    q: &CorrelationQuery<T>,
) -> Result<CorrelationResult<T>, TransportError> {
    if !p.symmetric() {
        return Err(TransportError::AsymmetricPorts);
    }
    if !(q.u1.is_finite() && q.u2.is_finite()) {
        return Err(TransportError::InvalidQuery("incident frequencies must be finite".into()));
    }
    if q.tau_grid.iter().any(|t| !t.is_finite()) {
        return Err(TransportError::InvalidQuery("tau grid must be finite".into()));
    }
    if q.tau_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(TransportError::InvalidQuery("tau grid must be sorted".into()));
    }
    let a = single_response(p, q.u1)?;
    let b = single_response(p, q.u2)?;
    let two = T::lit(2.0);
    let c = match q.ports {
        (Port::One, Port::One) => a.r1 * b.r1,
        (Port::Two, Port::Two) => a.t21 * b.t21,
        _ => (a.r1 * b.t21 + a.t21 * b.r1) / two,
    };
    let envelope = T::one() / (T::SQRT_2() * T::PI());
    let background = two * c.norm_sqr() * envelope * envelope;
    // u carries an absolute rounding of ε|u|, which moves c by about ε|u|/K. A coefficient
    // below that is an exact zero of the closed form seen through rounding.
    let resolution = if p.kappa_total() > T::zero() {
        T::lit(RESOLUTION_FACTOR) * T::epsilon() * q.u1.abs().max(q.u2.abs()) / p.kappa_total()
    } else {
        T::zero()
    };
    let diverged = !(background >= T::lit(DIVERGENCE_FLOOR)) || c.norm() <= resolution;
    let half_detuning = ((q.u1 - p.omega_c) - (q.u2 - p.omega_c)) / two;

    let mut big_g2 = Vec::with_capacity(q.tau_grid.len());
    let mut degenerate_poles = false;
    for &tau in &q.tau_grid {
        let h = h_closed(p, q.u1, q.u2, tau)?;
        degenerate_poles |= h.degenerate;
        let pt = envelope * (half_detuning * tau).cos();
        let amp: Complex<T> = c * re(pt) + h.value;
        big_g2.push(two * amp.norm_sqr());
    }
    let g2 = if diverged { vec![T::nan(); big_g2.len()] } else { big_g2.iter().map(|&x| x / background).collect() };
    Ok(CorrelationResult { tau: q.tau_grid.clone(), g2, big_g2, background, diverged, degenerate_poles })
}
