//! Closed-form single- and two-photon transport through the port-coupled cavity-qubit system.
//!
//! Frequencies are absolute angular frequencies; internally every expression is evaluated
//! through offsets from ω_c so that ~10¹⁰ rad/s carriers do not swamp kHz-scale features.

mod bound;
mod correlation;
mod poles;
mod single;
mod sweep;
mod two_photon;

pub use bound::{h_closed, h_quadrature, h_quadrature_terms, HValue};
pub use correlation::{correlation, CorrelationQuery, CorrelationResult, DIVERGENCE_FLOOR, RESOLUTION_FACTOR};
pub use poles::{poles, PoleSet};
pub use single::{denominator, single_response, SinglePhotonResponse};
pub use sweep::{sweep_g2, sweep_single};
pub use two_photon::{alpha, gamma, two_photon_element, TwoPhotonElement};

use num_complex::Complex;
use thiserror::Error;

use crate::params::ParamsError;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("evaluation point coincides with a real pole (lossless cavity)")]
    PoleHit,
    #[error("two-photon closed forms require kappa1 = kappa2")]
    AsymmetricPorts,
    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// Output (or input) port of the cavity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    One,
    Two,
}

impl Port {
    pub fn index(self) -> usize {
        match self {
            Port::One => 0,
            Port::Two => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }
}

/// The three distinguishable detector configurations plotted in g² sweeps.
pub const PORT_PAIRS: [(Port, Port); 3] = [(Port::One, Port::One), (Port::Two, Port::Two), (Port::Two, Port::One)];

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

pub(crate) fn finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
