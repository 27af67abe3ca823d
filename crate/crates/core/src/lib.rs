//! Photon transport through a two-port cavity coupled to a transmon qubit.
//!
//! * [`params`]: device geometry → [`SystemParams`].
//! * [`transport`]: closed-form single- and two-photon scattering and g²(τ).
//! * [`oracle`]: independent time-domain and master-equation checks.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod scalar;
pub mod transport;

pub use scalar::Real;

pub type SystemParams = params::SystemParams<f64>;
pub type SinglePhotonResponse = transport::SinglePhotonResponse<f64>;
pub type PoleSet = transport::PoleSet<f64>;
pub type TwoPhotonElement = transport::TwoPhotonElement<f64>;
pub type CorrelationQuery = transport::CorrelationQuery<f64>;
pub type CorrelationResult = transport::CorrelationResult<f64>;
pub type HValue = transport::HValue<f64>;
