//! Independent numerical checks of the closed forms: a time-stepped single-excitation
//! scattering solver and a weak-drive master-equation solver for g²(τ).

mod lindblad;
mod td;
mod verify;

pub use lindblad::{lindblad_g2, lindblad_steady_state, LindbladConfig, LindbladG2, SteadyState, WEAK_DRIVE_PHOTONS};
pub use td::{td_single, PulseSpec, TdSpectrum};
pub use verify::{
    run_verification, OracleReport, Outcome, DRIVE_HALVING_TOL, H_TOL, LINDBLAD_DETUNINGS, LINDBLAD_TOL, POLE_TOL,
    TD_ENERGY_TOL, TD_TOL, UNITARITY_TOL,
};

use thiserror::Error;

use crate::transport::TransportError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("time integration unstable: {0}")]
    StepUnstable(String),
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("invalid Lindblad configuration: {0}")]
    InvalidConfig(String),
    #[error("Fock cutoff not converged: g2(0) changed by {0:.3e}")]
    CutoffNotConverged(f64),
    #[error("weak-drive condition violated: <a†a> = {0:.3e}")]
    WeakDriveViolated(f64),
    #[error("steady-state solve failed: {0}")]
    SteadyState(String),
    #[error(transparent)]
    Transport(#[from] TransportError),
}
