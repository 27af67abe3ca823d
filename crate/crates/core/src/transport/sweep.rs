use rayon::prelude::*;

use super::correlation::{correlation, CorrelationQuery, CorrelationResult};
use super::single::{single_response, SinglePhotonResponse};
use super::{Port, TransportError};
use crate::params::SystemParams;
use crate::scalar::Real;

/// First error in grid order, so failures are reported identically for any thread count.
fn first_error<R>(results: Vec<Result<R, TransportError>>) -> Result<Vec<R>, TransportError> {
    results.into_iter().collect()
}

/// Elementwise [`single_response`] over a frequency grid, evaluated on the current rayon pool.
pub fn sweep_single<T: Real>(p: &SystemParams<T>, grid: &[T]) -> Result<Vec<SinglePhotonResponse<T>>, TransportError> {
    first_error(grid.par_iter().map(|&v| single_response(p, v)).collect())
}

/// g² at a single delay for degenerate photon pairs u1 = u2 = u over `u_grid`.
pub fn sweep_g2<T: Real>(
    p: &SystemParams<T>,
    u_grid: &[T],
    ports: (Port, Port),
    tau: T,
) -> Result<Vec<CorrelationResult<T>>, TransportError> {
    first_error(
        u_grid
            .par_iter()
            .map(|&u| correlation(p, &CorrelationQuery { u1: u, u2: u, tau_grid: vec![tau], ports }))
            .collect(),
    )
}
