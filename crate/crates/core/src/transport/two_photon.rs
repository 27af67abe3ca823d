use num_complex::Complex;

use super::poles::pole_offsets;
use super::single::single_response;
use super::{cx, i_unit, re, Port, TransportError};
use crate::params::SystemParams;
use crate::scalar::Real;

/// Correlated two-photon amplitude Γ for both photons entering port 1, at total energy `xi`.
pub fn gamma<T: Real>(p: &SystemParams<T>, u1: T, u2: T, xi: T) -> Result<Complex<T>, TransportError> {
    let a = single_response(p, u1)?;
    let b = single_response(p, u2)?;
    let sk1 = p.kappa1.sqrt();
    let xo = xi - (p.omega_c + p.omega_c);
    let o = pole_offsets(p);
    let (dp, dm) = (re(xo) - o.l2p, re(xo) - o.l2m);
    let tiny = T::epsilon() * T::lit(8.0) * xi.abs().max(T::one());
    if dp.norm() <= tiny || dm.norm() <= tiny {
        return Err(TransportError::PoleHit);
    }
    let bracket = cx(xo, p.kappa_total());
    let sq = (a.s_q[0] + b.s_q[0]) * sk1;
    let sc = (a.s_c[0] + b.s_c[0]) * sk1;
    Ok((bracket * sq + sc * (T::lit(2.0) * p.g)) / (dp * dm))
}

/// α(v) = (v − ω_q)/[(v − ω_c + iκ)(v − ω_q) − g²] for symmetric ports with per-port rate κ.
/// With it, 1 − iακ = r1(v) and −iακ = t21(v).
pub fn alpha<T: Real>(p: &SystemParams<T>, v: T) -> Complex<T> {
    let x = v - p.omega_c;
    let y = v - p.omega_q;
    re(y) / (cx(x, p.kappa()) * y - p.g * p.g)
}

/// Two-photon S-matrix element for input |u1 u2⟩ on port 1 and outputs (b1, b2).
///
/// The uncorrelated part multiplies δ(u1−v1)δ(u2−v2) (`direct`) and δ(u2−v1)δ(u1−v2)
/// (`exchange`); they coincide when b1 = b2. The correlated part multiplies
/// δ(v1+v2−u1−u2) and is evaluated by [`TwoPhotonElement::correlated`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonElement<T> {
    pub params: SystemParams<T>,
    pub u1: T,
    pub u2: T,
    pub ports: (Port, Port),
    pub direct: Complex<T>,
    pub exchange: Complex<T>,
    pub gamma: Complex<T>,
}

impl<T: Real> TwoPhotonElement<T> {
    /// (ig/π)·S_{q,b1}(v1)·S_{q,b2}(u1+u2−v1)·Γ.
    pub fn correlated(&self, v1: T) -> Result<Complex<T>, TransportError> {
        let p = &self.params;
        // u1 + u2 − v1 formed from offsets to keep the small differences exact.
        let v2 = p.omega_c + ((self.u1 - p.omega_c) + (self.u2 - p.omega_c) - (v1 - p.omega_c));
        let a = single_response(p, v1)?;
        let b = single_response(p, v2)?;
        let pref = i_unit::<T>() * (p.g / T::PI());
        Ok(pref * a.s_q[self.ports.0.index()] * b.s_q[self.ports.1.index()] * self.gamma)
    }
}

pub fn two_photon_element<T: Real>(
    p: &SystemParams<T>,
    u1: T,
    u2: T,
    ports: (Port, Port),
) -> Result<TwoPhotonElement<T>, TransportError> {
    if !p.symmetric() {
        return Err(TransportError::AsymmetricPorts);
    }
    let a = single_response(p, u1)?;
    let b = single_response(p, u2)?;
    debug_assert!(identities_hold(p, &[u1, u2]));
    let pick = |s: &super::SinglePhotonResponse<T>, port: Port| match port {
        Port::One => s.r1,
        Port::Two => s.t21,
    };
    let direct = pick(&a, ports.0) * pick(&b, ports.1);
    let exchange = pick(&b, ports.0) * pick(&a, ports.1);
    let xi = p.omega_c + p.omega_c + ((u1 - p.omega_c) + (u2 - p.omega_c));
    let gamma = gamma(p, u1, u2, xi)?;
    Ok(TwoPhotonElement { params: *p, u1, u2, ports, direct, exchange, gamma })
}

fn identities_hold<T: Real>(p: &SystemParams<T>, vs: &[T]) -> bool {
    vs.iter().all(|&v| match single_response(p, v) {
        Ok(s) => {
            let ak = alpha(p, v) * i_unit::<T>() * p.kappa();
            let tol = T::epsilon().sqrt();
            (re(T::one()) - ak - s.r1).norm() <= tol && (-ak - s.t21).norm() <= tol
        }
        Err(_) => true,
    })
}
