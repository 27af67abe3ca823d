use num_complex::Complex;

use super::{cx, re, TransportError};
use crate::params::SystemParams;
use crate::scalar::Real;

/// Single-photon scattering coefficients at probe frequency `v`, photon incident on port 1
/// for `r1`/`t21`, per input port for the intracavity responses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinglePhotonResponse<T> {
    pub v: T,
    /// Qubit response S_{q,p}(v), index 0 ↔ port 1.
    pub s_q: [Complex<T>; 2],
    /// Cavity response S_{c,p}(v).
    pub s_c: [Complex<T>; 2],
    pub r1: Complex<T>,
    pub t21: Complex<T>,
}

/// D(v) = [(v − ω_c) + i(κ1+κ2)/2](v − ω_q) − g².
pub fn denominator<T: Real>(p: &SystemParams<T>, v: T) -> Complex<T> {
    denominator_offset(p, v - p.omega_c)
}

/// D as a function of the cavity detuning x = v − ω_c.
pub(crate) fn denominator_offset<T: Real>(p: &SystemParams<T>, x: T) -> Complex<T> {
    let y = x - (p.omega_q - p.omega_c);
    cx(x * y - p.g * p.g, p.kappa_total() / T::lit(2.0) * y)
}

pub fn single_response<T: Real>(p: &SystemParams<T>, v: T) -> Result<SinglePhotonResponse<T>, TransportError> {
    let x = v - p.omega_c;
    let y = v - p.omega_q;
    let two = T::lit(2.0);
    let sk = [p.kappa1.sqrt(), p.kappa2.sqrt()];
    if p.g == T::zero() {
        // The qubit decouples; cancelling the common (v − ω_q) keeps v = ω_q regular.
        let dc = cx(x, p.kappa_total() / two);
        if !(dc.norm() >= T::lit(1e-300)) {
            return Err(TransportError::PoleHit);
        }
        let zero = Complex::new(T::zero(), T::zero());
        return Ok(SinglePhotonResponse {
            v,
            s_q: [zero, zero],
            s_c: [re(sk[0]) / dc, re(sk[1]) / dc],
            r1: cx(x, (p.kappa2 - p.kappa1) / two) / dc,
            t21: cx(T::zero(), -(p.kappa1 * p.kappa2).sqrt()) / dc,
        });
    }
    let d = cx(x * y - p.g * p.g, p.kappa_total() / two * y);
    if !(d.norm() >= T::lit(1e-300)) {
        return Err(TransportError::PoleHit);
    }
    let s_q = [re(p.g * sk[0]) / d, re(p.g * sk[1]) / d];
    let s_c = [re(sk[0] * y) / d, re(sk[1] * y) / d];
    let r1 = cx(x * y - p.g * p.g, (p.kappa2 - p.kappa1) / two * y) / d;
    let t21 = cx(T::zero(), -(p.kappa1 * p.kappa2).sqrt() * y) / d;
    Ok(SinglePhotonResponse { v, s_q, s_c, r1, t21 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn transparency_point_is_exact() {
        for g in [1e3, 2.0 * PI * 15.9e6, 2.0 * PI * 269.3e3] {
            let p = SystemParams::<f64>::new(2.0 * PI * 7.5e9, 2.0 * PI * 7.55e9, g, 3e6, 1e6).unwrap();
            let s = single_response(&p, p.omega_q).unwrap();
            assert_eq!(s.r1, Complex::new(1.0, 0.0));
            assert_eq!(s.t21, Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn empty_cavity_on_resonance_transmits() {
        let p =
            SystemParams::<f64>::symmetric_ports(2.0 * PI * 7.55e9, 2.0 * PI * 7.0e9, 0.0, 2.0 * PI * 421.5e3).unwrap();
        let s = single_response(&p, p.omega_c).unwrap();
        assert!((s.t21 - Complex::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(s.r1.norm() < 1e-15);
    }

    #[test]
    fn lossless_cavity_pole_hit() {
        let p = SystemParams::<f64>::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(single_response(&p, 1.0), Err(TransportError::PoleHit));
    }

    #[test]
    fn single_precision_is_usable() {
        let p = SystemParams::<f32>::from_cyclic(7.55e9, 7.55e9, 15.9e6, 421.5e3, 421.5e3);
        let s = single_response(&p, p.omega_c + p.g).unwrap();
        assert!((s.r1.norm_sqr() + s.t21.norm_sqr() - 1.0).abs() < 1e-3);
    }
}
