use num_complex::Complex;

use super::poles::pole_offsets;
use super::single::denominator_offset;
use super::two_photon::gamma;
use super::{cx, finite, i_unit, re, TransportError};
use crate::params::SystemParams;
use crate::quadrature::integrate;
use crate::scalar::Real;

/// Correlated real-space term H̃ at a delay, with a flag when the one-photon poles are
/// (nearly) degenerate and the difference quotient was replaced by its series limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HValue<T> {
    pub value: Complex<T>,
    pub degenerate: bool,
}

fn total_energy<T: Real>(p: &SystemParams<T>, u1: T, u2: T) -> (T, T) {
    let e = (u1 - p.omega_c) + (u2 - p.omega_c);
    (e, p.omega_c + p.omega_c + e)
}

/// Common prefactor (ig/π)·Γ·g²κ.
fn prefactor<T: Real>(p: &SystemParams<T>, u1: T, u2: T) -> Result<Complex<T>, TransportError> {
    if !p.symmetric() {
        return Err(TransportError::AsymmetricPorts);
    }
    let (_, xi) = total_energy(p, u1, u2);
    let gam = gamma(p, u1, u2, xi)?;
    Ok(i_unit::<T>() * (p.g / T::PI()) * gam * (p.g * p.g * p.kappa()))
}

/// Residue evaluation of the correlated term for photons at `u1`, `u2` and delay `tau`
/// (the delay enters only through |τ|).
pub fn h_closed<T: Real>(p: &SystemParams<T>, u1: T, u2: T, tau: T) -> Result<HValue<T>, TransportError> {
    let pref = prefactor(p, u1, u2)? * i_unit::<T>() / T::SQRT_2();
    let tau = tau.abs();
    let (e, _) = total_energy(p, u1, u2);
    let o = pole_offsets(p);
    let two = T::lit(2.0);
    let half_tau = tau / two;
    let split = o.l1p - o.l1m;
    let degenerate = split.norm() < T::lit(1e-6) * p.kappa();

    let f = |l: Complex<T>| {
        let w = re(e) - l * two;
        (i_unit::<T>() * w * half_tau).exp() / w
    };
    let quotient = if degenerate {
        // (f(λ−) − f(λ+))/(λ+ − λ−) → −f'(λ̄), accurate to second order in the splitting.
        let w = re(e) - (o.l1p + o.l1m);
        let phase = (i_unit::<T>() * w * half_tau).exp();
        -(phase * (re(two) / (w * w) - i_unit::<T>() * tau / w))
    } else {
        (f(o.l1m) - f(o.l1p)) / split
    };
    let value = pref * quotient / (re(e) - o.l1p - o.l1m);
    if !finite(value) {
        return Err(TransportError::PoleHit);
    }
    Ok(HValue { value, degenerate })
}

struct Setup<T> {
    pref: Complex<T>,
    half_e: T,
    breaks: Vec<T>,
    scale: T,
}

fn setup<T: Real>(p: &SystemParams<T>, u1: T, u2: T) -> Result<Setup<T>, TransportError> {
    let pref = prefactor(p, u1, u2)? / (T::SQRT_2() * T::lit(4.0) * T::PI());
    let (e, _) = total_energy(p, u1, u2);
    let half_e = e / T::lit(2.0);
    let o = pole_offsets(p);
    let mut breaks = vec![T::zero()];
    let mut scale = p.kappa_total() + p.g.abs() + (p.omega_q - p.omega_c).abs();
    for l in [o.l1p, o.l1m] {
        let d = l.re - half_e;
        breaks.push(d);
        breaks.push(-d);
        scale = scale.max(d.abs());
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    Ok(Setup { pref, half_e, breaks, scale })
}

/// ∫ w(Δ)/[D(E/2+Δ)·D(E/2−Δ)] dΔ over the real line, truncated at ±L with L doubled until the
/// added tails no longer change the result.
fn real_line<T: Real, W: Fn(T) -> Complex<T>>(
    p: &SystemParams<T>,
    s: &Setup<T>,
    weight: W,
) -> Result<Complex<T>, TransportError> {
    let f = |d: T| weight(d) / (denominator_offset(p, s.half_e + d) * denominator_offset(p, s.half_e - d));
    let fail = |e: crate::quadrature::QuadError| TransportError::QuadratureNotConverged(e.to_string());
    let budget = 400_000;
    let rel = T::lit(1e-13);

    let mut l = T::lit(16.0) * s.scale;
    let mut pts = vec![-l];
    pts.extend(s.breaks.iter().copied().filter(|b| b.abs() < l));
    pts.push(l);
    // Cancellation limits the attainable error to a few ε·∫|f|; |w| ≤ 2 for both weights.
    let den = |d: T| {
        let m = (denominator_offset(p, s.half_e + d) * denominator_offset(p, s.half_e - d)).norm();
        Complex::new(T::lit(2.0) / m, T::zero())
    };
    let mass = integrate(den, &pts, T::zero(), T::lit(1e-6), budget).map_err(fail)?.value.re;
    let floor = T::lit(16.0) * T::epsilon() * mass;
    let mut total = integrate(&f, &pts, floor, rel, budget).map_err(fail)?.value;

    for _ in 0..40 {
        let tol = (rel * total.norm()).max(floor);
        let right = integrate(&f, &[l, l + l], tol, T::zero(), budget).map_err(fail)?.value;
        let left = integrate(&f, &[-(l + l), -l], tol, T::zero(), budget).map_err(fail)?.value;
        let add = right + left;
        total = total + add;
        l = l + l;
        if add.norm() <= (T::lit(1e-14) * total.norm()).max(floor) {
            return Ok(total);
        }
    }
    Err(TransportError::QuadratureNotConverged(format!("tail still contributes above the tolerance at L = {}", l)))
}

/// Correlated term from direct quadrature of the pre-contour integral, independent of the
/// pole expressions used by [`h_closed`].
pub fn h_quadrature<T: Real>(p: &SystemParams<T>, u1: T, u2: T, tau: T) -> Result<Complex<T>, TransportError> {
    let s = setup(p, u1, u2)?;
    let tau = tau.abs();
    let integral = real_line(p, &s, |d| {
        let ph = i_unit::<T>() * d * tau;
        ph.exp() + (-ph).exp()
    })?;
    Ok(s.pref * integral)
}

/// The two exponential contributions e^{+iΔτ} and e^{−iΔτ} of [`h_quadrature`], integrated
/// separately.
pub fn h_quadrature_terms<T: Real>(
    p: &SystemParams<T>,
    u1: T,
    u2: T,
    tau: T,
) -> Result<(Complex<T>, Complex<T>), TransportError> {
    let s = setup(p, u1, u2)?;
    let tau = tau.abs();
    let plus = real_line(p, &s, |d| cx(T::zero(), d * tau).exp())?;
    let minus = real_line(p, &s, |d| cx(T::zero(), -d * tau).exp())?;
    Ok((s.pref * plus, s.pref * minus))
}
