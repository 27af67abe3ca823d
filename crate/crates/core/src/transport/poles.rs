use num_complex::Complex;

use super::cx;
use crate::params::SystemParams;
use crate::scalar::Real;

/// One-photon poles λ1,± and two-photon poles λ2,± (total-energy scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSet<T> {
    pub lambda1_plus: Complex<T>,
    pub lambda1_minus: Complex<T>,
    pub lambda2_plus: Complex<T>,
    pub lambda2_minus: Complex<T>,
}

/// Poles measured from ω_c (one-photon) and 2ω_c (two-photon).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PoleOffsets<T> {
    pub l1p: Complex<T>,
    pub l1m: Complex<T>,
    pub l2p: Complex<T>,
    pub l2m: Complex<T>,
}

pub(crate) fn pole_offsets<T: Real>(p: &SystemParams<T>) -> PoleOffsets<T> {
    let two = T::lit(2.0);
    let dq = p.omega_q - p.omega_c;
    let k = p.kappa_total();
    let g2 = p.g * p.g;

    // λ1,± = (ω_q + ω_c − iK/2)/2 ± √(((ω_c − ω_q − iK/2)/2)² + g²)
    let c1 = cx(dq, -k / two) / two;
    let h1 = cx(-dq, -k / two) / two;
    let s1 = (h1 * h1 + g2).sqrt();

    // λ2,± = (ω_q + 3ω_c − 3iK/2)/2 ± √(((ω_q − ω_c + iK/2)/2)² + 2g²)
    let c2 = cx(dq, -T::lit(3.0) * k / two) / two;
    let h2 = cx(dq, k / two) / two;
    let s2 = (h2 * h2 + two * g2).sqrt();

    PoleOffsets { l1p: c1 + s1, l1m: c1 - s1, l2p: c2 + s2, l2m: c2 - s2 }
}

/// Principal-branch square roots; the ± labels follow the sign in front of the radical.
pub fn poles<T: Real>(p: &SystemParams<T>) -> PoleSet<T> {
    let o = pole_offsets(p);
    let wc = p.omega_c;
    let shift = |z: Complex<T>, w: T| cx(w + z.re, z.im);
    PoleSet {
        lambda1_plus: shift(o.l1p, wc),
        lambda1_minus: shift(o.l1m, wc),
        lambda2_plus: shift(o.l2p, wc + wc),
        lambda2_minus: shift(o.l2m, wc + wc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn uncoupled_poles_are_bare_resonances() {
        let p = SystemParams::<f64>::new(10.0, 7.0, 0.0, 0.5, 0.3).unwrap();
        let s = poles(&p);
        let set = [s.lambda1_plus, s.lambda1_minus];
        let has = |z: Complex<f64>| set.iter().any(|w| (w - z).norm() < 1e-12);
        assert!(has(Complex::new(10.0, -0.4)));
        assert!(has(Complex::new(7.0, 0.0)));
    }

    #[test]
    fn resonant_symmetric_closed_form() {
        let p = SystemParams::<f64>::good_cavity();
        let s = poles(&p);
        let k = p.kappa1;
        let r1 = Complex::new(p.g * p.g - k * k / 4.0, 0.0).sqrt();
        let r2 = Complex::new(2.0 * p.g * p.g - k * k / 4.0, 0.0).sqrt();
        let l1 = Complex::new(p.omega_c, -k / 2.0);
        let l2 = Complex::new(2.0 * p.omega_c, -1.5 * k);
        let scale = p.omega_c * 1e-15;
        assert!((s.lambda1_plus - (l1 + r1)).norm() < 4.0 * scale);
        assert!((s.lambda1_minus - (l1 - r1)).norm() < 4.0 * scale);
        assert!((s.lambda2_plus - (l2 + r2)).norm() < 8.0 * scale);
        assert!((s.lambda2_minus - (l2 - r2)).norm() < 8.0 * scale);
    }

    #[test]
    fn poles_are_roots() {
        let p = SystemParams::<f64>::new(2.0 * PI * 7.55e9, 2.0 * PI * 7.56e9, 2.0 * PI * 3e6, 2e6, 5e6).unwrap();
        let o = pole_offsets(&p);
        for l in [o.l1p, o.l1m] {
            // D is polynomial in the detuning; evaluate with the complex offset directly.
            let y = l - (p.omega_q - p.omega_c);
            let d = (l + Complex::new(0.0, p.kappa_total() / 2.0)) * y - p.g * p.g;
            assert!(d.norm() < 1e-9 * l.norm_sqr().max(p.g * p.g));
        }
    }
}
