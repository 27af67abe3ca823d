use std::f64::consts::PI;

use num_complex::Complex64 as C;
use proptest::prelude::*;
use ptk_core::transport::{
    alpha, correlation, gamma, h_closed, poles, single_response, two_photon_element, CorrelationQuery, Port, PORT_PAIRS,
};
use ptk_core::SystemParams;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

prop_compose! {
    /// Symmetric-port systems from deep bad cavity to strong coupling, cyclic rates in Hz.
    fn symmetric_params()(
        fc in 4.0e9..12.0e9,
        dq in -5.0e7..5.0e7,
        g in log_uniform(1e3, 1e8),
        sign in prop::bool::ANY,
        k in log_uniform(1e3, 1e8),
    ) -> SystemParams {
        let g = if sign { -g } else { g };
        SystemParams::from_cyclic(fc, fc + dq, g, k, k)
    }
}

prop_compose! {
    fn asymmetric_params()(p in symmetric_params(), r in 0.0..3.0f64) -> SystemParams {
        SystemParams { kappa2: p.kappa1 * r, ..p }
    }
}

/// A probe frequency within a few linewidths and splittings of the resonances.
fn near(p: &SystemParams, x: f64) -> f64 {
    let scale = p.g.abs().max(p.kappa_total()).max((p.omega_q - p.omega_c).abs());
    p.omega_c + x * 4.0 * scale
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn unitarity(p in symmetric_params(), x in -1.0..1.0f64) {
        let s = single_response(&p, near(&p, x)).unwrap();
        prop_assert!((s.r1.norm_sqr() + s.t21.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn transparency_pin(p in asymmetric_params()) {
        let s = single_response(&p, p.omega_q).unwrap();
        prop_assert_eq!(s.r1, C::new(1.0, 0.0));
        prop_assert_eq!(s.t21.norm(), 0.0);
    }

    #[test]
    fn vieta_sums(p in asymmetric_params()) {
        let l = poles(&p);
        let k = p.kappa_total();
        let s1 = C::new(p.omega_q + p.omega_c, -k / 2.0);
        let s2 = C::new(p.omega_q + 3.0 * p.omega_c, -1.5 * k);
        prop_assert!(rel(l.lambda1_plus + l.lambda1_minus, s1) <= 1e-12);
        prop_assert!(rel(l.lambda2_plus + l.lambda2_minus, s2) <= 1e-12);
    }

    #[test]
    fn poles_decay(p in asymmetric_params()) {
        let l = poles(&p);
        for z in [l.lambda1_plus, l.lambda1_minus, l.lambda2_plus, l.lambda2_minus] {
            prop_assert!(z.im < 0.0);
        }
    }

    #[test]
    fn poles_are_roots(p in asymmetric_params()) {
        let l = poles(&p);
        let k = p.kappa_total();
        let dq = p.omega_q - p.omega_c;
        for z in [l.lambda1_plus, l.lambda1_minus] {
            let x = z - p.omega_c;
            let d = (x + C::new(0.0, k / 2.0)) * (x - dq) - p.g * p.g;
            prop_assert!(d.norm() <= 1e-9 * z.norm_sqr());
        }
        for z in [l.lambda2_plus, l.lambda2_minus] {
            let x = z - 2.0 * p.omega_c;
            let q = (x + C::new(0.0, k)) * (x - dq + C::new(0.0, k / 2.0)) - 2.0 * p.g * p.g;
            prop_assert!(q.norm() <= 1e-9 * z.norm_sqr());
        }
    }

    #[test]
    fn coupling_sign_is_a_phase_convention(p in symmetric_params(), x1 in -1.0..1.0f64, x2 in -1.0..1.0f64, t in 0.0..5.0f64) {
        let m = p.with_g(-p.g);
        let (u1, u2) = (near(&p, x1), near(&p, x2));
        let tau = t / p.kappa_total();
        let (a, b) = (single_response(&p, u1).unwrap(), single_response(&m, u1).unwrap());
        prop_assert!((a.r1.norm() - b.r1.norm()).abs() <= 1e-12);
        prop_assert!((a.t21.norm() - b.t21.norm()).abs() <= 1e-12);
        let xi = u1 + u2;
        let (ga, gb) = (gamma(&p, u1, u2, xi).unwrap(), gamma(&m, u1, u2, xi).unwrap());
        prop_assert!((ga.norm() - gb.norm()).abs() <= 1e-12 * ga.norm());
        let (ha, hb) = (h_closed(&p, u1, u2, tau).unwrap().value, h_closed(&m, u1, u2, tau).unwrap().value);
        prop_assert!((ha.norm() - hb.norm()).abs() <= 1e-12 * ha.norm().max(1e-300));
        for ports in PORT_PAIRS {
            let q = CorrelationQuery { u1, u2, tau_grid: vec![0.0, tau], ports };
            let (ca, cb) = (correlation(&p, &q).unwrap(), correlation(&m, &q).unwrap());
            prop_assert_eq!(ca.diverged, cb.diverged);
            for (x, y) in ca.big_g2.iter().zip(&cb.big_g2) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
            }
            if !ca.diverged {
                for (x, y) in ca.g2.iter().zip(&cb.g2) {
                    prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn gamma_is_symmetric(p in symmetric_params(), x1 in -1.0..1.0f64, x2 in -1.0..1.0f64, xo in -1.0..1.0f64) {
        let (u1, u2) = (near(&p, x1), near(&p, x2));
        let xi = near(&p, xo) + p.omega_c;
        prop_assert_eq!(gamma(&p, u1, u2, xi).unwrap(), gamma(&p, u2, u1, xi).unwrap());
    }

    #[test]
    fn exchange_symmetry(p in symmetric_params(), x1 in -1.0..1.0f64, x2 in -1.0..1.0f64, xv in -1.0..1.0f64, t in 0.0..5.0f64) {
        let (u1, u2) = (near(&p, x1), near(&p, x2));
        let v1 = near(&p, xv);
        for ports in [(Port::One, Port::One), (Port::Two, Port::Two), (Port::Two, Port::One), (Port::One, Port::Two)] {
            let a = two_photon_element(&p, u1, u2, ports).unwrap();
            let b = two_photon_element(&p, u2, u1, ports).unwrap();
            prop_assert!(rel(a.direct + a.exchange, b.direct + b.exchange) <= 1e-14);
            prop_assert!(rel(a.direct, b.exchange) <= 1e-15);
            prop_assert!(rel(a.gamma, b.gamma) <= 1e-15);
            prop_assert!(rel(a.correlated(v1).unwrap(), b.correlated(v1).unwrap()) <= 1e-12);
        }
        let tau = t / p.kappa_total();
        for ports in PORT_PAIRS {
            let qa = CorrelationQuery { u1, u2, tau_grid: vec![0.0, tau], ports };
            let qb = CorrelationQuery { u1: u2, u2: u1, ..qa.clone() };
            let (ca, cb) = (correlation(&p, &qa).unwrap(), correlation(&p, &qb).unwrap());
            for (x, y) in ca.big_g2.iter().zip(&cb.big_g2) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn correlated_part_matches_its_factorisation(p in symmetric_params(), x1 in -1.0..1.0f64, x2 in -1.0..1.0f64, xv in -1.0..1.0f64) {
        let (u1, u2) = (near(&p, x1), near(&p, x2));
        let v1 = near(&p, xv);
        let v2 = p.omega_c + ((u1 - p.omega_c) + (u2 - p.omega_c) - (v1 - p.omega_c));
        let (a, b) = (single_response(&p, v1).unwrap(), single_response(&p, v2).unwrap());
        for ports in [(Port::One, Port::One), (Port::Two, Port::Two), (Port::Two, Port::One), (Port::One, Port::Two)] {
            let e = two_photon_element(&p, u1, u2, ports).unwrap();
            let want = C::new(0.0, p.g / PI) * a.s_q[ports.0.index()] * b.s_q[ports.1.index()] * e.gamma;
            prop_assert!(rel(e.correlated(v1).unwrap(), want) <= 1e-14);
        }
    }

    #[test]
    fn mixed_ports_relabel(p in symmetric_params(), x1 in -1.0..1.0f64, x2 in -1.0..1.0f64, xv in -1.0..1.0f64) {
        let (u1, u2) = (near(&p, x1), near(&p, x2));
        let v1 = near(&p, xv);
        let v2 = p.omega_c + ((u1 - p.omega_c) + (u2 - p.omega_c) - (v1 - p.omega_c));
        let a = two_photon_element(&p, u1, u2, (Port::Two, Port::One)).unwrap();
        let b = two_photon_element(&p, u1, u2, (Port::One, Port::Two)).unwrap();
        prop_assert!(rel(a.direct, b.exchange) <= 1e-15);
        // v2 is rebuilt from absolute frequencies, which carry a rounding of ε·ω_c.
        let tol = 1e-12_f64.max(64.0 * f64::EPSILON * p.omega_c / p.kappa_total());
        prop_assert!(rel(a.correlated(v1).unwrap(), b.correlated(v2).unwrap()) <= tol);
    }

    #[test]
    fn asymmetric_two_photon_requests_are_refused(p in asymmetric_params()) {
        prop_assume!(!p.symmetric());
        prop_assert!(two_photon_element(&p, p.omega_c, p.omega_c, (Port::One, Port::One)).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symmetric_port_identities(p in symmetric_params(), x in -1.0..1.0f64) {
        let v = near(&p, x);
        let s = single_response(&p, v).unwrap();
        let ak = alpha(&p, v) * C::new(0.0, p.kappa());
        prop_assert!((C::new(1.0, 0.0) - ak - s.r1).norm() < 1e-12);
        prop_assert!((-ak - s.t21).norm() < 1e-12);
    }
}

#[test]
fn unitarity_holds_in_single_precision() {
    let p = ptk_core::params::SystemParams::<f32>::symmetric_ports(0.0, 0.3, 0.7, 0.2).unwrap();
    for i in 0..200 {
        let v = -3.0 + 6.0 * i as f32 / 199.0;
        let s = single_response(&p, v).unwrap();
        assert!((s.r1.norm_sqr() + s.t21.norm_sqr() - 1.0).abs() < 1e-5);
    }
}
