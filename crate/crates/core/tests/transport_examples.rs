use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C;
use ptk_core::transport::{
    correlation, gamma, h_closed, h_quadrature, h_quadrature_terms, poles, single_response, sweep_g2, sweep_single,
    two_photon_element, CorrelationQuery, Port, PORT_PAIRS,
};
use ptk_core::SystemParams;

fn grid(centre: f64, half_span: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| centre + half_span * (2.0 * i as f64 / (n - 1) as f64 - 1.0)).collect()
}

fn local_maxima(y: &[f64]) -> Vec<usize> {
    (1..y.len() - 1).filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1]).collect()
}

/// Half-maximum crossing between `inside` (above) and `outside` (below), by bisection.
fn crossing(f: impl Fn(f64) -> f64, level: f64, mut inside: f64, mut outside: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (inside + outside);
        if f(m) >= level {
            inside = m
        } else {
            outside = m
        }
    }
    0.5 * (inside + outside)
}

fn t2(p: &SystemParams, v: f64) -> f64 {
    single_response(p, v).unwrap().t21.norm_sqr()
}

#[test]
fn empty_cavity_transmits_on_resonance() {
    let p = SystemParams::good_cavity().with_g(0.0);
    let s = single_response(&p, p.omega_c).unwrap();
    assert_eq!(s.r1, C::new(0.0, 0.0));
    assert!((s.t21 - C::new(-1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn vacuum_rabi_doublet() {
    let p = SystemParams::good_cavity();
    let v = grid(p.omega_c, 3.0 * p.g, 2001);
    let step = v[1] - v[0];
    let y: Vec<f64> = sweep_single(&p, &v).unwrap().iter().map(|s| s.t21.norm_sqr()).collect();
    let peaks = local_maxima(&y);
    assert_eq!(peaks.len(), 2);
    for (&i, want) in peaks.iter().zip([p.omega_c - p.g, p.omega_c + p.g]) {
        assert!((v[i] - want).abs() <= step, "peak {} vs {}", v[i], want);
        let half = y[i] / 2.0;
        let mut lo = i;
        while y[lo] >= half {
            lo -= 1;
        }
        let mut hi = i;
        while y[hi] >= half {
            hi += 1;
        }
        let f = |x| t2(&p, x);
        let w = crossing(f, half, v[i], v[hi]) - crossing(f, half, v[i], v[lo]);
        assert!((w / p.kappa() - 1.0).abs() < 0.05, "FWHM {w} vs κ {}", p.kappa());
    }
}

#[test]
fn uncoupled_poles() {
    let p = SystemParams::from_cyclic(7.0e9, 7.2e9, 0.0, 3e5, 1e5);
    let l = poles(&p);
    let cav = C::new(p.omega_c, -p.kappa_total() / 2.0);
    let qb = C::new(p.omega_q, 0.0);
    let close = |a: C, b: C| (a - b).norm() <= 1e-12 * b.norm();
    assert!(
        (close(l.lambda1_plus, cav) && close(l.lambda1_minus, qb))
            || (close(l.lambda1_plus, qb) && close(l.lambda1_minus, cav))
    );
}

#[test]
fn resonant_poles_closed_form() {
    for p in [SystemParams::good_cavity(), SystemParams::bad_cavity()] {
        let (w, g, k) = (p.omega_c, p.g, p.kappa());
        let l = poles(&p);
        let r1 = C::new(g * g - k * k / 4.0, 0.0).sqrt();
        let r2 = C::new(2.0 * g * g - k * k / 4.0, 0.0).sqrt();
        let c1 = C::new(w, -k / 2.0);
        let c2 = C::new(2.0 * w, -1.5 * k);
        for (got, want) in [
            (l.lambda1_plus, c1 + r1),
            (l.lambda1_minus, c1 - r1),
            (l.lambda2_plus, c2 + r2),
            (l.lambda2_minus, c2 - r2),
        ] {
            assert!((got - want).norm() <= 1e-12 * want.norm(), "{got} vs {want}");
        }
    }
}

#[test]
fn gamma_independent_composition() {
    let p = SystemParams::good_cavity();
    let (w, g, k) = (p.omega_c, p.g, p.kappa());
    let kk = 2.0 * k;
    // On resonance every detuning is zero: D = −g², S_q = −√κ/g, S_c = 0.
    let sq = C::new(-k.sqrt() / g, 0.0);
    let l = poles(&p);
    let xi = 2.0 * w;
    let want = C::new(0.0, kk) * k.sqrt() * (sq + sq) / ((xi - l.lambda2_plus) * (xi - l.lambda2_minus));
    let got = gamma(&p, w, w, xi).unwrap();
    assert!((got - want).norm() <= 1e-12 * want.norm(), "{got} vs {want}");
    assert_eq!(gamma(&p.with_g(0.0), w + 1e6, w, xi).unwrap(), C::new(0.0, 0.0));
}

#[test]
fn uncoupled_element_is_lorentzian() {
    let p = SystemParams::bad_cavity().with_g(0.0);
    let (u1, u2) = (p.omega_c + 3e5, p.omega_c - 1e6);
    let e = two_photon_element(&p, u1, u2, (Port::Two, Port::Two)).unwrap();
    let t = |v: f64| C::new(0.0, -p.kappa()) / C::new(v - p.omega_c, p.kappa());
    assert!((e.direct - t(u1) * t(u2)).norm() < 1e-14);
    assert_eq!(e.correlated(p.omega_c).unwrap(), C::new(0.0, 0.0));
}

#[test]
fn bound_term_vanishes_without_coupling() {
    let p = SystemParams::good_cavity().with_g(0.0);
    for tau in [0.0, 1e-8, 1e-6] {
        assert_eq!(h_closed(&p, p.omega_c + 1e7, p.omega_c - 2e6, tau).unwrap().value.norm(), 0.0);
    }
}

#[test]
fn bound_term_decays() {
    let p = SystemParams::good_cavity();
    let u = p.omega_c + 0.3 * p.g;
    let h = |t: f64| h_closed(&p, u, u, t).unwrap().value.norm();
    let k = p.kappa_total();
    // Every exponent decays at least as e^{-Kτ/4}.
    assert!(h(200.0 / k) < 1e-20 * h(0.0));
}

#[test]
fn bound_term_matches_quadrature_at_centre() {
    let p = SystemParams::good_cavity();
    let (w, _) = (p.omega_c, 0);
    let c = h_closed(&p, w, w, 0.0).unwrap().value;
    let q = h_quadrature(&p, w, w, 0.0).unwrap();
    assert!((c - q).norm() <= 1e-8 * c.norm());
}

#[test]
fn bound_term_exponentials_integrate_equally() {
    for p in [SystemParams::good_cavity(), SystemParams::bad_cavity()] {
        let s = if p.is_good_cavity() { p.g } else { p.kappa() };
        for (a, b, t) in [(0.0, 0.0, 0.5), (0.4, -0.7, 1.3), (-1.1, 0.2, 3.0)] {
            let (u1, u2, tau) = (p.omega_c + a * s, p.omega_c + b * s, t / p.kappa_total());
            let (plus, minus) = h_quadrature_terms(&p, u1, u2, tau).unwrap();
            assert!((plus - minus).norm() <= 1e-8 * plus.norm(), "{plus} vs {minus}");
        }
    }
}

#[test]
fn bad_cavity_bound_term_falls_off_with_detuning() {
    let p = SystemParams::bad_cavity();
    for tau in [0.0, 1.0 / p.kappa()] {
        let h: Vec<f64> = (0..=20)
            .map(|i| {
                let u = p.omega_c + 0.5 * i as f64 * p.kappa();
                h_quadrature(&p, u, u, tau).unwrap().norm()
            })
            .collect();
        assert!(h.windows(2).all(|w| w[1] < w[0]), "{h:?}");
    }
}

#[test]
fn uncoupled_correlations_are_flat() {
    let p = SystemParams::bad_cavity().with_g(0.0);
    let taus: Vec<f64> = (0..20).map(|i| i as f64 / p.kappa()).collect();
    for ports in PORT_PAIRS {
        let r = correlation(
            &p,
            &CorrelationQuery { u1: p.omega_c + 2e5, u2: p.omega_c + 2e5, tau_grid: taus.clone(), ports },
        )
        .unwrap();
        assert!(r.g2.iter().all(|g| (g - 1.0).abs() <= 1e-9));
    }
}

#[test]
fn long_delay_recovers_background() {
    for p in [SystemParams::good_cavity(), SystemParams::bad_cavity()] {
        let s = if p.is_good_cavity() { p.g } else { p.kappa() };
        for x in [-1.3, -0.6, 0.0, 0.45, 1.0, 2.2] {
            let u = p.omega_c + x * s;
            for ports in PORT_PAIRS {
                let r = correlation(&p, &CorrelationQuery { u1: u, u2: u, tau_grid: vec![50.0 / p.kappa()], ports })
                    .unwrap();
                if !r.diverged {
                    assert!((r.g2[0] - 1.0).abs() <= 1e-6, "{x} {ports:?} {}", r.g2[0]);
                }
            }
        }
    }
}

#[test]
fn dressed_state_antibunching() {
    let p = SystemParams::good_cavity();
    for u in [p.omega_c - p.g, p.omega_c + p.g] {
        let r = correlation(&p, &CorrelationQuery { u1: u, u2: u, tau_grid: vec![0.0], ports: (Port::Two, Port::Two) })
            .unwrap();
        assert!(r.g2[0] < 0.1, "{}", r.g2[0]);
    }
}

#[test]
fn two_photon_resonance_bunches() {
    for p in [SystemParams::good_cavity(), SystemParams::bad_cavity()] {
        let l = poles(&p);
        for lam in [l.lambda2_plus, l.lambda2_minus] {
            let u = lam.re / 2.0;
            let r =
                correlation(&p, &CorrelationQuery { u1: u, u2: u, tau_grid: vec![0.0], ports: (Port::Two, Port::Two) })
                    .unwrap();
            assert!(r.g2[0] > 1.0, "{}", r.g2[0]);
        }
    }
}

#[test]
fn transmission_correlation_diverges_at_transparency() {
    let p = SystemParams::bad_cavity();
    let r = correlation(
        &p,
        &CorrelationQuery { u1: p.omega_q, u2: p.omega_q, tau_grid: vec![0.0], ports: (Port::Two, Port::Two) },
    )
    .unwrap();
    assert!(r.diverged && r.g2[0].is_nan());
}

#[test]
fn asymmetric_ports_are_refused() {
    let p = SystemParams::new(4.7e10, 4.7e10, 1e8, 1e6, 2e6).unwrap();
    let q = CorrelationQuery { u1: p.omega_c, u2: p.omega_c, tau_grid: vec![0.0], ports: (Port::One, Port::One) };
    assert!(correlation(&p, &q).is_err());
    assert!(two_photon_element(&p, p.omega_c, p.omega_c, (Port::One, Port::One)).is_err());
}

#[test]
fn sweeps_are_elementwise() {
    let p = SystemParams::good_cavity();
    assert!(sweep_single(&p, &[]).unwrap().is_empty());
    assert!(sweep_g2(&p, &[], (Port::One, Port::One), 0.0).unwrap().is_empty());
    let v = p.omega_c + 0.37 * p.g;
    assert_eq!(sweep_single(&p, &[v]).unwrap()[0], single_response(&p, v).unwrap());
    let one = sweep_g2(&p, &[v], (Port::Two, Port::One), 0.0).unwrap().remove(0);
    let direct =
        correlation(&p, &CorrelationQuery { u1: v, u2: v, tau_grid: vec![0.0], ports: (Port::Two, Port::One) })
            .unwrap();
    assert_eq!(one, direct);
    let g = grid(p.omega_c, 3.0 * p.g, 501);
    let par = sweep_single(&p, &g).unwrap();
    let seq: Vec<_> = g.iter().map(|&x| single_response(&p, x).unwrap()).collect();
    assert_eq!(par, seq);
}

#[test]
fn envelope_normalisation() {
    // Background is G² with H̃ removed and P̃ at its envelope 1/(√2π).
    let p = SystemParams::good_cavity();
    let u = p.omega_c + 0.2 * p.g;
    let r = correlation(&p, &CorrelationQuery { u1: u, u2: u, tau_grid: vec![0.0], ports: (Port::One, Port::One) })
        .unwrap();
    let s = single_response(&p, u).unwrap();
    let want = 2.0 * (s.r1 * s.r1).norm_sqr() / (SQRT_2 * PI).powi(2);
    assert!((r.background - want).abs() <= 1e-14 * want);
}

#[test]
fn bound_term_matches_quadrature_at_random_points() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    for p in [SystemParams::good_cavity(), SystemParams::bad_cavity()] {
        let span = if p.is_good_cavity() { 3.0 * p.g } else { 10.0 * p.kappa() };
        for _ in 0..20 {
            let u1 = p.omega_c + span * rng.gen_range(-1.0..1.0);
            let u2 = p.omega_c + span * rng.gen_range(-1.0..1.0);
            let tau = rng.gen_range(0.0..8.0) / p.kappa_total();
            let c = h_closed(&p, u1, u2, tau).unwrap().value;
            let q = h_quadrature(&p, u1, u2, tau).unwrap();
            assert!((c - q).norm() <= 1e-8 * c.norm(), "{u1} {u2} {tau}: {c} vs {q}");
        }
    }
}
