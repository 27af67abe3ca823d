use std::time::Instant;

use rayon::prelude::*;

use super::{lindblad_steady_state, td_single, LindbladConfig, PulseSpec};
use crate::transport::{correlation, h_closed, h_quadrature, poles, sweep_single, CorrelationQuery, Port, PORT_PAIRS};
use crate::SystemParams;

/// Max deviation of the time-domain r1, t21 from the closed forms.
pub const TD_TOL: f64 = 1e-6;
/// Relative energy mismatch of the time-domain run.
pub const TD_ENERGY_TOL: f64 = 1e-8;
/// Relative agreement of the residue and quadrature evaluations of H̃.
pub const H_TOL: f64 = 1e-8;
/// Relative agreement of master-equation and closed-form g²(0).
pub const LINDBLAD_TOL: f64 = 0.05;
/// Relative change of the master-equation g²(0) when the drive is halved.
pub const DRIVE_HALVING_TOL: f64 = 0.005;
/// |r1|² + |t21|² − 1.
pub const UNITARITY_TOL: f64 = 1e-12;
/// Root residual of the pole expressions relative to |λ|².
pub const POLE_TOL: f64 = 1e-9;

/// Closed-form g²(0) above this is outside the weak-drive equivalence window and not compared.
const MAX_COMPARABLE_G2: f64 = 1e4;

/// Cavity detunings, in units of max(|g|, κ), at which the master-equation check runs.
/// They avoid the exact zeros of r1 and t21 for resonant qubits in both preset regimes.
pub const LINDBLAD_DETUNINGS: [f64; 6] = [-2.3, -1.37, -0.45, 0.23, 0.87, 1.63];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Not applicable to these parameters; never counted as a failure.
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub check_name: String,
    pub analytic_value: f64,
    pub oracle_value: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub outcome: Outcome,
    pub runtime_s: f64,
    pub note: String,
}

impl OracleReport {
    fn compare(name: String, analytic: f64, oracle: f64, err: f64, tol: f64, t0: Instant) -> Self {
        Self {
            check_name: name,
            analytic_value: analytic,
            oracle_value: oracle,
            rel_error: err,
            tolerance: tol,
            outcome: if err <= tol { Outcome::Pass } else { Outcome::Fail },
            runtime_s: t0.elapsed().as_secs_f64(),
            note: String::new(),
        }
    }

    fn failed(name: String, note: String, tol: f64, t0: Instant) -> Self {
        Self {
            check_name: name,
            analytic_value: f64::NAN,
            oracle_value: f64::NAN,
            rel_error: f64::NAN,
            tolerance: tol,
            outcome: Outcome::Fail,
            runtime_s: t0.elapsed().as_secs_f64(),
            note,
        }
    }

    fn skipped(name: String, note: impl Into<String>, tol: f64) -> Self {
        Self {
            check_name: name,
            analytic_value: f64::NAN,
            oracle_value: f64::NAN,
            rel_error: f64::NAN,
            tolerance: tol,
            outcome: Outcome::Skip,
            runtime_s: 0.0,
            note: note.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

fn feature_span(p: &SystemParams) -> f64 {
    if p.is_good_cavity() {
        3.0 * p.g.abs()
    } else {
        10.0 * p.kappa()
    }
}

fn pole_check(p: &SystemParams) -> OracleReport {
    let t0 = Instant::now();
    let pl = poles(p);
    let dq = p.omega_q - p.omega_c;
    let k = p.kappa_total();
    let mut worst = 0.0_f64;
    for l in [pl.lambda1_plus, pl.lambda1_minus] {
        let x = l - p.omega_c;
        let d = (x + num_complex::Complex64::new(0.0, k / 2.0)) * (x - dq) - p.g * p.g;
        worst = worst.max(d.norm() / l.norm_sqr());
    }
    for l in [pl.lambda2_plus, pl.lambda2_minus] {
        let x = l - 2.0 * p.omega_c;
        let q = (x + num_complex::Complex64::new(0.0, k)) * (x - dq + num_complex::Complex64::new(0.0, k / 2.0))
            - 2.0 * p.g * p.g;
        worst = worst.max(q.norm() / l.norm_sqr());
    }
    OracleReport::compare("pole_identities".into(), 0.0, worst, worst, POLE_TOL, t0)
}

fn unitarity_check(p: &SystemParams) -> OracleReport {
    let t0 = Instant::now();
    let span = feature_span(p);
    let grid: Vec<f64> = (0..2001).map(|i| p.omega_c + span * (i as f64 / 1000.0 - 1.0)).collect();
    match sweep_single(p, &grid) {
        Ok(rows) => {
            let worst = rows.iter().map(|s| (s.r1.norm_sqr() + s.t21.norm_sqr() - 1.0).abs()).fold(0.0, f64::max);
            OracleReport::compare("unitarity_scan".into(), 1.0, 1.0 + worst, worst, UNITARITY_TOL, t0)
        }
        Err(e) => OracleReport::failed("unitarity_scan".into(), e.to_string(), UNITARITY_TOL, t0),
    }
}

fn td_checks(p: &SystemParams) -> Vec<OracleReport> {
    let t0 = Instant::now();
    let pulse = PulseSpec::for_params(p, 201);
    let names = ["td_single_r1", "td_single_t21", "td_single_energy"];
    let res = td_single(p, &pulse).and_then(|s| s.max_error(p).map(|e| (s, e)));
    match res {
        Ok((s, (er, et))) => vec![
            OracleReport::compare(names[0].into(), 0.0, er, er, TD_TOL, t0),
            OracleReport::compare(names[1].into(), 0.0, et, et, TD_TOL, t0),
            OracleReport::compare(names[2].into(), 1.0, 1.0 + s.energy_error, s.energy_error, TD_ENERGY_TOL, t0),
        ],
        Err(e) => names.iter().map(|n| OracleReport::failed((*n).into(), e.to_string(), TD_TOL, t0)).collect(),
    }
}

fn h_checks(p: &SystemParams) -> Vec<OracleReport> {
    let span = feature_span(p);
    let k = p.kappa_total();
    // Fixed sample of (u1, u2, τ) across the feature span.
    let pts = [(0.0, 0.0, 0.0), (0.31, -0.52, 0.7), (-0.83, 0.12, 2.1), (0.64, 0.64, 1.3), (-0.2, 0.95, 3.4)];
    pts.iter()
        .map(|&(a, b, t)| {
            let name = format!("h_closed_vs_quadrature[{a:+.2},{b:+.2},{t:.1}]");
            if !p.symmetric() {
                return OracleReport::skipped(name, "AsymmetricPorts", H_TOL);
            }
            let t0 = Instant::now();
            let (u1, u2, tau) = (p.omega_c + a * span, p.omega_c + b * span, t / k);
            match (h_closed(p, u1, u2, tau), h_quadrature(p, u1, u2, tau)) {
                (Ok(c), Ok(q)) => {
                    let scale = c.value.norm();
                    let err = if scale > 0.0 { (c.value - q).norm() / scale } else { q.norm() };
                    OracleReport::compare(name, c.value.norm(), q.norm(), err, H_TOL, t0)
                }
                (Err(e), _) | (_, Err(e)) => OracleReport::failed(name, e.to_string(), H_TOL, t0),
            }
        })
        .collect()
}

fn lindblad_checks(p: &SystemParams) -> Vec<OracleReport> {
    let scale = p.g.abs().max(p.kappa());
    LINDBLAD_DETUNINGS
        .par_iter()
        .map(|&f| {
            let det = f * scale;
            let label =
                |what: &str, ports: (Port, Port)| format!("{what}_{}{}[{f:+.2}]", ports.0.number(), ports.1.number());
            if !p.symmetric() {
                return PORT_PAIRS
                    .iter()
                    .flat_map(|&pp| {
                        [
                            OracleReport::skipped(label("lindblad_g2", pp), "AsymmetricPorts", LINDBLAD_TOL),
                            OracleReport::skipped(label("drive_halving", pp), "AsymmetricPorts", DRIVE_HALVING_TOL),
                        ]
                    })
                    .collect::<Vec<_>>();
            }
            let t0 = Instant::now();
            let cfg = LindbladConfig::weak(p, det);
            let bigger = LindbladConfig { fock_cutoff: cfg.fock_cutoff + 2, ..cfg };
            let states = [
                lindblad_steady_state(p, &cfg),
                lindblad_steady_state(p, &cfg.with_drive(cfg.drive_amp / 2.0)),
                lindblad_steady_state(p, &bigger),
            ];
            let mut out = Vec::new();
            for pp in PORT_PAIRS {
                let u = p.omega_c + det;
                let analytic = correlation(p, &CorrelationQuery { u1: u, u2: u, tau_grid: vec![0.0], ports: pp });
                let (n1, n2) = (label("lindblad_g2", pp), label("drive_halving", pp));
                let analytic = match analytic {
                    Ok(a) if !a.diverged && a.g2[0] <= MAX_COMPARABLE_G2 => a.g2[0],
                    Ok(_) => {
                        out.push(OracleReport::skipped(
                            n1,
                            "closed form divergent or beyond weak-drive range",
                            LINDBLAD_TOL,
                        ));
                        out.push(OracleReport::skipped(
                            n2,
                            "closed form divergent or beyond weak-drive range",
                            DRIVE_HALVING_TOL,
                        ));
                        continue;
                    }
                    Err(e) => {
                        out.push(OracleReport::failed(n1, e.to_string(), LINDBLAD_TOL, t0));
                        continue;
                    }
                };
                match &states {
                    [Ok(s), Ok(h), Ok(b)] => {
                        let g = s.g2(p, pp, &[0.0])[0];
                        let gh = h.g2(p, pp, &[0.0])[0];
                        let gb = b.g2(p, pp, &[0.0])[0];
                        let mut rep =
                            OracleReport::compare(n1, analytic, g, ((g - analytic) / analytic).abs(), LINDBLAD_TOL, t0);
                        let cutoff = ((gb - g) / g).abs();
                        rep.note = format!("<a†a> = {:.2e}, cutoff change {:.1e}", s.mean_photons, cutoff);
                        if s.mean_photons >= 1e-3 || cutoff > cfg.convergence_tol {
                            rep.outcome = super::Outcome::Fail;
                        }
                        out.push(rep);
                        out.push(OracleReport::compare(n2, g, gh, ((gh - g) / g).abs(), DRIVE_HALVING_TOL, t0));
                    }
                    _ => {
                        let msg =
                            states.iter().find_map(|s| s.as_ref().err()).map(|e| e.to_string()).unwrap_or_default();
                        out.push(OracleReport::failed(n1, msg.clone(), LINDBLAD_TOL, t0));
                        out.push(OracleReport::failed(n2, msg, DRIVE_HALVING_TOL, t0));
                    }
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Runs the fixed verification suite. Failures are reported in the returned rows.
pub fn run_verification(p: &SystemParams) -> Vec<OracleReport> {
    let mut out = vec![pole_check(p), unitarity_check(p)];
    out.extend(td_checks(p));
    out.extend(h_checks(p));
    out.extend(lindblad_checks(p));
    out
}
