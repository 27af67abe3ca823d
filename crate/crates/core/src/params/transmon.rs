use nalgebra::{DMatrix, SymmetricEigen};

use super::{invalid, ParamsError};
use crate::constants::PhysicalConstants;

const K: PhysicalConstants = PhysicalConstants::codata2018();

/// Source of the charging energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Charging {
    /// Total shunt capacitance in farads; E_C = e²/(2C).
    Capacitance(f64),
    /// Charging energy in joules.
    Energy(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmonSpec {
    pub charging: Charging,
    /// Josephson energy, J.
    pub ej: f64,
    /// Charge basis runs over n = −N..N.
    pub charge_cutoff: usize,
    pub offset_charge: f64,
}

impl TransmonSpec {
    pub fn new(charging: Charging, ej: f64) -> Self {
        Self { charging, ej, charge_cutoff: 20, offset_charge: 0.0 }
    }

    pub fn ec(&self) -> f64 {
        match self.charging {
            Charging::Capacitance(c) => K.e_charge * K.e_charge / (2.0 * c),
            Charging::Energy(e) => e,
        }
    }

    fn validate(&self) -> Result<(), ParamsError> {
        match self.charging {
            Charging::Capacitance(c) if !(c > 0.0 && c.is_finite()) => {
                return Err(invalid("capacitance", "must be positive"))
            }
            Charging::Energy(e) if !(e > 0.0 && e.is_finite()) => return Err(invalid("ec", "must be positive")),
            _ => {}
        }
        if !(self.ej > 0.0 && self.ej.is_finite()) {
            return Err(invalid("ej", "must be positive"));
        }
        if self.charge_cutoff < 10 {
            return Err(invalid("charge_cutoff", "must be >= 10"));
        }
        if !self.offset_charge.is_finite() {
            return Err(invalid("offset_charge", "must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmonSolution {
    /// g→e transition, rad/s.
    pub omega_q: f64,
    /// ⟨g|n̂|e⟩, phase-fixed non-negative.
    pub n_ge: f64,
    /// ⟨g|n̂|g⟩; zero at zero offset charge by parity.
    pub n_gg: f64,
    /// Lowest eigenvalues in joules, ascending.
    pub eigenvalues: Vec<f64>,
}

/// Diagonalises 4E_C(n̂ − n_g)² − E_J cos φ̂ in units of E_C.
fn diagonalise(ej_over_ec: f64, cutoff: usize, ng: f64) -> (Vec<f64>, f64, f64) {
    let dim = 2 * cutoff + 1;
    let n_of = |i: usize| i as f64 - cutoff as f64;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = 4.0 * (n_of(i) - ng).powi(2);
        if i + 1 < dim {
            h[(i, i + 1)] = -ej_over_ec / 2.0;
            h[(i + 1, i)] = -ej_over_ec / 2.0;
        }
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let g = eig.eigenvectors.column(order[0]);
    let e = eig.eigenvectors.column(order[1]);
    let n_ge: f64 = (0..dim).map(|i| g[i] * n_of(i) * e[i]).sum();
    let n_gg: f64 = (0..dim).map(|i| g[i] * n_of(i) * g[i]).sum();
    (vals, n_ge.abs(), n_gg)
}

fn omega_from(vals: &[f64], ec: f64) -> f64 {
    (vals[1] - vals[0]) * ec / K.hbar
}

/// Transmon levels and charge matrix element, with a cutoff-doubling convergence check.
pub fn transmon_spectrum(spec: &TransmonSpec) -> Result<TransmonSolution, ParamsError> {
    spec.validate()?;
    let ec = spec.ec();
    let r = spec.ej / ec;
    let (vals, n_ge, n_gg) = diagonalise(r, spec.charge_cutoff, spec.offset_charge);
    let (vals2, n_ge2, _) = diagonalise(r, 2 * spec.charge_cutoff, spec.offset_charge);
    let omega_q = omega_from(&vals, ec);
    let omega_q2 = omega_from(&vals2, ec);
    let change = ((omega_q2 - omega_q) / omega_q).abs().max(((n_ge2 - n_ge) / n_ge).abs());
    if !(change < 1e-10) {
        return Err(ParamsError::NotConverged { rel_change: change });
    }
    Ok(TransmonSolution { omega_q, n_ge, n_gg, eigenvalues: vals.iter().take(6).map(|v| v * ec).collect() })
}

/// Leading transmon asymptote ħω_q ≈ √(8E_J E_C) − E_C, in rad/s.
pub fn asymptotic_omega_q(ec: f64, ej: f64) -> f64 {
    ((8.0 * ej * ec).sqrt() - ec) / K.hbar
}

/// Josephson energy giving the target qubit frequency, by a bracketed solve on
/// E_J ∈ [E_C, 1e4·E_C]. The transition frequency is monotone in E_J.
pub fn solve_ej(ec: f64, omega_q_target: f64) -> Result<f64, ParamsError> {
    if !(ec > 0.0 && ec.is_finite()) {
        return Err(invalid("ec", "must be positive"));
    }
    if !(omega_q_target > 0.0 && omega_q_target.is_finite()) {
        return Err(invalid("omega_q_target", "must be positive"));
    }
    const CUTOFF: usize = 20;
    let f = |x: f64| {
        let (vals, _, _) = diagonalise(x, CUTOFF, 0.0);
        omega_from(&vals, ec) / omega_q_target - 1.0
    };
    let (mut lo, mut hi) = (1.0_f64, 1e4_f64);
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return Err(ParamsError::NoBracket);
    }
    // Illinois variant of regula falsi, with a bisection step whenever the bracket stalls.
    let mut side = 0i8;
    let mut x = lo;
    for _ in 0..200 {
        let width = hi - lo;
        x = (lo * fhi - hi * flo) / (fhi - flo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx.abs() < 1e-13 || width < 1e-13 * x {
            break;
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        if hi - lo > 0.5 * width {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
            side = 0;
        }
    }
    let residual = f(x).abs();
    if residual > 1e-9 {
        return Err(ParamsError::NotConverged { rel_change: residual });
    }
    Ok(x * ec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const H: f64 = 6.626_070_15e-34;

    #[test]
    fn charging_energy_from_capacitance() {
        let spec = TransmonSpec::new(Charging::Capacitance(50.34e-15), 1e-23);
        let ec_ghz = spec.ec() / H / 1e9;
        let oracle = (1.602_176_634e-19_f64).powi(2) / (2.0 * 50.34e-15 * H) / 1e9;
        assert!((ec_ghz / oracle - 1.0).abs() < 1e-12);
        assert!((ec_ghz - 0.385).abs() < 0.001);
    }

    #[test]
    fn ej_root_hits_target() {
        let ec = TransmonSpec::new(Charging::Capacitance(50.34e-15), 1.0).ec();
        let target = 2.0 * PI * 7.55e9;
        let ej = solve_ej(ec, target).unwrap();
        let sol = transmon_spectrum(&TransmonSpec::new(Charging::Energy(ec), ej)).unwrap();
        assert!((sol.omega_q / target - 1.0).abs() < 1e-9);
        let ej_ghz = ej / H / 1e9;
        assert!((ej_ghz / 20.4 - 1.0).abs() < 0.02, "E_J/h = {ej_ghz} GHz");
        assert!((asymptotic_omega_q(ec, ej) / target - 1.0).abs() < 0.02);
    }

    #[test]
    fn round_trip_from_asymptote() {
        let ec = 0.3 * H * 1e9;
        let ej = 60.0 * ec;
        let target = transmon_spectrum(&TransmonSpec::new(Charging::Energy(ec), ej)).unwrap().omega_q;
        let back = solve_ej(ec, target).unwrap();
        assert!((back / ej - 1.0).abs() < 1e-8);
    }

    #[test]
    fn parity_and_phase() {
        let sol = transmon_spectrum(&TransmonSpec::new(Charging::Energy(1.0), 50.0)).unwrap();
        assert!(sol.n_gg.abs() < 1e-12);
        assert!(sol.n_ge > 0.0);
        assert!(sol.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn no_bracket() {
        let ec = H * 1e9;
        assert_eq!(solve_ej(ec, 2.0 * PI * 1e15), Err(ParamsError::NoBracket));
    }

    #[test]
    fn small_cutoff_rejected() {
        let mut spec = TransmonSpec::new(Charging::Energy(1.0), 50.0);
        spec.charge_cutoff = 5;
        assert!(transmon_spectrum(&spec).is_err());
    }
}
