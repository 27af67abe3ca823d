use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;

use super::OracleError;
use crate::transport::Port;
use crate::SystemParams;

/// Weak coherent drive of the Jaynes–Cummings system through port 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladConfig {
    /// Highest cavity Fock state kept.
    pub fock_cutoff: usize,
    /// Drive ε in H ⊃ ε(a + a†), rad/s.
    pub drive_amp: f64,
    /// Drive frequency relative to the cavity, u − ω_c, rad/s.
    pub detuning: f64,
    /// Largest accepted relative change of g²(0) when the cutoff grows by two.
    pub convergence_tol: f64,
}

/// Steady-state cavity photon number targeted by [`LindbladConfig::weak`].
///
/// The two-photon sector enters g² at relative order ⟨a†a⟩·g², so the photon number has to
/// sit well below 1/g² for strongly bunched points. The solver works in a rescaled basis
/// (see [`lindblad_steady_state`]) so such drives stay numerically resolvable.
pub const WEAK_DRIVE_PHOTONS: f64 = 1e-8;

impl LindbladConfig {
    /// Drive chosen so the linear-response photon number is [`WEAK_DRIVE_PHOTONS`].
    pub fn weak(p: &SystemParams, detuning: f64) -> Self {
        Self::with_photons(p, detuning, WEAK_DRIVE_PHOTONS)
    }

    pub fn with_photons(p: &SystemParams, detuning: f64, photons: f64) -> Self {
        let (ac, aq) = linear_amplitudes(p, detuning, 1.0);
        // Near transparency the cavity field vanishes at linear order; fall back on the qubit.
        let per_drive = ac.norm().max(aq.norm());
        Self { fock_cutoff: 4, drive_amp: photons.sqrt() / per_drive, detuning, convergence_tol: 0.01 }
    }

    pub fn with_drive(self, drive_amp: f64) -> Self {
        Self { drive_amp, ..self }
    }
}

/// Mean-field cavity and qubit amplitudes for drive ε, valid at vanishing excitation.
fn linear_amplitudes(p: &SystemParams, detuning: f64, eps: f64) -> (C, C) {
    let i = C::i();
    let dc = -detuning;
    let dq = p.omega_q - p.omega_c - detuning;
    // 0 = (−iΔc − K/2)αc − igαq − iε,  0 = −iΔq αq − igαc
    let m11 = -i * dc - p.kappa_total() / 2.0;
    let m12 = -i * p.g;
    let m22 = -i * dq;
    if p.g == 0.0 {
        return (i * eps / m11, C::new(0.0, 0.0));
    }
    if m22.norm() == 0.0 {
        return (C::new(0.0, 0.0), i * eps / m12);
    }
    let det = m11 * m22 - m12 * m12;
    let ac = (i * eps * m22) / det;
    (ac, -(m12 * ac) / m22)
}

struct Basis {
    n_max: usize,
}

impl Basis {
    fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }
    fn idx(&self, n: usize, excited: bool) -> usize {
        2 * n + excited as usize
    }
    fn excitations(&self, k: usize) -> i32 {
        (k / 2 + k % 2) as i32
    }
    fn photons(&self, k: usize) -> usize {
        k / 2
    }
    fn a(&self) -> DMatrix<C> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for n in 1..=self.n_max {
            for e in [false, true] {
                m[(self.idx(n - 1, e), self.idx(n, e))] = C::new((n as f64).sqrt(), 0.0);
            }
        }
        m
    }
    fn sigma_minus(&self) -> DMatrix<C> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for n in 0..=self.n_max {
            m[(self.idx(n, false), self.idx(n, true))] = C::new(1.0, 0.0);
        }
        m
    }
}

/// Steady state of the driven, port-damped Jaynes–Cummings model.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DMatrix<C>,
    /// Rescaled Liouvillian, row-major vectorisation.
    generator: DMatrix<C>,
    weights: Vec<f64>,
    a: DMatrix<C>,
    pub mean_photons: f64,
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
    /// Max-norm residual of the rescaled steady-state equations relative to ‖L̃‖‖ρ̃‖.
    pub residual: f64,
    /// Port-1 input amplitude consistent with ε = √κ1·α_in.
    pub alpha_in: f64,
}

/// Solves L ρ = 0 in the basis ρ_jk = s^{N_j+N_k} ρ̃_jk, with N the excitation number and s the
/// linear-response amplitude. In that basis all generator entries are O(rates) or smaller, so
/// drives with ⟨a†a⟩ far below machine epsilon remain well conditioned.
pub fn lindblad_steady_state(p: &SystemParams, cfg: &LindbladConfig) -> Result<SteadyState, OracleError> {
    if cfg.fock_cutoff < 3 {
        return Err(OracleError::InvalidConfig("fock_cutoff must be >= 3".into()));
    }
    if !(cfg.drive_amp > 0.0 && cfg.drive_amp.is_finite() && cfg.detuning.is_finite()) {
        return Err(OracleError::InvalidConfig("drive must be positive and finite".into()));
    }
    if !(p.kappa1 > 0.0) {
        return Err(OracleError::InvalidConfig("port 1 must couple to drive the cavity".into()));
    }
    let basis = Basis { n_max: cfg.fock_cutoff };
    let d = basis.dim();
    let a = basis.a();
    let sm = basis.sigma_minus();
    let ad = a.adjoint();
    let num = &ad * &a;
    let eps = cfg.drive_amp;
    let dc = -cfg.detuning;
    let dq = p.omega_q - p.omega_c - cfg.detuning;
    let h = &num * C::new(dc, 0.0)
        + sm.adjoint() * &sm * C::new(dq, 0.0)
        + (&ad * &sm + &a * sm.adjoint()) * C::new(p.g, 0.0)
        + (&a + &ad) * C::new(eps, 0.0);

    let (ac, aq) = linear_amplitudes(p, cfg.detuning, eps);
    let s = ac.norm().max(aq.norm()).max(eps / (p.kappa_total() + p.g.abs() + cfg.detuning.abs()) * 1e-3);
    let weights: Vec<f64> = (0..d).map(|k| s.powi(basis.excitations(k))).collect();

    // vec(AρB) = (A ⊗ Bᵀ) vec(ρ) for row-major vectorisation.
    let id = DMatrix::<C>::identity(d, d);
    let k = p.kappa_total();
    let mut l = (h.kronecker(&id) - id.kronecker(&h.transpose())) * C::new(0.0, -1.0)
        + (a.kronecker(&ad.transpose())
            - num.kronecker(&id) * C::new(0.5, 0.0)
            - id.kronecker(&num.transpose()) * C::new(0.5, 0.0))
            * C::new(k, 0.0);
    for r in 0..d * d {
        let (j, kk) = (r / d, r % d);
        let nr = basis.excitations(j) + basis.excitations(kk);
        for c in 0..d * d {
            if l[(r, c)] != C::new(0.0, 0.0) {
                let (lj, lk) = (c / d, c % d);
                let nc = basis.excitations(lj) + basis.excitations(lk);
                l[(r, c)] *= s.powi(nc - nr);
            }
        }
    }

    let mut sys = l.clone();
    let anchor = 0; // ρ̃_00 row: its entries are all O(s), the least informative equation.
    for c in 0..d * d {
        sys[(anchor, c)] = C::new(0.0, 0.0);
    }
    for j in 0..d {
        sys[(anchor, j * d + j)] = C::new(weights[j] * weights[j], 0.0);
    }
    let mut rhs = DVector::<C>::zeros(d * d);
    rhs[anchor] = C::new(1.0, 0.0);
    let lu = sys.clone().lu();
    let mut x = lu.solve(&rhs).ok_or_else(|| OracleError::SteadyState("singular generator".into()))?;
    for _ in 0..3 {
        let r = &rhs - &sys * &x;
        if let Some(dx) = lu.solve(&r) {
            x += dx;
        }
    }
    let lx = &l * &x;
    let max = |v: &mut dyn Iterator<Item = C>| v.map(|z| z.norm()).fold(0.0_f64, f64::max);
    let residual = max(&mut lx.iter().copied()) / (max(&mut l.iter().copied()) * max(&mut x.iter().copied()));
    if !(residual < 1e-12) {
        return Err(OracleError::SteadyState(format!("residual {residual:.3e}")));
    }

    let mut rho = DMatrix::<C>::zeros(d, d);
    for j in 0..d {
        for c in 0..d {
            rho[(j, c)] = x[j * d + c] * (weights[j] * weights[c]);
        }
    }
    let trace: C = (0..d).map(|j| rho[(j, j)]).sum();
    let herm = (&rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let hermitian = (&rho + rho.adjoint()) * C::new(0.5, 0.0);
    let min_eigenvalue = hermitian.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    let mean_photons: f64 = (0..d).map(|j| basis.photons(j) as f64 * rho[(j, j)].re).sum();
    Ok(SteadyState {
        rho,
        generator: l,
        weights,
        a,
        mean_photons,
        trace_error: (trace - 1.0).norm(),
        hermiticity_error: herm,
        min_eigenvalue,
        residual,
        alpha_in: eps / p.kappa1.sqrt(),
    })
}

impl SteadyState {
    fn output_op(&self, p: &SystemParams, port: Port) -> DMatrix<C> {
        let d = self.rho.nrows();
        let (c, k) = match port {
            Port::One => (self.alpha_in, p.kappa1),
            Port::Two => (0.0, p.kappa2),
        };
        DMatrix::<C>::identity(d, d) * C::new(c, 0.0) + &self.a * C::new(0.0, -k.sqrt())
    }

    fn scale(&self, m: &DMatrix<C>, inverse: bool) -> DMatrix<C> {
        let mut out = m.clone();
        for ((j, k), z) in out.iter_mut().enumerate().map(|(i, z)| ((i % m.nrows(), i / m.nrows()), z)) {
            let w = self.weights[j] * self.weights[k];
            *z = if inverse { *z / w } else { *z * w };
        }
        out
    }

    /// Normally ordered ⟨b1†(0) b2†(τ) b2(τ) b1(0)⟩ / (⟨b1†b1⟩⟨b2†b2⟩) by quantum regression.
    pub fn g2(&self, p: &SystemParams, ports: (Port, Port), tau: &[f64]) -> Vec<f64> {
        let b1 = self.output_op(p, ports.0);
        let b2 = self.output_op(p, ports.1);
        let o2 = b2.adjoint() * &b2;
        let n1 = (b1.adjoint() * &b1 * &self.rho).trace().re;
        let n2 = (&o2 * &self.rho).trace().re;
        let x = &b1 * &self.rho * b1.adjoint();
        let xt = self.scale(&x, true);
        let d = x.nrows();
        let mut vec_x = DVector::<C>::zeros(d * d);
        for j in 0..d {
            for k in 0..d {
                vec_x[j * d + k] = xt[(j, k)];
            }
        }
        tau.iter()
            .map(|&t| {
                let evolved = if t == 0.0 { vec_x.clone() } else { (&self.generator * C::new(t, 0.0)).exp() * &vec_x };
                let mut m = DMatrix::<C>::zeros(d, d);
                for j in 0..d {
                    for k in 0..d {
                        m[(j, k)] = evolved[j * d + k];
                    }
                }
                let xtau = self.scale(&m, false);
                (&o2 * xtau).trace().re / (n1 * n2)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladG2 {
    pub tau: Vec<f64>,
    pub g2: Vec<f64>,
    pub mean_photons: f64,
    /// Relative change of g²(0) for fock_cutoff → fock_cutoff + 2.
    pub cutoff_change: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

/// g²_{b1,b2}(τ) of the output fields under weak coherent drive at frequency ω_c + detuning.
pub fn lindblad_g2(
    p: &SystemParams,
    cfg: &LindbladConfig,
    ports: (Port, Port),
    tau_grid: &[f64],
) -> Result<LindbladG2, OracleError> {
    if !p.symmetric() {
        return Err(crate::transport::TransportError::AsymmetricPorts.into());
    }
    if tau_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || tau_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(OracleError::InvalidConfig("tau grid must be finite, non-negative and sorted".into()));
    }
    let ss = lindblad_steady_state(p, cfg)?;
    if ss.mean_photons >= 1e-3 {
        return Err(OracleError::WeakDriveViolated(ss.mean_photons));
    }
    let g2 = ss.g2(p, ports, tau_grid);
    let bigger = LindbladConfig { fock_cutoff: cfg.fock_cutoff + 2, ..*cfg };
    let ref0 = lindblad_steady_state(p, &bigger)?.g2(p, ports, &[0.0])[0];
    let here0 = if tau_grid.first() == Some(&0.0) { g2[0] } else { ss.g2(p, ports, &[0.0])[0] };
    let cutoff_change = ((here0 - ref0) / ref0).abs();
    if !(cutoff_change <= cfg.convergence_tol) {
        return Err(OracleError::CutoffNotConverged(cutoff_change));
    }
    Ok(LindbladG2 {
        tau: tau_grid.to_vec(),
        g2,
        mean_photons: ss.mean_photons,
        cutoff_change,
        trace_error: ss.trace_error,
        min_eigenvalue: ss.min_eigenvalue,
    })
}
