use num_complex::Complex64 as C;

use super::OracleError;
use crate::transport::{poles, single_response};
use crate::SystemParams;

/// Gaussian probe pulse `s_in(t) = exp(−σ²(t−t0)²/2)·e^{−iω0 t}` with spectral width σ.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec {
    /// Carrier ω0, rad/s.
    pub center_freq: f64,
    /// Spectral standard deviation σ, rad/s.
    pub bandwidth: f64,
    /// Total integration window, s. The pulse is centred at 6/σ.
    pub duration_window: f64,
    /// Number of frequencies tabulated across ω0 ± 2σ.
    pub sample_count: usize,
    /// Integration steps per inverse of the fastest rate in the carrier frame.
    pub steps_per_rate: f64,
}

impl PulseSpec {
    /// Pulse covering the visible feature span (±3g in the good-cavity regime, ±10κ otherwise),
    /// with a window long enough for the slowest resonance to ring down.
    pub fn for_params(p: &SystemParams, sample_count: usize) -> Self {
        let span = if p.is_good_cavity() { 3.0 * p.g.abs() } else { 10.0 * p.kappa() };
        let sigma = span / 2.0;
        let pl = poles(p);
        let gamma = (-pl.lambda1_plus.im).min(-pl.lambda1_minus.im).max(1e-300);
        Self {
            center_freq: p.omega_c,
            bandwidth: sigma,
            duration_window: 12.0 / sigma + 16.0 / gamma,
            sample_count,
            steps_per_rate: 100.0,
        }
    }

    fn centre_time(&self) -> f64 {
        6.0 / self.bandwidth
    }

    fn validate(&self) -> Result<(), OracleError> {
        let bad = |m: &str| Err(OracleError::InvalidPulse(m.into()));
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return bad("bandwidth must be positive");
        }
        // Energy outside ±6/σ is erfc(6) ≈ 2e-17 of the total.
        if !(self.duration_window >= 2.0 * self.centre_time()) {
            return bad("window shorter than the pulse support");
        }
        if self.sample_count == 0 {
            return bad("sample_count must be positive");
        }
        if !(self.steps_per_rate >= 50.0) {
            return bad("steps_per_rate below 50");
        }
        Ok(())
    }
}

/// Frequency-resolved reflection and transmission recovered from the time-domain run.
#[derive(Debug, Clone, PartialEq)]
pub struct TdSpectrum {
    /// Absolute angular frequencies.
    pub freq: Vec<f64>,
    pub r: Vec<C>,
    pub t: Vec<C>,
    /// Step used for the returned data, s.
    pub step: f64,
    /// Largest change of any tabulated coefficient when the step is halved.
    pub step_halving_change: f64,
    /// Relative mismatch between output and input pulse energy.
    pub energy_error: f64,
}

impl TdSpectrum {
    /// Largest deviation from the closed-form r1, t21 over the band. The coefficients are
    /// S-matrix entries of modulus ≤ 1, so this is measured on the unit scale.
    pub fn max_error(&self, p: &SystemParams) -> Result<(f64, f64), OracleError> {
        let mut er = 0.0_f64;
        let mut et = 0.0_f64;
        for (i, &v) in self.freq.iter().enumerate() {
            let s = single_response(p, v)?;
            er = er.max((self.r[i] - s.r1).norm());
            et = et.max((self.t[i] - s.t21).norm());
        }
        Ok((er, et))
    }
}

/// Upper bound on RK4 steps for the fine run.
pub const MAX_STEPS: f64 = 2.0e8;

struct Run {
    out1: Vec<C>,
    out2: Vec<C>,
    inp: Vec<C>,
    times: Vec<f64>,
    energy_error: f64,
}

fn integrate(p: &SystemParams, pulse: &PulseSpec, h: f64, decimate: usize) -> Result<Run, OracleError> {
    let w0 = pulse.center_freq;
    let dc = p.omega_c - w0;
    let dq = p.omega_q - w0;
    let half_k = p.kappa_total() / 2.0;
    let sk1 = p.kappa1.sqrt();
    let sk2 = p.kappa2.sqrt();
    let t0 = pulse.centre_time();
    let sig2 = pulse.bandwidth * pulse.bandwidth;
    let env = |t: f64| (-0.5 * sig2 * (t - t0) * (t - t0)).exp();
    let i = C::i();

    let rhs = |aq: C, ac: C, s: f64| -> (C, C) {
        (-i * dq * aq - i * p.g * ac, (-i * dc - half_k) * ac - i * p.g * aq - i * sk1 * s)
    };

    let steps = (pulse.duration_window / h).ceil() as usize;
    let (mut aq, mut ac) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
    let mut e_in = 0.0;
    let mut e_out = 0.0;
    let mut out1 = Vec::with_capacity(steps / decimate + 1);
    let mut out2 = Vec::with_capacity(steps / decimate + 1);
    let mut inp = Vec::with_capacity(steps / decimate + 1);
    let mut times = Vec::with_capacity(steps / decimate + 1);
    for n in 0..=steps {
        let t = n as f64 * h;
        let s = env(t);
        let o1 = C::new(s, 0.0) - i * sk1 * ac;
        let o2 = -i * sk2 * ac;
        e_in += s * s;
        e_out += o1.norm_sqr() + o2.norm_sqr();
        if n % decimate == 0 {
            out1.push(o1);
            out2.push(o2);
            inp.push(C::new(s, 0.0));
            times.push(t);
        }
        if n == steps {
            break;
        }
        let sm = env(t + 0.5 * h);
        let se = env(t + h);
        let (q1, c1) = rhs(aq, ac, s);
        let (q2, c2) = rhs(aq + q1 * (0.5 * h), ac + c1 * (0.5 * h), sm);
        let (q3, c3) = rhs(aq + q2 * (0.5 * h), ac + c2 * (0.5 * h), sm);
        let (q4, c4) = rhs(aq + q3 * h, ac + c3 * h, se);
        aq += (q1 + q2 * 2.0 + q3 * 2.0 + q4) * (h / 6.0);
        ac += (c1 + c2 * 2.0 + c3 * 2.0 + c4) * (h / 6.0);
        if !(aq.norm_sqr() + ac.norm_sqr()).is_finite() {
            return Err(OracleError::StepUnstable(format!("amplitudes diverged at t = {t:e}")));
        }
    }
    let energy_error = (e_out - e_in).abs() / e_in;
    if e_out > 2.0 * e_in {
        return Err(OracleError::StepUnstable(format!("output energy grew to {:.3}× input", e_out / e_in)));
    }
    Ok(Run { out1, out2, inp, times, energy_error })
}

/// Σ x_n e^{iδ t_n}, the Riemann sum of the Fourier integral (the signals vanish at both ends).
fn spectrum(x: &[C], times: &[f64], delta: f64) -> C {
    let mut acc = C::new(0.0, 0.0);
    for (chunk_x, chunk_t) in x.chunks(1024).zip(times.chunks(1024)) {
        // Re-seed the phasor per chunk to bound the recurrence drift.
        let mut ph = C::from_polar(1.0, delta * chunk_t[0]);
        let rot =
            if chunk_t.len() > 1 { C::from_polar(1.0, delta * (chunk_t[1] - chunk_t[0])) } else { C::new(1.0, 0.0) };
        for &v in chunk_x {
            acc += v * ph;
            ph *= rot;
        }
    }
    acc
}

fn tabulate(run: &Run, pulse: &PulseSpec) -> (Vec<f64>, Vec<C>, Vec<C>) {
    let n = pulse.sample_count;
    let mut freq = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    for k in 0..n {
        let frac = if n == 1 { 0.5 } else { k as f64 / (n - 1) as f64 };
        let delta = pulse.bandwidth * (4.0 * frac - 2.0);
        let sin = spectrum(&run.inp, &run.times, delta);
        freq.push(pulse.center_freq + delta);
        r.push(spectrum(&run.out1, &run.times, delta) / sin);
        t.push(spectrum(&run.out2, &run.times, delta) / sin);
    }
    (freq, r, t)
}

/// Reflection and transmission from a time-stepped single-excitation simulation, step-halved.
pub fn td_single(p: &SystemParams, pulse: &PulseSpec) -> Result<TdSpectrum, OracleError> {
    pulse.validate()?;
    p.validate().map_err(crate::transport::TransportError::from)?;
    let w0 = pulse.center_freq;
    let rate = [(p.omega_c - w0).abs(), (p.omega_q - w0).abs(), p.g.abs(), p.kappa_total(), 6.0 * pulse.bandwidth]
        .into_iter()
        .fold(0.0_f64, f64::max);
    let h = 1.0 / (pulse.steps_per_rate * rate);
    let needed = pulse.duration_window / (h / 2.0);
    if !(needed <= MAX_STEPS) {
        return Err(OracleError::InvalidPulse(format!(
            "window needs {needed:.3e} steps at the halved step, budget is {MAX_STEPS:.0e}"
        )));
    }
    // Keep roughly 25 samples per fastest period for the Fourier sums.
    let decimate = ((pulse.steps_per_rate / 4.0).floor() as usize).max(1);

    let coarse = integrate(p, pulse, h, decimate)?;
    let fine = integrate(p, pulse, h / 2.0, 2 * decimate)?;
    let (_, rc, tc) = tabulate(&coarse, pulse);
    let (freq, r, t) = tabulate(&fine, pulse);
    let change = rc.iter().zip(&r).chain(tc.iter().zip(&t)).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(TdSpectrum { freq, r, t, step: h / 2.0, step_halving_change: change, energy_error: fine.energy_error })
}
