//! Globally adaptive Gauss–Kronrod (G7/K15) quadrature for complex-valued integrands.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("interval budget exhausted with error estimate {estimate:e} above target {target:e}")]
    Budget { estimate: f64, target: f64 },
    #[error("integrand returned a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad<T> {
    pub value: Complex<T>,
    pub error: T,
    pub intervals: usize,
}

/// One K15 panel with its embedded G7 error estimate.
pub fn gk15<T: Real, F: FnMut(T) -> Complex<T>>(f: &mut F, a: T, b: T) -> (Complex<T>, T) {
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    let fc = f(mid);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let s = f(mid - dx) + f(mid + dx);
        k = k + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            g = g + s * T::lit(WG[j / 2]);
        }
    }
    let k = k * half;
    let g = g * half;
    (k, (k - g).norm())
}

struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.partial_cmp(&o.error).unwrap_or(Ordering::Equal)
    }
}

/// Integrates over consecutive intervals `points[0]..points[1]..…`, bisecting the panel with
/// the largest error until the summed estimate is within `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<T: Real, F: FnMut(T) -> Complex<T>>(
    mut f: F,
    points: &[T],
    abs_tol: T,
    rel_tol: T,
    max_panels: usize,
) -> Result<Quad<T>, QuadError> {
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] != w[0] {
            let (value, error) = gk15(&mut f, w[0], w[1]);
            heap.push(Panel { a: w[0], b: w[1], value, error });
        }
    }
    loop {
        let mut total = Complex::new(T::zero(), T::zero());
        let mut err = T::zero();
        for p in heap.iter() {
            total = total + p.value;
            err = err + p.error;
        }
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(QuadError::NonFinite);
        }
        let target = abs_tol.max(rel_tol * total.norm());
        if err <= target {
            return Ok(Quad { value: total, error: err, intervals: heap.len() });
        }
        if heap.len() >= max_panels {
            return Err(QuadError::Budget {
                estimate: err.to_f64().unwrap_or(f64::NAN),
                target: target.to_f64().unwrap_or(f64::NAN),
            });
        }
        // Split a batch of the worst panels before re-summing.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(p) = heap.pop() else { break };
            let m = (p.a + p.b) / T::lit(2.0);
            let (vl, el) = gk15(&mut f, p.a, m);
            let (vr, er) = gk15(&mut f, m, p.b);
            heap.push(Panel { a: p.a, b: m, value: vl, error: el });
            heap.push(Panel { a: m, b: p.b, value: vr, error: er });
        }
    }
}
