//! Adaptive Gauss-Kronrod (7/15 point) quadrature.
//!
//! Global adaptive bisection in the QUADPACK style: the interval with the
//! largest error estimate is split until the summed estimate meets
//! `max(abs_tol, rel_tol * |I|)`. Integrands may be fallible; the first error
//! aborts the integration.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Absolute floor in the units of the integral being computed.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-9, abs_tol: 1e-22, max_subdivisions: 2000 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.abs_tol < 0.0 || self.max_subdivisions < 1 {
            return Err(Error::Domain(format!("invalid quadrature spec {self:?}")));
        }
        Ok(())
    }

    /// Same spec with the absolute floor expressed in the units of an
    /// integrand that is later multiplied by `scale`.
    pub fn scaled_abs(&self, scale: f64) -> Self {
        QuadratureSpec { abs_tol: self.abs_tol / scale.abs(), ..*self }
    }

    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureSpec { rel_tol: self.rel_tol * factor, abs_tol: self.abs_tol * factor, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let round_off = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(round_off);
    }
    if !value.is_finite() || !err.is_finite() {
        return Err(Error::Domain(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok((value, err))
}

/// Integrates a fallible integrand over the consecutive intervals formed by
/// `points` (at least two, ascending).
pub fn integrate_points_try<F>(mut f: F, points: &[f64], spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if points.len() < 2 {
        return Err(Error::Domain("need at least two integration points".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            if b == a {
                continue;
            }
            return Err(Error::Domain(format!("integration points not ascending: {a} > {b}")));
        }
        let (value, error) = gk15(&mut f, a, b)?;
        evaluations += 15;
        heap.push(Segment { a, b, value, error });
    }
    let mut subdivisions = heap.len();
    if heap.is_empty() {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations, subdivisions });
    }
    loop {
        let total: f64 = heap.iter().map(|s| s.value).sum();
        let err: f64 = heap.iter().map(|s| s.error).sum();
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if err <= target {
            return Ok(Quadrature { value: total, error: err, evaluations, subdivisions });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureFailure { estimate: total, error: err, subdivisions });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 4.0 * f64::EPSILON * mid.abs().max(1e-300) {
            // interval exhausted at machine resolution
            let total_err = err;
            return Err(Error::QuadratureFailure { estimate: total, error: total_err, subdivisions });
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, worst.b)?;
        evaluations += 30;
        subdivisions += 1;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
}

pub fn integrate_try<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_points_try(f, &[a, b], spec)
}

pub fn integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: FnMut(f64) -> f64,
{
    integrate_points_try(|x| Ok(f(x)), &[a, b], spec)
}

pub fn integrate_points<F>(mut f: F, points: &[f64], spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: FnMut(f64) -> f64,
{
    integrate_points_try(|x| Ok(f(x)), points, spec)
}

/// Iterated integral `int_{x0}^{x1} int_{ylo(x)}^{yhi(x)} f(x, y) dy dx`.
///
/// The inner integrals run at a tenth of the outer tolerance so their noise
/// stays below the outer error estimate.
pub fn integrate_2d_try<F, L, H>(
    mut f: F,
    x0: f64,
    x1: f64,
    mut y_lo: L,
    mut y_hi: H,
    spec: &QuadratureSpec,
) -> Result<Quadrature>
where
    F: FnMut(f64, f64) -> Result<f64>,
    L: FnMut(f64) -> Result<f64>,
    H: FnMut(f64) -> Result<f64>,
{
    let inner_spec = spec.tightened(0.1);
    let mut inner_evals = 0usize;
    let mut outer = integrate_try(
        |x| {
            let (lo, hi) = (y_lo(x)?, y_hi(x)?);
            if hi <= lo {
                return Ok(0.0);
            }
            let q = integrate_try(|y| f(x, y), lo, hi, &inner_spec)?;
            inner_evals += q.evaluations;
            Ok(q.value)
        },
        x0,
        x1,
        spec,
    )?;
    outer.evaluations += inner_evals;
    Ok(outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| 3.0 * x * x + 2.0 * x + 1.0, 0.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(q.value, 14.0, max_relative = 1e-14);
    }

    #[test]
    fn peaked_lorentzian() {
        // int_0^1 w / (w^2 + x^2) dx = atan(1/w)
        let w = 1e-5;
        let q = integrate(|x| w / (w * w + x * x), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(q.value, (1.0 / w).atan(), max_relative = 1e-9);
        assert!(q.error <= 1e-9 * q.value);
    }

    #[test]
    fn endpoint_sqrt_singularity() {
        let q = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(q.value, 2.0, max_relative = 1e-8);
    }

    #[test]
    fn failure_reported() {
        let spec = QuadratureSpec { rel_tol: 1e-14, abs_tol: 0.0, max_subdivisions: 3 };
        let r = integrate(|x| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, &spec);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
        assert!(integrate(|x| x, 0.0, 1.0, &QuadratureSpec { rel_tol: 0.0, ..spec }).is_err());
    }

    #[test]
    fn integrand_error_propagates() {
        let r = integrate_try(|x| if x > 0.5 { Err(Error::SingularPoint) } else { Ok(x) }, 0.0, 1.0, &QuadratureSpec::default());
        assert_eq!(r.unwrap_err(), Error::SingularPoint);
    }

    #[test]
    fn two_dimensional_disk_area() {
        let q = integrate_2d_try(
            |_, _| Ok(1.0),
            -1.0,
            1.0,
            |x| Ok(-(1.0 - x * x).max(0.0).sqrt()),
            |x| Ok((1.0 - x * x).max(0.0).sqrt()),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_relative_eq!(q.value, std::f64::consts::PI, max_relative = 1e-8);
    }

    proptest::proptest! {
        #[test]
        fn splitting_is_additive(w in 1e-4f64..1.0, cut in 0.01f64..0.99) {
            let f = |x: f64| 1.0 / (w + x * x);
            let spec = QuadratureSpec::default();
            let whole = integrate(f, 0.0, 1.0, &spec).unwrap().value;
            let left = integrate(f, 0.0, cut, &spec).unwrap().value;
            let right = integrate(f, cut, 1.0, &spec).unwrap().value;
            proptest::prop_assert!(((left + right) / whole - 1.0).abs() < 1e-9);
        }
    }
}
