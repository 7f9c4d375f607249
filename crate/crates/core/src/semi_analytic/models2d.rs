//! Per-length models on one section plane.

use std::f64::consts::FRAC_PI_2;

use super::profile::{GapProfile, HeightModel};
use crate::analytic2d::theta_limit;
use crate::closed_form::cap_plane_cylinder;
use crate::error::{Error, Result};
use crate::geometry::{DimensionlessSection, SectionPlane};
use crate::method::{CapacitanceResult, Diagnostics, Method};
use crate::quadrature::{integrate, integrate_try, Quadrature, QuadratureSpec};

fn result(method: Method, q: Quadrature) -> CapacitanceResult {
    CapacitanceResult::with_diagnostics(
        method,
        q.value,
        Diagnostics { error_estimate: q.error, work: q.evaluations },
    )
}

/// Cylinder over plane with the effective radius, in closed form.
pub fn model_a_closed_form(r_eff: f64, gap: f64, eps: f64) -> Result<CapacitanceResult> {
    Ok(CapacitanceResult::exact(Method::A2D, cap_plane_cylinder(r_eff, gap, eps)?))
}

/// Effective-radius plate integral over `[-half_width, half_width]`.
pub fn cap2d_model_a(
    r_eff: f64,
    gap: f64,
    eps: f64,
    height: HeightModel,
    half_width: f64,
    spec: &QuadratureSpec,
) -> Result<CapacitanceResult> {
    let profile = GapProfile::effective(r_eff, gap, height, half_width)?;
    Ok(result(Method::A2D, profile.capacitance(eps, spec)?))
}

/// Integration limits of one section: polar angle on the ball, race angle
/// about the raceway centre, and the chord half width for parallel slicing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionLimits {
    pub theta: f64,
    pub psi: f64,
    pub chord: f64,
}

/// Groove edge in plane I; in plane II `pi/2` for a concave raceway and the
/// tangent ray for a convex one.
pub fn section_limits(section: &DimensionlessSection) -> Result<SectionLimits> {
    let (tau, sigma) = (section.tau(), section.sigma());
    match section.plane() {
        SectionPlane::SectionI => {
            let half = 0.5 * section.beta();
            Ok(SectionLimits { theta: theta_limit(section)?, psi: (half / tau).asin(), chord: half })
        }
        SectionPlane::SectionII if tau > 0.0 => {
            Ok(SectionLimits { theta: FRAC_PI_2, psi: (sigma / tau).acos(), chord: 1.0 })
        }
        SectionPlane::SectionII => {
            let ratio = tau / sigma;
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(Error::TangencyNotFound(format!("no tangent ray for tau={tau}, sigma={sigma}")));
            }
            Ok(SectionLimits { theta: ratio.asin(), psi: ratio.acos(), chord: 1.0 })
        }
    }
}

/// Gap along the ray from the ball centre at polar angle `theta`.
pub fn ray_gap(section: &DimensionlessSection, theta: f64) -> Result<f64> {
    let (tau, sigma, alpha) = (section.tau(), section.sigma(), section.alpha());
    let st = theta.sin();
    let reach = (tau - sigma * st) * (tau + sigma * st);
    if reach < 0.0 {
        return Err(Error::RayMissesRaceway { theta, phi: 0.0 });
    }
    let half = (0.5 * theta).sin();
    let bend = sigma * sigma * st * st / (tau.abs() + reach.sqrt());
    Ok(alpha + 2.0 * sigma * half * half - bend.copysign(tau))
}

/// Gap from the raceway point at race angle `psi` to the ball, along the
/// ray through the ball centre.
fn race_point_gap(section: &DimensionlessSection, psi: f64) -> f64 {
    let (tau, sigma, alpha) = (section.tau(), section.sigma(), section.alpha());
    let half = (0.5 * psi).sin();
    let excess = alpha * (2.0 + alpha) + 4.0 * sigma * tau * half * half;
    excess / ((1.0 + excess).sqrt() + 1.0)
}

/// Parallel slicing: vertical gap between the true arcs.
pub fn cap2d_model_b(section: &DimensionlessSection, eps: f64, spec: &QuadratureSpec) -> Result<CapacitanceResult> {
    let lim = section_limits(section)?;
    let profile = GapProfile::true_section(1.0, -section.tau(), section.alpha(), lim.chord)?;
    Ok(result(Method::B, profile.capacitance(eps, spec)?))
}

/// Radial gap with the raceway arc as area element.
pub fn cap2d_model_c(section: &DimensionlessSection, eps: f64, spec: &QuadratureSpec) -> Result<CapacitanceResult> {
    let lim = section_limits(section)?;
    let arc = section.tau().abs();
    let q = integrate(|psi| arc / race_point_gap(section, psi), 0.0, lim.psi, &spec.scaled_abs(2.0 * eps))?;
    Ok(result(Method::C, Quadrature { value: 2.0 * eps * q.value, error: 2.0 * eps * q.error, ..q }))
}

/// Radial gap with the ball arc as area element.
pub fn cap2d_model_d(section: &DimensionlessSection, eps: f64, spec: &QuadratureSpec) -> Result<CapacitanceResult> {
    let lim = section_limits(section)?;
    let q = integrate_try(|t| Ok(1.0 / ray_gap(section, t)?), 0.0, lim.theta, &spec.scaled_abs(2.0 * eps))?;
    Ok(result(Method::D, Quadrature { value: 2.0 * eps * q.value, error: 2.0 * eps * q.error, ..q }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic2d::model_f;
    use crate::geometry::{BearingContactGeometry, RingSide};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const EPS: f64 = 2.2 * crate::VACUUM_PERMITTIVITY;

    fn section(side: RingSide, plane: SectionPlane, gap: f64) -> DimensionlessSection {
        BearingContactGeometry::bearing_6205_c3(side, gap, 2.2).unwrap().to_dimensionless(plane).unwrap()
    }

    fn sections(gap: f64) -> Vec<DimensionlessSection> {
        let mut v = Vec::new();
        for side in [RingSide::Inner, RingSide::Outer] {
            for plane in [SectionPlane::SectionI, SectionPlane::SectionII] {
                v.push(section(side, plane, gap));
            }
        }
        v
    }

    #[test]
    fn taylor_unbounded_closed_form() {
        let (r, s) = (70.0, 1e-3);
        let w = 1e4;
        let c = cap2d_model_a(r, s, EPS, HeightModel::Taylor, w, &QuadratureSpec::default()).unwrap().value;
        let anti = 2.0 * EPS * (2.0 * r / s).sqrt() * (w / (2.0 * r * s).sqrt()).atan();
        assert_relative_eq!(c, anti, max_relative = 1e-9);
        let inf = EPS * PI * (2.0 * r / s).sqrt();
        assert!((c / inf - 1.0).abs() < 1e-3);
    }

    #[test]
    fn model_a_decreasing_in_gap() {
        let spec = QuadratureSpec::default();
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let s = 1e-4 * 1.25f64.powi(k);
            let c = cap2d_model_a(3.17, s, EPS, HeightModel::Exact, 3.17, &spec).unwrap().value;
            assert!(c < last);
            last = c;
        }
    }

    #[test]
    fn ray_gap_hits_circle() {
        for s in sections(2e-3) {
            let lim = section_limits(&s).unwrap();
            for i in 0..=20 {
                let t = lim.theta * i as f64 / 20.0;
                let h = ray_gap(&s, t).unwrap();
                let p = [(1.0 + h) * t.sin(), (1.0 + h) * t.cos() + s.sigma()];
                assert_relative_eq!(p[0].hypot(p[1]), s.tau().abs(), max_relative = 1e-12);
                assert!(h > 0.0);
            }
            assert_eq!(ray_gap(&s, 0.0).unwrap(), s.alpha());
        }
    }

    #[test]
    fn limits_agree_between_parametrisations() {
        for s in sections(1e-3) {
            let lim = section_limits(&s).unwrap();
            // race point at psi maps to the ball polar angle theta
            let (tau, sigma) = (s.tau(), s.sigma());
            let p = [tau * lim.psi.sin(), tau * lim.psi.cos() - sigma];
            assert_relative_eq!(p[0].abs().atan2(p[1]), lim.theta, max_relative = 1e-10);
        }
        let inner = section(RingSide::Inner, SectionPlane::SectionII, 1e-3);
        let lim = section_limits(&inner).unwrap();
        assert!(ray_gap(&inner, lim.theta * (1.0 + 1e-6)).is_err());
    }

    #[test]
    fn model_b_symmetric_halves() {
        let s = section(RingSide::Outer, SectionPlane::SectionI, 1e-3);
        let half = cap2d_model_b(&s, EPS, &QuadratureSpec::default()).unwrap().value;
        let lim = section_limits(&s).unwrap();
        let p = GapProfile::true_section(1.0, -s.tau(), s.alpha(), lim.chord).unwrap();
        let full = integrate(|x| EPS / p.height(x), -lim.chord, lim.chord, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(half, full.value, max_relative = 1e-12);
    }

    #[test]
    fn model_b_matches_dense_trapezoid_at_large_gap() {
        let s = section(RingSide::Outer, SectionPlane::SectionI, 0.15);
        let lim = section_limits(&s).unwrap();
        let p = GapProfile::true_section(1.0, -s.tau(), s.alpha(), lim.chord).unwrap();
        let n = 1_000_000;
        let dx = 2.0 * lim.chord / n as f64;
        let mut sum = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            sum += w / p.height(-lim.chord + i as f64 * dx);
        }
        let b = cap2d_model_b(&s, EPS, &QuadratureSpec::default()).unwrap().value;
        assert_relative_eq!(b, EPS * sum * dx, max_relative = 1e-9);
        assert!(b < model_f(&s, EPS).unwrap().value);
    }

    #[test]
    fn model_c_d_theta_form_consistent() {
        // model D in the race angle: dTheta = |tau| |tau - sigma cos psi| / |P|^2 dpsi
        let spec = QuadratureSpec::default();
        for s in sections(1e-3) {
            let lim = section_limits(&s).unwrap();
            let (tau, sigma) = (s.tau(), s.sigma());
            let via_psi = integrate(
                |psi| {
                    let p2 = tau * tau - 2.0 * sigma * tau * psi.cos() + sigma * sigma;
                    tau.abs() * (tau - sigma * psi.cos()).abs() / (p2 * race_point_gap(&s, psi))
                },
                0.0,
                lim.psi,
                &spec,
            )
            .unwrap()
            .value;
            let d = cap2d_model_d(&s, EPS, &spec).unwrap().value;
            assert_relative_eq!(2.0 * EPS * via_psi, d, max_relative = 1e-8);
        }
    }

    #[test]
    fn orderings_against_model_f() {
        let spec = QuadratureSpec::default();
        for gap in [1e-4, 5e-4, 1e-3, 2e-3, 5e-3] {
            for s in sections(gap) {
                let f = model_f(&s, EPS).unwrap().value;
                let b = cap2d_model_b(&s, EPS, &spec).unwrap().value;
                let c = cap2d_model_c(&s, EPS, &spec).unwrap().value;
                let d = cap2d_model_d(&s, EPS, &spec).unwrap().value;
                assert!(b < f, "B {b} vs F {f} for {s:?}");
                assert!(d <= f && f <= c, "D {d} F {f} C {c} for {s:?}");
            }
        }
    }

    #[test]
    fn model_d_vanishes_with_window() {
        let s = DimensionlessSection::new(1.06, 2.5e-4, 1e-6, SectionPlane::SectionI).unwrap();
        let d = cap2d_model_d(&s, EPS, &QuadratureSpec::default()).unwrap().value;
        assert!(d < 1e-2 * EPS);
    }
}
