//! Exact per-length capacitances of 2D electrode pairs.
//!
//! Inputs are lengths in any consistent unit (the crate uses mm) and an
//! absolute permittivity in F/m; results are F/m. Every formula here is
//! scale invariant.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Relative guard band below which two electrodes count as touching.
const TOUCH_GUARD: f64 = 1e-12;

/// `acosh(1 + x)` for `x >= 0`, accurate for small `x`.
pub(crate) fn acosh1p(x: f64) -> f64 {
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

/// Cylinder of radius `r` at distance `s` from an infinite plane.
///
/// Evaluates `2 pi eps / ln(R / (R + s - sqrt((2R + s) s)))` through the
/// identity `R / (R + s - sqrt(...)) = 1 + s/R + sqrt((2R + s) s)/R`, which
/// avoids the cancellation in the denominator for small gaps.
pub fn cap_plane_cylinder(r: f64, s: f64, eps: f64) -> Result<f64> {
    if !(r > 0.0) || !(s > 0.0) || !r.is_finite() || !s.is_finite() {
        return Err(Error::Domain(format!("plane-cylinder needs R > 0 and s > 0 (R={r}, s={s})")));
    }
    let log_arg_m1 = s / r + ((2.0 * r + s) * s).sqrt() / r;
    Ok(2.0 * PI * eps / log_arg_m1.ln_1p())
}

/// Inner cylinder `r1` inside outer cylinder `r2` with centre offset `e`.
///
/// This is the classic two-square-root logarithmic form. Both square-root
/// differences are rationalised and the discriminants are factored through
/// the clearance `g = r2 - r1 - e`, so the concentric case `e = 0` and the
/// nearly touching case stay well conditioned.
pub fn cap_eccentric_cylinders(r1: f64, r2: f64, e: f64, eps: f64) -> Result<f64> {
    if !(r1 > 0.0 && r2 > r1 && e >= 0.0) || !r2.is_finite() {
        return Err(Error::Geometry(format!("need r2 > r1 > 0 and e >= 0 (r1={r1}, r2={r2}, e={e})")));
    }
    eccentric(r1, r2, e, r2 - r1 - e, eps)
}

/// Eccentric pair with the clearance `g = r2 - r1 - e` given directly.
fn eccentric(r1: f64, r2: f64, e: f64, g: f64, eps: f64) -> Result<f64> {
    if g <= TOUCH_GUARD * r1 {
        return Err(Error::Geometry(format!("cylinders touch or intersect (clearance {g:e})")));
    }
    let a = r2 * r2 - r1 * r1 + e * e;
    let b = (r1 + g) * (r2 + e) - r1 * r1;
    let disc_a = g * (r2 - e + r1) * (r2 + e - r1) * (r2 + e + r1);
    let disc_b = g * (r2 + r1 + e) * (r2 - r1 + e) * (r2 + r1 - e);
    let ratio = (r2 / r1) * (b + disc_b.sqrt()) / (a + disc_a.sqrt());
    let log = ratio.ln();
    if !(log > 0.0) {
        return Err(Error::Geometry(format!("clearance {g:e} below representable resolution")));
    }
    Ok(2.0 * PI * eps / log)
}

/// Two separated convex cylinders with surface gap `s`.
pub fn cap_external_cylinders(r1: f64, r2: f64, s: f64, eps: f64) -> Result<f64> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::Geometry(format!("radii must be positive (r1={r1}, r2={r2})")));
    }
    if !(s > TOUCH_GUARD * r1.min(r2)) {
        return Err(Error::Geometry(format!("cylinders touch or intersect (gap {s:e})")));
    }
    let x = s * (2.0 * r1 + 2.0 * r2 + s) / (2.0 * r1 * r2);
    Ok(2.0 * PI * eps / acosh1p(x))
}

/// Centre distance of a ball of radius `r_ball` and a partner with signed
/// radius `r_partner` (negative when concave) at surface gap `s`:
/// `|r_ball + r_partner + s|`.
pub fn center_distance(r_ball: f64, r_partner: f64, s: f64) -> f64 {
    (r_ball + r_partner + s).abs()
}

/// Per-length capacitance of the true circular pair in one section plane.
///
/// Concave partners give the eccentric (one inside the other) problem,
/// convex partners the external two-cylinder problem, an infinite radius
/// the cylinder over plane.
pub fn cap_true_pair(r_ball: f64, r_partner: f64, s: f64, eps: f64) -> Result<f64> {
    if r_partner.is_infinite() {
        cap_plane_cylinder(r_ball, s, eps)
    } else if r_partner < 0.0 {
        let r2 = -r_partner;
        let e = center_distance(r_ball, r_partner, s);
        if r_ball + s >= r2 {
            return Err(Error::Geometry("concave partner cannot contain the ball".into()));
        }
        if !(r_ball > 0.0 && s > 0.0) {
            return Err(Error::Geometry(format!("need r_ball > 0 and s > 0 (r_ball={r_ball}, s={s})")));
        }
        // the clearance is the gap itself; r2 - r1 - e would cancel
        eccentric(r_ball, r2, e, s, eps)
    } else {
        cap_external_cylinders(r_ball, r_partner, s, eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const EPS: f64 = 2.2 * crate::VACUUM_PERMITTIVITY;

    // Textbook inverse-hyperbolic forms, written independently of the
    // factored expressions above.
    fn eccentric_acosh(r1: f64, r2: f64, e: f64) -> f64 {
        2.0 * PI * EPS / ((r1 * r1 + r2 * r2 - e * e) / (2.0 * r1 * r2)).acosh()
    }

    #[test]
    fn plane_cylinder_matches_printed_form() {
        let (r, s): (f64, f64) = (3.17, 0.05);
        let printed = 2.0 * PI * EPS / (r / (r + s - ((2.0 * r + s) * s).sqrt())).ln();
        assert_relative_eq!(cap_plane_cylinder(r, s, EPS).unwrap(), printed, max_relative = 1e-12);
    }

    #[test]
    fn plane_cylinder_monotone() {
        let c1 = cap_plane_cylinder(3.17, 1e-3, EPS).unwrap();
        let c2 = cap_plane_cylinder(6.34, 1e-3, EPS).unwrap();
        assert!(c2 > c1);
        let mut last = f64::INFINITY;
        for k in 0..50 {
            let s = 1e-5 * 10f64.powf(k as f64 / 10.0);
            let c = cap_plane_cylinder(3.17, s, EPS).unwrap();
            assert!(c < last && c.is_finite() && c > 0.0);
            last = c;
        }
    }

    #[test]
    fn plane_cylinder_small_gap_asymptote() {
        let r: f64 = 3.17;
        let s = 1e-8 * r;
        let asym = PI * EPS * (2.0 * r / s).sqrt();
        assert_relative_eq!(cap_plane_cylinder(r, s, EPS).unwrap() / asym, 1.0, max_relative = 1e-7);
    }

    #[test]
    fn plane_cylinder_domain_errors() {
        assert!(cap_plane_cylinder(1.0, 0.0, EPS).is_err());
        assert!(cap_plane_cylinder(-1.0, 0.1, EPS).is_err());
    }

    #[test]
    fn eccentric_concentric_limit() {
        let c = cap_eccentric_cylinders(1.0, 2.5, 0.0, EPS).unwrap();
        assert_relative_eq!(c, 2.0 * PI * EPS / 2.5f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn eccentric_matches_acosh_form() {
        for &(r1, r2, e) in &[(4.0, 4.24, 0.2), (4.0, 23.25, 19.0), (1.0, 3.0, 1.5), (2.0, 2.1, 0.01)] {
            assert_relative_eq!(
                cap_eccentric_cylinders(r1, r2, e, EPS).unwrap(),
                eccentric_acosh(r1, r2, e),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn eccentric_plane_limit() {
        let (r1, s) = (4.0, 1e-3);
        let r2 = 1e6 * r1;
        let e = r2 - r1 - s;
        let ecc = cap_eccentric_cylinders(r1, r2, e, EPS).unwrap();
        let plane = cap_plane_cylinder(r1, s, EPS).unwrap();
        assert_relative_eq!(ecc, plane, max_relative = 1e-4);
    }

    #[test]
    fn eccentric_touching_rejected() {
        assert!(cap_eccentric_cylinders(1.0, 2.0, 1.0, EPS).is_err());
        assert!(cap_eccentric_cylinders(1.0, 2.0, 1.0 - 1e-13, EPS).is_err());
        assert!(cap_eccentric_cylinders(1.0, 2.0, 1.5, EPS).is_err());
        assert!(cap_eccentric_cylinders(2.0, 1.0, 0.0, EPS).is_err());
    }

    #[test]
    fn external_plane_limit_and_symmetry() {
        let a = cap_external_cylinders(4.0, 15.25, 1e-3, EPS).unwrap();
        let b = cap_external_cylinders(15.25, 4.0, 1e-3, EPS).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-14);
        let far = cap_external_cylinders(4.0, 4e7, 1e-3, EPS).unwrap();
        assert_relative_eq!(far, cap_plane_cylinder(4.0, 1e-3, EPS).unwrap(), max_relative = 1e-6);
        // two identical wires: pi eps / acosh(d / 2a)
        let (a_r, s) = (1.0, 0.3);
        let d = 2.0 * a_r + s;
        assert_relative_eq!(
            cap_external_cylinders(a_r, a_r, s, EPS).unwrap(),
            PI * EPS / (d / (2.0 * a_r)).acosh(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn center_distance_matches_geometry() {
        // concave groove: centres separated by r_g - r_re - s
        assert_relative_eq!(center_distance(4.0, -4.24, 0.001), 0.239, max_relative = 1e-12);
        // convex raceway: centres separated by r_re + r_rw + s
        assert_relative_eq!(center_distance(4.0, 15.25, 0.001), 19.251, max_relative = 1e-12);
    }

    #[test]
    fn both_forms_positive_and_decreasing_on_table_geometries() {
        for &partner in &[-4.16, -4.24, 15.25, -23.25] {
            let r_eff = crate::geometry::effective_radius(4.0, partner).unwrap();
            let mut last = (f64::INFINITY, f64::INFINITY);
            // the groove clearance (r_g - r_re) caps the feasible gap at 0.16 mm
            for k in 0..=50 {
                let s = 1e-5 * 10f64.powf(4.0 * k as f64 / 50.0);
                let true_c = cap_true_pair(4.0, partner, s, EPS).unwrap();
                let eff_c = cap_plane_cylinder(r_eff, s, EPS).unwrap();
                assert!(true_c > 0.0 && eff_c > 0.0);
                assert!(true_c < last.0 && eff_c < last.1, "partner {partner} s {s}");
                last = (true_c, eff_c);
            }
        }
    }
}
