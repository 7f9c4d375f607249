use crate::error::{Error, Result};
use crate::quadrature::{integrate_points, Quadrature, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightModel {
    Taylor,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    TaylorEffective,
    ExactEffective,
    TrueSection,
}

/// `r - sqrt(r^2 - x^2)` without cancellation at small `x`.
fn sag(r: f64, x: f64) -> f64 {
    x * x / (r + ((r - x) * (r + x)).sqrt())
}

/// Gap height `h(x)` across one section, symmetric about the contact centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapProfile {
    kind: ProfileKind,
    gap: f64,
    /// Effective radius, or the ball radius for a true section.
    radius: f64,
    /// Signed partner radius for a true section (negative when concave).
    partner: f64,
    half_width: f64,
}

impl GapProfile {
    pub fn effective(radius: f64, gap: f64, height: HeightModel, half_width: f64) -> Result<Self> {
        if !(radius > 0.0 && gap > 0.0 && half_width > 0.0) {
            return Err(Error::Domain(format!("need R, s, half width > 0 (R={radius}, s={gap}, w={half_width})")));
        }
        let kind = match height {
            HeightModel::Taylor => ProfileKind::TaylorEffective,
            HeightModel::Exact => {
                if half_width > radius {
                    return Err(Error::Domain(format!("half width {half_width} exceeds radius {radius}")));
                }
                ProfileKind::ExactEffective
            }
        };
        Ok(GapProfile { kind, gap, radius, partner: f64::INFINITY, half_width })
    }

    /// Vertical gap between the true ball arc and the true partner arc.
    pub fn true_section(ball_radius: f64, partner: f64, gap: f64, half_width: f64) -> Result<Self> {
        if !(ball_radius > 0.0 && gap > 0.0 && half_width > 0.0) || partner == 0.0 {
            return Err(Error::Domain("true section needs positive radii, gap and width".into()));
        }
        if half_width > ball_radius.min(partner.abs()) {
            return Err(Error::Geometry(format!("arcs end before the half width {half_width}")));
        }
        let p = GapProfile { kind: ProfileKind::TrueSection, gap, radius: ball_radius, partner, half_width };
        if !(p.height(half_width) > 0.0) {
            return Err(Error::Geometry("arcs cross inside the integration window".into()));
        }
        Ok(p)
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn domain(&self) -> (f64, f64) {
        (-self.half_width, self.half_width)
    }

    pub fn height(&self, x: f64) -> f64 {
        let x = x.abs();
        match self.kind {
            ProfileKind::TaylorEffective => self.gap + x * x / (2.0 * self.radius),
            ProfileKind::ExactEffective => self.gap + sag(self.radius, x),
            ProfileKind::TrueSection => {
                let partner = if self.partner.is_infinite() { 0.0 } else { sag(self.partner.abs(), x) };
                self.gap + sag(self.radius, x) + partner.copysign(self.partner)
            }
        }
    }

    /// `int eps / h dx` over the domain (per-length capacitance when `x` and
    /// `h` share a unit).
    pub fn capacitance(&self, eps: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
        let spec = spec.scaled_abs(2.0 * eps);
        let q = integrate_points(|x| 1.0 / self.height(x), &[0.0, self.half_width], &spec)?;
        Ok(Quadrature { value: 2.0 * eps * q.value, error: 2.0 * eps * q.error, ..q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn minimum_at_centre() {
        let p = GapProfile::true_section(4.0, -4.24, 1e-3, 2.41).unwrap();
        assert_eq!(p.height(0.0), 1e-3);
        let e = GapProfile::effective(70.0, 1e-3, HeightModel::Exact, 2.0).unwrap();
        assert_eq!(e.height(0.0), 1e-3);
        assert!(e.height(1.0) > e.height(0.5));
    }

    #[test]
    fn true_section_matches_circles() {
        let (r1, r2, s) = (4.0_f64, 4.24_f64, 2e-3_f64);
        let p = GapProfile::true_section(r1, -r2, s, 2.0).unwrap();
        let x = 1.3;
        // ball circle bottom at z = 0, concave partner circle bottom at z = -s
        let ball = r1 - (r1 * r1 - x * x).sqrt();
        let race = -s + r2 - (r2 * r2 - x * x).sqrt();
        assert_relative_eq!(p.height(x), ball - race, max_relative = 1e-12);
        let q = GapProfile::true_section(r1, 15.25, s, 2.0).unwrap();
        let convex = -s - (15.25 - (15.25_f64.powi(2) - x * x).sqrt());
        assert_relative_eq!(q.height(x), ball - convex, max_relative = 1e-12);
        let flat = GapProfile::true_section(r1, f64::INFINITY, s, 2.0).unwrap();
        assert_relative_eq!(flat.height(x), s + ball, max_relative = 1e-12);
    }

    #[test]
    fn invalid_profiles() {
        assert!(GapProfile::effective(3.0, 1e-3, HeightModel::Exact, 3.5).is_err());
        assert!(GapProfile::effective(3.0, 0.0, HeightModel::Taylor, 1.0).is_err());
        assert!(GapProfile::true_section(4.0, -4.24, 1e-3, 4.5).is_err());
    }

    proptest! {
        #[test]
        fn taylor_height_never_exceeds_exact(r in 1.0f64..200.0, s in 1e-5f64..1e-2, f in 0.0f64..1.0) {
            let x = f * r;
            let t = GapProfile::effective(r, s, HeightModel::Taylor, r).unwrap();
            let e = GapProfile::effective(r, s, HeightModel::Exact, r).unwrap();
            prop_assert!(t.height(x) <= e.height(x));
            prop_assert!(t.height(x) > 0.0);
        }
    }
}
