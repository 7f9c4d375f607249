//! Contact geometry, sign conventions and the dimensionless section form.
//!
//! Dimensional radii are stored positive together with a [`RingSide`]. The
//! signed conventions only appear in two places: [`BearingContactGeometry::partner_radius`]
//! (concave partner negative, as used for effective radii) and
//! [`BearingContactGeometry::to_dimensionless`] (inner raceway in section
//! plane II gets a negative `tau`).

use crate::error::{Error, Result};
use crate::VACUUM_PERMITTIVITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSide {
    Inner,
    Outer,
}

/// Section plane I contains the groove curvature (axial direction), plane II
/// the raceway curvature of revolution (rolling direction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionPlane {
    SectionI,
    SectionII,
}

/// `1 / (1/r1 + 1/r2)` with signed radii (concave surfaces negative).
///
/// An infinite radius stands for a plane and leaves the other radius
/// unchanged.
pub fn effective_radius(r1: f64, r2: f64) -> Result<f64> {
    if r1 == 0.0 || r2 == 0.0 {
        return Err(Error::ZeroRadius);
    }
    let curvature = 1.0 / r1 + 1.0 / r2;
    if curvature == 0.0 {
        return Err(Error::DegeneratePair { r1, r2 });
    }
    Ok(1.0 / curvature)
}

/// Plain dimensional inputs, validated into a [`BearingContactGeometry`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactParams {
    pub ball_radius: f64,
    pub groove_radius: f64,
    pub raceway_radius: f64,
    pub ring_side: RingSide,
    pub groove_width: f64,
    pub ring_width: f64,
    pub gap: f64,
    pub permittivity: f64,
}

impl ContactParams {
    /// 6205-C3 deep groove ball bearing, Table-style data in mm.
    pub fn bearing_6205_c3(side: RingSide) -> Self {
        let (groove_radius, raceway_radius, groove_width) = match side {
            RingSide::Inner => (4.16, 15.25, 5.03),
            RingSide::Outer => (4.24, 23.25, 4.82),
        };
        ContactParams {
            ball_radius: 4.0,
            groove_radius,
            raceway_radius,
            ring_side: side,
            groove_width,
            ring_width: 15.0,
            gap: 1e-3,
            permittivity: 2.2 * VACUUM_PERMITTIVITY,
        }
    }

    pub fn build(self) -> Result<BearingContactGeometry> {
        BearingContactGeometry::new(self)
    }
}

/// One ball/raceway contact. Lengths in mm, permittivity in F/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BearingContactGeometry {
    p: ContactParams,
}

impl BearingContactGeometry {
    pub fn new(p: ContactParams) -> Result<Self> {
        let finite = [
            p.ball_radius,
            p.groove_radius,
            p.raceway_radius,
            p.groove_width,
            p.ring_width,
            p.gap,
            p.permittivity,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGeometry("non-finite parameter".into()));
        }
        if p.ball_radius <= 0.0 {
            return Err(Error::InvalidGeometry("ball radius must be positive".into()));
        }
        if p.groove_radius <= p.ball_radius {
            return Err(Error::InvalidGeometry("groove radius must exceed ball radius".into()));
        }
        if p.raceway_radius <= 0.0 {
            return Err(Error::InvalidGeometry("raceway radius must be positive".into()));
        }
        if p.ring_side == RingSide::Outer && p.raceway_radius <= p.ball_radius + p.gap {
            return Err(Error::InvalidGeometry("outer raceway radius cannot contain the ball".into()));
        }
        if p.gap <= 0.0 {
            return Err(Error::InvalidGeometry("gap must be positive (unloaded contact)".into()));
        }
        if p.groove_width <= 0.0 || p.groove_width >= 2.0 * p.groove_radius {
            return Err(Error::InvalidGeometry("groove width must lie in (0, 2 r_g)".into()));
        }
        if p.ring_width < p.groove_width {
            return Err(Error::InvalidGeometry("ring width must be at least the groove width".into()));
        }
        if p.permittivity <= 0.0 {
            return Err(Error::InvalidGeometry("permittivity must be positive".into()));
        }
        Ok(BearingContactGeometry { p })
    }

    pub fn bearing_6205_c3(side: RingSide, gap_mm: f64, relative_permittivity: f64) -> Result<Self> {
        ContactParams {
            gap: gap_mm,
            permittivity: relative_permittivity * VACUUM_PERMITTIVITY,
            ..ContactParams::bearing_6205_c3(side)
        }
        .build()
    }

    pub fn params(&self) -> ContactParams {
        self.p
    }

    pub fn with_gap(&self, gap: f64) -> Result<Self> {
        ContactParams { gap, ..self.p }.build()
    }

    pub fn ball_radius(&self) -> f64 {
        self.p.ball_radius
    }
    pub fn groove_radius(&self) -> f64 {
        self.p.groove_radius
    }
    pub fn raceway_radius(&self) -> f64 {
        self.p.raceway_radius
    }
    pub fn ring_side(&self) -> RingSide {
        self.p.ring_side
    }
    pub fn groove_width(&self) -> f64 {
        self.p.groove_width
    }
    pub fn ring_width(&self) -> f64 {
        self.p.ring_width
    }
    pub fn gap(&self) -> f64 {
        self.p.gap
    }
    pub fn permittivity(&self) -> f64 {
        self.p.permittivity
    }

    /// Groove radius over ball diameter.
    pub fn race_conformity(&self) -> f64 {
        self.p.groove_radius / (2.0 * self.p.ball_radius)
    }

    /// Signed radius of the raceway in the given plane: negative when the
    /// raceway is concave towards the ball.
    pub fn partner_radius(&self, plane: SectionPlane) -> f64 {
        match (plane, self.p.ring_side) {
            (SectionPlane::SectionI, _) => -self.p.groove_radius,
            (SectionPlane::SectionII, RingSide::Inner) => self.p.raceway_radius,
            (SectionPlane::SectionII, RingSide::Outer) => -self.p.raceway_radius,
        }
    }

    pub fn effective_radii(&self) -> Result<EffectiveRadii> {
        let r_x = effective_radius(self.p.ball_radius, self.partner_radius(SectionPlane::SectionII))?;
        let r_y = effective_radius(self.p.ball_radius, self.partner_radius(SectionPlane::SectionI))?;
        EffectiveRadii::new(r_x, r_y)
    }

    pub fn effective_radius(&self, plane: SectionPlane) -> Result<f64> {
        let r = effective_radius(self.p.ball_radius, self.partner_radius(plane))?;
        if r <= 0.0 {
            return Err(Error::InvalidGeometry(format!("non-positive effective radius {r} in {plane:?}")));
        }
        Ok(r)
    }

    pub fn to_dimensionless(&self, plane: SectionPlane) -> Result<DimensionlessSection> {
        let r = self.p.ball_radius;
        let tau = match (plane, self.p.ring_side) {
            (SectionPlane::SectionI, _) => self.p.groove_radius / r,
            (SectionPlane::SectionII, RingSide::Inner) => -self.p.raceway_radius / r,
            (SectionPlane::SectionII, RingSide::Outer) => self.p.raceway_radius / r,
        };
        DimensionlessSection::new(tau, self.p.gap / r, self.p.groove_width / r, plane)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveRadii {
    r_x: f64,
    r_y: f64,
}

impl EffectiveRadii {
    pub fn new(r_x: f64, r_y: f64) -> Result<Self> {
        if !(r_x > 0.0 && r_y > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "effective radii must be positive (R_x={r_x}, R_y={r_y}); a conforming pair needs the concave partner to have the larger radius"
            )));
        }
        Ok(EffectiveRadii { r_x, r_y })
    }

    /// Section plane II (rolling direction).
    pub fn r_x(&self) -> f64 {
        self.r_x
    }

    /// Section plane I (axial direction).
    pub fn r_y(&self) -> f64 {
        self.r_y
    }
}

/// A section plane scaled by the ball radius.
///
/// The ball is the unit circle centred at the origin; the raceway circle has
/// radius `|tau|` and its centre lies at distance `sigma` on the far side of
/// the contact, so the closest approach is `tau - sigma - 1 = alpha`.
/// `sigma` is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessSection {
    tau: f64,
    alpha: f64,
    beta: f64,
    plane: SectionPlane,
}

impl DimensionlessSection {
    pub fn new(tau: f64, alpha: f64, beta: f64, plane: SectionPlane) -> Result<Self> {
        let s = DimensionlessSection { tau, alpha, beta, plane };
        if !(tau.is_finite() && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite section parameter".into()));
        }
        if alpha <= 0.0 {
            return Err(Error::InvalidGeometry(format!("alpha must be positive, got {alpha}")));
        }
        let sigma = s.sigma();
        match plane {
            SectionPlane::SectionI => {
                if !(tau > 0.0 && sigma > 0.0) {
                    return Err(Error::InvalidGeometry(format!(
                        "section I needs tau > 0 and sigma > 0 (tau={tau}, sigma={sigma})"
                    )));
                }
                if !(beta > 0.0 && beta < 2.0 * tau.abs()) {
                    return Err(Error::InvalidGeometry(format!("beta must lie in (0, 2|tau|), got {beta}")));
                }
            }
            SectionPlane::SectionII => {
                if tau == 0.0 || (tau > 0.0 && sigma <= 0.0) {
                    return Err(Error::InvalidGeometry(format!(
                        "section II needs sign(sigma) = sign(tau) (tau={tau}, sigma={sigma})"
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn plane(&self) -> SectionPlane {
        self.plane
    }

    pub fn sigma(&self) -> f64 {
        self.tau - 1.0 - self.alpha
    }

    /// Convex raceway (inner ring in plane II): the ball sits outside the
    /// raceway circle.
    pub fn is_external(&self) -> bool {
        self.tau < 0.0
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        DimensionlessSection::new(self.tau, alpha, self.beta, self.plane)
    }

    /// Raceway radius back in mm.
    pub fn partner_radius_mm(&self, ball_radius: f64) -> f64 {
        self.tau.abs() * ball_radius
    }

    pub fn gap_mm(&self, ball_radius: f64) -> f64 {
        self.alpha * ball_radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn effective_radius_table_values() {
        assert_relative_eq!(effective_radius(4.0, -4.16).unwrap(), 104.0, max_relative = 1e-12);
        assert!((effective_radius(4.0, 15.25).unwrap() - 3.17).abs() < 0.005);
        assert_eq!(effective_radius(2.5, f64::INFINITY).unwrap(), 2.5);
        assert_eq!(effective_radius(0.0, 1.0), Err(Error::ZeroRadius));
        assert!(matches!(effective_radius(3.0, -3.0), Err(Error::DegeneratePair { .. })));
    }

    #[test]
    fn table_consistency_within_half_percent() {
        let table = [
            (RingSide::Inner, 104.0, 3.17),
            (RingSide::Outer, 70.67, 4.83),
        ];
        for (side, r_y, r_x) in table {
            let g = BearingContactGeometry::bearing_6205_c3(side, 1e-3, 2.2).unwrap();
            let eff = g.effective_radii().unwrap();
            assert!((eff.r_y() / r_y - 1.0).abs() < 5e-3, "{side:?} R_y {}", eff.r_y());
            assert!((eff.r_x() / r_x - 1.0).abs() < 5e-3, "{side:?} R_x {}", eff.r_x());
        }
    }

    #[test]
    fn dimensionless_examples() {
        let outer = BearingContactGeometry::bearing_6205_c3(RingSide::Outer, 0.004, 2.2).unwrap();
        let s = outer.to_dimensionless(SectionPlane::SectionI).unwrap();
        assert_relative_eq!(s.tau(), 1.06, max_relative = 1e-14);
        assert_relative_eq!(s.alpha(), 0.001, max_relative = 1e-14);
        assert_relative_eq!(s.sigma(), 0.059, max_relative = 1e-12);

        let inner = BearingContactGeometry::bearing_6205_c3(RingSide::Inner, 0.004, 2.2).unwrap();
        let s = inner.to_dimensionless(SectionPlane::SectionII).unwrap();
        assert_relative_eq!(s.tau(), -3.8125, max_relative = 1e-14);
        assert_relative_eq!(s.sigma(), -4.8135, max_relative = 1e-12);
        assert!(s.is_external());

        let s = outer.to_dimensionless(SectionPlane::SectionII).unwrap();
        assert!(s.tau() > 0.0 && s.sigma() > 0.0);
    }

    #[test]
    fn touching_limit() {
        let s = DimensionlessSection::new(1.06, 1e-15, 1.2, SectionPlane::SectionI).unwrap();
        assert!((s.sigma() - 0.06).abs() < 1e-14);
    }

    #[test]
    fn invalid_inputs_rejected() {
        let p = ContactParams::bearing_6205_c3(RingSide::Outer);
        assert!(ContactParams { gap: 0.0, ..p }.build().is_err());
        assert!(ContactParams { groove_radius: 3.9, ..p }.build().is_err());
        assert!(ContactParams { groove_width: 9.0, ..p }.build().is_err());
        assert!(ContactParams { ring_width: 1.0, ..p }.build().is_err());
        assert!(ContactParams { permittivity: -1.0, ..p }.build().is_err());
        assert!(DimensionlessSection::new(1.06, 0.1, 1.2, SectionPlane::SectionI).is_err());
        assert!(DimensionlessSection::new(1.06, 0.001, 2.2, SectionPlane::SectionI).is_err());
        assert!(DimensionlessSection::new(1.06, -0.001, 1.0, SectionPlane::SectionI).is_err());
    }

    #[test]
    fn conformity_accessor() {
        let g = BearingContactGeometry::bearing_6205_c3(RingSide::Inner, 1e-3, 2.2).unwrap();
        assert_relative_eq!(g.race_conformity(), 0.52, max_relative = 1e-14);
    }

    proptest::proptest! {
        #[test]
        fn dimensional_round_trip(r in 0.5f64..20.0, tau in 1.01f64..8.0, frac in 1e-6f64..0.9) {
            let alpha = frac * (tau - 1.0);
            let g = ContactParams {
                ball_radius: r,
                groove_radius: tau * r,
                raceway_radius: 3.0 * tau * r,
                ring_side: RingSide::Outer,
                groove_width: 0.5 * tau * r,
                ring_width: 4.0 * tau * r,
                gap: alpha * r,
                permittivity: 1e-11,
            }.build().unwrap();
            let s = g.to_dimensionless(SectionPlane::SectionI).unwrap();
            proptest::prop_assert!((s.partner_radius_mm(r) / g.groove_radius() - 1.0).abs() < 1e-12);
            proptest::prop_assert!((s.gap_mm(r) / g.gap() - 1.0).abs() < 1e-12);
            proptest::prop_assert_eq!(s.sigma(), s.tau() - 1.0 - s.alpha());
        }
    }
}
