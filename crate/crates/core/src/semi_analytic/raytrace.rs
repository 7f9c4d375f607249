//! Rays from the ball centre to the raceway surface of revolution.
//!
//! Frame (mm): origin at the ball centre, `zeta` towards the contact point,
//! `eta` parallel to the bearing axis, `xi` along the rolling direction. A
//! direction is given by `theta` (in the `eta`-`zeta` plane, section I) and
//! `phi` (out of it, section II): `u = (sin phi, cos phi sin theta,
//! cos phi cos theta)`.
//!
//! The groove is the torus swept by the groove circle about the bearing
//! axis. The ring land beside it is the cylinder through the groove edge,
//! out to half the ring width.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::{BearingContactGeometry, RingSide};

const ROOT_TOL: f64 = 1e-12;
const ANGLE_TOL: f64 = 1e-12;
const MAX_MARCH: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    Groove,
    Rim,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    /// Distance from the ball centre, mm.
    pub distance: f64,
    /// Gap from the ball surface, mm.
    pub gap: f64,
    pub eta: f64,
    pub surface: Surface,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaceTracer {
    side: RingSide,
    ball_radius: f64,
    tube_radius: f64,
    half_groove: f64,
    half_ring: f64,
    /// `zeta` of the bearing axis.
    axis: f64,
    /// Radius of the torus centre circle about the axis.
    centre_circle: f64,
    /// Radius of the ring land about the axis.
    land: f64,
    t_max: f64,
    min_step: f64,
}

pub fn direction(theta: f64, phi: f64) -> [f64; 3] {
    let (sp, cp) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    [sp, cp * st, cp * ct]
}

impl RaceTracer {
    pub fn new(geom: &BearingContactGeometry) -> Result<Self> {
        let r = geom.ball_radius();
        let s = geom.gap();
        let rg = geom.groove_radius();
        let rw = geom.raceway_radius();
        let half_groove = 0.5 * geom.groove_width();
        let depth = ((rg - half_groove) * (rg + half_groove)).sqrt();
        // groove centre sits at -(rg - r - s) on the contact axis
        let (axis, centre_circle, land) = match geom.ring_side() {
            RingSide::Outer => (-(rw - r - s), rw - rg, rw - rg + depth),
            RingSide::Inner => (rw + r + s, rw + rg, rw + rg - depth),
        };
        Ok(RaceTracer {
            side: geom.ring_side(),
            ball_radius: r,
            tube_radius: rg,
            half_groove,
            half_ring: 0.5 * geom.ring_width(),
            axis,
            centre_circle,
            land,
            t_max: 2.0 * (centre_circle + rg) + r,
            min_step: (1e-3 * s).clamp(1e-9, 1e-6),
        })
    }

    pub fn ball_radius(&self) -> f64 {
        self.ball_radius
    }

    fn axis_distance(&self, p: [f64; 3]) -> f64 {
        p[0].hypot(p[2] - self.axis)
    }

    /// Signed distance to the torus (negative inside the tube) and its
    /// derivative along `u`.
    fn tube(&self, t: f64, u: [f64; 3]) -> (f64, f64) {
        let p = [t * u[0], t * u[1], t * u[2]];
        let d = self.axis_distance(p);
        let radial = d - self.centre_circle;
        let rho = radial.hypot(p[1]);
        let grad_d = (p[0] * u[0] + (p[2] - self.axis) * u[2]) / d;
        (rho - self.tube_radius, (radial * grad_d + p[1] * u[1]) / rho)
    }

    fn on_raceway_side(&self, p: [f64; 3]) -> bool {
        let d = self.axis_distance(p);
        match self.side {
            RingSide::Outer => d > self.centre_circle,
            RingSide::Inner => d < self.centre_circle,
        }
    }

    /// First point where the ray leaves the groove tube.
    pub fn tube_exit(&self, theta: f64, phi: f64) -> Result<(f64, [f64; 3])> {
        let u = direction(theta, phi);
        let mut t = self.ball_radius;
        let (mut g, _) = self.tube(t, u);
        if g >= 0.0 {
            return Err(Error::Geometry("ball surface lies outside the groove tube".into()));
        }
        let mut lo = t;
        let mut marched = 0;
        while g < 0.0 {
            lo = t;
            t += (-g).max(self.min_step);
            if t > self.t_max || marched > MAX_MARCH {
                return Err(Error::RayMissesRaceway { theta, phi });
            }
            g = self.tube(t, u).0;
            marched += 1;
        }
        let t = self.refine(u, lo, t);
        Ok((t, [t * u[0], t * u[1], t * u[2]]))
    }

    /// Newton on the tube distance, safeguarded by the bracket `[lo, hi]`.
    fn refine(&self, u: [f64; 3], mut lo: f64, mut hi: f64) -> f64 {
        let mut x = hi;
        for _ in 0..200 {
            let (g, dg) = self.tube(x, u);
            if g == 0.0 {
                return x;
            }
            if g < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let step = g / dg;
            let newton = x - step;
            if step.is_finite() && newton > lo && newton < hi {
                x = newton;
                if step.abs() < 1e-14 * x {
                    return x;
                }
            } else {
                x = 0.5 * (lo + hi);
            }
            if hi - lo < ROOT_TOL {
                return 0.5 * (lo + hi);
            }
        }
        x
    }

    /// Whether the ray lands on the groove surface of the ring.
    pub fn lands_on_groove(&self, theta: f64, phi: f64) -> bool {
        match self.tube_exit(theta, phi) {
            Ok((_, p)) => self.on_raceway_side(p) && p[1].abs() <= self.half_groove,
            Err(_) => false,
        }
    }

    pub fn groove_hit(&self, theta: f64, phi: f64) -> Result<Hit> {
        let (t, p) = self.tube_exit(theta, phi)?;
        if !self.on_raceway_side(p) || p[1].abs() > self.half_groove {
            return Err(Error::RayMissesRaceway { theta, phi });
        }
        Ok(Hit { distance: t, gap: t - self.ball_radius, eta: p[1], surface: Surface::Groove })
    }

    /// Intersection with the land cylinder between groove edge and ring face.
    pub fn rim_hit(&self, theta: f64, phi: f64) -> Option<Hit> {
        let u = direction(theta, phi);
        // |t u - axis|^2 over the xi-zeta plane equals land^2
        let a = u[0] * u[0] + u[2] * u[2];
        let b = u[2] * self.axis;
        let c = (self.axis - self.land) * (self.axis + self.land);
        let disc = b * b - a * c;
        if a == 0.0 || disc < 0.0 {
            return None;
        }
        let root = disc.sqrt();
        let t = match self.side {
            // inside the cylinder: the single positive root
            RingSide::Outer => {
                if b >= 0.0 {
                    (b + root) / a
                } else {
                    -c / (root - b)
                }
            }
            // outside: the nearer of two positive roots
            RingSide::Inner => {
                if b <= 0.0 {
                    return None;
                }
                c / (b + root)
            }
        };
        let eta = t * u[1];
        let slack = 1e-12 * self.half_groove;
        if !(t > self.ball_radius) || eta.abs() < self.half_groove - slack || eta.abs() > self.half_ring {
            return None;
        }
        Some(Hit { distance: t, gap: t - self.ball_radius, eta, surface: Surface::Rim })
    }

    pub fn cast(&self, theta: f64, phi: f64) -> Result<Hit> {
        if let Ok(hit) = self.groove_hit(theta, phi) {
            return Ok(hit);
        }
        self.rim_hit(theta, phi).ok_or(Error::RayMissesRaceway { theta, phi })
    }

    /// Largest `phi` for which the ray in section plane II reaches the
    /// raceway: `pi/2` for the outer ring, the tangent ray for the inner one.
    pub fn phi_limit(&self) -> Result<f64> {
        match self.side {
            RingSide::Outer => Ok(FRAC_PI_2),
            RingSide::Inner => {
                if !self.lands_on_groove(0.0, 0.0) || self.lands_on_groove(0.0, FRAC_PI_2) {
                    return Err(Error::TangencyNotFound("section II ray never leaves the raceway".into()));
                }
                Ok(bisect(|p| self.lands_on_groove(0.0, p), 0.0, FRAC_PI_2))
            }
        }
    }

    /// Largest `theta` at this `phi` whose ray lands on the groove.
    pub fn groove_edge(&self, phi: f64) -> f64 {
        if !self.lands_on_groove(0.0, phi) {
            return 0.0;
        }
        if self.lands_on_groove(FRAC_PI_2, phi) {
            return FRAC_PI_2;
        }
        bisect(|t| self.lands_on_groove(t, phi), 0.0, FRAC_PI_2)
    }

    /// Largest `theta` beyond the groove edge whose ray still lands on the rim.
    pub fn rim_end(&self, phi: f64, edge: f64) -> f64 {
        let on_rim = |t: f64| self.rim_hit(t, phi).is_some();
        let probe = edge + 1e-9;
        if edge >= FRAC_PI_2 || !on_rim(probe) {
            return edge;
        }
        if on_rim(FRAC_PI_2) {
            return FRAC_PI_2;
        }
        bisect(on_rim, probe, FRAC_PI_2)
    }
}

/// Boundary of a predicate that holds at `lo` and fails at `hi`.
fn bisect<P: Fn(f64) -> bool>(pred: P, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > ANGLE_TOL {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
