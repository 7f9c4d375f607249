//! Exact 2D field of a ball section facing a raceway section (model F).
//!
//! Dimensionless frame: the ball is the unit circle at the origin, polar
//! angle `theta` is measured from the contact direction, and the raceway is
//! the circle of radius `|tau|` centred at `-sigma` on that axis. A line
//! charge `q` at radius `kappa` and its image `-q` at `1/kappa` make both
//! circles equipotentials.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::{DimensionlessSection, SectionPlane};
use crate::method::{CapacitanceResult, Method};

/// Relative discriminant floor below which the two circles count as touching.
const DISCRIMINANT_GUARD: f64 = 1e-12;

/// Image-charge position for a raceway circle of signed radius `tau` whose
/// centre sits at `-sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kappa {
    pub kappa: f64,
    /// `1 - kappa`, evaluated without cancellation.
    pub one_minus: f64,
}

/// Smaller-magnitude root of `sigma k^2 + (1 + sigma^2 - tau^2) k + sigma = 0`.
///
/// The two roots multiply to one. The root is written as
/// `2 sigma / (A + sgn(A) sqrt(D))` so that neither the concentric limit nor
/// the thin-gap limit loses digits, and `D` is used in factored form.
pub fn kappa_raw(tau: f64, sigma: f64) -> Result<Kappa> {
    kappa_with_gap(tau, sigma, tau - 1.0 - sigma)
}

/// [`kappa_raw`] with the gap `alpha = tau - 1 - sigma` supplied by the
/// caller. Recomputing `alpha` from `tau` and `sigma` costs digits when the
/// gap is many orders below the radii.
pub fn kappa_with_gap(tau: f64, sigma: f64, alpha: f64) -> Result<Kappa> {
    // tau^2 - sigma^2 - 1 without the cancellation
    let a = 2.0 * (tau - 1.0) + alpha * (2.0 * tau - 2.0 - alpha);
    let disc = alpha * (2.0 * tau - alpha) * (2.0 + alpha) * (2.0 * tau - 2.0 - alpha);
    let scale = (a * a).max(4.0 * sigma * sigma);
    if !(disc > DISCRIMINANT_GUARD * scale) {
        return Err(Error::Overlap { discriminant: disc });
    }
    let root = disc.sqrt().copysign(a);
    let denom = a + root;
    let kappa = 2.0 * sigma / denom;
    let one_minus = (alpha * (2.0 * tau - alpha) + root) / denom;
    if !(kappa.abs() < 1.0) {
        return Err(Error::Overlap { discriminant: disc });
    }
    Ok(Kappa { kappa, one_minus })
}

fn section_kappa(section: &DimensionlessSection) -> Result<Kappa> {
    kappa_with_gap(section.tau(), section.sigma(), section.alpha())
}

pub fn kappa(section: &DimensionlessSection) -> Result<f64> {
    Ok(section_kappa(section)?.kappa)
}

/// Squared distance from `(rho, theta)` to the axis point `at`.
fn dist2(rho: f64, theta: f64, at: f64) -> f64 {
    let d = rho - at;
    let h = (0.5 * theta).sin();
    d * d + 4.0 * rho * at * h * h
}

/// Potential at `(rho, theta)` for line charge `q` (C/m) in permittivity `eps`.
pub fn potential(kappa: f64, rho: f64, theta: f64, q: f64, eps: f64) -> Result<f64> {
    let near = dist2(rho, theta, kappa);
    let far = dist2(rho, theta, 1.0 / kappa);
    if !(near > 0.0 && far > 0.0) {
        return Err(Error::SingularPoint);
    }
    Ok(q / (4.0 * PI * eps) * (far / near).ln())
}

/// Potential of the ball surface `rho = 1`.
pub fn ball_potential(k: &Kappa, q: f64, eps: f64) -> f64 {
    -q / (2.0 * PI * eps) * (-k.one_minus).ln_1p()
}

/// `ln |(rho_c - kappa) / (rho_c kappa - 1)|` with `rho_c = tau - sigma`,
/// the potential difference in units of `q / (2 pi eps)`.
fn log_ratio(alpha: f64, k: &Kappa) -> f64 {
    let den = k.one_minus - alpha * k.kappa;
    (alpha * (1.0 + k.kappa) / den).ln_1p()
}

/// Potential of the raceway circle, evaluated at its point closest to the ball.
pub fn race_potential(section: &DimensionlessSection, k: &Kappa, q: f64, eps: f64) -> f64 {
    // rho_c = tau - sigma = 1 + alpha; both distances are written through 1 - kappa
    let alpha = section.alpha();
    let far = (k.one_minus - alpha * k.kappa).abs();
    let near = (k.one_minus + alpha).abs();
    q / (2.0 * PI * eps) * ((far / near).ln() - k.kappa.abs().ln())
}

fn check_theta1(theta1: f64) -> Result<()> {
    if !(theta1 > 0.0 && theta1 <= PI) {
        return Err(Error::Domain(format!("theta1 must lie in (0, pi], got {theta1}")));
    }
    Ok(())
}

fn arctan_term(kappa: f64, theta1: f64) -> f64 {
    let half = 0.5 * theta1;
    ((1.0 + kappa) * half.sin()).atan2((1.0 - kappa) * half.cos())
}

/// Charge on the ball arc `0 <= theta <= theta1` (one side of the axis).
pub fn charge_per_length(kappa: f64, theta1: f64, q: f64) -> Result<f64> {
    check_theta1(theta1)?;
    Ok(q / PI * arctan_term(kappa, theta1))
}

/// Radial displacement field on the ball surface.
pub fn surface_flux_density(kappa: f64, theta: f64, q: f64) -> f64 {
    q * (1.0 - kappa * kappa) / (2.0 * PI * dist2(1.0, theta, kappa))
}

/// Angular integration limit: the groove edge in section I, `pi/2` in II.
pub fn theta_limit(section: &DimensionlessSection) -> Result<f64> {
    match section.plane() {
        SectionPlane::SectionII => Ok(FRAC_PI_2),
        SectionPlane::SectionI => {
            let (tau, beta) = (section.tau(), section.beta());
            let half = 0.5 * beta;
            if !(half < tau.abs()) {
                return Err(Error::Geometry(format!("groove width {beta} exceeds the groove diameter")));
            }
            let along = (tau * tau - half * half).sqrt() - section.sigma();
            Ok(half.atan2(along))
        }
    }
}

/// Per-length capacitance of the arc pair `|theta| <= theta1`, F/m.
pub fn capacitance_model_f(section: &DimensionlessSection, eps: f64, theta1: f64) -> Result<f64> {
    check_theta1(theta1)?;
    let k = section_kappa(section)?;
    Ok(4.0 * eps * arctan_term(k.kappa, theta1) / log_ratio(section.alpha(), &k))
}

/// Capacitance of the band `theta0 < |theta| <= theta1`.
pub fn capacitance_band(section: &DimensionlessSection, eps: f64, theta0: f64, theta1: f64) -> Result<f64> {
    if theta0 == 0.0 {
        return capacitance_model_f(section, eps, theta1);
    }
    Ok(capacitance_model_f(section, eps, theta1)? - capacitance_model_f(section, eps, theta0)?)
}

pub fn model_f(section: &DimensionlessSection, eps: f64) -> Result<CapacitanceResult> {
    let theta1 = theta_limit(section)?;
    Ok(CapacitanceResult::exact(Method::F, capacitance_model_f(section, eps, theta1)?))
}

/// Field solution bundled for one section, normalised to `q = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApollonianSolution {
    pub kappa: f64,
    pub theta1: f64,
    pub phi_ball: f64,
    pub phi_race: f64,
    pub section: DimensionlessSection,
    eps: f64,
}

impl ApollonianSolution {
    pub fn new(section: &DimensionlessSection, eps: f64) -> Result<Self> {
        Self::with_limit(section, eps, theta_limit(section)?)
    }

    pub fn with_limit(section: &DimensionlessSection, eps: f64, theta1: f64) -> Result<Self> {
        check_theta1(theta1)?;
        let k = section_kappa(section)?;
        Ok(ApollonianSolution {
            kappa: k.kappa,
            theta1,
            phi_ball: ball_potential(&k, 1.0, eps),
            phi_race: race_potential(section, &k, 1.0, eps),
            section: *section,
            eps,
        })
    }

    pub fn potential(&self, rho: f64, theta: f64) -> Result<f64> {
        potential(self.kappa, rho, theta, 1.0, self.eps)
    }

    /// Potential scaled so the ball sits at 1 V and the raceway at 0 V.
    pub fn normalized_potential(&self, rho: f64, theta: f64) -> Result<f64> {
        Ok((self.potential(rho, theta)? - self.phi_race) / (self.phi_ball - self.phi_race))
    }

    pub fn capacitance(&self) -> Result<f64> {
        capacitance_model_f(&self.section, self.eps, self.theta1)
    }
}
