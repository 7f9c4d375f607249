//! Absolute capacitances of the full 3D contact.

use super::raytrace::RaceTracer;
use crate::error::{Error, Result};
use crate::geometry::{BearingContactGeometry, EffectiveRadii};
use crate::method::{CapacitanceResult, Diagnostics, Method};
use crate::quadrature::{integrate_try, QuadratureSpec};
use crate::MM_PER_M;

/// Half extents of the model A integration rectangle, mm. `x` runs along
/// the rolling direction (`R_x`), `y` across the groove (`R_y`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationRect {
    pub half_x: f64,
    pub half_y: f64,
}

impl IntegrationRect {
    /// Ball radius along the rolling direction, groove half width across.
    pub fn for_contact(geom: &BearingContactGeometry) -> Self {
        IntegrationRect { half_x: geom.ball_radius(), half_y: 0.5 * geom.groove_width() }
    }
}

/// `eps int int 1 / (s + x^2/2R_x + y^2/2R_y)` over the rectangle, in F.
///
/// The integrand is even in both coordinates, so one quadrant is integrated
/// and the `y` integral is taken in closed form.
pub fn cap3d_model_a(
    radii: &EffectiveRadii,
    gap: f64,
    eps: f64,
    limits: IntegrationRect,
    spec: &QuadratureSpec,
) -> Result<CapacitanceResult> {
    if !(gap > 0.0 && limits.half_x > 0.0 && limits.half_y > 0.0) {
        return Err(Error::Domain(format!("model A needs s > 0 and a non-empty rectangle ({limits:?})")));
    }
    let (rx, ry) = (radii.r_x(), radii.r_y());
    let scale = 4.0 * eps / MM_PER_M;
    let q = integrate_try(
        |x| {
            let a = gap + x * x / (2.0 * rx);
            let w = (2.0 * ry * a).sqrt();
            Ok(2.0 * ry / w * (limits.half_y / w).atan())
        },
        0.0,
        limits.half_x,
        &spec.scaled_abs(scale),
    )?;
    Ok(CapacitanceResult::with_diagnostics(
        Method::A3D,
        scale * q.value,
        Diagnostics { error_estimate: scale * q.error, work: q.evaluations },
    ))
}

/// Ball-surface integral with gaps from ray casting; with `include_rim` the
/// ring land beside the groove is added (model E), otherwise only the
/// groove contributes (3D model D).
pub fn cap3d_model_e(
    geom: &BearingContactGeometry,
    include_rim: bool,
    spec: &QuadratureSpec,
) -> Result<CapacitanceResult> {
    let tracer = RaceTracer::new(geom)?;
    let phi_max = tracer.phi_limit()?;
    let r = geom.ball_radius();
    let scale = 4.0 * geom.permittivity() * r * r / MM_PER_M;
    let inner = spec.tightened(0.1).scaled_abs(scale);
    let mut work = 0usize;
    let q = integrate_try(
        |phi| {
            let edge = tracer.groove_edge(phi);
            let mut sum = 0.0;
            if edge > 0.0 {
                let g = integrate_try(|t| Ok(1.0 / tracer.groove_hit(t, phi)?.gap), 0.0, edge, &inner)?;
                work += g.evaluations;
                sum += g.value;
            }
            if include_rim {
                let end = tracer.rim_end(phi, edge);
                if end > edge {
                    let rim = integrate_try(
                        |t| {
                            let hit = tracer.rim_hit(t, phi).ok_or(Error::RayMissesRaceway { theta: t, phi })?;
                            Ok(1.0 / hit.gap)
                        },
                        edge,
                        end,
                        &inner,
                    )?;
                    work += rim.evaluations;
                    sum += rim.value;
                }
            }
            Ok(phi.cos() * sum)
        },
        0.0,
        phi_max,
        &spec.scaled_abs(scale),
    )?;
    let method = if include_rim { Method::E } else { Method::D3D };
    Ok(CapacitanceResult::with_diagnostics(
        method,
        scale * q.value,
        Diagnostics { error_estimate: scale * q.error, work: work + q.evaluations },
    ))
}
