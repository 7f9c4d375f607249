//! Gap × method sweeps.

use std::time::{Duration, Instant};

use bearingcap::analytic2d::model_f;
use bearingcap::fem2d::{convergence_study, model_g};
use bearingcap::geometry::ContactParams;
use bearingcap::quadrature::QuadratureSpec;
use bearingcap::semi_analytic::{
    cap2d_model_b, cap2d_model_c, cap2d_model_d, cap3d_model_a, cap3d_model_e, model_a_closed_form, IntegrationRect,
};
use bearingcap::{
    BearingContactGeometry, CapacitanceResult, CapacitanceUnit, Diagnostics, Execution, Method, SectionPlane,
};

use crate::config::{Config, ConfigError, FemConfig};

/// Everything needed to evaluate one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub contact: ContactParams,
    pub plane: SectionPlane,
    pub gaps_um: Vec<f64>,
    /// Column order; always contains `reference`.
    pub methods: Vec<Method>,
    pub reference: Method,
    pub quadrature: QuadratureSpec,
    pub fem: FemConfig,
    pub rect: Option<IntegrationRect>,
}

impl SweepPlan {
    /// `reference` overrides the configured reference method.
    pub fn from_config(config: &Config, reference: Option<Method>) -> Result<SweepPlan, ConfigError> {
        let reference = match reference {
            Some(m) => m,
            None => config.reference()?,
        };
        let mut methods = config.methods()?;
        if !methods.contains(&reference) {
            methods.push(reference);
        }
        Ok(SweepPlan {
            contact: config.contact(config.ring())?,
            plane: config.plane(),
            gaps_um: config.sweep.gaps_um()?,
            methods,
            reference,
            quadrature: config.quadrature.spec()?,
            fem: config.fem,
            rect: config.rect(),
        })
    }
}

/// One cell: the result or the error that stopped it.
pub type Cell = Result<CapacitanceResult, String>;

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub gaps_um: Vec<f64>,
    pub methods: Vec<Method>,
    pub reference: Method,
    /// `cells[gap][method]`.
    pub cells: Vec<Vec<Cell>>,
    /// Compute time per cell, same layout as `cells`.
    pub timings: Vec<Vec<Duration>>,
    pub wall_time: Duration,
}

impl SweepReport {
    pub fn method_index(&self, m: Method) -> Option<usize> {
        self.methods.iter().position(|&x| x == m)
    }

    pub fn value(&self, gap: usize, m: Method) -> Option<f64> {
        let j = self.method_index(m)?;
        self.cells[gap][j].as_ref().ok().map(|r| r.value)
    }

    /// `(C_m - C_ref) / C_ref`; `None` when either cell failed or the two
    /// methods report different quantities (F/m against F).
    pub fn deviation(&self, gap: usize, m: Method) -> Option<f64> {
        if m.unit() != self.reference.unit() {
            return None;
        }
        let (c, r) = (self.value(gap, m)?, self.value(gap, self.reference)?);
        Some((c - r) / r)
    }

    /// Methods that get a deviation column.
    pub fn compared(&self) -> Vec<Method> {
        self.methods.iter().copied().filter(|&m| m != self.reference && m.unit() == self.reference.unit()).collect()
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_err()).count()
    }

    pub fn method_time(&self, j: usize) -> Duration {
        self.timings.iter().map(|row| row[j]).sum()
    }
}

/// Evaluates one method at one gap.
pub fn evaluate(plan: &SweepPlan, method: Method, gap_um: f64) -> bearingcap::Result<CapacitanceResult> {
    let gap = gap_um * 1e-3;
    let geom = BearingContactGeometry::new(ContactParams { gap, ..plan.contact })?;
    let eps = geom.permittivity();
    let spec = &plan.quadrature;
    match method {
        Method::A2D => model_a_closed_form(geom.effective_radius(plan.plane)?, gap, eps),
        Method::A3D => {
            let rect = plan.rect.unwrap_or_else(|| IntegrationRect::for_contact(&geom));
            cap3d_model_a(&geom.effective_radii()?, gap, eps, rect, spec)
        }
        Method::B => cap2d_model_b(&geom.to_dimensionless(plan.plane)?, eps, spec),
        Method::C => cap2d_model_c(&geom.to_dimensionless(plan.plane)?, eps, spec),
        Method::D => cap2d_model_d(&geom.to_dimensionless(plan.plane)?, eps, spec),
        Method::D3D => cap3d_model_e(&geom, false, spec),
        Method::E => cap3d_model_e(&geom, true, spec),
        Method::F => model_f(&geom.to_dimensionless(plan.plane)?, eps),
        Method::G => {
            let section = geom.to_dimensionless(plan.plane)?;
            if plan.fem.extrapolate {
                let study = convergence_study(&section, eps, plan.fem.level, Execution::Sequential)?;
                let work = study.rows.last().map_or(0, |r| r.elements);
                Ok(CapacitanceResult::with_diagnostics(
                    Method::G,
                    study.extrapolated,
                    Diagnostics { error_estimate: study.error_estimate(), work },
                ))
            } else {
                model_g(&section, eps, plan.fem.level)
            }
        }
    }
}

/// Runs every (gap, method) cell. Cell failures are recorded, never fatal.
pub fn run_plan(plan: &SweepPlan, exec: Execution) -> SweepReport {
    let start = Instant::now();
    let (ng, nm) = (plan.gaps_um.len(), plan.methods.len());
    let flat = exec.map_range(ng * nm, |k| {
        let (g, m) = (k / nm, k % nm);
        let t0 = Instant::now();
        let cell = evaluate(plan, plan.methods[m], plan.gaps_um[g]).map_err(|e| e.to_string());
        (cell, t0.elapsed())
    });
    let mut cells = Vec::with_capacity(ng);
    let mut timings = Vec::with_capacity(ng);
    let mut it = flat.into_iter();
    for _ in 0..ng {
        let (row, times): (Vec<_>, Vec<_>) = it.by_ref().take(nm).unzip();
        cells.push(row);
        timings.push(times);
    }
    SweepReport {
        gaps_um: plan.gaps_um.clone(),
        methods: plan.methods.clone(),
        reference: plan.reference,
        cells,
        timings,
        wall_time: start.elapsed(),
    }
}

pub fn run_sweep(config: &Config, reference: Option<Method>, exec: Execution) -> Result<SweepReport, ConfigError> {
    Ok(run_plan(&SweepPlan::from_config(config, reference)?, exec))
}

/// Pico-unit label of a method column.
pub fn unit_label(m: Method) -> &'static str {
    match m.unit() {
        CapacitanceUnit::PerLength => "pF_per_m",
        CapacitanceUnit::Absolute => "pF",
    }
}
