use super::mesh::generate_mesh;
use super::solve::solve;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::DimensionlessSection;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub level: u32,
    pub elements: usize,
    /// Energy capacitance, F/m.
    pub capacitance: f64,
    /// Charge capacitance, F/m.
    pub capacitance_charge: f64,
    /// `(C - C_extrapolated) / C_extrapolated`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    pub extrapolated: f64,
    pub order: f64,
}

impl ConvergenceStudy {
    /// `|C_n - C_extrapolated|` at the finest level.
    pub fn error_estimate(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| (r.capacitance - self.extrapolated).abs())
    }
}

/// Richardson extrapolation from three values on meshes halved in size.
/// Returns the extrapolated value and the observed order.
pub fn richardson(c0: f64, c1: f64, c2: f64) -> Result<(f64, f64)> {
    let (d1, d2) = (c0 - c1, c1 - c2);
    let ratio = d1 / d2;
    if !(ratio > 1.0) || !ratio.is_finite() {
        return Err(Error::Domain(format!("sequence {c0}, {c1}, {c2} is not converging monotonically")));
    }
    let order = ratio.log2();
    Ok((c2 - d2 / (ratio - 1.0), order))
}

/// Solves levels `0..=n_max` and extrapolates from the finest three.
pub fn convergence_study(
    section: &DimensionlessSection,
    eps: f64,
    n_max: u32,
    exec: Execution,
) -> Result<ConvergenceStudy> {
    if n_max < 2 {
        return Err(Error::Domain("a convergence study needs at least three levels".into()));
    }
    let levels: Vec<u32> = (0..=n_max).collect();
    let solved = exec.map(&levels, |&level| -> Result<(u32, usize, f64, f64)> {
        let mesh = generate_mesh(section, level)?;
        let sol = solve(&mesh, eps)?;
        Ok((level, mesh.element_count(), sol.capacitance, sol.capacitance_charge))
    });
    let solved: Vec<_> = solved.into_iter().collect::<Result<_>>()?;
    let n = solved.len();
    let (extrapolated, order) = richardson(solved[n - 3].2, solved[n - 2].2, solved[n - 1].2)?;
    let rows = solved
        .into_iter()
        .map(|(level, elements, capacitance, capacitance_charge)| ConvergenceRow {
            level,
            elements,
            capacitance,
            capacitance_charge,
            deviation: (capacitance - extrapolated) / extrapolated,
        })
        .collect();
    Ok(ConvergenceStudy { rows, extrapolated, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn richardson_recovers_quadratic_sequence() {
        let c = |h: f64| 3.0 + 0.7 * h * h;
        let (x, p) = richardson(c(1.0), c(0.5), c(0.25)).unwrap();
        assert_relative_eq!(x, 3.0, max_relative = 1e-14);
        assert_relative_eq!(p, 2.0, max_relative = 1e-12);
        assert!(richardson(1.0, 1.0, 1.0).is_err());
        assert!(richardson(1.0, 2.0, 1.5).is_err());
    }
}
