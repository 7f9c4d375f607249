use super::mesh::{BoundaryTag, Mesh2D};
use crate::error::{Error, Result};
use crate::geometry::DimensionlessSection;
use crate::method::{CapacitanceResult, Diagnostics, Method};

/// Work bound (unknowns times squared half bandwidth) for the banded
/// Cholesky path under `LinearSolver::Auto`.
const DIRECT_WORK_LIMIT: f64 = 2e10;
const CG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinearSolver {
    #[default]
    Auto,
    /// Banded Cholesky.
    Direct,
    /// Jacobi-preconditioned conjugate gradients.
    Iterative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FemSolution {
    /// Nodal potentials, V.
    pub potentials: Vec<f64>,
    /// Field energy per length at 1 V, J/m.
    pub energy: f64,
    /// Ball charge per length from the consistent nodal flux, C/m.
    pub charge_ball: f64,
    /// `2 W / V^2`, F/m.
    pub capacitance: f64,
    /// `Q / V`, F/m.
    pub capacitance_charge: f64,
    /// Flux through the insulating edges relative to the ball flux, from
    /// element gradients.
    pub insulating_flux: f64,
    pub unknowns: usize,
    pub iterations: usize,
}

/// Sparse symmetric matrix in row-list form.
struct Stiffness {
    rows: Vec<Vec<(usize, f64)>>,
}

impl Stiffness {
    fn assemble(mesh: &Mesh2D) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::with_capacity(7); mesh.nodes.len()];
        for t in &mesh.triangles {
            let p = t.map(|n| mesh.nodes[n]);
            let b = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
            let c = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
            let area = 0.5 * (b[0] * c[1] - b[1] * c[0]);
            for i in 0..3 {
                for j in 0..3 {
                    let v = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
                    let row = &mut rows[t[i]];
                    match row.iter_mut().find(|e| e.0 == t[j]) {
                        Some(e) => e.1 += v,
                        None => row.push((t[j], v)),
                    }
                }
            }
        }
        for r in &mut rows {
            r.sort_unstable_by_key(|e| e.0);
        }
        Stiffness { rows }
    }

    fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(j, v)| v * u[j]).sum()).collect()
    }
}

/// The free-node block `A` and right-hand side of the Dirichlet problem.
struct Reduced {
    free: Vec<usize>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
}

impl Reduced {
    fn new(k: &Stiffness, dirichlet: &[Option<f64>]) -> Self {
        let mut index = vec![None; dirichlet.len()];
        let mut free = Vec::new();
        for (n, d) in dirichlet.iter().enumerate() {
            if d.is_none() {
                index[n] = Some(free.len());
                free.push(n);
            }
        }
        let mut rows = Vec::with_capacity(free.len());
        let mut rhs = Vec::with_capacity(free.len());
        for &n in &free {
            let mut row = Vec::new();
            let mut b = 0.0;
            for &(j, v) in &k.rows[n] {
                match (index[j], dirichlet[j]) {
                    (Some(jj), _) => row.push((jj, v)),
                    (None, Some(g)) => b -= v * g,
                    (None, None) => unreachable!(),
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        Reduced { free, rows, rhs }
    }

    fn half_bandwidth(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }

    fn cholesky_solve(&self) -> Result<Vec<f64>> {
        let n = self.rows.len();
        let bw = self.half_bandwidth();
        let w = bw + 1;
        // row i holds columns i-bw ..= i at offsets 0 ..= bw
        let mut l = vec![0.0; n * w];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                if j <= i {
                    l[i * w + (j + bw - i)] = v;
                }
            }
        }
        for i in 0..n {
            let first = i.saturating_sub(bw);
            for j in first..=i {
                let lo = first.max(j.saturating_sub(bw));
                let mut s = l[i * w + (j + bw - i)];
                for k in lo..j {
                    s -= l[i * w + (k + bw - i)] * l[j * w + (k + bw - j)];
                }
                if j == i {
                    if !(s > 0.0) {
                        return Err(Error::SolverDivergence { residual: f64::NAN, iterations: i });
                    }
                    l[i * w + bw] = s.sqrt();
                } else {
                    l[i * w + (j + bw - i)] = s / l[j * w + bw];
                }
            }
        }
        let mut y = self.rhs.clone();
        for i in 0..n {
            let first = i.saturating_sub(bw);
            let mut s = y[i];
            for k in first..i {
                s -= l[i * w + (k + bw - i)] * y[k];
            }
            y[i] = s / l[i * w + bw];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + bw + 1).min(n) {
                s -= l[k * w + (i + bw - k)] * y[k];
            }
            y[i] = s / l[i * w + bw];
        }
        Ok(y)
    }

    fn pcg_solve(&self) -> Result<(Vec<f64>, usize)> {
        let n = self.rows.len();
        let diag: Vec<f64> =
            self.rows.iter().enumerate().map(|(i, r)| r.iter().find(|e| e.0 == i).map_or(1.0, |e| e.1)).collect();
        let norm_b = self.rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut x = vec![0.0; n];
        if norm_b == 0.0 {
            return Ok((x, 0));
        }
        let mut r = self.rhs.clone();
        let mut z: Vec<f64> = r.iter().zip(&diag).map(|(a, d)| a / d).collect();
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let max_iter = 50 * n + 1000;
        for it in 1..=max_iter {
            let ap = self.apply(&p);
            let alpha = rz / p.iter().zip(&ap).map(|(a, b)| a * b).sum::<f64>();
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            let res = r.iter().map(|v| v * v).sum::<f64>().sqrt() / norm_b;
            if res < CG_TOL {
                return Ok((x, it));
            }
            if !res.is_finite() {
                return Err(Error::SolverDivergence { residual: res, iterations: it });
            }
            for i in 0..n {
                z[i] = r[i] / diag[i];
            }
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        let res = r.iter().map(|v| v * v).sum::<f64>().sqrt() / norm_b;
        Err(Error::SolverDivergence { residual: res, iterations: max_iter })
    }
}

pub fn solve(mesh: &Mesh2D, eps: f64) -> Result<FemSolution> {
    solve_with(mesh, eps, LinearSolver::Auto)
}

/// P1 Galerkin solution with the ball at 1 V and the raceway at 0 V.
pub fn solve_with(mesh: &Mesh2D, eps: f64, solver: LinearSolver) -> Result<FemSolution> {
    mesh.validate()?;
    let k = Stiffness::assemble(mesh);
    let dirichlet = mesh.dirichlet();
    let reduced = Reduced::new(&k, &dirichlet);
    let n = reduced.free.len();
    let bw = reduced.half_bandwidth() as f64;
    let direct = match solver {
        LinearSolver::Direct => true,
        LinearSolver::Iterative => false,
        LinearSolver::Auto => (n as f64) * bw * bw <= DIRECT_WORK_LIMIT,
    };
    let (x, iterations) = if direct { (reduced.cholesky_solve()?, 0) } else { reduced.pcg_solve()? };
    if direct {
        let ax = reduced.apply(&x);
        let norm_b = reduced.rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        let res = ax.iter().zip(&reduced.rhs).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() / norm_b.max(1e-300);
        if !(res < 1e-9) {
            return Err(Error::SolverDivergence { residual: res, iterations: 0 });
        }
    }

    let mut u: Vec<f64> = dirichlet.iter().map(|d| d.unwrap_or(0.0)).collect();
    for (i, &node) in reduced.free.iter().enumerate() {
        u[node] = x[i];
    }
    let ku = k.apply(&u);
    let quad: f64 = u.iter().zip(&ku).map(|(a, b)| a * b).sum();
    // consistent nodal flux: the residual on the ball nodes
    let ball_flux: f64 = dirichlet.iter().zip(&ku).filter(|(d, _)| **d == Some(1.0)).map(|(_, f)| f).sum();
    let sym = mesh.symmetry_factor;
    let capacitance = eps * sym * quad;
    let charge_ball = eps * sym * ball_flux;
    let insulating_flux = insulating_flux(mesh, &u) / ball_flux;
    Ok(FemSolution {
        potentials: u,
        energy: 0.5 * capacitance,
        charge_ball,
        capacitance,
        capacitance_charge: charge_ball,
        insulating_flux,
        unknowns: n,
        iterations,
    })
}

/// Total `|grad u . n|` flux through the insulating edges, using the
/// constant gradient of each owning element.
fn insulating_flux(mesh: &Mesh2D, u: &[f64]) -> f64 {
    mesh.edges
        .iter()
        .filter(|e| e.tag == BoundaryTag::Insulating)
        .map(|e| {
            let t = mesh.triangles[e.triangle];
            let p = t.map(|n| mesh.nodes[n]);
            let b = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
            let c = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
            let two_area = b[0] * c[1] - b[1] * c[0];
            let gx: f64 = (0..3).map(|i| b[i] * u[t[i]]).sum::<f64>() / two_area;
            let gy: f64 = (0..3).map(|i| c[i] * u[t[i]]).sum::<f64>() / two_area;
            let [a, bb] = [mesh.nodes[e.nodes[0]], mesh.nodes[e.nodes[1]]];
            // edge normal scaled by edge length
            let (nx, ny) = (bb[1] - a[1], a[0] - bb[0]);
            (gx * nx + gy * ny).abs()
        })
        .sum()
}

/// Model G on the analytic truncation of the section at refinement `level`.
pub fn model_g(section: &DimensionlessSection, eps: f64, level: u32) -> Result<CapacitanceResult> {
    let mesh = super::mesh::generate_mesh(section, level)?;
    let sol = solve(&mesh, eps)?;
    Ok(CapacitanceResult::with_diagnostics(
        Method::G,
        sol.capacitance,
        Diagnostics {
            error_estimate: (sol.capacitance - sol.capacitance_charge).abs(),
            work: sol.unknowns,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic2d::{capacitance_model_f, ApollonianSolution};
    use crate::fem2d::mesh::{generate_mesh, mesh_with_limit};
    use crate::geometry::{BearingContactGeometry, RingSide, SectionPlane};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const EPS: f64 = 2.2 * crate::VACUUM_PERMITTIVITY;

    fn outer_one(gap: f64) -> DimensionlessSection {
        BearingContactGeometry::bearing_6205_c3(RingSide::Outer, gap, 2.2)
            .unwrap()
            .to_dimensionless(SectionPlane::SectionI)
            .unwrap()
    }

    #[test]
    fn concentric_annulus() {
        let tau = 23.25 / 4.0;
        let sigma = 1e-8;
        let s = DimensionlessSection::new(tau, tau - 1.0 - sigma, 1.0, SectionPlane::SectionII).unwrap();
        let exact = 2.0 * PI * EPS / tau.ln();
        let mut last = f64::INFINITY;
        for n in 2..=5 {
            let m = mesh_with_limit(&s, n, PI).unwrap();
            let c = solve(&m, EPS).unwrap().capacitance;
            let err = (c / exact - 1.0).abs();
            assert!(err < 0.3 * last, "level {n}: {err}");
            last = err;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn direct_and_iterative_agree() {
        let s = outer_one(1e-2);
        let m = generate_mesh(&s, 2).unwrap();
        let a = solve_with(&m, EPS, LinearSolver::Direct).unwrap();
        let b = solve_with(&m, EPS, LinearSolver::Iterative).unwrap();
        assert!(b.iterations > 0);
        assert_relative_eq!(a.capacitance, b.capacitance, max_relative = 1e-9);
        for (x, y) in a.potentials.iter().zip(&b.potentials) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn maximum_principle_and_energy_charge() {
        let s = outer_one(1e-3);
        let m = generate_mesh(&s, 3).unwrap();
        let sol = solve(&m, EPS).unwrap();
        assert!(sol.potentials.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        assert_relative_eq!(sol.capacitance, sol.capacitance_charge, max_relative = 1e-9);
        assert_relative_eq!(sol.energy, 0.5 * sol.capacitance, max_relative = 1e-15);
    }

    #[test]
    fn insulating_flux_small_when_refined() {
        let s = outer_one(1e-3);
        let sol = solve(&generate_mesh(&s, 4).unwrap(), EPS).unwrap();
        assert!(sol.insulating_flux < 1e-3, "{}", sol.insulating_flux);
    }

    #[test]
    fn potential_matches_analytic_field() {
        let s = outer_one(1e-3);
        let m = generate_mesh(&s, 4).unwrap();
        let sol = solve(&m, EPS).unwrap();
        let field = ApollonianSolution::new(&s, EPS).unwrap();
        for (t, frac) in [(0.0, 0.5), (0.05, 0.3), (0.2, 0.5), (0.4, 0.7)] {
            let h = crate::semi_analytic::ray_gap(&s, t).unwrap();
            let rho = 1.0 + frac * h;
            let p = [rho * f64::sin(t), rho * f64::cos(t)];
            let (k, bary) = m.locate(p).unwrap();
            let tri = m.triangles[k];
            let v: f64 = (0..3).map(|i| bary[i] * sol.potentials[tri[i]]).sum();
            let exact = field.normalized_potential(rho, t).unwrap();
            assert!((v / exact - 1.0).abs() < 5e-3, "theta {t}: fem {v} vs {exact}");
        }
    }

    #[test]
    fn close_to_model_f() {
        let s = outer_one(1e-3);
        let c = model_g(&s, EPS, 4).unwrap().value;
        let f = capacitance_model_f(&s, EPS, crate::analytic2d::theta_limit(&s).unwrap()).unwrap();
        assert!((c / f - 1.0).abs() < 2e-3, "G {c} F {f}");
    }
}
