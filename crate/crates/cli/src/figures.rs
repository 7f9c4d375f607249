//! Data sets behind the comparison figures, FEM convergence tables and the
//! bearing total.

use std::fmt::Write as _;

use bearingcap::analytic2d::model_f;
use bearingcap::closed_form::{cap_plane_cylinder, cap_true_pair};
use bearingcap::fem2d::{convergence_study, generate_mesh, ConvergenceStudy};
use bearingcap::geometry::ContactParams;
use bearingcap::quadrature::QuadratureSpec;
use bearingcap::semi_analytic::{GapProfile, HeightModel};
use bearingcap::{BearingContactGeometry, Execution, Method, RingSide, SectionPlane, VACUUM_PERMITTIVITY};

use crate::config::{Config, FemConfig, Preset, SweepGrid};
use crate::network::{aggregate_bearing, branch, contact_method, BearingNetworkSpec};
use crate::report::{sweep_summary, sweep_table, Artifact, EmitError, Field, Table};
use crate::sweep::{evaluate, run_plan, SweepPlan, SweepReport};
use crate::RunError;

/// Tables plus a human-readable summary.
#[derive(Debug, Clone)]
pub struct Figure {
    pub name: String,
    /// `(file stem, table)`.
    pub tables: Vec<(String, Table)>,
    pub summary: String,
}

impl Figure {
    pub fn artifacts(&self) -> Result<Vec<Artifact>, EmitError> {
        let mut out = Vec::new();
        for (stem, table) in &self.tables {
            out.push(Artifact { file_name: format!("{stem}.csv"), contents: table.to_csv()? });
        }
        out.push(Artifact { file_name: format!("{}_summary.txt", self.name), contents: self.summary.clone() });
        Ok(out)
    }

    pub fn table(&self, stem: &str) -> Option<&Table> {
        self.tables.iter().find(|(s, _)| s == stem).map(|(_, t)| t)
    }
}

/// One section plane of one contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case {
    pub label: &'static str,
    pub side: RingSide,
    pub plane: SectionPlane,
}

/// `R_x` lives in plane II (rolling direction), `R_y` in plane I (groove).
pub const CASES: [Case; 4] = [
    Case { label: "Rx_inner", side: RingSide::Inner, plane: SectionPlane::SectionII },
    Case { label: "Ry_inner", side: RingSide::Inner, plane: SectionPlane::SectionI },
    Case { label: "Rx_outer", side: RingSide::Outer, plane: SectionPlane::SectionII },
    Case { label: "Ry_outer", side: RingSide::Outer, plane: SectionPlane::SectionI },
];

fn geometry(p: ContactParams, gap_um: f64) -> bearingcap::Result<BearingContactGeometry> {
    BearingContactGeometry::new(ContactParams { gap: gap_um * 1e-3, ..p })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b) / b
}

/// Cylinder over plane with the effective radius against the true circular
/// pair, per-length.
pub fn fig7(preset: &Preset, gaps_um: &[f64]) -> Figure {
    let mut columns = vec!["gap_um".to_string()];
    for c in CASES {
        columns.push(format!("plane_{}_pF_per_m", c.label));
        columns.push(format!("true_{}_pF_per_m", c.label));
        columns.push(format!("dev_{}", c.label));
    }
    let mut table = Table::new(columns);
    let mut worst = [0.0f64; 4];
    for &gap in gaps_um {
        let mut row = vec![Field::Num(gap)];
        for (k, c) in CASES.iter().enumerate() {
            let pair = geometry(preset.side(c.side), gap).and_then(|g| {
                let (eps, s) = (g.permittivity(), g.gap());
                let flat = cap_plane_cylinder(g.effective_radius(c.plane)?, s, eps)?;
                let truth = cap_true_pair(g.ball_radius(), g.partner_radius(c.plane), s, eps)?;
                Ok((flat, truth))
            });
            match pair {
                Ok((flat, truth)) => {
                    let d = rel(flat, truth);
                    if d.abs() > worst[k].abs() {
                        worst[k] = d;
                    }
                    row.extend([Field::Num(1e12 * flat), Field::Num(1e12 * truth), Field::Num(d)]);
                }
                Err(e) => row.extend(std::iter::repeat_n(Field::Failed(e.to_string()), 3)),
            }
        }
        table.push(row);
    }
    let mut summary = String::from("fig7: cylinder over plane (effective radius) vs true circular pair\n");
    for (c, w) in CASES.iter().zip(worst) {
        let _ = writeln!(summary, "{:<9} largest deviation {:+.4}%", c.label, 100.0 * w);
    }
    Figure { name: "fig7".into(), tables: vec![("fig7".into(), table)], summary }
}

/// Integration window of one section: groove half width in plane I, ball
/// radius in plane II.
pub fn section_window(g: &BearingContactGeometry, plane: SectionPlane) -> f64 {
    match plane {
        SectionPlane::SectionI => 0.5 * g.groove_width(),
        SectionPlane::SectionII => g.ball_radius(),
    }
}

/// Deviations of the Taylor (parabolic) gap from the exact circular gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorDeviation {
    /// Both heights on the effective radius.
    pub effective: f64,
    /// Taylor on the effective radius against the true arc pair.
    pub true_geometry: f64,
}

pub fn taylor_deviation(
    g: &BearingContactGeometry,
    plane: SectionPlane,
    spec: &QuadratureSpec,
) -> bearingcap::Result<TaylorDeviation> {
    let (eps, s) = (g.permittivity(), g.gap());
    let r = g.effective_radius(plane)?;
    let window = section_window(g, plane);
    let w = window.min(r);
    let cap = |p: GapProfile| p.capacitance(eps, spec).map(|q| q.value);
    let t_eff = cap(GapProfile::effective(r, s, HeightModel::Taylor, w)?)?;
    let e_eff = cap(GapProfile::effective(r, s, HeightModel::Exact, w)?)?;
    let t_true = cap(GapProfile::effective(r, s, HeightModel::Taylor, window)?)?;
    let e_true = cap(GapProfile::true_section(g.ball_radius(), g.partner_radius(plane), s, window)?)?;
    Ok(TaylorDeviation { effective: rel(t_eff, e_eff), true_geometry: rel(t_true, e_true) })
}

pub fn fig8(preset: &Preset, gaps_um: &[f64], spec: &QuadratureSpec) -> Figure {
    let mut columns = vec!["gap_um".to_string()];
    for c in CASES {
        columns.push(format!("dev_eff_{}", c.label));
        columns.push(format!("dev_true_{}", c.label));
    }
    let mut table = Table::new(columns);
    for &gap in gaps_um {
        let mut row = vec![Field::Num(gap)];
        for c in CASES {
            match geometry(preset.side(c.side), gap).and_then(|g| taylor_deviation(&g, c.plane, spec)) {
                Ok(d) => row.extend([Field::Num(d.effective), Field::Num(d.true_geometry)]),
                Err(e) => row.extend(std::iter::repeat_n(Field::Failed(e.to_string()), 2)),
            }
        }
        table.push(row);
    }
    let mut summary = String::from("fig8: Taylor gap against exact gap, effective and true geometry\n");
    if let Some(last) = table.rows.last() {
        let _ = writeln!(summary, "at the largest gap ({} um):", gaps_um.last().copied().unwrap_or(f64::NAN));
        for (k, c) in CASES.iter().enumerate() {
            let (e, t) = (last[1 + 2 * k].as_num(), last[2 + 2 * k].as_num());
            if let (Some(e), Some(t)) = (e, t) {
                let _ = writeln!(summary, "{:<9} effective {:+.4}%  true {:+.4}%", c.label, 100.0 * e, 100.0 * t);
            }
        }
    }
    Figure { name: "fig8".into(), tables: vec![("fig8".into(), table)], summary }
}

/// Outer contact, plane I, models A to D and G against F.
pub fn fig10_config(preset: &str, gaps_um: &[f64]) -> Result<Config, RunError> {
    let mut cfg = Config::from_preset(preset, RingSide::Outer, SectionPlane::SectionI)?;
    cfg.methods.list = ["A2D", "B", "C", "D", "G"].map(String::from).to_vec();
    cfg.methods.reference = "F".into();
    cfg.sweep = SweepGrid::explicit(gaps_um.to_vec());
    Ok(cfg)
}

pub fn fig10(
    preset: &str,
    gaps_um: &[f64],
    reference: Option<Method>,
    exec: Execution,
) -> Result<(Figure, SweepReport), RunError> {
    let plan = SweepPlan::from_config(&fig10_config(preset, gaps_um)?, reference)?;
    let report = run_plan(&plan, exec);
    let fig = Figure {
        name: "fig10".into(),
        tables: vec![("fig10".into(), sweep_table(&report))],
        summary: sweep_summary(&report, "fig10: outer contact, section plane I"),
    };
    Ok((fig, report))
}

/// The same 3D methods on both contacts of a preset.
pub fn contact_sweeps(
    preset: &Preset,
    gaps_um: &[f64],
    methods: &[Method],
    spec: &QuadratureSpec,
    exec: Execution,
) -> [SweepReport; 2] {
    [RingSide::Inner, RingSide::Outer].map(|side| {
        let plan = SweepPlan {
            contact: preset.side(side),
            plane: SectionPlane::SectionI,
            gaps_um: gaps_um.to_vec(),
            methods: methods.to_vec(),
            reference: methods[methods.len() - 1],
            quadrature: *spec,
            fem: FemConfig::default(),
            rect: None,
        };
        run_plan(&plan, exec)
    })
}

fn side_label(side: RingSide) -> &'static str {
    match side {
        RingSide::Inner => "inner",
        RingSide::Outer => "outer",
    }
}

fn pico(report: &SweepReport, g: usize, m: Method) -> Field {
    match report.method_index(m).map(|j| &report.cells[g][j]) {
        Some(Ok(r)) => Field::Num(1e12 * r.value),
        Some(Err(e)) => Field::Failed(e.clone()),
        None => Field::Empty,
    }
}

/// Rim share `(C_E - C_D3D) / C_E` on both contacts.
pub fn fig11(preset: &Preset, gaps_um: &[f64], spec: &QuadratureSpec, exec: Execution) -> Figure {
    let reports = contact_sweeps(preset, gaps_um, &[Method::D3D, Method::E], spec, exec);
    let mut columns = vec!["gap_um".to_string()];
    for side in [RingSide::Inner, RingSide::Outer] {
        let l = side_label(side);
        columns.extend([format!("E_{l}_pF"), format!("D3D_{l}_pF"), format!("rim_share_{l}")]);
    }
    let mut table = Table::new(columns);
    for (g, &gap) in gaps_um.iter().enumerate() {
        let mut row = vec![Field::Num(gap)];
        for r in &reports {
            let share = r.deviation(g, Method::D3D).map(|d| Field::Num(-d)).unwrap_or(Field::Failed("no value".into()));
            row.extend([pico(r, g, Method::E), pico(r, g, Method::D3D), share]);
        }
        table.push(row);
    }
    let mut summary = String::from("fig11: rim contribution to the 3D contact capacitance\n");
    for (r, side) in reports.iter().zip([RingSide::Inner, RingSide::Outer]) {
        let _ = write!(summary, "{}", sweep_summary(r, side_label(side)));
    }
    Figure { name: "fig11".into(), tables: vec![("fig11".into(), table)], summary }
}

/// Effective-radius rectangle (A3D) against the ray-traced groove plus rim (E).
pub fn fig12(preset: &Preset, gaps_um: &[f64], spec: &QuadratureSpec, exec: Execution) -> Figure {
    let reports = contact_sweeps(preset, gaps_um, &[Method::A3D, Method::D3D, Method::E], spec, exec);
    let mut columns = vec!["gap_um".to_string()];
    for side in [RingSide::Inner, RingSide::Outer] {
        let l = side_label(side);
        columns.extend([
            format!("A3D_{l}_pF"),
            format!("D3D_{l}_pF"),
            format!("E_{l}_pF"),
            format!("dev_A3D_vs_E_{l}"),
        ]);
    }
    let mut table = Table::new(columns);
    for (g, &gap) in gaps_um.iter().enumerate() {
        let mut row = vec![Field::Num(gap)];
        for r in &reports {
            let dev = r.deviation(g, Method::A3D).map(Field::Num).unwrap_or(Field::Failed("no value".into()));
            row.extend([pico(r, g, Method::A3D), pico(r, g, Method::D3D), pico(r, g, Method::E), dev]);
        }
        table.push(row);
    }
    let mut summary = String::from("fig12: absolute contact capacitance, effective radii against ray tracing\n");
    for (r, side) in reports.iter().zip([RingSide::Inner, RingSide::Outer]) {
        let _ = write!(summary, "{}", sweep_summary(r, side_label(side)));
    }
    Figure { name: "fig12".into(), tables: vec![("fig12".into(), table)], summary }
}

/// Convergence ladder plus extrapolation at every gap of the config.
pub fn fem_convergence(config: &Config, exec: Execution) -> Result<Figure, RunError> {
    let params = config.contact(config.ring())?;
    let plane = config.plane();
    let gaps = config.sweep.gaps_um()?;
    let level = config.fem.level;
    let studies = exec.map(&gaps, |&gap| -> bearingcap::Result<(ConvergenceStudy, f64)> {
        let g = geometry(params, gap)?;
        let section = g.to_dimensionless(plane)?;
        let study = convergence_study(&section, g.permittivity(), level, Execution::Sequential)?;
        Ok((study, model_f(&section, g.permittivity())?.value))
    });
    let mut ladder = Table::new(
        [
            "gap_um",
            "level",
            "elements",
            "C_energy_pF_per_m",
            "C_charge_pF_per_m",
            "dev_vs_extrapolated",
            "energy_charge_gap",
        ]
        .map(String::from)
        .to_vec(),
    );
    let mut extrap = Table::new(
        ["gap_um", "G_extrapolated_pF_per_m", "order", "error_estimate_pF_per_m", "F_pF_per_m", "dev_G_vs_F"]
            .map(String::from)
            .to_vec(),
    );
    let mut summary = format!(
        "fem-convergence: {} ring, {:?}, levels 0..={level}\n{:>10} {:>16} {:>8} {:>12}\n",
        side_label(params.ring_side),
        plane,
        "gap um",
        "C_G pF/m",
        "order",
        "dev G vs F"
    );
    for (&gap, study) in gaps.iter().zip(&studies) {
        match study {
            Ok((st, f)) => {
                for r in &st.rows {
                    ladder.push(vec![
                        Field::Num(gap),
                        Field::Int(r.level as u64),
                        Field::Int(r.elements as u64),
                        Field::Num(1e12 * r.capacitance),
                        Field::Num(1e12 * r.capacitance_charge),
                        Field::Num(r.deviation),
                        Field::Num(rel(r.capacitance_charge, r.capacitance)),
                    ]);
                }
                let dev = rel(st.extrapolated, *f);
                extrap.push(vec![
                    Field::Num(gap),
                    Field::Num(1e12 * st.extrapolated),
                    Field::Num(st.order),
                    Field::Num(1e12 * st.error_estimate()),
                    Field::Num(1e12 * f),
                    Field::Num(dev),
                ]);
                let _ = writeln!(
                    summary,
                    "{gap:>10.4} {:>16.8e} {:>8.3} {:>+11.5}%",
                    1e12 * st.extrapolated,
                    st.order,
                    100.0 * dev
                );
            }
            Err(e) => {
                let cause = Field::Failed(e.to_string());
                extrap.push(vec![Field::Num(gap), cause.clone(), Field::Empty, Field::Empty, Field::Empty, Field::Empty]);
                let _ = writeln!(summary, "{gap:>10.4} failed: {e}");
            }
        }
    }
    Ok(Figure {
        name: "fem_convergence".into(),
        tables: vec![("fem_convergence".into(), ladder), ("fem_extrapolated".into(), extrap)],
        summary,
    })
}

/// Finest mesh at the first gap of the config, in the plain-text dump format.
pub fn mesh_dump(config: &Config) -> Result<String, RunError> {
    let gap = config.sweep.gaps_um()?[0];
    let g = geometry(config.contact(config.ring())?, gap)?;
    let mesh = generate_mesh(&g.to_dimensionless(config.plane())?, config.fem.level)?;
    Ok(mesh.dump())
}

/// Contacts at the configured gap, then the series/parallel network.
pub fn bearing_total(config: &Config, exec: Execution) -> Result<(Figure, f64), RunError> {
    let net = config
        .network
        .as_ref()
        .ok_or_else(|| crate::config::ConfigError::Invalid("bearing-total needs a [network] section".into()))?;
    let method = contact_method(net.method.parse()?)?;
    let sides = [RingSide::Inner, RingSide::Outer];
    let plans = sides
        .iter()
        .map(|&side| {
            let mut plan = SweepPlan::from_config(config, None)?;
            plan.contact = config.contact(side)?;
            Ok(plan)
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    let contacts = exec.map(&plans, |plan| evaluate(plan, method, net.gap_um));
    let [inner, outer]: [_; 2] = contacts.try_into().expect("two contacts");
    let spec = BearingNetworkSpec {
        n_elements: net.n_elements,
        n_unloaded: net.n_unloaded,
        contact_inner: inner?,
        contact_outer: outer?,
        loaded: net.loaded_pf.iter().map(|c| c * 1e-12).collect(),
    };
    let total = aggregate_bearing(&spec)?;
    let branch_c = branch(&spec)?;
    let mut table = Table::new(
        [
            "n_elements",
            "n_unloaded",
            "gap_um",
            "method",
            "C_inner_pF",
            "C_outer_pF",
            "C_branch_pF",
            "C_loaded_pF",
            "C_total_pF",
        ]
        .map(String::from)
        .to_vec(),
    );
    table.push(vec![
        Field::Int(net.n_elements as u64),
        Field::Int(net.n_unloaded as u64),
        Field::Num(net.gap_um),
        Field::Text(method.tag().into()),
        Field::Num(1e12 * spec.contact_inner.value),
        Field::Num(1e12 * spec.contact_outer.value),
        Field::Num(1e12 * branch_c),
        Field::Num(net.loaded_pf.iter().sum()),
        Field::Num(1e12 * total),
    ]);
    let eps_r = config.contact(RingSide::Inner)?.permittivity / VACUUM_PERMITTIVITY;
    let summary = format!(
        "bearing-total: {} of {} elements unloaded, gap {} um, eps_r {eps_r}, method {method}\n\
         inner contact {:.6} pF, outer contact {:.6} pF, branch {:.6} pF\n\
         total {:.6} pF\n",
        net.n_unloaded,
        net.n_elements,
        net.gap_um,
        1e12 * spec.contact_inner.value,
        1e12 * spec.contact_outer.value,
        1e12 * branch_c,
        1e12 * total
    );
    Ok((Figure { name: "bearing_total".into(), tables: vec![("bearing_total".into(), table)], summary }, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PRESET_6205_C3;

    fn preset() -> Preset {
        Preset::lookup(PRESET_6205_C3).unwrap()
    }

    #[test]
    fn fig7_shape_and_values() {
        let fig = fig7(&preset(), &[0.1, 1.0]);
        let t = fig.table("fig7").unwrap();
        assert_eq!(t.columns.len(), 13);
        assert_eq!(t.rows.len(), 2);
        // concave pairs: the plane model underestimates
        for d in t.numbers("dev_Ry_outer").unwrap() {
            assert!(d.unwrap() < 0.0);
        }
    }

    #[test]
    fn fig8_effective_taylor_overestimates() {
        let fig = fig8(&preset(), &[0.1, 5.0], &QuadratureSpec::default());
        let t = fig.table("fig8").unwrap();
        for c in CASES {
            for d in t.numbers(&format!("dev_eff_{}", c.label)).unwrap() {
                let d = d.unwrap();
                assert!(d > 0.0 && d < 0.01, "{}: {d}", c.label);
            }
        }
    }

    #[test]
    fn section_window_by_plane() {
        let g = BearingContactGeometry::bearing_6205_c3(RingSide::Outer, 1e-3, 2.2).unwrap();
        assert_eq!(section_window(&g, SectionPlane::SectionI), 2.41);
        assert_eq!(section_window(&g, SectionPlane::SectionII), 4.0);
    }

    #[test]
    fn bearing_total_needs_network() {
        let cfg = Config::from_preset(PRESET_6205_C3, RingSide::Outer, SectionPlane::SectionI).unwrap();
        assert!(bearing_total(&cfg, Execution::Sequential).is_err());
    }

    #[test]
    fn fem_convergence_tables() {
        let mut cfg = Config::from_preset(PRESET_6205_C3, RingSide::Outer, SectionPlane::SectionI).unwrap();
        cfg.sweep = SweepGrid::explicit(vec![1.0]);
        cfg.fem.level = 3;
        let fig = fem_convergence(&cfg, Execution::Sequential).unwrap();
        assert_eq!(fig.table("fem_convergence").unwrap().rows.len(), 4);
        let dev = fig.table("fem_extrapolated").unwrap().numbers("dev_G_vs_F").unwrap()[0].unwrap();
        assert!(dev.abs() < 1e-3, "{dev}");
        assert!(mesh_dump(&cfg).unwrap().starts_with("# bearingcap mesh v1"));
    }
}
