use std::collections::HashMap;
use std::fmt::Write as _;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::DimensionlessSection;
use crate::semi_analytic::{ray_gap, section_limits};

/// Base elements per unit of the grading integral: with `N_0 >= F / 20`
/// the cell aspect ratio stays below 20.
const MAX_ASPECT: f64 = 20.0;
const MIN_BASE_FIBRES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    Ball,
    Race,
    Insulating,
}

impl BoundaryTag {
    fn label(self) -> &'static str {
        match self {
            BoundaryTag::Ball => "ball",
            BoundaryTag::Race => "race",
            BoundaryTag::Insulating => "insulating",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: BoundaryTag,
    /// Triangle owning the edge.
    pub triangle: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct FibreLayout {
    n_theta: usize,
    n_lambda: usize,
}

/// Triangulation in dimensionless `(xi, zeta)` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2D {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<BoundaryEdge>,
    /// Multiplier restoring the mirrored half of the domain.
    pub symmetry_factor: f64,
    /// Polar angle of each fibre.
    pub fibre_angles: Vec<f64>,
    layout: FibreLayout,
}

/// Node density `1/(alpha + c t^2) + k` along the ball arc and its integral.
struct Grading {
    alpha: f64,
    c: f64,
    k: f64,
}

impl Grading {
    fn new(section: &DimensionlessSection, theta_end: f64) -> Self {
        let (tau, sigma, alpha) = (section.tau(), section.sigma(), section.alpha());
        let c = (sigma * (1.0 + alpha) / (2.0 * tau)).max(0.0);
        let mut g = Grading { alpha, c, k: 0.0 };
        g.k = 0.5 * g.peak(theta_end) / theta_end;
        g
    }

    fn peak(&self, t: f64) -> f64 {
        let w = (self.alpha * self.c).sqrt();
        if self.c * t * t < 1e-12 * self.alpha {
            t / self.alpha
        } else {
            (t * (self.c / self.alpha).sqrt()).atan() / w
        }
    }

    fn cumulative(&self, t: f64) -> f64 {
        self.peak(t) + self.k * t
    }

    fn density(&self, t: f64) -> f64 {
        1.0 / (self.alpha + self.c * t * t) + self.k
    }

    /// Angle at which the cumulative density reaches `target`.
    fn invert(&self, target: f64, theta_end: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, theta_end);
        let mut t = target / self.cumulative(theta_end) * theta_end;
        for _ in 0..200 {
            let f = self.cumulative(t) - target;
            if f.abs() <= 1e-13 * target.max(1.0) {
                return t;
            }
            if f < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let next = t - f / self.density(t);
            t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-15 * theta_end {
                break;
            }
        }
        t
    }
}

/// Fibre mesh truncated at the analytic integration limit of the section.
pub fn generate_mesh(section: &DimensionlessSection, level: u32) -> Result<Mesh2D> {
    let theta_end = section_limits(section)?.theta;
    mesh_with_limit(section, level, theta_end)
}

/// Fibre mesh over `0 <= theta <= theta_end`, mirrored about `theta = 0`.
///
/// Level `n` has `2^n` layers across the gap and `N_0 2^n` fibres, so each
/// level quarters the element size.
pub fn mesh_with_limit(section: &DimensionlessSection, level: u32, theta_end: f64) -> Result<Mesh2D> {
    if !(theta_end > 0.0 && theta_end <= PI) {
        return Err(Error::Domain(format!("mesh angle must lie in (0, pi], got {theta_end}")));
    }
    if level > 12 {
        return Err(Error::Domain(format!("refinement level {level} is too large")));
    }
    let grading = Grading::new(section, theta_end);
    let total = grading.cumulative(theta_end);
    let base = MIN_BASE_FIBRES.max((total / MAX_ASPECT).ceil() as usize);
    let n_lambda = 1usize << level;
    let n_theta = base << level;

    let mut fibre_angles = Vec::with_capacity(n_theta + 1);
    let mut gaps = Vec::with_capacity(n_theta + 1);
    for i in 0..=n_theta {
        let t = if i == 0 {
            0.0
        } else if i == n_theta {
            theta_end
        } else {
            grading.invert(total * i as f64 / n_theta as f64, theta_end)
        };
        let h = ray_gap(section, t)?;
        if !(h > 0.0) {
            return Err(Error::Geometry(format!("arcs meet at theta = {t}")));
        }
        fibre_angles.push(t);
        gaps.push(h);
    }

    let stride = n_lambda + 1;
    let mut nodes = Vec::with_capacity((n_theta + 1) * stride);
    for (t, h) in fibre_angles.iter().zip(&gaps) {
        let (s, c) = t.sin_cos();
        for j in 0..=n_lambda {
            let r = 1.0 + h * j as f64 / n_lambda as f64;
            nodes.push([r * s, r * c]);
        }
    }

    let id = |i: usize, j: usize| i * stride + j;
    let mut triangles = Vec::with_capacity(2 * n_theta * n_lambda);
    for i in 0..n_theta {
        for j in 0..n_lambda {
            let quad = [id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)];
            for tri in [[quad[0], quad[1], quad[2]], [quad[0], quad[2], quad[3]]] {
                triangles.push(orient(&nodes, tri));
            }
        }
    }

    let mut mesh = Mesh2D {
        nodes,
        triangles,
        edges: Vec::new(),
        symmetry_factor: 2.0,
        fibre_angles,
        layout: FibreLayout { n_theta, n_lambda },
    };
    mesh.edges = mesh.tag_boundary(|a, b| {
        let (ia, ja) = (a / stride, a % stride);
        let (ib, jb) = (b / stride, b % stride);
        if ja == 0 && jb == 0 {
            BoundaryTag::Ball
        } else if ja == n_lambda && jb == n_lambda {
            BoundaryTag::Race
        } else {
            debug_assert!(ia == ib);
            BoundaryTag::Insulating
        }
    });
    mesh.validate()?;
    Ok(mesh)
}

fn signed_area(nodes: &[[f64; 2]], t: [usize; 3]) -> f64 {
    let [a, b, c] = [nodes[t[0]], nodes[t[1]], nodes[t[2]]];
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn orient(nodes: &[[f64; 2]], t: [usize; 3]) -> [usize; 3] {
    if signed_area(nodes, t) < 0.0 {
        [t[0], t[2], t[1]]
    } else {
        t
    }
}

impl Mesh2D {
    pub fn element_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn area(&self, tri: usize) -> f64 {
        signed_area(&self.nodes, self.triangles[tri])
    }

    /// Edges used by exactly one triangle, with their owner.
    fn free_edges(&self) -> Vec<([usize; 2], usize)> {
        let mut seen: HashMap<(usize, usize), (usize, usize, [usize; 2])> = HashMap::new();
        for (k, t) in self.triangles.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                seen.entry(key).and_modify(|v| v.0 += 1).or_insert((1, k, [a, b]));
            }
        }
        let mut out: Vec<_> = seen.into_values().filter(|v| v.0 == 1).map(|v| (v.2, v.1)).collect();
        out.sort_unstable();
        out
    }

    fn tag_boundary<F: Fn(usize, usize) -> BoundaryTag>(&self, tag: F) -> Vec<BoundaryEdge> {
        self.free_edges()
            .into_iter()
            .map(|(nodes, triangle)| BoundaryEdge { nodes, tag: tag(nodes[0], nodes[1]), triangle })
            .collect()
    }

    /// Checks orientation, boundary partition and electrode connectivity.
    pub fn validate(&self) -> Result<()> {
        for (k, t) in self.triangles.iter().enumerate() {
            if !(signed_area(&self.nodes, *t) > 0.0) {
                return Err(Error::InvalidMesh(format!("triangle {k} has non-positive area")));
            }
        }
        let free = self.free_edges();
        if free.len() != self.edges.len() {
            return Err(Error::InvalidMesh("boundary tags do not cover the free edges".into()));
        }
        for tag in [BoundaryTag::Ball, BoundaryTag::Race] {
            let chain: Vec<[usize; 2]> = self.edges.iter().filter(|e| e.tag == tag).map(|e| e.nodes).collect();
            if chain.is_empty() {
                return Err(Error::InvalidMesh(format!("no {} edges", tag.label())));
            }
            if !connected(&chain) {
                return Err(Error::InvalidMesh(format!("{} edges are not connected", tag.label())));
            }
        }
        Ok(())
    }

    pub fn boundary_length(&self, tag: BoundaryTag) -> f64 {
        self.edges
            .iter()
            .filter(|e| e.tag == tag)
            .map(|e| {
                let [a, b] = [self.nodes[e.nodes[0]], self.nodes[e.nodes[1]]];
                (b[0] - a[0]).hypot(b[1] - a[1])
            })
            .sum()
    }

    /// Dirichlet value per node: 1 on the ball, 0 on the raceway.
    pub fn dirichlet(&self) -> Vec<Option<f64>> {
        let mut d = vec![None; self.nodes.len()];
        for e in &self.edges {
            let v = match e.tag {
                BoundaryTag::Ball => 1.0,
                BoundaryTag::Race => 0.0,
                BoundaryTag::Insulating => continue,
            };
            d[e.nodes[0]] = Some(v);
            d[e.nodes[1]] = Some(v);
        }
        d
    }

    /// Triangle containing `p` and its barycentric coordinates.
    pub fn locate(&self, p: [f64; 2]) -> Option<(usize, [f64; 3])> {
        let theta = p[0].atan2(p[1]);
        let n_theta = self.layout.n_theta;
        let i = self.fibre_angles.partition_point(|&t| t <= theta).saturating_sub(1).min(n_theta - 1);
        let per_strip = 2 * self.layout.n_lambda;
        let lo = i.saturating_sub(1) * per_strip;
        let hi = ((i + 2).min(n_theta)) * per_strip;
        (lo..hi).find_map(|k| {
            let bary = self.barycentric(k, p);
            bary.iter().all(|&b| b >= -1e-12).then_some((k, bary))
        })
    }

    fn barycentric(&self, tri: usize, p: [f64; 2]) -> [f64; 3] {
        let t = self.triangles[tri];
        let [a, b, c] = [self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]];
        let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
        let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
        let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
        [1.0 - l1 - l2, l1, l2]
    }

    /// Plain-text dump: a header line, then `nodes N` with `x y` rows,
    /// `triangles M` with `a b c` rows, `edges K` with `a b tag` rows.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# bearingcap mesh v1");
        let _ = writeln!(out, "nodes {}", self.nodes.len());
        for n in &self.nodes {
            let _ = writeln!(out, "{:.17e} {:.17e}", n[0], n[1]);
        }
        let _ = writeln!(out, "triangles {}", self.triangles.len());
        for t in &self.triangles {
            let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(out, "edges {}", self.edges.len());
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.nodes[0], e.nodes[1], e.tag.label());
        }
        out
    }
}

fn connected(chain: &[[usize; 2]]) -> bool {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    fn find(p: &mut HashMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while let Some(&q) = p.get(&r) {
            if q == r {
                break;
            }
            r = q;
        }
        p.insert(x, r);
        r
    }
    for e in chain {
        for n in e {
            parent.entry(*n).or_insert(*n);
        }
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        parent.insert(a, b);
    }
    let nodes: Vec<usize> = parent.keys().copied().collect();
    let root = find(&mut parent, nodes[0]);
    nodes.into_iter().all(|n| find(&mut parent, n) == root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BearingContactGeometry, RingSide, SectionPlane};
    use approx::assert_relative_eq;

    fn outer_one(gap: f64) -> DimensionlessSection {
        BearingContactGeometry::bearing_6205_c3(RingSide::Outer, gap, 2.2)
            .unwrap()
            .to_dimensionless(SectionPlane::SectionI)
            .unwrap()
    }

    #[test]
    fn element_count_quadruples() {
        let s = outer_one(1e-3);
        let m2 = generate_mesh(&s, 2).unwrap();
        let m3 = generate_mesh(&s, 3).unwrap();
        assert_eq!(m3.element_count(), 4 * m2.element_count());
    }

    #[test]
    fn positive_areas_through_level_six() {
        let s = outer_one(1e-3);
        for n in 0..=6 {
            let m = generate_mesh(&s, n).unwrap();
            assert!((0..m.element_count()).all(|k| m.area(k) > 0.0));
        }
    }

    #[test]
    fn boundary_lengths_match_arcs() {
        let s = outer_one(1e-3);
        let m = generate_mesh(&s, 4).unwrap();
        let theta_end = section_limits(&s).unwrap().theta;
        assert_relative_eq!(m.boundary_length(BoundaryTag::Ball), theta_end, max_relative = 1e-3);
        // race arc: swept angle about the raceway centre
        let h = ray_gap(&s, theta_end).unwrap();
        let end = [(1.0 + h) * theta_end.sin(), (1.0 + h) * theta_end.cos() + s.sigma()];
        let psi = end[0].atan2(end[1]);
        assert_relative_eq!(m.boundary_length(BoundaryTag::Race), s.tau() * psi, max_relative = 1e-3);
    }

    #[test]
    fn boundary_partition_and_tags() {
        let s = outer_one(1e-4);
        let m = generate_mesh(&s, 1).unwrap();
        m.validate().unwrap();
        let d = m.dirichlet();
        assert_eq!(d.iter().filter(|v| **v == Some(1.0)).count(), m.fibre_angles.len());
        assert_eq!(d.iter().filter(|v| **v == Some(0.0)).count(), m.fibre_angles.len());
        let mut broken = m.clone();
        broken.triangles.swap(0, 1);
        broken.triangles[0] = [broken.triangles[0][0], broken.triangles[0][2], broken.triangles[0][1]];
        assert!(matches!(broken.validate(), Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn grading_concentrates_at_contact() {
        let s = outer_one(1e-4);
        let m = generate_mesh(&s, 0).unwrap();
        let a = &m.fibre_angles;
        assert!(a[1] - a[0] < 0.05 * (a[a.len() - 1] - a[a.len() - 2]));
    }

    #[test]
    fn locate_finds_points() {
        let s = outer_one(1e-3);
        let m = generate_mesh(&s, 2).unwrap();
        let t: f64 = 0.2;
        let h = ray_gap(&s, t).unwrap();
        let p = [(1.0 + 0.5 * h) * t.sin(), (1.0 + 0.5 * h) * t.cos()];
        let (k, bary) = m.locate(p).unwrap();
        let tri = m.triangles[k];
        let back = [0, 1].map(|c| (0..3).map(|v| bary[v] * m.nodes[tri[v]][c]).sum::<f64>());
        assert_relative_eq!(back[0], p[0], max_relative = 1e-10);
        assert!(m.locate([0.0, 0.5]).is_none());
    }

    #[test]
    fn dump_lists_everything() {
        let s = outer_one(1e-3);
        let m = generate_mesh(&s, 0).unwrap();
        let text = m.dump();
        assert!(text.starts_with("# bearingcap mesh v1\nnodes "));
        assert_eq!(text.lines().count(), 4 + m.nodes.len() + m.triangles.len() + m.edges.len());
        assert!(text.contains(" ball\n") && text.contains(" race\n") && text.contains(" insulating\n"));
    }
}
