//! TOML run configuration.
//!
//! ```toml
//! [geometry]
//! preset = "bearing-6205-c3"   # optional; fields below override it
//! ring = "outer"               # contact swept by `sweep`
//! plane = "I"                  # "I" (groove) or "II" (rolling direction)
//! ball_radius_mm = 4.0
//! ring_width_mm = 15.0
//! relative_permittivity = 2.2
//!
//! [geometry.outer]
//! groove_radius_mm = 4.24
//! raceway_radius_mm = 23.25
//! groove_width_mm = 4.82
//!
//! [sweep]
//! spacing = "log"              # or "linear"
//! min_um = 0.1
//! max_um = 5.0
//! points = 24
//! # gaps_um = [0.1, 0.5, 1.0]  # explicit list, replaces the grid
//!
//! [methods]
//! list = ["A2D", "B", "C", "D", "G"]
//! reference = "F"
//!
//! [quadrature]
//! rel_tol = 1e-9
//! abs_tol = 1e-22
//! max_subdivisions = 2000
//!
//! [fem]
//! level = 5
//! extrapolate = true
//!
//! [model_a3d]                  # optional integration rectangle, mm
//! half_x_mm = 4.0
//! half_y_mm = 2.41
//!
//! [network]                    # only read by `bearing-total`
//! n_elements = 9
//! n_unloaded = 5
//! gap_um = 0.5
//! method = "E"
//! loaded_pf = []
//! ```

use std::path::{Path, PathBuf};

use bearingcap::geometry::ContactParams;
use bearingcap::quadrature::QuadratureSpec;
use bearingcap::semi_analytic::IntegrationRect;
use bearingcap::{Method, RingSide, SectionPlane, VACUUM_PERMITTIVITY};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {cause}")]
    Io { path: PathBuf, cause: std::io::Error },
    #[error("cannot parse config: {0}")]
    Parse(toml::de::Error),
    #[error("unknown geometry preset '{0}' (available: bearing-6205-c3)")]
    UnknownPreset(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] bearingcap::Error),
}

impl From<toml::de::Error> for ConfigError {
    fn from(e: toml::de::Error) -> Self {
        ConfigError::Parse(e)
    }
}

pub const PRESET_6205_C3: &str = "bearing-6205-c3";

/// Both contacts of one bearing, gap left at a placeholder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub inner: ContactParams,
    pub outer: ContactParams,
}

impl Preset {
    pub fn lookup(name: &str) -> Result<Preset, ConfigError> {
        match name.trim().to_ascii_lowercase().as_str() {
            PRESET_6205_C3 | "6205-c3" | "6205" => Ok(Preset {
                inner: ContactParams::bearing_6205_c3(RingSide::Inner),
                outer: ContactParams::bearing_6205_c3(RingSide::Outer),
            }),
            _ => Err(ConfigError::UnknownPreset(name.to_string())),
        }
    }

    pub fn side(&self, side: RingSide) -> ContactParams {
        match side {
            RingSide::Inner => self.inner,
            RingSide::Outer => self.outer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Inner,
    Outer,
}

impl From<Ring> for RingSide {
    fn from(r: Ring) -> Self {
        match r {
            Ring::Inner => RingSide::Inner,
            Ring::Outer => RingSide::Outer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Plane {
    #[serde(rename = "I", alias = "i", alias = "section-i")]
    I,
    #[serde(rename = "II", alias = "ii", alias = "section-ii")]
    II,
}

impl From<Plane> for SectionPlane {
    fn from(p: Plane) -> Self {
        match p {
            Plane::I => SectionPlane::SectionI,
            Plane::II => SectionPlane::SectionII,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaceConfig {
    pub groove_radius_mm: Option<f64>,
    pub raceway_radius_mm: Option<f64>,
    pub groove_width_mm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub preset: Option<String>,
    pub ring: Ring,
    #[serde(default = "default_plane")]
    pub plane: Plane,
    pub ball_radius_mm: Option<f64>,
    pub ring_width_mm: Option<f64>,
    pub relative_permittivity: Option<f64>,
    #[serde(default)]
    pub inner: RaceConfig,
    #[serde(default)]
    pub outer: RaceConfig,
}

fn default_plane() -> Plane {
    Plane::I
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
    #[serde(default = "default_min")]
    pub min_um: f64,
    #[serde(default = "default_max")]
    pub max_um: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    pub gaps_um: Option<Vec<f64>>,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}
fn default_min() -> f64 {
    0.1
}
fn default_max() -> f64 {
    5.0
}
fn default_points() -> usize {
    24
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            spacing: default_spacing(),
            min_um: default_min(),
            max_um: default_max(),
            points: default_points(),
            gaps_um: None,
        }
    }
}

impl SweepGrid {
    pub fn explicit(gaps_um: Vec<f64>) -> Self {
        SweepGrid { gaps_um: Some(gaps_um), ..SweepGrid::default() }
    }

    /// Gap values in µm, ascending for generated grids.
    pub fn gaps_um(&self) -> Result<Vec<f64>, ConfigError> {
        if let Some(list) = &self.gaps_um {
            if list.is_empty() || list.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
                return Err(ConfigError::Invalid("gaps_um must be a non-empty list of positive values".into()));
            }
            return Ok(list.clone());
        }
        let (lo, hi, n) = (self.min_um, self.max_um, self.points);
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) || n == 0 {
            return Err(ConfigError::Invalid(format!("bad sweep grid [{lo}, {hi}] with {n} points")));
        }
        if n == 1 {
            return Ok(vec![lo]);
        }
        let last = (n - 1) as f64;
        Ok((0..n)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Log => lo * (hi / lo).powf(t),
                    Spacing::Linear => lo + (hi - lo) * t,
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodsConfig {
    #[serde(default = "default_methods")]
    pub list: Vec<String>,
    #[serde(default = "default_reference")]
    pub reference: String,
}

fn default_methods() -> Vec<String> {
    ["A2D", "B", "C", "D", "G"].map(String::from).to_vec()
}
fn default_reference() -> String {
    "F".into()
}

impl Default for MethodsConfig {
    fn default() -> Self {
        MethodsConfig { list: default_methods(), reference: default_reference() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default = "default_rel")]
    pub rel_tol: f64,
    #[serde(default = "default_abs")]
    pub abs_tol: f64,
    #[serde(default = "default_subdiv")]
    pub max_subdivisions: usize,
}

fn default_rel() -> f64 {
    QuadratureSpec::default().rel_tol
}
fn default_abs() -> f64 {
    QuadratureSpec::default().abs_tol
}
fn default_subdiv() -> usize {
    QuadratureSpec::default().max_subdivisions
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rel_tol: default_rel(), abs_tol: default_abs(), max_subdivisions: default_subdiv() }
    }
}

impl QuadratureConfig {
    pub fn spec(&self) -> Result<QuadratureSpec, ConfigError> {
        let spec =
            QuadratureSpec { rel_tol: self.rel_tol, abs_tol: self.abs_tol, max_subdivisions: self.max_subdivisions };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FemConfig {
    #[serde(default = "default_level")]
    pub level: u32,
    /// Report the Richardson value from levels `level-2..=level`.
    #[serde(default = "default_true")]
    pub extrapolate: bool,
}

fn default_level() -> u32 {
    5
}
fn default_true() -> bool {
    true
}

impl Default for FemConfig {
    fn default() -> Self {
        FemConfig { level: default_level(), extrapolate: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectConfig {
    pub half_x_mm: f64,
    pub half_y_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub n_elements: usize,
    pub n_unloaded: usize,
    pub gap_um: f64,
    #[serde(default = "default_network_method")]
    pub method: String,
    /// Externally supplied loaded-element capacitances, pF.
    #[serde(default)]
    pub loaded_pf: Vec<f64>,
}

fn default_network_method() -> String {
    "E".into()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub sweep: SweepGrid,
    #[serde(default)]
    pub methods: MethodsConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub fem: FemConfig,
    pub model_a3d: Option<RectConfig>,
    pub network: Option<NetworkConfig>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|cause| ConfigError::Io { path: path.to_path_buf(), cause })?;
        Config::parse(&text)
    }

    /// Preset geometry with default sweep settings.
    pub fn from_preset(preset: &str, ring: RingSide, plane: SectionPlane) -> Result<Config, ConfigError> {
        Preset::lookup(preset)?;
        Ok(Config {
            geometry: GeometryConfig {
                preset: Some(preset.to_string()),
                ring: match ring {
                    RingSide::Inner => Ring::Inner,
                    RingSide::Outer => Ring::Outer,
                },
                plane: match plane {
                    SectionPlane::SectionI => Plane::I,
                    SectionPlane::SectionII => Plane::II,
                },
                ball_radius_mm: None,
                ring_width_mm: None,
                relative_permittivity: None,
                inner: RaceConfig::default(),
                outer: RaceConfig::default(),
            },
            sweep: SweepGrid::default(),
            methods: MethodsConfig::default(),
            quadrature: QuadratureConfig::default(),
            fem: FemConfig::default(),
            model_a3d: None,
            network: None,
        })
    }

    pub fn ring(&self) -> RingSide {
        self.geometry.ring.into()
    }

    pub fn plane(&self) -> SectionPlane {
        self.geometry.plane.into()
    }

    /// Contact parameters for one ring side; the gap is a placeholder that
    /// sweeps overwrite.
    pub fn contact(&self, side: RingSide) -> Result<ContactParams, ConfigError> {
        let g = &self.geometry;
        let base = g.preset.as_deref().map(Preset::lookup).transpose()?.map(|p| p.side(side));
        let race = match side {
            RingSide::Inner => &g.inner,
            RingSide::Outer => &g.outer,
        };
        let pick = |value: Option<f64>, preset: Option<f64>, name: &str| {
            value.or(preset).ok_or_else(|| ConfigError::Invalid(format!("geometry field '{name}' is required")))
        };
        let eps_r = pick(
            g.relative_permittivity,
            base.map(|b| b.permittivity / VACUUM_PERMITTIVITY),
            "relative_permittivity",
        )?;
        let params = ContactParams {
            ball_radius: pick(g.ball_radius_mm, base.map(|b| b.ball_radius), "ball_radius_mm")?,
            groove_radius: pick(race.groove_radius_mm, base.map(|b| b.groove_radius), "groove_radius_mm")?,
            raceway_radius: pick(race.raceway_radius_mm, base.map(|b| b.raceway_radius), "raceway_radius_mm")?,
            ring_side: side,
            groove_width: pick(race.groove_width_mm, base.map(|b| b.groove_width), "groove_width_mm")?,
            ring_width: pick(g.ring_width_mm, base.map(|b| b.ring_width), "ring_width_mm")?,
            gap: 1e-3,
            permittivity: eps_r * VACUUM_PERMITTIVITY,
        };
        params.build()?;
        Ok(params)
    }

    pub fn methods(&self) -> Result<Vec<Method>, ConfigError> {
        let mut out = Vec::new();
        for tag in &self.methods.list {
            let m: Method = tag.parse()?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        Ok(out)
    }

    pub fn reference(&self) -> Result<Method, ConfigError> {
        Ok(self.methods.reference.parse()?)
    }

    pub fn rect(&self) -> Option<IntegrationRect> {
        self.model_a3d.map(|r| IntegrationRect { half_x: r.half_x_mm, half_y: r.half_y_mm })
    }
}
