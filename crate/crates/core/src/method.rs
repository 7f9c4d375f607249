use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Capacitance model tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Cylinder over plane with the effective radius (per length).
    A2D,
    /// Effective radii with Taylor gap over a rectangle (absolute).
    A3D,
    /// Parallel plates between the true arcs (per length).
    B,
    /// Rays normal to the ball, raceway area element (per length).
    C,
    /// Rays normal to the ball, ball area element (per length).
    D,
    /// Ball area element over the 3D groove, without rim (absolute).
    D3D,
    /// Ball area element over the 3D groove plus rim band (absolute).
    E,
    /// Exact line-charge solution (per length).
    F,
    /// 2D finite elements (per length).
    G,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::A2D,
        Method::A3D,
        Method::B,
        Method::C,
        Method::D,
        Method::D3D,
        Method::E,
        Method::F,
        Method::G,
    ];

    pub fn unit(self) -> CapacitanceUnit {
        match self {
            Method::A3D | Method::D3D | Method::E => CapacitanceUnit::Absolute,
            _ => CapacitanceUnit::PerLength,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Method::A2D => "A2D",
            Method::A3D => "A3D",
            Method::B => "B",
            Method::C => "C",
            Method::D => "D",
            Method::D3D => "D3D",
            Method::E => "E",
            Method::F => "F",
            Method::G => "G",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.trim().to_ascii_uppercase();
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.tag() == up || (up == "A" && *m == Method::A2D))
            .ok_or_else(|| Error::Domain(format!("unknown method tag '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacitanceUnit {
    /// F/m, for translation-invariant 2D electrode pairs.
    PerLength,
    /// F.
    Absolute,
}

impl CapacitanceUnit {
    /// Reporting scale to pF/m or pF.
    pub fn to_pico(self, value: f64) -> f64 {
        value * 1e12
    }

    pub fn pico_label(self) -> &'static str {
        match self {
            CapacitanceUnit::PerLength => "pF/m",
            CapacitanceUnit::Absolute => "pF",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Diagnostics {
    /// Absolute error estimate in the unit of the value (0 when exact).
    pub error_estimate: f64,
    /// Integrand evaluations, linear solver iterations, or similar.
    pub work: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitanceResult {
    pub value: f64,
    pub unit: CapacitanceUnit,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl CapacitanceResult {
    pub fn exact(method: Method, value: f64) -> Self {
        CapacitanceResult { value, unit: method.unit(), method, diagnostics: Diagnostics::default() }
    }

    pub fn with_diagnostics(method: Method, value: f64, diagnostics: Diagnostics) -> Self {
        CapacitanceResult { value, unit: method.unit(), method, diagnostics }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
        assert_eq!("a".parse::<Method>().unwrap(), Method::A2D);
        assert!("Z".parse::<Method>().is_err());
    }
}
