//! Whole-bearing capacitance from single contacts.
//!
//! Every unloaded element connects the rings through its inner and outer
//! contact in series; the cage is conductive, so all element branches are in
//! parallel. Loaded elements are passed in as already-known values.

use bearingcap::{CapacitanceResult, CapacitanceUnit, Error, Method, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BearingNetworkSpec {
    pub n_elements: usize,
    pub n_unloaded: usize,
    pub contact_inner: CapacitanceResult,
    pub contact_outer: CapacitanceResult,
    /// Capacitances of loaded elements, F.
    pub loaded: Vec<f64>,
}

impl BearingNetworkSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_unloaded > self.n_elements {
            return Err(Error::Domain(format!(
                "{} unloaded elements out of {}",
                self.n_unloaded, self.n_elements
            )));
        }
        if self.loaded.len() > self.n_elements - self.n_unloaded {
            return Err(Error::Domain(format!(
                "{} loaded values for {} loaded elements",
                self.loaded.len(),
                self.n_elements - self.n_unloaded
            )));
        }
        for c in [&self.contact_inner, &self.contact_outer] {
            if c.unit != CapacitanceUnit::Absolute {
                return Err(Error::Domain(format!("contact capacitance from {} is per length", c.method)));
            }
        }
        if self.loaded.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::Domain("loaded capacitances must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// Two capacitors in series.
pub fn series(c1: f64, c2: f64) -> Result<f64> {
    if c1 == 0.0 || c2 == 0.0 {
        return Err(Error::ZeroCapacitance);
    }
    Ok(c1 * c2 / (c1 + c2))
}

/// Capacitance of one unloaded element branch, F.
pub fn branch(spec: &BearingNetworkSpec) -> Result<f64> {
    series(spec.contact_inner.value, spec.contact_outer.value)
}

/// Total bearing capacitance, F.
pub fn aggregate_bearing(spec: &BearingNetworkSpec) -> Result<f64> {
    spec.validate()?;
    let loaded: f64 = spec.loaded.iter().sum();
    if spec.n_unloaded == 0 {
        return Ok(loaded);
    }
    Ok(spec.n_unloaded as f64 * branch(spec)? + loaded)
}

/// Methods that give an absolute single-contact capacitance.
pub fn contact_method(m: Method) -> Result<Method> {
    match m.unit() {
        CapacitanceUnit::Absolute => Ok(m),
        CapacitanceUnit::PerLength => Err(Error::Domain(format!("{m} is a per-length model; use A3D, D3D or E"))),
    }
}
