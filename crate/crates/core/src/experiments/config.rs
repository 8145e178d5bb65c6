//! Flat JSON run configuration. Values come from defaults, then the config
//! file, then command-line overrides; later sources win.

use std::f64::consts::PI;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::floquet::{Boundary, ModelParams, ParameterPoint};
use crate::gaussianity::Part;

/// Which sample(s) the Gaussianity test runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartMode {
    Pooled,
    Real,
    Imaginary,
    /// Real and imaginary parts tested separately.
    Split,
}

impl PartMode {
    pub fn parts(self) -> Vec<Part> {
        match self {
            PartMode::Pooled => vec![Part::Pooled],
            PartMode::Real => vec![Part::Real],
            PartMode::Imaginary => vec![Part::Imaginary],
            PartMode::Split => vec![Part::Real, Part::Imaginary],
        }
    }
}

/// Every recognised key, in documentation order.
pub const KEYS: &[&str] = &[
    "M", "point", "theta", "W", "theta_units", "W_units", "Phi", "boundary", "count", "seed", "m", "m_max",
    "N", "input", "output", "horizon", "bins", "alpha", "part", "haar", "sweep_theta_units", "sweep_W_units",
    "kbar", "orbits", "steps", "X0", "k0", "shots", "sff_n",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(rename = "M")]
    pub modes: usize,
    /// Named parameter point; excludes `theta`/`W` and their unit forms.
    pub point: Option<ParameterPoint>,
    pub theta: Option<f64>,
    #[serde(rename = "W")]
    pub disorder: Option<f64>,
    /// θ in units of `1/(16Φ)`.
    pub theta_units: Option<f64>,
    /// W in units of `1/(16Φ)`.
    #[serde(rename = "W_units")]
    pub disorder_units: Option<f64>,
    #[serde(rename = "Phi")]
    pub trap: f64,
    pub boundary: Boundary,
    /// Disorder realizations.
    pub count: usize,
    /// Master seed for disorder, Haar draws and sampling.
    pub seed: u64,
    /// Single evaluation time (gaussianity, sample).
    pub m: u64,
    /// Last time of a series; per-command default when absent.
    pub m_max: Option<u64>,
    /// Photon number; per-command default when absent.
    #[serde(rename = "N")]
    pub photons: Option<usize>,
    /// Input photon modes (0-based); per-command default when absent.
    pub input: Option<Vec<usize>>,
    pub output: Option<Vec<usize>>,
    /// Time-average horizon; `50·M` when absent.
    pub horizon: Option<u64>,
    pub bins: usize,
    pub alpha: f64,
    pub part: PartMode,
    /// Also run a Haar-random control.
    pub haar: bool,
    pub sweep_theta_units: Option<Vec<f64>>,
    #[serde(rename = "sweep_W_units")]
    pub sweep_disorder_units: Option<Vec<f64>>,
    /// Classical kick strengths; derived from θ and Φ when absent.
    pub kbar: Option<Vec<f64>>,
    pub orbits: usize,
    pub steps: usize,
    #[serde(rename = "X0")]
    pub x0: f64,
    pub k0: f64,
    pub shots: usize,
    /// Order `N` of the `2N`-point form factor.
    pub sff_n: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            modes: 300,
            point: None,
            theta: None,
            disorder: None,
            theta_units: None,
            disorder_units: None,
            trap: PI / 4.0,
            boundary: Boundary::Periodic,
            count: 100,
            seed: 0,
            m: 300,
            m_max: None,
            photons: None,
            input: None,
            output: None,
            horizon: None,
            bins: 50,
            alpha: 0.05,
            part: PartMode::Pooled,
            haar: false,
            sweep_theta_units: None,
            sweep_disorder_units: None,
            kbar: None,
            orbits: 50,
            steps: 500,
            x0: 0.0,
            k0: 0.5,
            shots: 1000,
            sff_n: 1,
        }
    }
}

fn field<T: DeserializeOwned>(key: &str, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::invalid(format!("field `{key}`: {e}")))
}

fn opt<T: DeserializeOwned>(key: &str, v: Value) -> Result<Option<T>> {
    if v.is_null() { Ok(None) } else { field(key, v).map(Some) }
}

impl RunConfig {
    /// Applies one key; unknown keys are rejected by name.
    pub fn set(&mut self, key: &str, v: Value) -> Result<()> {
        match key {
            "M" => self.modes = field(key, v)?,
            "point" => self.point = opt(key, v)?,
            "theta" => self.theta = opt(key, v)?,
            "W" => self.disorder = opt(key, v)?,
            "theta_units" => self.theta_units = opt(key, v)?,
            "W_units" => self.disorder_units = opt(key, v)?,
            "Phi" => self.trap = field(key, v)?,
            "boundary" => self.boundary = field(key, v)?,
            "count" => self.count = field(key, v)?,
            "seed" => self.seed = field(key, v)?,
            "m" => self.m = field(key, v)?,
            "m_max" => self.m_max = opt(key, v)?,
            "N" => self.photons = opt(key, v)?,
            "input" => self.input = opt(key, v)?,
            "output" => self.output = opt(key, v)?,
            "horizon" => self.horizon = opt(key, v)?,
            "bins" => self.bins = field(key, v)?,
            "alpha" => self.alpha = field(key, v)?,
            "part" => self.part = field(key, v)?,
            "haar" => self.haar = field(key, v)?,
            "sweep_theta_units" => self.sweep_theta_units = opt(key, v)?,
            "sweep_W_units" => self.sweep_disorder_units = opt(key, v)?,
            "kbar" => self.kbar = opt(key, v)?,
            "orbits" => self.orbits = field(key, v)?,
            "steps" => self.steps = field(key, v)?,
            "X0" => self.x0 = field(key, v)?,
            "k0" => self.k0 = field(key, v)?,
            "shots" => self.shots = field(key, v)?,
            "sff_n" => self.sff_n = field(key, v)?,
            _ => return Err(Error::invalid(format!("unknown config field `{key}`"))),
        }
        Ok(())
    }

    pub fn apply(&mut self, map: Map<String, Value>) -> Result<()> {
        for (k, v) in map {
            self.set(&k, v)?;
        }
        Ok(())
    }

    /// Defaults, then `file`, then `overrides`, then validation.
    pub fn resolve(file: Option<&Path>, overrides: Map<String, Value>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
            match serde_json::from_str::<Value>(&text)
                .map_err(|e| Error::invalid(format!("config {} is not valid JSON: {e}", path.display())))?
            {
                Value::Object(map) => cfg.apply(map)?,
                _ => return Err(Error::invalid("config file must hold a JSON object")),
            }
        }
        cfg.apply(overrides)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: &str| Err(Error::invalid(format!("field `{field}`: {why}")));
        if self.modes < 2 {
            return bad("M", "need at least 2 modes");
        }
        if self.count == 0 {
            return bad("count", "need at least one realization");
        }
        if !(self.trap.is_finite() && self.trap != 0.0) {
            return bad("Phi", "must be finite and nonzero");
        }
        if self.bins < 2 {
            return bad("bins", "need at least 2 bins");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha", "must lie in (0, 1)");
        }
        if self.photons == Some(0) {
            return bad("N", "need at least one photon");
        }
        if self.sff_n == 0 {
            return bad("sff_n", "order must be >= 1");
        }
        if self.horizon == Some(0) {
            return bad("horizon", "must be >= 1");
        }
        for (name, modes) in [("input", &self.input), ("output", &self.output)] {
            if let Some(list) = modes {
                if list.iter().any(|&k| k >= self.modes) {
                    return bad(name, "mode index out of range");
                }
            }
        }
        let explicit = self.theta.is_some() || self.disorder.is_some();
        let units = self.theta_units.is_some() || self.disorder_units.is_some();
        if [self.point.is_some(), explicit, units].iter().filter(|&&b| b).count() > 1 {
            return bad("point", "give one of `point`, `theta`/`W`, or `theta_units`/`W_units`");
        }
        if self.sweep_theta_units.is_some() != self.sweep_disorder_units.is_some() {
            return bad("sweep_theta_units", "a sweep needs both `sweep_theta_units` and `sweep_W_units`");
        }
        self.params()?;
        Ok(())
    }

    /// Circuit parameters. With nothing specified, the strongly chaotic point.
    pub fn params(&self) -> Result<ModelParams> {
        let p = if let Some(point) = self.point {
            let (w, t) = point.units();
            ModelParams::in_kick_units(self.modes, self.trap, w, t)?
        } else if self.theta.is_some() || self.disorder.is_some() {
            let theta = self.theta.ok_or_else(|| Error::invalid("field `theta`: required together with `W`"))?;
            let w = self.disorder.ok_or_else(|| Error::invalid("field `W`: required together with `theta`"))?;
            ModelParams::new(self.modes, theta, self.trap, w)?
        } else {
            let (dw, dt) = ParameterPoint::ChaoticStrongKick.units();
            ModelParams::in_kick_units(
                self.modes,
                self.trap,
                self.disorder_units.unwrap_or(dw),
                self.theta_units.unwrap_or(dt),
            )?
        };
        Ok(p.with_boundary(self.boundary))
    }

    pub fn horizon_or_default(&self) -> u64 {
        self.horizon.unwrap_or(50 * self.modes as u64)
    }
}

/// Parses `KEY=VALUE`; the value is read as JSON and falls back to a string.
pub fn parse_override(s: &str) -> Result<(String, Value)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::invalid(format!("override `{s}` is not KEY=VALUE")))?;
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn defaults_validate() {
        let c = RunConfig::resolve(None, Map::new()).unwrap();
        let p = c.params().unwrap();
        assert_eq!(p.modes, 300);
        assert!((16.0 * p.theta * p.trap - 18.0).abs() < 1e-12);
    }

    #[test]
    fn precedence_cli_over_file_over_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"M": 40, "count": 7, "seed": 3}"#).unwrap();
        let mut cli = Map::new();
        cli.insert("seed".into(), json!(9));
        let c = RunConfig::resolve(Some(&path), cli).unwrap();
        assert_eq!((c.modes, c.count, c.seed, c.bins), (40, 7, 9, 50));
    }

    #[test]
    fn errors_name_the_field() {
        let mut m = Map::new();
        m.insert("count".into(), json!("many"));
        let e = RunConfig::resolve(None, m).unwrap_err().to_string();
        assert!(e.contains("`count`"), "{e}");
        let mut m = Map::new();
        m.insert("colour".into(), json!(1));
        assert!(RunConfig::resolve(None, m).unwrap_err().to_string().contains("`colour`"));
        let mut m = Map::new();
        m.insert("alpha".into(), json!(2.0));
        assert!(RunConfig::resolve(None, m).unwrap_err().to_string().contains("`alpha`"));
    }

    #[test]
    fn parameter_sources_are_exclusive() {
        let mut m = Map::new();
        m.insert("point".into(), json!("localized"));
        m.insert("theta".into(), json!(0.1));
        assert!(RunConfig::resolve(None, m).is_err());
        let mut m = Map::new();
        m.insert("theta".into(), json!(0.1));
        assert!(RunConfig::resolve(None, m).is_err());
    }

    #[test]
    fn named_points_and_units() {
        let mut m = Map::new();
        m.insert("point".into(), json!("localized"));
        m.insert("M".into(), json!(12));
        let p = RunConfig::resolve(None, m).unwrap().params().unwrap();
        assert!((16.0 * p.disorder * p.trap - 7.0).abs() < 1e-12);
        let mut m = Map::new();
        m.insert("W_units".into(), json!(2.0));
        let p = RunConfig::resolve(None, m).unwrap().params().unwrap();
        assert!((16.0 * p.disorder * p.trap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn overrides_parse() {
        assert_eq!(parse_override("M=12").unwrap(), ("M".into(), json!(12)));
        assert_eq!(parse_override("point=localized").unwrap().1, json!("localized"));
        assert_eq!(parse_override("input=[1,2]").unwrap().1, json!([1, 2]));
        assert!(parse_override("M").is_err());
    }

    #[test]
    fn every_key_is_settable() {
        let defaults = serde_json::to_value(RunConfig::default()).unwrap();
        for k in KEYS {
            let v = defaults.get(*k).cloned().unwrap_or(Value::Null);
            RunConfig::default().set(k, v).unwrap();
        }
        assert_eq!(defaults.as_object().unwrap().len(), KEYS.len());
    }
}
