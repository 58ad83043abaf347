//! Flat key-value configuration with `[params]`, `[geometry]` and
//! `[scenario]` sections.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment; section
//! headers in brackets. Keys are stored section-qualified (`params.eta`),
//! file values are overridden by `--set section.key=value` flags and by
//! dedicated subcommand flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use molqed::params::HybridParams;
use molqed::rates::DephasingModel;
use molqed::units;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Resolved configuration: a sorted map of section-qualified keys.
#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Config::default();
        let mut section = String::from("scenario");
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!("{}:{}: expected key = value", path.display(), lineno + 1))
            })?;
            cfg.values
                .insert(format!("{section}.{}", key.trim()), value.trim().to_string());
        }
        Ok(cfg)
    }

    /// Applies a `section.key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("--set expects section.key=value, got {assignment}")))?;
        let key = key.trim();
        if !key.contains('.') {
            return Err(ConfigError(format!(
                "--set key must be section-qualified (params.*, geometry.*, scenario.*): {key}"
            )));
        }
        self.values.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    pub fn set_kv(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| ConfigError(format!("{key}: expected number, got `{s}`"))),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| ConfigError(format!("{key}: expected integer, got `{s}`"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        Ok(self.u64_or(key, default as u64)? as usize)
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("on") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("off") | Some("0") | Some("no") => Ok(false),
            Some(s) => Err(ConfigError(format!("{key}: expected boolean, got `{s}`"))),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    /// Iterator over all resolved entries, sorted by key.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Builds the validated hybrid parameter set from the `[params]`
    /// section over the reference working point. Physical-unit convenience
    /// keys (`*_ns`, `*_mhz`) convert at this boundary.
    pub fn hybrid_params(&self) -> Result<HybridParams, ConfigError> {
        let base = HybridParams::reference_point();
        let omega_q = match self.get("params.omega_q_mhz") {
            Some(_) => units::mhz_to_gamma(self.f64_or("params.omega_q_mhz", 0.0)?),
            None => self.f64_or("params.omega_q", base.omega_q)?,
        };
        let v_dd = match self.get("params.v_over_omega_q") {
            Some(_) => self.f64_or("params.v_over_omega_q", 0.2)? * omega_q,
            None => self.f64_or("params.v_dd", 0.2 * omega_q)?,
        };
        let pulse_duration = match self.get("params.pulse_ns") {
            Some(_) => units::ns_to_gamma(self.f64_or("params.pulse_ns", 50.0)?),
            None => self.f64_or("params.pulse_duration", base.pulse_duration)?,
        };
        let t2 = match (self.get("params.t2_ns"), self.get("params.t2")) {
            (Some(_), _) => Some(units::ns_to_gamma(self.f64_or("params.t2_ns", 500.0)?)),
            (None, Some(_)) => Some(self.f64_or("params.t2", 0.0)?),
            (None, None) => None,
        };
        let p = HybridParams {
            gamma_1d: self.f64_or("params.gamma_1d", base.gamma_1d)?,
            gamma_c: self.f64_or("params.gamma_c", base.gamma_c)?,
            gamma_i: self.f64_or("params.gamma_i", base.gamma_i)?,
            g_c1: self.f64_or("params.g_c1", base.g_c1)?,
            g_c2: self.f64_or("params.g_c2", base.g_c2)?,
            g_m1: self.f64_or("params.g_m1", base.g_m1)?,
            g_m2: self.f64_or("params.g_m2", base.g_m2)?,
            v_dd,
            delta_0: self.f64_or("params.delta_0", 0.0)?,
            omega_q,
            delta: self.f64_or("params.delta", base.delta)?,
            eta: self.f64_or("params.eta", base.eta)?,
            t2,
            pulse_duration,
            resonance: self.bool_or("params.resonance", true)?,
        };
        p.validate().map_err(|e| ConfigError(e.to_string()))
    }

    pub fn dephasing_model(&self) -> Result<DephasingModel, ConfigError> {
        match self.str_or("params.pd_model", "backsolved") {
            "backsolved" => Ok(DephasingModel::BackSolved),
            "closedform" => Ok(DephasingModel::ClosedForm),
            "numeric" => Ok(DephasingModel::Numeric),
            s => Err(ConfigError(format!(
                "params.pd_model: expected backsolved|closedform|numeric, got `{s}`"
            ))),
        }
    }

    /// Geometry from the `[geometry]` section over the reference structure.
    pub fn geometry(&self) -> Result<molqed::electrostatics::Geometry, ConfigError> {
        let d = self.f64_or("geometry.distance_nm", 125.0)?;
        let h = self.f64_or("geometry.waveguide_height_nm", 200.0)?;
        let base = molqed::electrostatics::Geometry::reference(d, h);
        Ok(molqed::electrostatics::Geometry {
            island_length_nm: self.f64_or("geometry.island_length_nm", base.island_length_nm)?,
            island_width_nm: self.f64_or("geometry.island_width_nm", base.island_width_nm)?,
            island_height_nm: self.f64_or("geometry.island_height_nm", base.island_height_nm)?,
            waveguide_width_nm: self.f64_or("geometry.waveguide_width_nm", base.waveguide_width_nm)?,
            eps_waveguide: self.f64_or("geometry.eps_waveguide", base.eps_waveguide)?,
            eps_substrate: self.f64_or("geometry.eps_substrate", base.eps_substrate)?,
            molecule_inset_nm: self.f64_or("geometry.molecule_inset_nm", base.molecule_inset_nm)?,
            box_factor: self.f64_or("geometry.box_factor", base.box_factor)?,
            ..base
        })
    }
}
