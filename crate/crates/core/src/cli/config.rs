use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::broken_line::{Dimensions, GridScheme};
use crate::error::{Error, Result};

/// Prefix of environment variables overriding config keys. Sections are
/// separated by a double underscore: `BROKENLINE_GRID__NODES_PER_SIDE=2000`.
pub const ENV_PREFIX: &str = "BROKENLINE_";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Not part of the canonical form: moving the output leaves hashes intact.
    #[serde(skip_serializing)]
    pub out: PathBuf,
    /// Experiment ids to run; empty selects all.
    pub experiments: Vec<String>,
    /// Fill the `wall_ms` column. Off by default so reruns are byte-identical.
    pub timing: bool,
    pub dims: DimsConfig,
    /// Dimension pairs of the coefficient and exponent tables.
    pub cases: Vec<[f64; 2]>,
    pub grid: GridConfig,
    pub quadrature: QuadratureConfig,
    pub family: FamilyConfig,
    pub probe: ProbeConfig,
    pub resolvent: ResolventConfig,
    pub hh: HHConfig,
    pub th: ThConfig,
    pub tij: TijConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DimsConfig {
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Truncation radii of the stability sweeps.
    pub truncations: Vec<f64>,
    pub nodes_per_side: usize,
    pub scheme: SchemeName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Log,
    Uniform,
}

impl From<SchemeName> for GridScheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Log => GridScheme::Log,
            SchemeName::Uniform => GridScheme::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilyConfig {
    pub bumps: usize,
    pub power_laws: usize,
    pub indicators: usize,
    /// Indicator sets of the endpoint probes.
    pub sets: usize,
    /// Outer radius of every family support; must not exceed any truncation.
    pub max_radius: f64,
    pub duality_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeConfig {
    pub p: Vec<f64>,
    pub reverse_p: Vec<f64>,
    pub hardy_p: Vec<f64>,
    /// Radii of the growth-witness sweeps.
    pub witness_truncations: Vec<f64>,
    pub endpoint_truncations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResolventConfig {
    pub lambdas: Vec<f64>,
    pub truncation: f64,
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HHConfig {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_p: f64,
    pub beta_p: f64,
    pub n1: f64,
    pub n2: f64,
    pub p: Vec<f64>,
    pub witness_p: f64,
    pub lorentz_p: Vec<f64>,
    pub r2_p: Vec<f64>,
    pub per_decade: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n1: f64,
    pub n2: f64,
    pub p: Vec<f64>,
    pub per_decade: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TijConfig {
    pub nodes_per_side: usize,
    pub epsilon: f64,
    pub tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 2024,
            out: PathBuf::from("results"),
            experiments: Vec::new(),
            timing: false,
            dims: DimsConfig::default(),
            cases: vec![[1.5, 1.8], [1.5, 2.0], [1.5, 3.0], [2.5, 3.5]],
            grid: GridConfig::default(),
            quadrature: QuadratureConfig::default(),
            family: FamilyConfig::default(),
            probe: ProbeConfig::default(),
            resolvent: ResolventConfig::default(),
            hh: HHConfig::default(),
            th: ThConfig::default(),
            tij: TijConfig::default(),
        }
    }
}

impl Default for DimsConfig {
    fn default() -> Self {
        Self { d1: 1.5, d2: 3.0 }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { truncations: vec![1250.0, 2500.0, 5000.0, 1e4], nodes_per_side: 4000, scheme: SchemeName::Log }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { tol: 1e-9 }
    }
}

impl Default for FamilyConfig {
    fn default() -> Self {
        Self { bumps: 20, power_laws: 20, indicators: 10, sets: 30, max_radius: 1e3, duality_pairs: 20 }
    }
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            p: vec![1.3, 2.0, 2.5],
            reverse_p: vec![1.2, 2.0, 5.0],
            hardy_p: vec![1.2],
            witness_truncations: vec![1e2, 1e3, 1e4, 1e6],
            endpoint_truncations: vec![1e2, 1e4],
        }
    }
}

impl Default for ResolventConfig {
    fn default() -> Self {
        Self { lambdas: vec![0.3, 1.0, 3.0], truncation: 50.0, nodes: vec![1000, 2000, 4000] }
    }
}

impl Default for HHConfig {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            beta: 1.5,
            alpha_p: 2.5,
            beta_p: 0.5,
            n1: 2.0,
            n2: 2.5,
            p: vec![1.5, 2.0, 3.0],
            witness_p: 5.0,
            lorentz_p: vec![2.0, 4.0],
            r2_p: vec![1.25, 2.0],
            per_decade: 200,
        }
    }
}

impl Default for ThConfig {
    fn default() -> Self {
        Self { a: 1.0, b: 1.0, c: 1.0, n1: 2.0, n2: 2.5, p: vec![1.5, 2.0, 4.0], per_decade: 40 }
    }
}

impl Default for TijConfig {
    fn default() -> Self {
        Self { nodes_per_side: 300, epsilon: 0.05, tol: 1e-6 }
    }
}

fn config_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

fn check_list(field: &str, values: &[f64], ok: impl Fn(f64) -> bool, what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(config_err(field, "must not be empty"));
    }
    match values.iter().find(|v| !ok(**v)) {
        Some(v) => Err(config_err(field, format!("{v} {what}"))),
        None => Ok(()),
    }
}

impl ExperimentConfig {
    /// Reads a TOML file, applies environment overrides and validates.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::from_toml_with_env(&text, std::env::vars())
    }

    pub fn from_toml_with_env(text: &str, env: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let mut overrides: Vec<(String, String)> = env.into_iter().filter(|(k, _)| k.starts_with(ENV_PREFIX)).collect();
        overrides.sort();
        for (key, raw) in overrides {
            apply_override(&mut table, &key[ENV_PREFIX.len()..], &raw)?;
        }
        let cfg: Self = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        Dimensions::new(self.dims.d1, self.dims.d2).map_err(|e| config_err("dims", e))?;
        for [d1, d2] in &self.cases {
            if !(Dimensions::new(*d1, *d2).is_ok() && d1 < d2) {
                return Err(config_err("cases", format!("({d1}, {d2}) needs 1 < d1 < d2")));
            }
        }
        check_list("grid.truncations", &self.grid.truncations, |r| r > 1.0, "is not above 1")?;
        if self.grid.nodes_per_side < 8 {
            return Err(config_err("grid.nodes_per_side", "must be at least 8"));
        }
        if !(self.quadrature.tol > 0.0) {
            return Err(config_err("quadrature.tol", "must be positive"));
        }
        if !(self.tij.tol > 0.0) || !(self.tij.epsilon > 0.0) {
            return Err(config_err("tij", "tol and epsilon must be positive"));
        }
        let min_r = self.grid.truncations.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(self.family.max_radius > 4.0 && self.family.max_radius <= min_r) {
            return Err(config_err("family.max_radius", "must lie in (4, min grid.truncations]"));
        }
        for (field, list) in [
            ("probe.p", &self.probe.p),
            ("probe.reverse_p", &self.probe.reverse_p),
            ("probe.hardy_p", &self.probe.hardy_p),
            ("hh.p", &self.hh.p),
            ("hh.lorentz_p", &self.hh.lorentz_p),
            ("hh.r2_p", &self.hh.r2_p),
            ("th.p", &self.th.p),
        ] {
            check_list(field, list, |p| p > 1.0 && p.is_finite(), "is not a finite exponent above 1")?;
        }
        for (field, list) in [
            ("probe.witness_truncations", &self.probe.witness_truncations),
            ("probe.endpoint_truncations", &self.probe.endpoint_truncations),
            ("resolvent.lambdas", &self.resolvent.lambdas),
        ] {
            let floor = if field == "resolvent.lambdas" { 0.0 } else { 1.0 };
            check_list(field, list, |v| v > floor && v.is_finite(), "is out of range")?;
        }
        if !(self.resolvent.truncation > 1.0) || self.resolvent.nodes.iter().any(|n| *n < 8) {
            return Err(config_err("resolvent", "truncation must exceed 1 and node counts be at least 8"));
        }
        if self.hh.n1 <= 1.0 || self.hh.n2 <= 1.0 || self.th.n1 <= 1.0 || self.th.n2 <= 1.0 {
            return Err(config_err("hh/th", "measure powers must exceed 1"));
        }
        if self.hh.per_decade < 4 || self.th.per_decade < 4 {
            return Err(config_err("per_decade", "must be at least 4"));
        }
        for id in &self.experiments {
            if !super::EXPERIMENTS.iter().any(|e| e.id == id) {
                return Err(config_err("experiments", format!("unknown experiment id `{id}`")));
            }
        }
        Ok(())
    }

    pub fn dimensions(&self) -> Dimensions {
        Dimensions { d1: self.dims.d1, d2: self.dims.d2 }
    }

    /// Canonical TOML rendering of the effective config.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

fn apply_override(table: &mut toml::Table, key: &str, raw: &str) -> Result<()> {
    let path: Vec<String> = key.split("__").map(|s| s.to_ascii_lowercase()).collect();
    if path.iter().any(|s| s.is_empty()) {
        return Err(Error::Config(format!("malformed override {ENV_PREFIX}{key}")));
    }
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let (last, parents) = path.split_last().expect("non-empty path");
    let mut node = table;
    for part in parents {
        let entry = node.entry(part.clone()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override {ENV_PREFIX}{key}: `{part}` is not a section")))?;
    }
    node.insert(last.clone(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn defaults_validate_and_hash_is_stable() {
        let a = ExperimentConfig::from_toml_with_env("", env(&[])).unwrap();
        let b = ExperimentConfig::from_toml_with_env("seed = 2024", env(&[])).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig::from_toml_with_env("seed = 1", env(&[])).unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn unknown_keys_and_bad_ranges_are_rejected() {
        assert!(ExperimentConfig::from_toml_with_env("[grid]\nnodes = 3", env(&[])).is_err());
        assert!(ExperimentConfig::from_toml_with_env("[dims]\nd1 = 0.5", env(&[])).is_err());
        assert!(ExperimentConfig::from_toml_with_env("[quadrature]\ntol = 0", env(&[])).is_err());
        assert!(ExperimentConfig::from_toml_with_env("experiments = [\"nope\"]", env(&[])).is_err());
        assert!(ExperimentConfig::from_toml_with_env("[grid]\ntruncations = [0.5]", env(&[])).is_err());
    }

    #[test]
    fn environment_overrides_file_values() {
        let cfg = ExperimentConfig::from_toml_with_env(
            "[grid]\nnodes_per_side = 100",
            env(&[("BROKENLINE_GRID__NODES_PER_SIDE", "250"), ("BROKENLINE_DIMS__D2", "3.5"), ("OTHER", "x")]),
        )
        .unwrap();
        assert_eq!(cfg.grid.nodes_per_side, 250);
        assert_eq!(cfg.dims.d2, 3.5);
        assert!(ExperimentConfig::from_toml_with_env("", env(&[("BROKENLINE_GRID__BOGUS", "1")])).is_err());
    }
}
