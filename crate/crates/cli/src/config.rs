//! Run configuration: a flat set of dotted keys (`bulk.mu_pa`,
//! `numerics.N`, ...) read from TOML sections.
//!
//! The raw entries are kept verbatim so that a manifest can write back
//! exactly what was resolved, and a sweep can override a single key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use sgcrack_core::problem::{BulkMaterial, FarFieldLoad, Gammas, ProblemParams, SurfaceMaterial};
use sgcrack_core::{Error as CoreError, Params};
use thiserror::Error;

/// Section of a manifest that holds derived values; ignored when read back.
pub const DERIVED_SECTION: &str = "derived";

/// Relative agreement required between physical and dimensionless surface
/// parameters when both are given.
pub const SURFACE_AGREEMENT: f64 = 1e-10;

pub const DEFAULT_ORDER: i64 = 30;
pub const DEFAULT_ORACLE_NODES: i64 = 200;
pub const DEFAULT_GRID_POINTS: i64 = 201;
pub const DEFAULT_OUTPUT_DIRECTORY: &str = "sgcrack-out";
pub const MIN_ORDER: i64 = 4;
pub const MIN_GRID_POINTS: i64 = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot parse config: {0}")]
    Syntax(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("missing config key `{0}`")]
    MissingKey(String),
    #[error("config key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("parameter path `{0}` does not name a numeric config key")]
    UnknownParameter(String),
}

impl ConfigError {
    fn invalid(key: &str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}

/// Kind of value a key accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Float,
    Int,
    Text,
}

const KEYS: &[(&str, Kind)] = &[
    ("bulk.mu_pa", Kind::Float),
    ("bulk.nu", Kind::Float),
    ("surface.lambda_s", Kind::Float),
    ("surface.mu_s", Kind::Float),
    ("surface.sigma0", Kind::Float),
    ("surface.zeta_plus_2eta", Kind::Float),
    ("surface.ell_s", Kind::Float),
    ("surface.gamma1", Kind::Float),
    ("surface.gamma2", Kind::Float),
    ("surface.gamma3", Kind::Float),
    ("surface.gamma4", Kind::Float),
    ("surface.gamma4_over_gamma3", Kind::Float),
    ("load.s11_pa", Kind::Float),
    ("load.s22_pa", Kind::Float),
    ("load.s12_pa", Kind::Float),
    ("crack.ell_m", Kind::Float),
    ("numerics.N", Kind::Int),
    ("numerics.quad_nodes", Kind::Int),
    ("numerics.oracle_nodes", Kind::Int),
    ("output.directory", Kind::Text),
    ("output.grid_points", Kind::Int),
];

const PHYSICAL_KEYS: [&str; 4] = [
    "surface.lambda_s",
    "surface.mu_s",
    "surface.sigma0",
    "surface.zeta_plus_2eta",
];
const GAMMA_KEYS: [&str; 4] = ["surface.gamma1", "surface.gamma2", "surface.gamma3", "surface.gamma4"];
const RATIO_KEY: &str = "surface.gamma4_over_gamma3";

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|&(_, kind)| kind)
}

/// One raw config value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(x) => write!(f, "{x:e}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Text(s) => write!(f, "{s:?}"),
        }
    }
}

/// Flat, validated-by-key configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    entries: BTreeMap<String, Value>,
}

/// Everything a run needs, resolved from a [`RunConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub params: Params,
    pub order: usize,
    pub quad_nodes: usize,
    pub oracle_nodes: usize,
    pub directory: PathBuf,
    pub grid_points: usize,
}

impl RunConfig {
    /// Parse TOML text. Tables nest into dotted keys; the `derived` section of
    /// a manifest is skipped.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
        let mut cfg = RunConfig::default();
        flatten(&table, "", &mut cfg)?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError::Syntax(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Set a key, checking that it exists and that the value has the right
    /// kind.
    pub fn set(&mut self, key: &str, value: Value) -> Result<(), ConfigError> {
        let kind = kind_of(key).ok_or_else(|| ConfigError::UnknownKey(key.to_string()))?;
        let value = match (kind, value) {
            (Kind::Float, Value::Float(x)) => Value::Float(x),
            (Kind::Float, Value::Int(i)) => Value::Float(i as f64),
            (Kind::Int, Value::Int(i)) => Value::Int(i),
            (Kind::Int, Value::Float(x)) if x.fract() == 0.0 && x.abs() < 9.0e15 => Value::Int(x as i64),
            (Kind::Text, Value::Text(s)) => Value::Text(s),
            (kind, v) => {
                return Err(ConfigError::invalid(
                    key,
                    format!("expected {}, got {v}", kind_name(kind)),
                ));
            }
        };
        self.entries.insert(key.to_string(), value);
        Ok(())
    }

    pub fn remove(&mut self, key: &str) -> Option<Value> {
        self.entries.remove(key)
    }

    /// Copy with one numeric parameter replaced. Setting the strain-gradient
    /// ratio drops any `ell_s` or `gamma4` entry, which it supersedes.
    pub fn with_parameter(&self, path: &str, value: f64) -> Result<Self, ConfigError> {
        let key = resolve_parameter_path(path)?;
        let mut out = self.clone();
        if key == RATIO_KEY {
            out.remove("surface.ell_s");
            out.remove("surface.gamma4");
        }
        out.set(key, Value::Float(value))?;
        Ok(out)
    }

    /// Copy with the output directory replaced.
    pub fn with_directory(&self, dir: &Path) -> Self {
        let mut out = self.clone();
        out.entries.insert(
            "output.directory".into(),
            Value::Text(dir.to_string_lossy().into_owned()),
        );
        out
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) if x.is_finite() => Ok(Some(*x)),
            Some(v) => Err(ConfigError::invalid(key, format!("expected a finite number, got {v}"))),
        }
    }

    fn required_float(&self, key: &str) -> Result<f64, ConfigError> {
        self.float(key)?.ok_or_else(|| ConfigError::MissingKey(key.to_string()))
    }

    fn int(&self, key: &str, default: i64) -> Result<i64, ConfigError> {
        match self.entries.get(key) {
            None => Ok(default),
            Some(Value::Int(i)) => Ok(*i),
            Some(v) => Err(ConfigError::invalid(key, format!("expected an integer, got {v}"))),
        }
    }

    fn has_any(&self, keys: &[&str]) -> bool {
        keys.iter().any(|k| self.entries.contains_key(*k))
    }

    /// Validate and build the problem parameters and numerical settings.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let bulk = BulkMaterial::new(self.required_float("bulk.mu_pa")?, self.required_float("bulk.nu")?)
            .map_err(core_error)?;
        let load = FarFieldLoad::new(
            self.required_float("load.s11_pa")?,
            self.required_float("load.s22_pa")?,
            self.required_float("load.s12_pa")?,
        );
        let ell = self.required_float("crack.ell_m")?;
        let params = self.resolve_surface(bulk, load, ell)?;

        let order = self.int("numerics.N", DEFAULT_ORDER)?;
        if order < MIN_ORDER {
            return Err(ConfigError::invalid(
                "numerics.N",
                format!("must be at least {MIN_ORDER}, got {order}"),
            ));
        }
        let quad_default = (order + 4).max(sgcrack_core::chebyshev::DEFAULT_QUADRATURE_NODES as i64);
        let quad_nodes = self.int("numerics.quad_nodes", quad_default)?;
        if quad_nodes < order + 4 {
            return Err(ConfigError::invalid(
                "numerics.quad_nodes",
                format!("must be at least N + 4 = {}, got {quad_nodes}", order + 4),
            ));
        }
        let oracle_nodes = self.int("numerics.oracle_nodes", DEFAULT_ORACLE_NODES)?;
        if oracle_nodes < 2 {
            return Err(ConfigError::invalid("numerics.oracle_nodes", "must be at least 2"));
        }
        let grid_points = self.int("output.grid_points", DEFAULT_GRID_POINTS)?;
        if grid_points < MIN_GRID_POINTS {
            return Err(ConfigError::invalid(
                "output.grid_points",
                format!("must be at least {MIN_GRID_POINTS}, got {grid_points}"),
            ));
        }
        let directory = match self.entries.get("output.directory") {
            None => PathBuf::from(DEFAULT_OUTPUT_DIRECTORY),
            Some(Value::Text(s)) if !s.is_empty() => PathBuf::from(s),
            Some(v) => {
                return Err(ConfigError::invalid(
                    "output.directory",
                    format!("expected a path, got {v}"),
                ))
            }
        };
        Ok(Resolved {
            params,
            order: order as usize,
            quad_nodes: quad_nodes as usize,
            oracle_nodes: oracle_nodes as usize,
            directory,
            grid_points: grid_points as usize,
        })
    }

    /// Surface groups from either block; when both are present every given
    /// dimensionless value must match the one derived from the moduli.
    fn resolve_surface(
        &self,
        bulk: BulkMaterial<f64>,
        load: FarFieldLoad<f64>,
        ell: f64,
    ) -> Result<Params, ConfigError> {
        let physical = self.has_any(&PHYSICAL_KEYS) || self.entries.contains_key("surface.ell_s");
        let dimensionless = self.has_any(&GAMMA_KEYS);
        let ratio = self.float(RATIO_KEY)?;
        if let Some(r) = ratio {
            if !(r > 0.0) {
                return Err(ConfigError::invalid(RATIO_KEY, "must be positive"));
            }
        }
        if physical {
            let lambda_s = self.required_float("surface.lambda_s")?;
            let mu_s = self.required_float("surface.mu_s")?;
            let sigma0 = self.required_float("surface.sigma0")?;
            let bending = self.required_float("surface.zeta_plus_2eta")?;
            let membrane = lambda_s + 2.0 * mu_s;
            let ell_s = match (self.float("surface.ell_s")?, ratio) {
                (Some(l), _) => l,
                // ell_s² · membrane = ratio · bending
                (None, Some(r)) => (r * bending / membrane).sqrt(),
                (None, None) => return Err(ConfigError::MissingKey("surface.ell_s".into())),
            };
            let surface = SurfaceMaterial::new(lambda_s, mu_s, sigma0, bending, 0.0, ell_s).map_err(core_error)?;
            let params = ProblemParams::new(bulk, surface, load, ell).map_err(core_error)?;
            let derived = params.gammas.as_array();
            for (key, &d) in GAMMA_KEYS.iter().zip(&derived) {
                if let Some(given) = self.float(key)? {
                    check_agreement(key, given, d)?;
                }
            }
            if let Some(r) = ratio {
                check_agreement(RATIO_KEY, r, derived[3] / derived[2])?;
            }
            Ok(params)
        } else if dimensionless {
            let g1 = self.required_float("surface.gamma1")?;
            let g2 = self.required_float("surface.gamma2")?;
            let g3 = self.required_float("surface.gamma3")?;
            let g4 = match (self.float("surface.gamma4")?, ratio) {
                (Some(g4), Some(r)) => {
                    check_agreement(RATIO_KEY, r, g4 / g3)?;
                    g4
                }
                (Some(g4), None) => g4,
                (None, Some(r)) => r * g3,
                (None, None) => return Err(ConfigError::MissingKey("surface.gamma4".into())),
            };
            ProblemParams::with_gammas(bulk, Gammas::new(g1, g2, g3, g4), load, ell).map_err(core_error)
        } else {
            Err(ConfigError::invalid(
                "surface",
                "give either the physical moduli (lambda_s, mu_s, sigma0, zeta_plus_2eta, ell_s) or gamma1..gamma4",
            ))
        }
    }

    /// Render as TOML, one section per key prefix, followed by the given
    /// derived values (which are ignored when the text is read back).
    pub fn to_toml_string(&self, derived: &[(&str, Value)]) -> String {
        let mut root = toml::Table::new();
        for (key, value) in &self.entries {
            let (section, leaf) = key.split_once('.').expect("config keys are dotted");
            insert_value(&mut root, section, leaf, value);
        }
        for (leaf, value) in derived {
            insert_value(&mut root, DERIVED_SECTION, leaf, value);
        }
        toml::to_string(&root).expect("config tables serialise")
    }
}

fn insert_value(root: &mut toml::Table, section: &str, leaf: &str, value: &Value) {
    let table = root
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()))
        .as_table_mut()
        .expect("sections are tables");
    let v = match value {
        Value::Float(x) => toml::Value::Float(*x),
        Value::Int(i) => toml::Value::Integer(*i),
        Value::Text(s) => toml::Value::String(s.clone()),
    };
    table.insert(leaf.to_string(), v);
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Float => "a number",
        Kind::Int => "an integer",
        Kind::Text => "a string",
    }
}

fn flatten(table: &toml::Table, prefix: &str, cfg: &mut RunConfig) -> Result<(), ConfigError> {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        if key == DERIVED_SECTION {
            continue;
        }
        let value = match v {
            toml::Value::Table(t) => {
                flatten(t, &key, cfg)?;
                continue;
            }
            toml::Value::Float(x) => Value::Float(*x),
            toml::Value::Integer(i) => Value::Int(*i),
            toml::Value::String(s) => Value::Text(s.clone()),
            other => return Err(ConfigError::invalid(&key, format!("unsupported value {other}"))),
        };
        cfg.set(&key, value)?;
    }
    Ok(())
}

fn check_agreement(key: &str, given: f64, derived: f64) -> Result<(), ConfigError> {
    let scale = given.abs().max(derived.abs());
    if (given - derived).abs() <= SURFACE_AGREEMENT * scale {
        Ok(())
    } else {
        Err(ConfigError::invalid(
            key,
            format!("given {given:e} disagrees with {derived:e} derived from the physical moduli"),
        ))
    }
}

/// Map a validation error from the solver crate onto the config key it
/// concerns.
fn core_error(e: CoreError) -> ConfigError {
    match &e {
        CoreError::InvalidParameter { name, reason } => {
            let key = match *name {
                "nu" => "bulk.nu",
                "mu" => "bulk.mu_pa",
                "lambda_s" => "surface.lambda_s",
                "zeta_plus_2eta" => "surface.zeta_plus_2eta",
                "ell_s" => "surface.ell_s",
                "sigma0" => "surface.sigma0",
                "ell" => "crack.ell_m",
                "gamma1" => "surface.gamma1",
                "gamma2" => "surface.gamma2",
                "gamma3" => "surface.gamma3",
                "gamma4" => "surface.gamma4",
                other => other,
            };
            ConfigError::invalid(key, reason.clone())
        }
        _ => ConfigError::Syntax(e.to_string()),
    }
}

/// Resolve a sweep parameter path to a numeric config key: either the full
/// dotted key or a leaf name that is unique among the keys.
pub fn resolve_parameter_path(path: &str) -> Result<&'static str, ConfigError> {
    let numeric = |kind: Kind| kind != Kind::Text;
    if let Some(&(k, kind)) = KEYS.iter().find(|(k, _)| *k == path) {
        return if numeric(kind) {
            Ok(k)
        } else {
            Err(ConfigError::UnknownParameter(path.to_string()))
        };
    }
    let mut hits = KEYS
        .iter()
        .filter(|(k, kind)| numeric(*kind) && k.rsplit_once('.').map(|(_, leaf)| leaf) == Some(path));
    match (hits.next(), hits.next()) {
        (Some(&(k, _)), None) => Ok(k),
        _ => Err(ConfigError::UnknownParameter(path.to_string())),
    }
}
