//! Experiment configuration: TOML file, command-line overrides, validation.

use std::path::{Path, PathBuf};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use splab::estimates::AdmissibleTriple;

/// Environment variable holding the default output directory.
pub const OUTDIR_ENV: &str = "SPLAB_OUTDIR";

pub const VERIFY_SUITES: [&str; 5] = [
    "extension",
    "parity",
    "partition",
    "propagator",
    "commutators",
];
pub const SCAN_SUITES: [&str; 5] = [
    "strichartz",
    "smoothing",
    "strichartz-smoothing",
    "endpoint-pipeline",
    "k-functional",
];

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub size: usize,
    /// Side of the periodic box; `2 pi` when absent.
    pub box_len: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: 2,
            size: 64,
            box_len: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    pub t_max: f64,
    pub steps: usize,
    pub two_sided: bool,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            t_max: 0.5,
            steps: 32,
            two_sided: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExponentConfig {
    /// Regularity as a rational, e.g. `"0"` or `"1/4"`.
    pub s: String,
    /// Number of admissible pairs in a scan, both ends included.
    pub pairs: usize,
    /// Single pair instead of a scan; `"inf"` allowed.
    pub p: Option<String>,
    pub q: Option<String>,
    /// Frequency exponents `j` of the smoothing sweep.
    pub js: Vec<u32>,
    /// Weight exponents of the Strichartz-smoothing estimate.
    pub s0: Vec<f64>,
    /// Fractional order of `D^s` in commutator checks.
    pub order: f64,
}

impl Default for ExponentConfig {
    fn default() -> Self {
        Self {
            s: "0".into(),
            pairs: 5,
            p: None,
            q: None,
            js: vec![2, 3, 4, 5, 6],
            s0: vec![0.6, 0.8, 1.0],
            order: 0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyConfig {
    pub count: usize,
    pub w_min: f64,
    pub w_max: f64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        Self {
            count: 10,
            w_min: 0.5,
            w_max: 1.5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PartitionSettings {
    /// Bump radius around each boundary center.
    pub delta: f64,
    pub charts: usize,
}

impl Default for PartitionSettings {
    fn default() -> Self {
        Self {
            delta: 3.0,
            charts: 2,
        }
    }
}

/// Pass thresholds of the suites.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub flat: f64,
    pub curved: f64,
    pub parity: f64,
    pub partition: f64,
    pub trace: f64,
    pub duhamel: f64,
    pub commutator: f64,
    pub two_form: f64,
    pub smoothing_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            flat: 1e-10,
            curved: 1e-8,
            parity: 1e-9,
            partition: 1e-10,
            trace: 1e-10,
            duhamel: 5e-3,
            commutator: 1e-9,
            two_form: 1e-9,
            smoothing_band: 0.2,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Filled from the command line.
    pub suite: String,
    /// Boundary graph (`flat`, `linear`, `sine`, `bump`) for the extension
    /// suite, boundary curve (`flat-line`, `circle`, `perturbed-circle`) for
    /// the partition suite.
    pub geometry: String,
    /// Amplitude of the boundary graph.
    pub eps: f64,
    /// `free`, `dirichlet` or `neumann`.
    pub bc: String,
    pub seed: u64,
    pub workers: usize,
    pub outdir: Option<PathBuf>,
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub exponents: ExponentConfig,
    pub family: FamilyConfig,
    pub partition: PartitionSettings,
    pub tolerances: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            suite: String::new(),
            geometry: "flat".into(),
            eps: 0.1,
            bc: "dirichlet".into(),
            seed: 7,
            workers: 1,
            outdir: None,
            grid: GridConfig::default(),
            time: TimeConfig::default(),
            exponents: ExponentConfig::default(),
            family: FamilyConfig::default(),
            partition: PartitionSettings::default(),
            tolerances: Tolerances::default(),
        }
    }
}

/// Rejected configuration, tagged with the first offending key.
#[derive(Debug, thiserror::Error)]
#[error("invalid config key `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

fn bad(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.into(),
        message: message.into(),
    }
}

pub fn parse_rational(key: &str, text: &str) -> Result<Rational64, ConfigError> {
    let t = text.trim();
    let parsed = match t.split_once('/') {
        Some((a, b)) => a
            .trim()
            .parse::<i64>()
            .ok()
            .zip(b.trim().parse::<i64>().ok()),
        None => t.parse::<i64>().ok().map(|a| (a, 1)),
    };
    match parsed {
        Some((_, 0)) | None => Err(bad(
            key,
            format!("'{text}' is not a rational number like 1/4"),
        )),
        Some((a, b)) => Ok(Rational64::new(a, b)),
    }
}

/// `None` for infinity.
fn parse_exponent(key: &str, text: &str) -> Result<Option<i64>, ConfigError> {
    let t = text.trim();
    if matches!(t, "inf" | "infinity" | "∞") {
        return Ok(None);
    }
    match t.parse::<i64>() {
        Ok(v) if v >= 1 => Ok(Some(v)),
        _ => Err(bad(
            key,
            format!("'{text}' is not an integer exponent >= 1 or 'inf'"),
        )),
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad("config", format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            // serde names the field in backticks for unknown or mistyped keys
            let key = msg.split('`').nth(1).unwrap_or("config").to_string();
            bad(&key, msg)
        })
    }

    pub fn regularity(&self) -> Result<Rational64, ConfigError> {
        parse_rational("exponents.s", &self.exponents.s)
    }

    /// The single pair `(p, q)` when both are set.
    pub fn single_triple(&self) -> Result<Option<AdmissibleTriple>, ConfigError> {
        let (p, q) = match (&self.exponents.p, &self.exponents.q) {
            (None, None) => return Ok(None),
            (Some(_), None) => return Err(bad("exponents.q", "set together with exponents.p")),
            (None, Some(_)) => return Err(bad("exponents.p", "set together with exponents.q")),
            (Some(p), Some(q)) => (
                parse_exponent("exponents.p", p)?,
                parse_exponent("exponents.q", q)?,
            ),
        };
        let s = self.regularity()?;
        AdmissibleTriple::from_exponents(self.grid.n as u32, s, p, q)
            .map(Some)
            .map_err(|e| {
                let key = if q.is_none() {
                    "exponents.q"
                } else {
                    "exponents.p"
                };
                bad(key, format!("admissibility 2/p + n/q = n/2 - s fails: {e}"))
            })
    }

    pub fn output_root(&self) -> PathBuf {
        self.outdir
            .clone()
            .or_else(|| std::env::var_os(OUTDIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("splab-out"))
    }

    /// Checks keys in a fixed order and reports the first failure.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let suite = self.suite.as_str();
        if !VERIFY_SUITES
            .iter()
            .chain(SCAN_SUITES.iter())
            .any(|s| *s == suite)
        {
            return Err(bad("suite", format!("unknown suite '{suite}'")));
        }
        match suite {
            "extension" => {
                splab::geometry::BoundaryGraph::from_name(&self.geometry, self.eps, 1)
                    .map_err(|e| bad("geometry", e.to_string()))?;
            }
            "partition" => {
                splab::geometry::Boundary::from_name(&self.geometry)
                    .map_err(|e| bad("geometry", e.to_string()))?;
            }
            _ => {}
        }
        if !self.eps.is_finite() {
            return Err(bad("eps", "must be finite"));
        }
        if !matches!(self.bc.as_str(), "free" | "dirichlet" | "neumann") {
            return Err(bad(
                "bc",
                format!("'{}' is not one of free, dirichlet, neumann", self.bc),
            ));
        }
        if matches!(suite, "smoothing" | "endpoint-pipeline") && self.bc == "free" {
            return Err(bad(
                "bc",
                format!("suite '{suite}' needs a half-space condition"),
            ));
        }
        if self.workers == 0 {
            return Err(bad("workers", "must be at least 1"));
        }
        let g = &self.grid;
        if !(1..=3).contains(&g.n) {
            return Err(bad("grid.n", format!("dimension {} outside 1..=3", g.n)));
        }
        let planar = matches!(
            suite,
            "extension" | "partition" | "endpoint-pipeline" | "smoothing"
        );
        if planar && g.n == 1 {
            return Err(bad("grid.n", format!("suite '{suite}' needs n >= 2")));
        }
        if matches!(suite, "partition" | "endpoint-pipeline") && g.n != 2 {
            return Err(bad("grid.n", format!("suite '{suite}' runs in the plane")));
        }
        if suite == "commutators" && g.n > 2 {
            return Err(bad("grid.n", "commutator checks run in 1D or 2D"));
        }
        if g.size < 8 || !g.size.is_power_of_two() {
            return Err(bad(
                "grid.size",
                format!("{} is not a power of two >= 8", g.size),
            ));
        }
        if let Some(l) = g.box_len {
            if !(l > 0.0 && l.is_finite()) {
                return Err(bad("grid.box_len", "must be positive"));
            }
        }
        let t = &self.time;
        if !(t.t_max > 0.0 && t.t_max.is_finite()) {
            return Err(bad("time.t_max", "must be positive"));
        }
        if t.steps < 16 {
            return Err(bad(
                "time.steps",
                format!("{} is below the minimum of 16", t.steps),
            ));
        }
        let s = self.regularity()?;
        let top = Rational64::new(g.n as i64, 2);
        if s < Rational64::from_integer(0) || s >= top {
            return Err(bad("exponents.s", format!("{s} outside [0, n/2)")));
        }
        if self.exponents.pairs < 2 {
            return Err(bad(
                "exponents.pairs",
                "a scan needs both ends, so at least 2",
            ));
        }
        self.single_triple()?;
        if suite == "smoothing" {
            if self.exponents.js.is_empty()
                || self
                    .exponents
                    .js
                    .iter()
                    .any(|&j| j == 0 || (1usize << j) >= g.size / 2)
            {
                return Err(bad(
                    "exponents.js",
                    format!("each j needs 1 <= 2^j < size/2 = {}", g.size / 2),
                ));
            }
        }
        if suite == "strichartz-smoothing"
            && (self.exponents.s0.is_empty() || self.exponents.s0.iter().any(|&a| !(a > 0.5)))
        {
            return Err(bad("exponents.s0", "weight exponents must exceed 1/2"));
        }
        if !(self.exponents.order > 0.0 && self.exponents.order < 1.0) {
            return Err(bad("exponents.order", "must lie in (0, 1)"));
        }
        let f = &self.family;
        if f.count == 0 {
            return Err(bad("family.count", "must be at least 1"));
        }
        if !(f.w_min > 0.0 && f.w_max >= f.w_min) {
            return Err(bad("family.w_min", "need 0 < w_min <= w_max"));
        }
        if !(self.partition.delta > 0.0 && self.partition.delta.is_finite()) {
            return Err(bad("partition.delta", "must be positive"));
        }
        if self.partition.charts == 0 {
            return Err(bad("partition.charts", "must be at least 1"));
        }
        let tol = &self.tolerances;
        let named = [
            ("tolerances.flat", tol.flat),
            ("tolerances.curved", tol.curved),
            ("tolerances.parity", tol.parity),
            ("tolerances.partition", tol.partition),
            ("tolerances.trace", tol.trace),
            ("tolerances.duhamel", tol.duhamel),
            ("tolerances.commutator", tol.commutator),
            ("tolerances.two_form", tol.two_form),
            ("tolerances.smoothing_band", tol.smoothing_band),
        ];
        for (key, v) in named {
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(key, "must be positive"));
            }
        }
        Ok(())
    }
}
