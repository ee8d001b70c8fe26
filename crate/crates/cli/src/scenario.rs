//! JSON scenario files.
//!
//! ```json
//! {
//!   "name": "chirped",
//!   "state": {"family": "gaussian", "a": 1.0, "c": -1.0, "x0": 0.0, "p0": 0.0},
//!   "grid": {"n": 4096, "x_min": -32.0, "dx": 0.015625},
//!   "quadrature": {"alpha": 1.0, "beta": 1.0},
//!   "tolerance": 0.001,
//!   "sample_count": 100000,
//!   "seed": 7
//! }
//! ```
//!
//! A `"grid"` family state reads complex amplitudes from a CSV file with
//! header `re,im` and one row per grid point; relative paths resolve against
//! the scenario file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use putative::analysis::DEFAULT_TOLERANCE;
use putative::{make_gaussian, GridSpec, WaveFunction};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub state: StateSpec,
    pub grid: GridJson,
    #[serde(default)]
    pub quadrature: Quadrature,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub sample_count: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Gaussian {
        a: f64,
        #[serde(default)]
        c: f64,
        #[serde(default)]
        x0: f64,
        #[serde(default)]
        p0: f64,
    },
    Grid {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridJson {
    pub n: usize,
    pub x_min: f64,
    pub dx: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

/// A parsed and validated scenario, with the directory its relative paths
/// refer to.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub scenario: Scenario,
    pub base_dir: PathBuf,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let scenario = parse(&text)?;
    let base_dir = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok(Loaded { scenario, base_dir })
}

pub fn parse(text: &str) -> Result<Scenario, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::schema(
            if path == "." { "<root>".into() } else { path },
            e.into_inner().to_string(),
        )
    })?;
    scenario.validate()?;
    Ok(scenario)
}

impl Scenario {
    fn validate(&self) -> Result<(), CliError> {
        let name_ok = !self.name.is_empty()
            && self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
            && !self.name.starts_with('.');
        if !name_ok {
            return Err(CliError::schema(
                "name",
                "must be non-empty and use only [A-Za-z0-9_.-]",
            ));
        }
        if self.grid.n < 16 || !self.grid.n.is_power_of_two() {
            return Err(CliError::schema("grid.n", "must be a power of two >= 16"));
        }
        if !(self.grid.dx > 0.0 && self.grid.dx.is_finite()) {
            return Err(CliError::schema("grid.dx", "must be positive"));
        }
        if !self.grid.x_min.is_finite() {
            return Err(CliError::schema("grid.x_min", "must be finite"));
        }
        if let StateSpec::Gaussian { a, c, x0, p0 } = self.state {
            if !(a > 0.0 && a.is_finite()) {
                return Err(CliError::schema("state.a", "must be positive"));
            }
            for (field, v) in [("state.c", c), ("state.x0", x0), ("state.p0", p0)] {
                if !v.is_finite() {
                    return Err(CliError::schema(field, "must be finite"));
                }
            }
        }
        let q = self.quadrature;
        if !(q.alpha.is_finite() && q.beta.is_finite()) || (q.alpha == 0.0 && q.beta == 0.0) {
            return Err(CliError::schema(
                "quadrature",
                "alpha X + beta P must be finite and nonzero",
            ));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::schema("tolerance", "must be positive"));
        }
        if self.sample_count == Some(0) {
            return Err(CliError::schema("sample_count", "must be at least 1"));
        }
        Ok(())
    }

    pub fn grid_spec(&self) -> GridSpec<f64> {
        GridSpec::new(self.grid.n, self.grid.x_min, self.grid.dx).expect("validated grid")
    }
}

impl Loaded {
    /// Builds the wavefunction. Resolution failures surface as exit code 2.
    pub fn wavefunction(&self) -> Result<WaveFunction<f64>, CliError> {
        let grid = self.scenario.grid_spec();
        match &self.scenario.state {
            StateSpec::Gaussian { a, c, x0, p0 } => Ok(make_gaussian(*a, *c, *x0, *p0, grid)?),
            StateSpec::Grid { path } => {
                let full = self.base_dir.join(path);
                let text = fs::read_to_string(&full)
                    .map_err(|e| CliError::Io(format!("{}: {e}", full.display())))?;
                let amps = parse_amplitudes(&text)?;
                if amps.len() != grid.n() {
                    return Err(CliError::schema(
                        "state.path",
                        format!(
                            "{} amplitudes for a grid of {} points",
                            amps.len(),
                            grid.n()
                        ),
                    ));
                }
                Ok(WaveFunction::new(grid, amps)?)
            }
        }
    }
}

fn parse_amplitudes(text: &str) -> Result<Vec<Complex<f64>>, CliError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("re,im") => {}
        other => {
            return Err(CliError::schema(
                "state.path",
                format!("expected header `re,im`, found {other:?}"),
            ))
        }
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || CliError::schema("state.path", format!("row {}: expected `re,im`", i + 1));
            let (re, im) = line.split_once(',').ok_or_else(bad)?;
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            let im: f64 = im.trim().parse().map_err(|_| bad())?;
            Ok(Complex::new(re, im))
        })
        .collect()
}
