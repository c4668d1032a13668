//! Scenario files.
//!
//! One `key = value` per line; `#` starts a comment. Keys:
//!
//! ```text
//! grid.n  grid.length
//! field.b
//! component.n  component.ell  component.pc  component.weight_re  component.weight_im
//! time.dt  time.steps  time.observe_every  time.snapshot_every
//! output.dir  output.write_snapshots  output.write_images
//! ```
//!
//! `component.*` keys accumulate into a block; repeating a key that the
//! current block already holds starts the next component. Only `field.b`
//! and at least one component key are required.

use std::collections::HashSet;
use std::path::PathBuf;
use std::str::FromStr;

use cyclovortex::{make_params, Complex64, LandauSpec};
use thiserror::Error;

pub const DEFAULT_GRID_POINTS: usize = 256;
pub const DEFAULT_GRID_LENGTH: f64 = 32.0;
/// Default steps per cyclotron period.
pub const STEPS_PER_PERIOD: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid {key}: {message}")]
    Validation { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: &str, message: impl Into<String>) -> Self {
        Self::Validation {
            key: key.to_string(),
            message: message.into(),
        }
    }

    /// The offending key for validation failures.
    pub fn key(&self) -> Option<&str> {
        match self {
            Self::Validation { key, .. } => Some(key),
            Self::Parse { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeConfig {
    pub dt: f64,
    pub steps: usize,
    pub observe_every: usize,
    /// Snapshot cadence in steps; the final step is always included.
    pub snapshot_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub write_snapshots: bool,
    pub write_images: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub grid: GridConfig,
    pub b_field: f64,
    pub components: Vec<LandauSpec>,
    pub time: TimeConfig,
    pub output: OutputConfig,
}

#[derive(Default)]
struct ComponentBlock {
    seen: HashSet<String>,
    spec: Option<LandauSpec>,
}

impl ComponentBlock {
    fn spec(&mut self) -> &mut LandauSpec {
        self.spec.get_or_insert_with(|| LandauSpec::new(0, 0, 0.0))
    }
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, ConfigError> {
    raw.parse()
        .map_err(|_| ConfigError::invalid(key, format!("cannot parse {raw:?}")))
}

fn finite(key: &str, raw: &str) -> Result<f64, ConfigError> {
    let v: f64 = value(key, raw)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::invalid(key, "must be finite"))
    }
}

fn flag(key: &str, raw: &str) -> Result<bool, ConfigError> {
    match raw {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::invalid(key, format!("expected true/false, got {raw:?}"))),
    }
}

/// Parses and validates a scenario, filling in defaults.
pub fn parse_config(text: &str) -> Result<Scenario, ConfigError> {
    let mut seen = HashSet::new();
    let mut grid_n = None;
    let mut length = None;
    let mut b_field = None;
    let (mut dt, mut steps, mut observe_every, mut snapshot_every) = (None, None, None, None);
    let mut dir = None;
    let (mut write_snapshots, mut write_images) = (false, false);
    let mut components = Vec::new();
    let mut block = ComponentBlock::default();

    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, raw)) = line.split_once('=') else {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("expected `key = value`, got {line:?}"),
            });
        };
        let (key, raw) = (key.trim(), raw.trim());
        if key.is_empty() || raw.is_empty() {
            return Err(ConfigError::Parse {
                line: line_no,
                message: "empty key or value".into(),
            });
        }

        if let Some(field) = key.strip_prefix("component.") {
            if block.seen.contains(field) {
                components.extend(std::mem::take(&mut block).spec);
            }
            block.seen.insert(field.to_string());
            let spec = block.spec();
            match field {
                "n" => spec.n = value(key, raw)?,
                "ell" => spec.ell = value(key, raw)?,
                "pc" => spec.p_c = finite(key, raw)?,
                "weight_re" => spec.weight.re = finite(key, raw)?,
                "weight_im" => spec.weight.im = finite(key, raw)?,
                _ => return Err(ConfigError::invalid(key, "unknown key")),
            }
            continue;
        }

        if !seen.insert(key.to_string()) {
            return Err(ConfigError::invalid(key, format!("repeated on line {line_no}")));
        }
        match key {
            "grid.n" => grid_n = Some(value::<usize>(key, raw)?),
            "grid.length" => length = Some(finite(key, raw)?),
            "field.b" => b_field = Some(finite(key, raw)?),
            "time.dt" => dt = Some(finite(key, raw)?),
            "time.steps" => steps = Some(value::<usize>(key, raw)?),
            "time.observe_every" => observe_every = Some(value::<usize>(key, raw)?),
            "time.snapshot_every" => snapshot_every = Some(value::<usize>(key, raw)?),
            "output.dir" => dir = Some(PathBuf::from(raw)),
            "output.write_snapshots" => write_snapshots = flag(key, raw)?,
            "output.write_images" => write_images = flag(key, raw)?,
            _ => return Err(ConfigError::invalid(key, "unknown key")),
        }
    }
    components.extend(block.spec);

    let b_field = b_field.ok_or_else(|| ConfigError::invalid("field.b", "missing"))?;
    let params = make_params(b_field).map_err(|e| ConfigError::invalid("field.b", e.to_string()))?;
    if components.is_empty() {
        return Err(ConfigError::invalid("component", "at least one component is required"));
    }
    if components.iter().all(|c| c.weight == Complex64::new(0.0, 0.0)) {
        return Err(ConfigError::invalid("component.weight_re", "all weights are zero"));
    }

    let n = grid_n.unwrap_or(DEFAULT_GRID_POINTS);
    if n < 16 || n % 2 != 0 {
        return Err(ConfigError::invalid("grid.n", "must be even and at least 16"));
    }
    let length = length.unwrap_or(DEFAULT_GRID_LENGTH);
    if length <= 0.0 {
        return Err(ConfigError::invalid("grid.length", "must be positive"));
    }

    let period = params.cyclotron_period();
    let dt = dt.unwrap_or(period / STEPS_PER_PERIOD as f64);
    if dt <= 0.0 {
        return Err(ConfigError::invalid("time.dt", "must be positive"));
    }
    let steps = steps.unwrap_or_else(|| ((period / dt) - 1e-9).ceil().max(1.0) as usize);
    if steps == 0 {
        return Err(ConfigError::invalid("time.steps", "must be at least 1"));
    }
    let observe_every = observe_every.unwrap_or(1);
    if observe_every == 0 {
        return Err(ConfigError::invalid("time.observe_every", "must be at least 1"));
    }
    let snapshot_every = snapshot_every.unwrap_or(steps);
    if snapshot_every == 0 {
        return Err(ConfigError::invalid("time.snapshot_every", "must be at least 1"));
    }

    Ok(Scenario {
        grid: GridConfig { n, length },
        b_field,
        components,
        time: TimeConfig {
            dt,
            steps,
            observe_every,
            snapshot_every,
        },
        output: OutputConfig {
            dir: dir.unwrap_or_else(|| PathBuf::from("out")),
            write_snapshots,
            write_images,
        },
    })
}
