//! Flat `key = value` experiment configs.
//!
//! ```text
//! # fifth-order advection study
//! experiment = advection
//! variant = fweno, yc
//! r = 3
//! N = 10, 20, 40, 80
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use fweno_core::kernels::WeightDesign;
use fweno_core::solver::DtRule;
use fweno_core::SplittingScheme;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    Advection,
    BurgersSmooth,
    BurgersShock,
    ShuOsher,
    Sod,
    Dmr,
    Riemann2d,
    BenchKernels,
    Convergence,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 9] = [
        ExperimentId::Advection,
        ExperimentId::BurgersSmooth,
        ExperimentId::BurgersShock,
        ExperimentId::ShuOsher,
        ExperimentId::Sod,
        ExperimentId::Dmr,
        ExperimentId::Riemann2d,
        ExperimentId::BenchKernels,
        ExperimentId::Convergence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentId::Advection => "advection",
            ExperimentId::BurgersSmooth => "burgers-smooth",
            ExperimentId::BurgersShock => "burgers-shock",
            ExperimentId::ShuOsher => "shu-osher",
            ExperimentId::Sod => "sod",
            ExperimentId::Dmr => "dmr",
            ExperimentId::Riemann2d => "riemann2d",
            ExperimentId::BenchKernels => "bench-kernels",
            ExperimentId::Convergence => "convergence",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentId::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("missing required key '{0}'")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

/// One experiment: what to run and which defaults to override.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: ExperimentId,
    pub variants: Vec<WeightDesign>,
    pub r: Vec<usize>,
    pub grids: Vec<usize>,
    pub cfl: Option<f64>,
    pub s: Option<u32>,
    pub s1: Option<u32>,
    pub s2: Option<u32>,
    pub eps: Option<f64>,
    pub splitting: Option<SplittingScheme>,
    pub t_final: Option<f64>,
    pub dt_rule: Option<DtRule>,
    pub fixed_dt: Option<f64>,
    pub lf_margin: Option<f64>,
    pub gamma: Option<f64>,
    /// Grid size of the reference solution for shock problems.
    pub reference: Option<usize>,
    /// Problem driven by `convergence` and `bench-kernels`.
    pub problem: Option<ExperimentId>,
    /// Convergence rows with smaller N are computed but not emitted.
    pub report_from: Option<usize>,
    pub seed: u64,
    /// Windows per isolated indicator timing.
    pub windows: usize,
}

impl ExperimentSpec {
    /// A spec with the built-in defaults of `experiment`.
    pub fn new(experiment: ExperimentId) -> Self {
        use ExperimentId::*;
        use WeightDesign::*;
        let doublings = |from: usize, to: usize| {
            let mut v = vec![from];
            while *v.last().unwrap() < to {
                v.push(v.last().unwrap() * 2);
            }
            v
        };
        let (variants, r, grids) = match experiment {
            Advection | Convergence => (vec![Fast, YamaleevCarpenter], vec![3], doublings(10, 640)),
            BurgersSmooth => (vec![Fast, YamaleevCarpenter], vec![3], doublings(20, 1280)),
            BurgersShock => (WeightDesign::ALL.to_vec(), vec![3], vec![80]),
            ShuOsher => (WeightDesign::ALL.to_vec(), vec![3], vec![200, 400]),
            Sod => (WeightDesign::ALL.to_vec(), vec![5], vec![200]),
            Dmr => (WeightDesign::ALL.to_vec(), vec![3], vec![512]),
            Riemann2d => (WeightDesign::ALL.to_vec(), vec![3], vec![256]),
            BenchKernels => (WeightDesign::ALL.to_vec(), vec![3, 4, 5], vec![100, 200, 400]),
        };
        ExperimentSpec {
            experiment,
            variants,
            r,
            grids,
            cfl: None,
            s: None,
            s1: None,
            s2: None,
            eps: None,
            splitting: None,
            t_final: None,
            dt_rule: None,
            fixed_dt: None,
            lf_margin: None,
            gamma: None,
            reference: None,
            problem: None,
            report_from: None,
            seed: 0,
            windows: 1_000_000,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.grids.is_empty() {
            return bad("grid list is empty".into());
        }
        if self.grids.contains(&0) {
            return bad("grid sizes must be positive".into());
        }
        if self.variants.is_empty() {
            return bad("variant list is empty".into());
        }
        if self.r.is_empty() {
            return bad("r list is empty".into());
        }
        if let Some(&r) = self.r.iter().find(|r| !(2..=8).contains(*r)) {
            return bad(format!("r = {r} outside [2, 8]"));
        }
        if let Some(c) = self.cfl {
            if !(c > 0.0 && c <= 1.0) {
                return bad(format!("cfl = {c} outside (0, 1]"));
            }
        }
        for (name, v) in [("T", self.t_final), ("dt", self.fixed_dt), ("eps", self.eps), ("gamma", self.gamma)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return bad(format!("{name} must be positive, got {v}"));
                }
            }
        }
        if let Some(m) = self.lf_margin {
            if !(m >= 1.0 && m.is_finite()) {
                return bad(format!("lf_margin must be at least 1, got {m}"));
            }
        }
        if let Some(g) = self.gamma {
            if g <= 1.0 {
                return bad(format!("gamma must exceed 1, got {g}"));
            }
        }
        for (name, v) in [("s", self.s), ("s1", self.s1), ("s2", self.s2)] {
            if v == Some(0) {
                return bad(format!("{name} must be at least 1"));
            }
        }
        if self.windows == 0 {
            return bad("windows must be positive".into());
        }
        Ok(())
    }
}

fn parse_list<T: FromStr>(line: usize, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| ConfigError::Parse { line, msg: format!("'{s}': {e}") }))
        .collect()
}

fn parse_one<T: FromStr>(line: usize, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| ConfigError::Parse { line, msg: format!("'{value}': {e}") })
}

fn parse_dt_rule(line: usize, value: &str) -> Result<DtRule, ConfigError> {
    match value {
        "standard" => Ok(DtRule::Standard),
        "order-matched" | "ordermatched" => Ok(DtRule::OrderMatched),
        _ => Err(ConfigError::Parse { line, msg: format!("unknown dt rule '{value}' (standard or order-matched)") }),
    }
}

/// Parses config text. Unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<ExperimentSpec, ConfigError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Parse { line, msg: format!("expected 'key = value', found '{content}'") })?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(ConfigError::Parse { line, msg: format!("empty value for '{key}'") });
        }
        entries.push((line, key.to_string(), value.to_string()));
    }

    let (eline, experiment) = match entries.iter().find(|(_, k, _)| k == "experiment") {
        Some((line, _, v)) => (*line, v.clone()),
        None => return Err(ConfigError::Missing("experiment")),
    };
    let id: ExperimentId = experiment.parse().map_err(|msg| ConfigError::Parse { line: eline, msg })?;
    let mut spec = ExperimentSpec::new(id);

    for (line, key, value) in &entries {
        let line = *line;
        let v = value.as_str();
        match key.as_str() {
            "experiment" => {}
            "variant" | "variants" => spec.variants = parse_list(line, v)?,
            "r" => spec.r = parse_list(line, v)?,
            "N" | "n" => spec.grids = parse_list(line, v)?,
            "cfl" | "CFL" => spec.cfl = Some(parse_one(line, v)?),
            "s" => spec.s = Some(parse_one(line, v)?),
            "s1" => spec.s1 = Some(parse_one(line, v)?),
            "s2" => spec.s2 = Some(parse_one(line, v)?),
            "eps" | "epsilon" => spec.eps = Some(parse_one(line, v)?),
            "splitting" => spec.splitting = Some(parse_one(line, v)?),
            "T" | "t_final" => spec.t_final = Some(parse_one(line, v)?),
            "dt" => spec.fixed_dt = Some(parse_one(line, v)?),
            "lf_margin" => spec.lf_margin = Some(parse_one(line, v)?),
            "dt_rule" => spec.dt_rule = Some(parse_dt_rule(line, v)?),
            "gamma" => spec.gamma = Some(parse_one(line, v)?),
            "reference" => spec.reference = Some(parse_one(line, v)?),
            "problem" => spec.problem = Some(parse_one(line, v)?),
            "report_from" => spec.report_from = Some(parse_one(line, v)?),
            "seed" => spec.seed = parse_one(line, v)?,
            "windows" => spec.windows = parse_one(line, v)?,
            other => return Err(ConfigError::UnknownKey { line, key: other.to_string() }),
        }
    }
    spec.validate()?;
    Ok(spec)
}

pub fn load_config(path: &Path) -> Result<ExperimentSpec, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}
