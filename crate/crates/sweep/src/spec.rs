//! Sweep specifications: defaults per command, a TOML file, then command-line
//! overrides, later layers winning.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use ptdimer_core::SystemParams;
use serde::{Deserialize, Serialize};

use crate::error::{config, Result, SweepError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    StabilityMap,
    IntensityMap,
    Linecut,
    SnrMap,
    Transient,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::StabilityMap => "stability-map",
            Command::IntensityMap => "intensity-map",
            Command::Linecut => "linecut",
            Command::SnrMap => "snr-map",
            Command::Transient => "transient",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Analytic,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

macro_rules! from_str_via_serde {
    ($($t:ty),*) => {$(
        impl FromStr for $t {
            type Err = SweepError;
            fn from_str(s: &str) -> Result<Self> {
                <$t>::deserialize(serde::de::value::StrDeserializer::<serde::de::value::Error>::new(s))
                    .map_err(|_| SweepError::Config(format!("unknown {} `{s}`", stringify!($t).to_lowercase())))
            }
        }
    )*};
}
from_str_via_serde!(Engine, Format, Scale);

/// One swept parameter (or the time axis `t` of `transient`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, count: usize) -> Self {
        Self { name: name.into(), min, max, count, scale: Scale::Linear }
    }

    /// Grid values; both end points are exact.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|k| {
                if k == 0 {
                    return self.min;
                }
                if k == n - 1 {
                    return self.max;
                }
                let s = k as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * s,
                    Scale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * s).exp(),
                }
            })
            .collect()
    }

    /// `name=min:max:count[:log]`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || SweepError::Config(format!("axis `{text}`: expected name=min:max:count[:linear|log]"));
        let (name, rest) = text.split_once('=').ok_or_else(bad)?;
        let f: Vec<&str> = rest.split(':').collect();
        if !(3..=4).contains(&f.len()) {
            return Err(bad());
        }
        Ok(Self {
            name: name.trim().into(),
            min: f[0].parse().map_err(|_| bad())?,
            max: f[1].parse().map_err(|_| bad())?,
            count: f[2].parse().map_err(|_| bad())?,
            scale: f.get(3).map_or(Ok(Scale::Linear), |s| s.parse())?,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleLayer {
    pub scan_tol: Option<f64>,
    pub max_cutoff: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransientLayer {
    /// Initial order parameter `[Re a1, Im a1, Re a2, Im a2]`.
    pub a0: Option<[f64; 4]>,
    /// Total-excitation cutoff of the oracle's first-moment run.
    pub cutoff: Option<usize>,
}

/// One configuration layer (file or command line); every field optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub engine: Option<Engine>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub axis: Vec<Axis>,
    #[serde(default)]
    pub oracle: OracleLayer,
    #[serde(default)]
    pub transient: TransientLayer,
}

impl Layer {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Apply one `name=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| SweepError::Config(format!("`{assignment}`: expected name=value")))?;
        let (name, value) = (name.trim(), value.trim());
        let num = || value.parse::<f64>().map_err(|_| SweepError::Config(format!("`{assignment}`: not a number")));
        let int = || value.parse::<usize>().map_err(|_| SweepError::Config(format!("`{assignment}`: not a count")));
        match name {
            _ if SystemParams::NAMES.contains(&name) => {
                self.params.insert(name.into(), num()?);
            }
            "tolerance" => self.tolerance = Some(num()?),
            "jobs" => self.jobs = Some(int()?),
            "oracle.scan_tol" => self.oracle.scan_tol = Some(num()?),
            "oracle.max_cutoff" => self.oracle.max_cutoff = Some(int()?),
            "transient.cutoff" => self.transient.cutoff = Some(int()?),
            _ => return config(format!("unknown setting `{name}`")),
        }
        Ok(())
    }
}

/// Fully resolved sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub command: Command,
    pub axes: Vec<Axis>,
    pub fixed: BTreeMap<String, f64>,
    pub engine: Engine,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Worker threads; 0 picks the number of cores.
    pub jobs: usize,
    /// Relative tolerance of analytic-versus-oracle comparisons.
    pub tolerance: f64,
    pub scan_tol: f64,
    pub max_cutoff: usize,
    pub transient_cutoff: usize,
    pub a0: [f64; 4],
}

fn fixed(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

impl SweepSpec {
    /// Built-in defaults of each command.
    pub fn defaults(command: Command) -> Self {
        let (axes, fixed) = match command {
            Command::StabilityMap => (
                vec![Axis::new("gamma1", 0.0, 2.0, 101), Axis::new("gamma2", 0.0, 2.0, 101)],
                fixed(&[("delta", 0.0), ("j", 1.0), ("f", 0.0)]),
            ),
            Command::IntensityMap | Command::SnrMap => (
                vec![Axis::new("delta", -3.0, 3.0, 121), Axis::new("gamma1", 0.0, 1.6, 81)],
                fixed(&[("j", 1.0), ("f", 10.0), ("gamma2", 1.6)]),
            ),
            Command::Linecut => (
                vec![Axis::new("f", 10.0, 20.0, 2), Axis::new("delta", -3.0, 3.0, 121)],
                fixed(&[("j", 1.0), ("gamma1", 0.386), ("gamma2", 1.6)]),
            ),
            Command::Transient => (
                vec![Axis::new("t", 0.0, 50.0, 201)],
                fixed(&[("delta", 0.0), ("j", 1.0), ("f", 0.3), ("gamma1", 0.4), ("gamma2", 1.6)]),
            ),
            Command::Verify => (vec![], fixed(&[("delta", 0.0), ("j", 1.0), ("f", 0.3), ("gamma1", 0.4), ("gamma2", 1.6)])),
        };
        let engine = if command == Command::Verify { Engine::Both } else { Engine::Analytic };
        Self {
            command,
            axes,
            fixed,
            engine,
            format: Format::Csv,
            out: None,
            jobs: 0,
            tolerance: 1e-5,
            scan_tol: 1e-7,
            max_cutoff: 96,
            transient_cutoff: 80,
            a0: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// Apply a layer on top of this spec.
    pub fn apply(&mut self, layer: &Layer) -> Result<()> {
        let mut seen = Vec::new();
        for a in &layer.axis {
            if seen.contains(&&a.name) {
                return config(format!("axis `{}` given twice", a.name));
            }
            if layer.params.contains_key(&a.name) {
                return config(format!("`{}` is both fixed and swept", a.name));
            }
            seen.push(&a.name);
        }
        for (k, v) in &layer.params {
            if !SystemParams::NAMES.contains(&k.as_str()) {
                return config(format!("unknown parameter `{k}`"));
            }
            self.axes.retain(|a| &a.name != k);
            self.fixed.insert(k.clone(), *v);
        }
        for a in &layer.axis {
            self.fixed.remove(&a.name);
            match self.axes.iter_mut().find(|b| b.name == a.name) {
                Some(b) => *b = a.clone(),
                None => self.axes.push(a.clone()),
            }
        }
        macro_rules! take {
            ($dst:expr, $src:expr) => {
                if let Some(v) = $src.clone() {
                    $dst = v;
                }
            };
        }
        take!(self.engine, layer.engine);
        take!(self.format, layer.format);
        if layer.out.is_some() {
            self.out = layer.out.clone();
        }
        take!(self.jobs, layer.jobs);
        take!(self.tolerance, layer.tolerance);
        take!(self.scan_tol, layer.oracle.scan_tol);
        take!(self.max_cutoff, layer.oracle.max_cutoff);
        take!(self.transient_cutoff, layer.transient.cutoff);
        take!(self.a0, layer.transient.a0);
        Ok(())
    }

    /// Check the resolved spec.
    pub fn validate(&self) -> Result<()> {
        for a in &self.axes {
            let time = a.name == "t";
            if time && self.command != Command::Transient {
                return config("the time axis `t` belongs to `transient`");
            }
            if !time && !SystemParams::NAMES.contains(&a.name.as_str()) {
                return config(format!("unknown axis `{}`", a.name));
            }
            if a.count < 2 {
                return config(format!("axis `{}` needs at least 2 points", a.name));
            }
            if !(a.min.is_finite() && a.max.is_finite()) {
                return config(format!("axis `{}` has a non-finite bound", a.name));
            }
            if a.scale == Scale::Log && !(a.min > 0.0 && a.max > 0.0) {
                return config(format!("log axis `{}` needs positive bounds", a.name));
            }
        }
        for name in SystemParams::NAMES {
            let swept = self.axes.iter().filter(|a| a.name == name).count();
            let fixed = usize::from(self.fixed.contains_key(name));
            if swept + fixed != 1 {
                return config(format!("parameter `{name}` must be either fixed or swept exactly once"));
            }
        }
        if self.command == Command::Transient {
            if !self.axes.iter().any(|a| a.name == "t") {
                return config("`transient` needs the time axis `t`");
            }
            if self.param_axes().next().is_some() {
                return config("`transient` sweeps time only; fix all parameters");
            }
            if self.axes.iter().any(|a| a.name == "t" && (a.min < 0.0 || a.max <= a.min)) {
                return config("time axis must be increasing from t >= 0");
            }
        }
        if !(self.tolerance > 0.0 && self.scan_tol > 0.0) {
            return config("tolerances must be positive");
        }
        if self.command == Command::Verify && self.engine != Engine::Both {
            return config("`verify` compares both engines; use --engine both");
        }
        Ok(())
    }

    /// Defaults, then the file layer, then the command-line layer; validated.
    pub fn resolve(command: Command, file: Option<&Layer>, cli: &Layer) -> Result<Self> {
        let mut spec = Self::defaults(command);
        if let Some(f) = file {
            spec.apply(f)?;
        }
        spec.apply(cli)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn grid_len(&self) -> usize {
        self.param_axes().map(|a| a.count).product()
    }

    /// Axes over system parameters (everything except the time axis).
    pub fn param_axes(&self) -> impl Iterator<Item = &Axis> {
        self.axes.iter().filter(|a| a.name != "t")
    }

    /// Parameter points in row-major order (last axis fastest), with the
    /// swept coordinates of each.
    pub fn grid(&self) -> Result<Vec<(Vec<f64>, SystemParams)>> {
        let axes: Vec<&Axis> = self.param_axes().collect();
        let values: Vec<Vec<f64>> = axes.iter().map(|a| a.values()).collect();
        let total = self.grid_len();
        let mut out = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut coords = vec![0.0; axes.len()];
            for k in (0..axes.len()).rev() {
                coords[k] = values[k][rem % axes[k].count];
                rem /= axes[k].count;
            }
            let get = |name: &str| {
                axes.iter().position(|a| a.name == name).map_or_else(|| self.fixed[name], |k| coords[k])
            };
            let p = SystemParams { delta: get("delta"), j: get("j"), f: get("f"), gamma1: get("gamma1"), gamma2: get("gamma2") };
            out.push((coords, p));
        }
        Ok(out)
    }
}
