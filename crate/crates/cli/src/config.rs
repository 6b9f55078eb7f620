//! Run configuration: the one struct every invocation reduces to, whether
//! it came from flags or from a JSON file.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use chainscope_core::{EvaluableSystem, MetricTransform, Schedule, State, SystemConfig, Word};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    /// One of: relations | cr | strong | nested | locate | paper.
    pub analysis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub required_points: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dense: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub only: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_max_nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_max_walk_len: Option<usize>,
    /// Test hook: named fault injections for the demonstration suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<String>,
}

/// A schedule in a config file: either a spec string (`"geometric:0.375,6"`
/// or `"0.2,0.1,0.05"`) or an explicit list of levels.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Text(String),
    Levels(Vec<f64>),
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<Schedule> {
        match self {
            ScheduleSpec::Text(s) => parse_schedule(s),
            ScheduleSpec::Levels(levels) => Ok(Schedule::new(levels.clone())?),
        }
    }
}

/// `geometric:first,count` (ratio 1/2) or an explicit comma list.
pub fn parse_schedule(s: &str) -> Result<Schedule> {
    if let Some(rest) = s.strip_prefix("geometric:") {
        let (first, count) = rest
            .split_once(',')
            .ok_or_else(|| anyhow!("geometric schedule needs `first,count`, got `{rest}`"))?;
        let first: f64 = first
            .trim()
            .parse()
            .with_context(|| format!("bad geometric start `{first}`"))?;
        let count: usize = count
            .trim()
            .parse()
            .with_context(|| format!("bad geometric count `{count}`"))?;
        Ok(Schedule::geometric(first, count)?)
    } else {
        let levels: Vec<f64> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad schedule level `{t}`"))
            })
            .collect::<Result<_>>()?;
        Ok(Schedule::new(levels)?)
    }
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        Ok(cfg)
    }

    pub fn build_system(&self) -> Result<EvaluableSystem> {
        let name = self
            .system
            .as_deref()
            .ok_or_else(|| anyhow!("analysis `{}` needs --system", self.analysis))?;
        let cfg = SystemConfig {
            system: name.to_string(),
            grid_n: self.grid_n,
            required_points: self.required_points.clone(),
            cycle_n: self.cycle_n,
            truncation_k: self.truncation_k,
        };
        Ok(cfg.build()?)
    }

    pub fn metric_family(&self) -> Result<Vec<MetricTransform>> {
        let names = match &self.metrics {
            Some(m) if !m.is_empty() => m.clone(),
            // default family: the base metric and its square root
            _ => vec!["d".to_string(), "sqrt".to_string()],
        };
        names
            .iter()
            .map(|n| MetricTransform::parse(n).map_err(Into::into))
            .collect()
    }
}

/// Resolves a state specifier to a sample index. Accepted forms: `#12`
/// (explicit index), a real literal for interval and cycle systems, or a
/// word literal like `1inf` / `110011inf` for subshifts.
pub fn parse_state_spec(sys: &EvaluableSystem, spec: &str) -> Result<usize> {
    if let Some(ix) = spec.strip_prefix('#') {
        let i: usize = ix.parse().with_context(|| format!("bad index `{spec}`"))?;
        if i >= sys.samples().len() {
            bail!(
                "index {i} out of range: system has {} samples",
                sys.samples().len()
            );
        }
        return Ok(i);
    }
    let state = match sys.samples().first() {
        Some(State::Word(_)) => {
            State::Word(Word::parse(spec).map_err(|e| anyhow!("bad word `{spec}`: {e}"))?)
        }
        _ => State::Real(
            spec.parse::<f64>()
                .with_context(|| format!("bad state `{spec}`"))?,
        ),
    };
    sys.sample_index(&state)
        .ok_or_else(|| anyhow!("state `{spec}` is not a sample of system `{}`", sys.name()))
}
