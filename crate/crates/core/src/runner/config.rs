use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::circuit::Method;
use crate::error::{Error, Result};
use crate::graph::{bundled_topology, induced_subgraph, HardwareTopology, TREEWIDTH_LIMIT};

/// Where the device description comes from: a bundled name, a file path,
/// or an inline topology object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopologySource {
    Named(String),
    Inline(HardwareTopology),
}

impl TopologySource {
    /// A path that exists wins over a bundled name.
    pub fn resolve(&self) -> Result<HardwareTopology> {
        match self {
            TopologySource::Inline(t) => Ok(t.clone()),
            TopologySource::Named(name) => {
                if Path::new(name).exists() {
                    HardwareTopology::load(name)
                } else {
                    bundled_topology(name).ok_or_else(|| {
                        Error::InvalidConfig(format!(
                            "`{name}` is neither a file nor a bundled topology"
                        ))
                    })
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Naive,
    Unitary,
    #[default]
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Naive => vec![Method::Naive],
            MethodChoice::Unitary => vec![Method::Unitary],
            MethodChoice::Both => vec![Method::Naive, Method::Unitary],
        }
    }
}

impl std::str::FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(MethodChoice::Naive),
            "unitary" => Ok(MethodChoice::Unitary),
            "both" => Ok(MethodChoice::Both),
            _ => Err(Error::InvalidConfig(format!("unknown method `{s}`"))),
        }
    }
}

/// How stabilizer expectations are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// Noisy shot sampling.
    #[default]
    Sampled,
    /// Noiseless tableau expectation values, no counts.
    Exact,
}

/// Source of the readout mitigator when mitigation is on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MitigatorSource {
    /// Estimated from calibration circuits after every batch.
    #[default]
    Calibrated,
    /// Taken directly from the topology's readout errors.
    Exact,
}

fn default_shots() -> usize {
    4096
}

fn default_batch() -> usize {
    300
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub topology: TopologySource,
    /// Hardware qubit lists; local vertex `i` is the `i`-th listed qubit.
    pub subsets: Vec<Vec<usize>>,
    #[serde(default)]
    pub method: MethodChoice,
    /// Sequences per subset; `2^(n+1)` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequences_per_graph: Option<usize>,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mitigate: bool,
    #[serde(default)]
    pub mitigator: MitigatorSource,
    #[serde(default = "default_batch")]
    pub max_per_batch: usize,
    #[serde(default)]
    pub mode: SimMode,
    /// Probability of replacing the prepared state by the maximally mixed
    /// state before measurement.
    #[serde(default)]
    pub white_noise: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(topology: TopologySource, subsets: Vec<Vec<usize>>) -> Self {
        RunConfig {
            topology,
            subsets,
            method: MethodChoice::Both,
            sequences_per_graph: None,
            shots: default_shots(),
            seed: 0,
            mitigate: false,
            mitigator: MitigatorSource::Calibrated,
            max_per_batch: default_batch(),
            mode: SimMode::Sampled,
            white_noise: 0.0,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Reads a config file. Relative topology and output paths are resolved
    /// against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::from_json(&std::fs::read_to_string(path)?)?;
        let dir = path.parent().unwrap_or(Path::new(""));
        if let TopologySource::Named(name) = &cfg.topology {
            let candidate = dir.join(name);
            if bundled_topology(name).is_none() || candidate.exists() {
                cfg.topology = TopologySource::Named(candidate.to_string_lossy().into_owned());
            }
        }
        if let Some(out) = &cfg.output {
            if out.is_relative() {
                cfg.output = Some(dir.join(out));
            }
        }
        Ok(cfg)
    }

    pub fn resolve_topology(&self) -> Result<HardwareTopology> {
        self.topology.resolve()
    }

    pub fn sequences_for(&self, n: usize) -> usize {
        self.sequences_per_graph.unwrap_or(1 << (n + 1))
    }

    pub fn validate(&self, topo: &HardwareTopology) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::InvalidConfig("shots must be at least 1".into()));
        }
        if self.subsets.is_empty() {
            return Err(Error::InvalidConfig("no qubit subsets given".into()));
        }
        if self.max_per_batch == 0 {
            return Err(Error::InvalidConfig(
                "max_per_batch must be at least 1".into(),
            ));
        }
        if self.sequences_per_graph == Some(0) {
            return Err(Error::InvalidConfig(
                "sequences_per_graph must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.white_noise) {
            return Err(Error::InvalidConfig(
                "white_noise must be a probability".into(),
            ));
        }
        for s in &self.subsets {
            if s.len() > TREEWIDTH_LIMIT {
                return Err(Error::InvalidConfig(format!(
                    "subset of {} qubits exceeds the {TREEWIDTH_LIMIT}-qubit limit",
                    s.len()
                )));
            }
            induced_subgraph(topo, s)?;
        }
        Ok(())
    }
}
