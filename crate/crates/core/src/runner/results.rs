use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use super::config::RunConfig;
use super::score::Derived;
use crate::circuit::Method;
use crate::error::{Error, Result};
use crate::graph::{HardwareTopology, LcSequence};
use crate::sim::{Counts, PauliString};

pub const SCHEMA_VERSION: u32 = 1;

/// One measured stabilizer of one prepared graph state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub subset_index: usize,
    pub subset: Vec<usize>,
    pub method: Method,
    pub seq_index: usize,
    pub lc_seq: LcSequence,
    /// Edges of the prepared graph.
    pub graph_edges: Vec<(usize, usize)>,
    pub treewidth: usize,
    pub width: usize,
    pub cnot_count: usize,
    /// Position in the stabilizer set; `width` is the identity string.
    pub stabilizer_index: usize,
    pub stabilizer: PauliString,
    pub weight: usize,
    pub batch: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Counts>,
    /// Expectation of the signed stabilizer.
    pub raw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mitigated: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Record {
    pub fn is_identity(&self) -> bool {
        self.stabilizer_index == self.width
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none() && self.raw.is_some()
    }
}

/// The LC sequences drawn for one subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetSequences {
    pub subset: Vec<usize>,
    pub seed: u64,
    pub sequences: Vec<LcSequence>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub schema: u32,
    /// Seconds since the Unix epoch; the only field that differs between
    /// identical runs.
    pub created: u64,
    pub version: String,
    pub config: RunConfig,
    pub topology: HardwareTopology,
    pub sequences: Vec<SubsetSequences>,
    /// Circuits per batch.
    pub batches: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultSet {
    pub meta: RunMeta,
    pub records: Vec<Record>,
}

#[derive(Serialize, Deserialize)]
struct Line<T> {
    schema: u32,
    #[serde(flatten)]
    body: T,
}

impl ResultSet {
    /// JSON lines: the run metadata first, then one record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.meta).expect("meta serializes");
        out.push('\n');
        for r in &self.records {
            let line = Line {
                schema: SCHEMA_VERSION,
                body: r,
            };
            out.push_str(&serde_json::to_string(&line).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse("empty result set".into()))??;
        let meta: RunMeta = serde_json::from_str(&first)?;
        if meta.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema {}", meta.schema)));
        }
        let mut records = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let l: Line<Record> = serde_json::from_str(&line)
                .map_err(|e| Error::Parse(format!("record line {}: {e}", i + 2)))?;
            if l.schema != SCHEMA_VERSION {
                return Err(Error::Parse(format!("unsupported schema {}", l.schema)));
            }
            records.push(l.body);
        }
        Ok(ResultSet { meta, records })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::from_jsonl(std::io::BufReader::new(f))
    }

    /// Writes the records to `path` and the derived tables next to it.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<PathBuf> {
        let path = path.as_ref();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(self.to_jsonl().as_bytes())?;
        f.flush()?;
        let derived = derived_path(path);
        std::fs::write(&derived, self.derived().to_json())?;
        Ok(derived)
    }

    pub fn derived(&self) -> Derived {
        Derived::from_records(&self.records)
    }

    pub fn methods(&self) -> Vec<Method> {
        let mut m: Vec<Method> = self.records.iter().map(|r| r.method).collect();
        m.sort();
        m.dedup();
        m
    }
}

/// `run.jsonl` → `run.derived.json`.
pub fn derived_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.derived.json"))
}

/// Removes the `created` field so runs can be compared byte for byte.
pub fn strip_timestamp(jsonl: &str) -> String {
    let mut lines = jsonl.lines();
    let mut out = String::new();
    if let Some(first) = lines.next() {
        let mut v: serde_json::Value = serde_json::from_str(first).expect("meta line is JSON");
        if let Some(o) = v.as_object_mut() {
            o.remove("created");
        }
        out.push_str(&v.to_string());
        out.push('\n');
    }
    for l in lines {
        out.push_str(l);
        out.push('\n');
    }
    out
}
