use serde::{Deserialize, Serialize};

use super::stats::pearson;
use crate::error::{Error, Result};
use crate::runner::Record;

pub const FEATURES: [&str; 5] = ["width", "cnot_count", "weight", "treewidth", "expectation"];

/// Pairwise Pearson statistics over [`FEATURES`]. Cells involving a
/// constant feature are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub features: Vec<String>,
    pub samples: usize,
    pub dof: usize,
    pub r: Vec<Vec<Option<f64>>>,
    pub p: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn r_of(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.features.iter().position(|f| f == a)?;
        let j = self.features.iter().position(|f| f == b)?;
        self.r[i][j]
    }
}

/// Feature columns of every successful non-identity record.
pub fn feature_columns(records: &[Record], mitigated: bool) -> Vec<Vec<f64>> {
    let rows: Vec<[f64; 5]> = records
        .iter()
        .filter(|r| r.is_ok() && !r.is_identity())
        .filter_map(|r| {
            let e = if mitigated { r.mitigated? } else { r.raw? };
            Some([
                r.width as f64,
                r.cnot_count as f64,
                r.weight as f64,
                r.treewidth as f64,
                e,
            ])
        })
        .collect();
    (0..FEATURES.len())
        .map(|k| rows.iter().map(|row| row[k]).collect())
        .collect()
}

pub fn correlation_matrix(records: &[Record], mitigated: bool) -> Result<CorrelationMatrix> {
    let cols = feature_columns(records, mitigated);
    let samples = cols[0].len();
    if samples < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            actual: samples,
        });
    }
    let k = FEATURES.len();
    let mut r = vec![vec![None; k]; k];
    let mut p = vec![vec![None; k]; k];
    for i in 0..k {
        for j in i..k {
            match pearson(&cols[i], &cols[j]) {
                Ok(stat) => {
                    let rv = if i == j { 1.0 } else { stat.r };
                    r[i][j] = Some(rv);
                    r[j][i] = Some(rv);
                    p[i][j] = Some(stat.p);
                    p[j][i] = Some(stat.p);
                }
                Err(Error::ConstantSeries) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(CorrelationMatrix {
        features: FEATURES.iter().map(|s| s.to_string()).collect(),
        samples,
        dof: samples - 2,
        r,
        p,
    })
}
