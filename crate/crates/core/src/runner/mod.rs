//! Benchmark orchestration: configuration, batching, execution, result
//! persistence and scoring.

mod batch;
mod config;
mod execute;
mod results;
mod score;

pub use batch::plan_batches;
pub use config::{MethodChoice, MitigatorSource, RunConfig, SimMode, TopologySource};
pub use execute::{prepare_group, record_seed, run_benchmark, run_benchmark_on, sequence_seed};
pub use results::{
    derived_path, strip_timestamp, Record, ResultSet, RunMeta, SubsetSequences, SCHEMA_VERSION,
};
pub use score::{
    graph_witnesses, heatmap_from_witnesses, max_n_and_tw, median, median_heatmap, reported_scores,
    res_score, scores, scores_from_witnesses, Derived, GraphWitness, HeatCell, Heatmap,
    MethodScore, ReportedScore, Scores, WitnessKind,
};
