//! Statistics over result sets and file exports.

mod correlation;
mod export;
mod stats;

pub use correlation::{correlation_matrix, feature_columns, CorrelationMatrix, FEATURES};
pub use export::{export, histogram, render, ExportKind, HISTOGRAM_BINS, HISTOGRAM_RANGE};
pub use stats::{ln_gamma, pearson, quantile, quartiles, regularized_incomplete_beta, Pearson};
