//! Ranking metrics, significance tests, Pareto ranking and reports.

mod metrics;
mod report;
mod stats;

pub use metrics::{agreement, mrr, precision_at_k};
pub use report::{
    read_doc_csv, time_methods, write_doc_csv, write_report_csv, write_timing_csv, DocScores, DocTable, EvalReport,
    Metric, TimingRow,
};
pub use stats::{pareto_rank, rank_sum, wilcoxon_paired, SignificanceMatrix, MIN_PAIRS};
