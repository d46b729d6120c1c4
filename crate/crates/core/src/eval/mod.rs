//! Metrics, cross-validation and the experiment protocols: feature-group sweep,
//! ablation and per-window runs.
//!
//! Scores are fractions internally; CSV and markdown output show percentages rounded
//! half-up to two decimals.

mod cv;
mod dataset;
mod experiments;
mod metrics;
mod report;

pub use cv::{
    assign_folds, cross_validate, score_predictions, EvalReport, ExperimentSettings, FeatureSetup, FoldReport,
    FoldStrategy, Prepared,
};
pub use dataset::{triplet_level_dataset, tweet_level_dataset, LabeledUnit};
pub use experiments::{
    ablation, sweep_combinations, temporal_experiment, AblationRow, AblationTable, SweepResult, SweepRow, TemporalRow,
};
pub use metrics::{f1_per_class, f_avg, percent, ClassScores, ConfusionCounts};
pub use report::{
    ablation_markdown, report_markdown, sweep_csv, sweep_markdown, temporal_markdown, write_json, write_text,
    SWEEP_COLUMNS,
};

#[cfg(test)]
mod tests;
