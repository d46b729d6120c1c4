use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::cv::EvalReport;
use super::experiments::{AblationTable, SweepRow, TemporalRow};
use super::metrics::percent;
use crate::error::{Error, Result};
use crate::label::StanceLabel;

pub const SWEEP_COLUMNS: [&str; 8] = [
    "algorithm",
    "groups",
    "f_leave",
    "f_remain",
    "f_none",
    "f_avg",
    "seed",
    "strategy",
];

/// Sweep rows as CSV; `groups` is the bitmask, scores are percentages with two decimals.
pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.algorithm.id().to_string(),
            r.groups.bits().to_string(),
            percent(r.f_leave),
            percent(r.f_remain),
            percent(r.f_none),
            percent(r.f_avg),
            r.seed.to_string(),
            r.strategy.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Eval(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn write_json<S: Serialize>(path: impl AsRef<Path>, value: &S) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, serde_json::to_string_pretty(value)? + "\n").map_err(|e| Error::io(path, e))
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn report_markdown(r: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} on {} ({}-fold {}, seed {}, {} instances)\n",
        r.algorithm, r.features, r.k, r.strategy, r.seed, r.n_instances
    );
    s.push_str("| label | P | R | F1 | support |\n|---|---:|---:|---:|---:|\n");
    for c in &r.classes {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            c.label,
            percent(c.precision),
            percent(c.recall),
            percent(c.f1),
            c.support
        );
    }
    let _ = writeln!(
        s,
        "\nF_avg {} (per-fold mean {} ± {})",
        percent(r.f_avg),
        percent(r.fold_f_avg_mean),
        percent(r.fold_f_avg_std)
    );
    s
}

pub fn sweep_markdown(rows: &[SweepRow]) -> String {
    let mut s =
        String::from("| algorithm | features | F_leave | F_remain | F_none | F_avg |\n|---|---|---:|---:|---:|---:|\n");
    for r in rows {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            r.algorithm,
            r.groups,
            percent(r.f_leave),
            percent(r.f_remain),
            percent(r.f_none),
            percent(r.f_avg)
        );
    }
    s
}

pub fn ablation_markdown(t: &AblationTable) -> String {
    let mut s = String::from("| features | F_avg | Δ | Δ% |\n|---|---:|---:|---:|\n");
    for r in &t.rows {
        let name = if r.removed == "all" {
            "All".to_string()
        } else {
            format!("All - {}", r.removed)
        };
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} |",
            name,
            percent(r.f_avg),
            percent(r.delta),
            percent(r.delta_pct / 100.0)
        );
    }
    s
}

pub fn temporal_markdown(rows: &[TemporalRow]) -> String {
    let mut s =
        String::from("| window | algorithm | features | F_leave | F_remain | F_avg |\n|---|---|---|---:|---:|---:|\n");
    for r in rows {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            r.window_name,
            r.report.algorithm,
            r.report.features,
            percent(r.report.f1(StanceLabel::Leave)),
            percent(r.report.f1(StanceLabel::Remain)),
            percent(r.report.f_avg)
        );
    }
    s
}
