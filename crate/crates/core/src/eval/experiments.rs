use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{cross_validate, EvalReport, ExperimentSettings, FeatureSetup, FoldStrategy, Prepared};
use crate::error::{Error, Result};
use crate::features::{FeatureGroup, GroupSet};
use crate::label::StanceLabel;
use crate::learn::Algorithm;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub groups: GroupSet,
    pub f_leave: f64,
    pub f_remain: f64,
    pub f_none: f64,
    pub f_avg: f64,
    pub seed: u64,
    pub strategy: FoldStrategy,
}

impl SweepRow {
    fn from_report(groups: GroupSet, r: &EvalReport) -> Self {
        SweepRow {
            algorithm: r.algorithm,
            groups,
            f_leave: r.f1(StanceLabel::Leave),
            f_remain: r.f1(StanceLabel::Remain),
            f_none: r.f1(StanceLabel::None),
            f_avg: r.f_avg,
            seed: r.seed,
            strategy: r.strategy,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Sorted by F_avg, best first; ties keep algorithm then bitmask order.
    pub rows: Vec<SweepRow>,
    pub best: BTreeMap<Algorithm, SweepRow>,
}

/// Cross-validates every non-empty subset of `groups` with every algorithm.
pub fn sweep_combinations<T: Scalar>(
    data: &Prepared<T>,
    algorithms: &[Algorithm],
    groups: GroupSet,
    settings: &ExperimentSettings,
) -> Result<SweepResult> {
    let jobs: Vec<(Algorithm, GroupSet)> = algorithms
        .iter()
        .flat_map(|&a| groups.non_empty_subsets().into_iter().map(move |g| (a, g)))
        .collect();
    let mut rows = jobs
        .par_iter()
        .map(|&(a, g)| {
            let r = cross_validate(data, a, FeatureSetup::Groups(g), settings)?;
            Ok(SweepRow::from_report(g, &r))
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| {
        y.f_avg
            .total_cmp(&x.f_avg)
            .then(x.algorithm.cmp(&y.algorithm))
            .then(x.groups.bits().cmp(&y.groups.bits()))
    });
    let mut best = BTreeMap::new();
    for r in &rows {
        best.entry(r.algorithm).or_insert_with(|| r.clone());
    }
    Ok(SweepResult { rows, best })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    /// `all`, `context-based`, or the name of the removed group.
    pub removed: String,
    pub groups: GroupSet,
    pub f_avg: f64,
    /// `F − F_all`.
    pub delta: f64,
    /// `(F − F_all) / F_all × 100`; zero when `F_all` is zero.
    pub delta_pct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationTable {
    pub algorithm: Algorithm,
    pub base: GroupSet,
    pub rows: Vec<AblationRow>,
}

impl AblationTable {
    /// The single-group row with the lowest F_avg.
    pub fn largest_drop(&self) -> Option<&AblationRow> {
        self.rows
            .iter()
            .filter(|r| r.removed != "all" && r.removed != "context-based")
            .min_by(|a, b| a.f_avg.total_cmp(&b.f_avg))
    }

    pub fn row(&self, removed: &str) -> Option<&AblationRow> {
        self.rows.iter().find(|r| r.removed == removed)
    }
}

/// Scores `base`, `base` without the context groups, and `base` without each single group.
pub fn ablation<T: Scalar>(
    data: &Prepared<T>,
    algorithm: Algorithm,
    base: GroupSet,
    settings: &ExperimentSettings,
) -> Result<AblationTable> {
    if base.is_empty() {
        return Err(Error::Eval("ablation needs a non-empty base group set".into()));
    }
    let mut cells: Vec<(String, GroupSet)> = vec![("all".into(), base)];
    let without_context = base.difference(GroupSet::context());
    if without_context != base && !without_context.is_empty() {
        cells.push(("context-based".into(), without_context));
    }
    for g in base.iter() {
        let rest = base.without(g);
        if !rest.is_empty() {
            cells.push((g.name().to_string(), rest));
        }
    }
    let scores = cells
        .par_iter()
        .map(|(_, g)| cross_validate(data, algorithm, FeatureSetup::Groups(*g), settings).map(|r| r.f_avg))
        .collect::<Result<Vec<f64>>>()?;
    let f_all = scores[0];
    let rows = cells
        .into_iter()
        .zip(scores)
        .map(|((removed, groups), f)| AblationRow {
            removed,
            groups,
            f_avg: f,
            delta: f - f_all,
            delta_pct: if f_all == 0.0 { 0.0 } else { (f - f_all) / f_all * 100.0 },
        })
        .collect();
    Ok(AblationTable { algorithm, base, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemporalRow {
    pub window: usize,
    pub window_name: String,
    pub report: EvalReport,
}

/// Cross-validates each configuration inside each window separately.
///
/// The diachronic group is dropped from every configuration since it is constant within a
/// window.
pub fn temporal_experiment<T: Scalar>(
    data: &Prepared<T>,
    configs: &[(Algorithm, FeatureSetup)],
    window_names: &[String],
    settings: &ExperimentSettings,
) -> Result<Vec<TemporalRow>> {
    let mut jobs = Vec::new();
    for (w, name) in window_names.iter().enumerate() {
        let idx: Vec<usize> = (0..data.len())
            .filter(|&i| data.instances[i].unit.window == w)
            .collect();
        if idx.len() < settings.k {
            return Err(Error::Eval(format!(
                "window {name} has {} instances, fewer than k = {}",
                idx.len(),
                settings.k
            )));
        }
        let subset = data.subset(&idx);
        for &(algorithm, setup) in configs {
            let setup = match setup {
                FeatureSetup::Groups(g) => {
                    let g = g.without(FeatureGroup::DeCxt);
                    if g.is_empty() {
                        return Err(Error::Eval("feature set is empty once de-cxt is dropped".into()));
                    }
                    FeatureSetup::Groups(g)
                }
                other => other,
            };
            jobs.push((w, name.clone(), algorithm, setup, subset.clone()));
        }
    }
    jobs.into_par_iter()
        .map(|(window, window_name, algorithm, setup, subset)| {
            Ok(TemporalRow {
                window,
                window_name,
                report: cross_validate(&subset, algorithm, setup, settings)?,
            })
        })
        .collect()
}
