//! Two-stage comparison reports.
//!
//! Mirrors the usual benchmark table: one metric row per stage plus a
//! ratio row, `(perf - primary) / primary` per column. Emitted both as a
//! JSON document and as an aligned text table; tests and tooling consume
//! the JSON.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{FloorplanInstance, SolveReport};
use crate::traffic::{com_cost, simulate, FrequencyMatrix, Workload};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageMetrics {
    pub hpwl_um: f64,
    pub hpwl_unweighted_um: f64,
    pub package_area_um2: f64,
    /// Sum of the per-axis warpage values.
    pub warpage_um: f64,
    pub com_cost_um: f64,
    pub cost_2_5d: f64,
    pub model_cycles: f64,
    pub objective_primary: f64,
    pub objective_perf: f64,
}

/// Per-column relative change of the perf stage against the primary
/// stage; `None` where the primary value is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioRow {
    pub hpwl: Option<f64>,
    pub package_area: Option<f64>,
    pub warpage: Option<f64>,
    pub com_cost: Option<f64>,
    pub model_cycles: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub version: u32,
    pub seed: u64,
    pub primary: StageMetrics,
    pub perf: StageMetrics,
    pub ratio: RatioRow,
}

fn ratio(ours: f64, baseline: f64) -> Option<f64> {
    if baseline == 0.0 {
        None
    } else {
        Some((ours - baseline) / baseline)
    }
}

fn stage_metrics(
    instance: &FloorplanInstance,
    report: &SolveReport,
    freq: &FrequencyMatrix,
    workload: &Workload,
) -> Result<StageMetrics> {
    let b = &report.objective_breakdown;
    // ComCost and cycles are recomputed against the shared frequency
    // matrix so both stages are measured on identical traffic.
    let com = com_cost(freq, &instance.chiplets, &report.placement)?;
    let (_, cycles) = simulate(
        &instance.chiplets,
        &report.placement,
        &instance.nets,
        workload,
        &instance.latency_table,
        instance.base_cycles,
    )?;
    let (perf_total, _) = crate::floorplan::objective_perf(instance, &report.placement, freq)?;
    let (primary_total, _) = crate::floorplan::objective_primary(instance, &report.placement)?;
    Ok(StageMetrics {
        hpwl_um: b.hpwl,
        hpwl_unweighted_um: b.hpwl_unweighted,
        package_area_um2: b.package_area,
        warpage_um: b.warpage_x + b.warpage_y,
        com_cost_um: com,
        cost_2_5d: b.cost_2_5d,
        model_cycles: cycles,
        objective_primary: primary_total,
        objective_perf: perf_total,
    })
}

impl ReportDocument {
    pub fn build(
        instance: &FloorplanInstance,
        primary: &SolveReport,
        perf: &SolveReport,
        freq: &FrequencyMatrix,
        workload: &Workload,
        seed: u64,
    ) -> Result<Self> {
        let p = stage_metrics(instance, primary, freq, workload)?;
        let q = stage_metrics(instance, perf, freq, workload)?;
        Ok(ReportDocument {
            version: crate::schema::FORMAT_VERSION,
            seed,
            primary: p,
            perf: q,
            ratio: RatioRow {
                hpwl: ratio(q.hpwl_um, p.hpwl_um),
                package_area: ratio(q.package_area_um2, p.package_area_um2),
                warpage: ratio(q.warpage_um, p.warpage_um),
                com_cost: ratio(q.com_cost_um, p.com_cost_um),
                model_cycles: ratio(q.model_cycles, p.model_cycles),
            },
        })
    }

    /// Aligned human-readable table.
    pub fn text_table(&self) -> String {
        let mut out = String::new();
        let pct = |r: Option<f64>| match r {
            Some(v) => format!("{:+.2}%", v * 100.0),
            None => "n/a".to_string(),
        };
        out.push_str(&format!(
            "{:<10} {:>14} {:>16} {:>12} {:>14} {:>14}\n",
            "stage", "HPWL (um)", "PA (um^2)", "WPG (um)", "ComCost", "cycles"
        ));
        for (label, m) in [("primary", &self.primary), ("perf", &self.perf)] {
            out.push_str(&format!(
                "{:<10} {:>14.2} {:>16.1} {:>12.6} {:>14.1} {:>14.1}\n",
                label, m.hpwl_um, m.package_area_um2, m.warpage_um, m.com_cost_um, m.model_cycles
            ));
        }
        out.push_str(&format!(
            "{:<10} {:>14} {:>16} {:>12} {:>14} {:>14}\n",
            "ratio",
            pct(self.ratio.hpwl),
            pct(self.ratio.package_area),
            pct(self.ratio.warpage),
            pct(self.ratio.com_cost),
            pct(self.ratio.model_cycles),
        ));
        out
    }
}
