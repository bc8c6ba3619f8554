//! Construct-then-improve loop.
//!
//! After an initial construction, each lay in turn is set aside and the
//! demand covered by the others is rebuilt from scratch. When the rebuild
//! needs at least two lays fewer than it replaces, the set-aside lay is
//! kept for good and the scan restarts on the rebuilt set.

use std::time::{Duration, Instant};

use crate::construction::create_lays;
use crate::error::{Error, Result};
use crate::model::{validate_instance, CuttingPlan, Demand, Instance, Lay};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveConfig {
    /// Wall-clock budget for the improvement loop; `None` runs until no
    /// extraction helps.
    pub time_limit: Option<Duration>,
    pub record_trace: bool,
}

impl SolveConfig {
    pub fn unlimited() -> Self {
        Self::default()
    }

    /// `seconds <= 0` means unlimited.
    pub fn with_seconds(seconds: f64) -> Self {
        Self {
            time_limit: (seconds > 0.0).then(|| Duration::from_secs_f64(seconds)),
            record_trace: false,
        }
    }
}

/// One accepted extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Improvement {
    /// Position of the extracted lay in the working set.
    pub extracted: usize,
    pub lays_before: usize,
    pub lays_after: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub plan: CuttingPlan,
    pub elapsed: Duration,
    /// Lay count of the initial construction.
    pub initial_k: usize,
    pub improved: bool,
    /// Set when the budget ran out before a full pass found nothing.
    pub timed_out: bool,
    pub trace: Vec<Improvement>,
}

/// Entrywise production `sum_k counts[i] * heights[j]` of a set of lays.
pub fn covered_demand(lays: &[Lay], inst: &Instance) -> Result<Demand> {
    let (g, f) = (inst.figures(), inst.fabrics());
    let mut covered = Demand::zeros(g, f);
    for (k, lay) in lays.iter().enumerate() {
        if lay.counts.len() != g || lay.heights.len() != f {
            return Err(Error::DimensionMismatch(format!(
                "lay {k} is {}x{}, instance is {g}x{f}",
                lay.counts.len(),
                lay.heights.len()
            )));
        }
        covered.apply_lay(lay, 1);
    }
    Ok(covered)
}

pub fn solve(inst: &Instance, cfg: &SolveConfig) -> Result<SolveResult> {
    let report = validate_instance(inst);
    if !report.is_valid() {
        return Err(Error::InvalidInstance(report));
    }
    let demand = inst.demand_matrix()?;
    let (lengths, bed_length, bed_height) = (&inst.lengths, inst.bed_length, inst.bed_height);

    let start = Instant::now();
    let expired = || cfg.time_limit.is_some_and(|limit| start.elapsed() >= limit);

    let mut working = create_lays(&demand, lengths, bed_length, bed_height)?;
    let initial_k = working.len();
    let mut kept: Vec<Lay> = Vec::new();
    let mut trace = Vec::new();
    let mut timed_out = false;

    'scan: loop {
        let covered = covered_demand(&working, inst)?;
        for k in 0..working.len() {
            if expired() {
                timed_out = true;
                break 'scan;
            }
            let mut rest = covered.clone();
            rest.apply_lay(&working[k], -1);
            let rebuilt = create_lays(&rest, lengths, bed_length, bed_height)?;
            if rebuilt.len() + 1 < working.len() {
                if cfg.record_trace {
                    trace.push(Improvement {
                        extracted: k,
                        lays_before: kept.len() + working.len(),
                        lays_after: kept.len() + 1 + rebuilt.len(),
                        elapsed: start.elapsed(),
                    });
                }
                kept.push(working.swap_remove(k));
                working = rebuilt;
                continue 'scan;
            }
        }
        break;
    }

    let improved = kept.len() + working.len() < initial_k;
    kept.extend(working);
    Ok(SolveResult {
        plan: CuttingPlan::new(inst, kept)?,
        elapsed: start.elapsed(),
        initial_k,
        improved,
        timed_out,
        trace,
    })
}
