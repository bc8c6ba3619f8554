//! Benchmark harness: generate groups, solve every case, re-validate the
//! plans and roll the results up per group.
//!
//! Cases are independent. With the `parallel` feature and `jobs > 1` they
//! are solved on a rayon pool; otherwise one after another. Results are
//! sorted before reporting so both paths write the same rows.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::generator::{generate_suite, GroupSpec};
use crate::model::{validate_plan, volume_lower_bound, Instance};
use crate::solver::{solve, SolveConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult {
    pub group: String,
    /// 1-based, matching the instance file name.
    pub case_index: usize,
    pub k: usize,
    pub initial_k: usize,
    pub mean_ur: f64,
    /// Seconds spent in the solve call.
    pub tc: f64,
    pub lower_bound: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupSummary {
    pub group: String,
    pub cases: usize,
    pub mean_k: f64,
    pub mean_ur: f64,
    pub min_k: usize,
    pub max_k: usize,
    pub mean_tc: f64,
}

/// One instance queued for [`run_cases`].
#[derive(Clone, Debug)]
pub struct Case {
    pub group: String,
    pub case_index: usize,
    pub instance: Instance,
}

/// Solves, validates and measures one instance.
pub fn run_case(group: &str, case_index: usize, inst: &Instance, cfg: &SolveConfig) -> Result<CaseResult> {
    let res = solve(inst, cfg)?;
    let report = validate_plan(&res.plan, inst);
    if !report.is_valid() {
        return Err(Error::InvalidPlan { case: inst.name.clone(), report });
    }
    Ok(CaseResult {
        group: group.to_owned(),
        case_index,
        k: res.plan.k,
        initial_k: res.initial_k,
        mean_ur: res.plan.mean_ur,
        tc: res.elapsed.as_secs_f64(),
        lower_bound: volume_lower_bound(inst),
    })
}

pub fn run_benchmark(
    groups: &[GroupSpec],
    cases_per_group: usize,
    seed: u64,
    cfg: &SolveConfig,
    jobs: usize,
) -> Result<Vec<CaseResult>> {
    let cases: Vec<Case> = generate_suite(groups, cases_per_group, seed)?
        .into_iter()
        .flat_map(|(spec, cases)| {
            cases.into_iter().enumerate().map(move |(n, instance)| Case {
                group: spec.name.to_owned(),
                case_index: n + 1,
                instance,
            })
        })
        .collect();
    run_cases(&cases, cfg, jobs)
}

/// Solves and validates every case, `jobs` at a time, and returns the
/// results in report order.
pub fn run_cases(cases: &[Case], cfg: &SolveConfig, jobs: usize) -> Result<Vec<CaseResult>> {
    let mut results = solve_all(cases, cfg, jobs)?;
    sort_results(&mut results);
    Ok(results)
}

fn solve_one(case: &Case, cfg: &SolveConfig) -> Result<CaseResult> {
    run_case(&case.group, case.case_index, &case.instance, cfg)
}

#[cfg(feature = "parallel")]
fn solve_all(cases: &[Case], cfg: &SolveConfig, jobs: usize) -> Result<Vec<CaseResult>> {
    use rayon::prelude::*;

    if jobs <= 1 {
        return cases.iter().map(|case| solve_one(case, cfg)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    pool.install(|| cases.par_iter().map(|case| solve_one(case, cfg)).collect())
}

#[cfg(not(feature = "parallel"))]
fn solve_all(cases: &[Case], cfg: &SolveConfig, _jobs: usize) -> Result<Vec<CaseResult>> {
    cases.iter().map(|case| solve_one(case, cfg)).collect()
}

/// `G<n>` groups sort numerically, anything else after them by name.
fn group_key(name: &str) -> (usize, &str) {
    let rank = name
        .strip_prefix('G')
        .and_then(|n| n.parse().ok())
        .unwrap_or(usize::MAX);
    (rank, name)
}

pub fn sort_results(results: &mut [CaseResult]) {
    results.sort_by(|a, b| {
        group_key(&a.group)
            .cmp(&group_key(&b.group))
            .then(a.case_index.cmp(&b.case_index))
    });
}

/// Means and extrema for one group.
pub fn summarize_group(group: &str, results: &[CaseResult]) -> Result<GroupSummary> {
    let cases: Vec<&CaseResult> = results.iter().filter(|r| r.group == group).collect();
    if cases.is_empty() {
        return Err(Error::EmptyGroup(group.to_owned()));
    }
    let n = cases.len() as f64;
    Ok(GroupSummary {
        group: group.to_owned(),
        cases: cases.len(),
        mean_k: cases.iter().map(|r| r.k as f64).sum::<f64>() / n,
        mean_ur: cases.iter().map(|r| r.mean_ur).sum::<f64>() / n,
        min_k: cases.iter().map(|r| r.k).min().unwrap(),
        max_k: cases.iter().map(|r| r.k).max().unwrap(),
        mean_tc: cases.iter().map(|r| r.tc).sum::<f64>() / n,
    })
}

/// One summary per group present in `results`, in report order.
pub fn summarize(results: &[CaseResult]) -> Result<Vec<GroupSummary>> {
    if results.is_empty() {
        return Err(Error::EmptyGroup(String::new()));
    }
    let mut groups: Vec<&str> = results.iter().map(|r| r.group.as_str()).collect();
    groups.sort_by_key(|g| group_key(g));
    groups.dedup();
    groups.into_iter().map(|g| summarize_group(g, results)).collect()
}

/// Rounds half up to 2 decimals and formats.
pub fn fmt2(x: f64) -> String {
    format!("{:.2}", (x * 100.0 + 0.5).floor() / 100.0)
}

pub const CASE_HEADER: &str = "group,case,k,mean_ur_pct,tc_seconds,lower_bound";
pub const SUMMARY_HEADER: &str = "group,cases,mean_k,mean_ur_pct,min_k,max_k,mean_tc_seconds";

pub fn cases_csv(results: &[CaseResult]) -> String {
    let mut sorted = results.to_vec();
    sort_results(&mut sorted);
    let mut out = format!("{CASE_HEADER}\n");
    for r in &sorted {
        out.push_str(&format!(
            "{},{},{},{},{:.3},{}\n",
            r.group,
            r.case_index,
            r.k,
            fmt2(r.mean_ur * 100.0),
            r.tc,
            r.lower_bound
        ));
    }
    out
}

pub fn summary_csv(summaries: &[GroupSummary]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for s in summaries {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.group,
            s.cases,
            fmt2(s.mean_k),
            fmt2(s.mean_ur * 100.0),
            s.min_k,
            s.max_k,
            fmt2(s.mean_tc)
        ));
    }
    out
}

/// Path of the summary file that accompanies a case CSV:
/// `results.csv` -> `results_summary.csv`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    path.with_file_name(format!("{stem}_summary.csv"))
}

/// Writes the case CSV at `path` and the group summary beside it.
pub fn write_report(summaries: &[GroupSummary], results: &[CaseResult], path: &Path) -> Result<PathBuf> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, cases_csv(results))?;
    let summary = summary_path(path);
    fs::write(&summary, summary_csv(summaries))?;
    Ok(summary)
}
