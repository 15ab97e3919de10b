//! Replicated experiment grids, summary statistics, and report writers.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CellSpec, Config, ExperimentSpec};
use crate::error::{Error, Result};
use crate::simulator::{self, EvaluationResult};
use crate::stats::{self, PMethod, MIN_TEST_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Replaces each spec's base seed.
    pub seed: Option<u64>,
    pub noise: bool,
    /// Worker threads; 1 runs inline.
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: None,
            noise: true,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub scenario: String,
    pub cell_index: usize,
    pub cell: CellSpec,
    pub replicate: usize,
    pub seed: u64,
    /// Failure message if the evaluation could not run.
    pub outcome: std::result::Result<EvaluationResult, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    pub scenario: String,
    pub cells: Vec<CellSpec>,
    pub evaluations: Vec<Evaluation>,
}

impl ResultSet {
    pub fn failures(&self) -> impl Iterator<Item = &Evaluation> {
        self.evaluations.iter().filter(|e| e.outcome.is_err())
    }

    pub fn speeds(&self, cell_index: usize) -> Vec<f64> {
        self.evaluations
            .iter()
            .filter(|e| e.cell_index == cell_index)
            .filter_map(|e| e.outcome.as_ref().ok().map(|r| r.achieved_speed))
            .collect()
    }
}

/// Runs every (cell, replicate) of `spec`. Replicate `r` uses seed
/// `base_seed + r`; cells draw from separate noise streams. Failures are
/// recorded per evaluation and the remaining cells still run.
pub fn run_matrix(
    config: &Config,
    scenario: &str,
    spec: &ExperimentSpec,
    options: RunOptions,
) -> Result<ResultSet> {
    let protocol = simulator::protocols().get(&spec.protocol)?;
    let base_seed = options.seed.unwrap_or(spec.base_seed);
    let jobs: Vec<(usize, usize)> = spec
        .cells
        .iter()
        .enumerate()
        .flat_map(|(c, cell)| (0..cell.replicates).map(move |r| (c, r)))
        .collect();

    let evaluate = |&(c, r): &(usize, usize)| -> Evaluation {
        let cell = &spec.cells[c];
        let seed = base_seed.wrapping_add(r as u64);
        let outcome = config
            .setup(cell)
            .and_then(|mut setup| {
                setup.noise = options.noise;
                setup.noise_stream = c as u64;
                protocol.run(&setup, seed)
            })
            .map_err(|e| e.to_string());
        Evaluation {
            scenario: scenario.to_string(),
            cell_index: c,
            cell: cell.clone(),
            replicate: r,
            seed,
            outcome,
        }
    };

    let evaluations = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| jobs.par_iter().map(evaluate).collect())
    } else {
        jobs.iter().map(evaluate).collect()
    };

    Ok(ResultSet {
        scenario: scenario.to_string(),
        cells: spec.cells.clone(),
        evaluations,
    })
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub cell: String,
    pub morphology: String,
    pub gait: String,
    pub environment: String,
    pub voltage: f64,
    pub evals: usize,
    pub failed: usize,
    /// m/min, rounded to 3 decimals.
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairTest {
    pub block: String,
    pub a: String,
    pub b: String,
    pub u: f64,
    pub p: f64,
    pub p_holm: f64,
    pub method: PMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub scenario: String,
    pub cells: Vec<CellSummary>,
    pub tests: Vec<PairTest>,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
}

/// Per-cell ranges and means, plus pairwise U tests among cells that share
/// an environment and voltage, Holm-corrected within each such block.
pub fn summarize(results: &ResultSet) -> StatsReport {
    let mut cells = Vec::new();
    for (i, cell) in results.cells.iter().enumerate() {
        let speeds = results.speeds(i);
        let failed = results
            .evaluations
            .iter()
            .filter(|e| e.cell_index == i && e.outcome.is_err())
            .count();
        let (min, max, mean) = if speeds.is_empty() {
            (None, None, None)
        } else {
            let min = speeds.iter().copied().fold(f64::INFINITY, f64::min);
            let max = speeds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mean = speeds.iter().sum::<f64>() / speeds.len() as f64;
            (Some(round3(min)), Some(round3(max)), Some(round3(mean)))
        };
        cells.push(CellSummary {
            cell: cell.label(),
            morphology: cell.morphology.clone(),
            gait: cell.gait.clone(),
            environment: cell.environment.clone(),
            voltage: cell.voltage,
            evals: speeds.len(),
            failed,
            min,
            max,
            mean,
        });
    }

    let mut blocks: Vec<(String, Vec<usize>)> = Vec::new();
    for (i, cell) in results.cells.iter().enumerate() {
        let key = format!("{} {}V", cell.environment, cell.voltage);
        match blocks.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(i),
            None => blocks.push((key, vec![i])),
        }
    }

    let mut tests = Vec::new();
    let mut notes = Vec::new();
    for (block, members) in &blocks {
        if members.len() < 2 {
            continue;
        }
        let too_small = members
            .iter()
            .any(|&i| results.speeds(i).len() < MIN_TEST_N);
        if too_small {
            notes.push(format!(
                "{block}: fewer than {MIN_TEST_N} evaluations per cell, significance tests suppressed"
            ));
            continue;
        }
        let mut block_tests = Vec::new();
        for (k, &i) in members.iter().enumerate() {
            for &j in &members[k + 1..] {
                match stats::mann_whitney_u(&results.speeds(i), &results.speeds(j)) {
                    Ok(t) => block_tests.push(PairTest {
                        block: block.clone(),
                        a: results.cells[i].label(),
                        b: results.cells[j].label(),
                        u: t.u,
                        p: t.p,
                        p_holm: t.p,
                        method: t.method,
                    }),
                    Err(e) => notes.push(format!(
                        "{block}: {} vs {}: {e}",
                        results.cells[i].label(),
                        results.cells[j].label()
                    )),
                }
            }
        }
        let raw: Vec<f64> = block_tests.iter().map(|t| t.p).collect();
        for (t, adj) in block_tests.iter_mut().zip(stats::holm_correction(&raw)) {
            t.p_holm = adj;
        }
        tests.extend(block_tests);
    }

    let failures = results
        .failures()
        .map(|e| {
            format!(
                "{} replicate {}: {}",
                e.cell.label(),
                e.replicate,
                e.outcome.as_ref().err().map(String::as_str).unwrap_or("")
            )
        })
        .collect();

    StatsReport {
        scenario: results.scenario.clone(),
        cells,
        tests,
        notes,
        failures,
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "scenario",
    "cell",
    "replicate",
    "seed",
    "speed_m_per_min",
    "distance_m",
    "elapsed_s",
    "timeout",
    "saturation",
    "slip",
];

/// One row per successful evaluation, in matrix order.
pub fn write_results_csv<W: std::io::Write>(writer: W, sets: &[ResultSet]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for set in sets {
        for e in &set.evaluations {
            if let Ok(r) = &e.outcome {
                w.write_record([
                    e.scenario.clone(),
                    e.cell.label(),
                    e.replicate.to_string(),
                    e.seed.to_string(),
                    format!("{:.6}", r.achieved_speed),
                    format!("{:.6}", r.distance),
                    format!("{:.6}", r.elapsed),
                    r.timeout.to_string(),
                    format!("{:.6}", r.saturation),
                    format!("{:.6}", r.slip),
                ])?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(Path::new("results.csv"), e))?;
    Ok(())
}

pub fn summary_json(reports: &[StatsReport]) -> Result<String> {
    Ok(serde_json::to_string_pretty(reports)?)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"))
}

/// Human-readable table in the layout Experiment / Evals / Morphology /
/// Gait / Range / Mean, followed by any tests and notes.
pub fn render_table(reports: &[StatsReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:>5}  {:<10} {:<10} {:<18} {:>6}",
        "Experiment", "Evals", "Morphology", "Gait", "Range", "Mean"
    );
    for report in reports {
        let _ = writeln!(out, "{}", "-".repeat(72));
        for c in &report.cells {
            let experiment = format!("{}, {}V", c.environment, c.voltage);
            let range = format!("[{}, {}]", fmt_opt(c.min), fmt_opt(c.max));
            let _ = writeln!(
                out,
                "{:<18} {:>5}  {:<10} {:<10} {:<18} {:>6}",
                experiment,
                c.evals,
                c.morphology,
                c.gait,
                range,
                fmt_opt(c.mean)
            );
        }
        for t in &report.tests {
            let _ = writeln!(
                out,
                "  U test {} vs {}: U = {}, p = {:.3e}, Holm p = {:.3e}",
                t.a, t.b, t.u, t.p, t.p_holm
            );
        }
        for n in &report.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        for f in &report.failures {
            let _ = writeln!(out, "  failed: {f}");
        }
    }
    out
}

/// Writes `results.csv`, `summary.json` and `table.txt` into `dir`.
pub fn write_outputs(dir: &Path, sets: &[ResultSet]) -> Result<Vec<StatsReport>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let reports: Vec<StatsReport> = sets.iter().map(summarize).collect();

    let csv_path = dir.join("results.csv");
    let file = std::fs::File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    write_results_csv(file, sets)?;

    let json_path = dir.join("summary.json");
    std::fs::write(&json_path, summary_json(&reports)? + "\n").map_err(|e| Error::io(&json_path, e))?;

    let table_path = dir.join("table.txt");
    std::fs::write(&table_path, render_table(&reports)).map_err(|e| Error::io(&table_path, e))?;
    Ok(reports)
}
