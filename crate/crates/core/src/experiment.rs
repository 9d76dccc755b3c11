//! Multi-seed benchmark runs over Solomon instances and their reporting.
//!
//! Output files per run, in the experiment's output directory:
//!
//! - `<instance>-<algorithm>-seed<seed>.json`: [`SolutionFile`]
//! - `<instance>-<algorithm>-seed<seed>.csv`: trace, `elapsed_seconds,playouts,best_scalar`
//!
//! and one `summary-<algorithm>.csv` with the best seed per instance, in the
//! usual benchmark table order, next to the published reference numbers.

use std::cmp::Ordering;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Problem;
use crate::instance::Instance;
use crate::search::{run, SearchConfig, SearchResult};
use crate::state::ScoreBreakdown;
use crate::validate::{validate_tours, SolutionFile};

/// The 56 instances in benchmark table order.
pub const SOLOMON_INSTANCES: [&str; 56] = [
    "c101", "c102", "c103", "c104", "c105", "c106", "c107", "c108", "c109", //
    "c201", "c202", "c203", "c204", "c205", "c206", "c207", "c208", //
    "r101", "r102", "r103", "r104", "r105", "r106", "r107", "r108", "r109", "r110", "r111",
    "r112", //
    "r201", "r202", "r203", "r204", "r205", "r206", "r207", "r208", "r209", "r210", "r211", //
    "rc101", "rc102", "rc103", "rc104", "rc105", "rc106", "rc107", "rc108", //
    "rc201", "rc202", "rc203", "rc204", "rc205", "rc206", "rc207", "rc208",
];

pub const CLASSES: [&str; 6] = ["C1", "C2", "R1", "R2", "RC1", "RC2"];

/// Directory holding the bundled Solomon files (`c101.txt`, ...).
pub fn bundled_instance_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("solomon")
}

pub fn bundled_instance_path(name: &str) -> PathBuf {
    bundled_instance_dir().join(format!("{}.txt", name.to_ascii_lowercase()))
}

pub fn load_bundled(name: &str) -> Result<Problem> {
    Ok(Problem::new(Instance::from_path(bundled_instance_path(
        name,
    ))?))
}

/// Class tag of a Solomon instance name: `rc105` is `RC1`.
pub fn class_of(name: &str) -> Option<&'static str> {
    let name = name.to_ascii_lowercase();
    let (prefix, digits) = name.split_at(name.find(|c: char| c.is_ascii_digit())?);
    let series = digits.chars().next()?;
    CLASSES
        .iter()
        .copied()
        .find(|class| class.to_ascii_lowercase() == format!("{prefix}{series}"))
}

fn table_position(name: &str) -> usize {
    let name = name.to_ascii_lowercase();
    SOLOMON_INSTANCES
        .iter()
        .position(|&i| i == name)
        .unwrap_or(SOLOMON_INSTANCES.len())
}

/// One line of the published comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub instance: String,
    pub nrpa_nv: usize,
    pub nrpa_km: f64,
    pub nrpad_nv: usize,
    pub nrpad_km: f64,
    pub gnrpa_nv: usize,
    pub gnrpa_km: f64,
    pub ortools_nv: usize,
    pub ortools_km: f64,
    pub best_nv: usize,
    pub best_km: f64,
}

const TABLE1: &str = include_str!("../data/table1.csv");
const TABLE2: &str = include_str!("../data/table2.csv");

/// Published per-instance results, including the OR-Tools and best-known columns.
pub fn reference_table() -> Vec<ReferenceRow> {
    csv::Reader::from_reader(TABLE1.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .expect("bundled table is well formed")
}

pub fn reference_row(instance: &str) -> Option<ReferenceRow> {
    reference_table()
        .into_iter()
        .find(|r| r.instance.eq_ignore_ascii_case(instance))
}

/// Published class means of the biased search for several (levels, iterations) settings.
///
/// Columns: `l2`, `l3_n100`, `l4_n32`, `l5_n16`, `l6_n10`, `best`.
pub fn reference_class_means(class: &str) -> Option<Vec<(String, f64)>> {
    let mut reader = csv::Reader::from_reader(TABLE2.as_bytes());
    let header = reader
        .headers()
        .expect("bundled table is well formed")
        .clone();
    let row = reader
        .records()
        .map(|r| r.expect("bundled table is well formed"))
        .find(|r| r[0].eq_ignore_ascii_case(class))?;
    Some(
        header
            .iter()
            .zip(&row)
            .skip(1)
            .map(|(h, v)| {
                (
                    h.to_string(),
                    v.parse().expect("bundled table is well formed"),
                )
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub nv: usize,
    pub km: f64,
    pub unvisited: usize,
    pub scalar: f64,
    pub seed: u64,
    pub elapsed: f64,
}

impl ResultRow {
    pub fn score(&self) -> ScoreBreakdown {
        ScoreBreakdown::new(self.unvisited, self.nv, self.km)
    }
}

/// A finished, validated run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub instance: String,
    pub config: SearchConfig,
    pub tours: Vec<Vec<usize>>,
    /// Score recomputed by the validator from `tours`.
    pub score: ScoreBreakdown,
    pub result: SearchResult,
}

impl RunOutcome {
    pub fn row(&self) -> ResultRow {
        ResultRow {
            instance: self.instance.clone(),
            nv: self.score.n_vehicles,
            km: self.score.distance,
            unvisited: self.score.unvisited,
            scalar: self.score.scalar,
            seed: self.config.seed,
            elapsed: self.result.elapsed,
        }
    }

    pub fn solution(&self) -> SolutionFile {
        SolutionFile {
            instance: self.instance.clone(),
            seed: self.config.seed,
            config: self.config.clone(),
            tours: self.tours.clone(),
            nv: self.score.n_vehicles,
            km: self.score.distance,
            unvisited: self.score.unvisited,
        }
    }

    pub fn file_stem(&self) -> String {
        format!(
            "{}-{}-seed{}",
            self.instance, self.config.algorithm, self.config.seed
        )
    }
}

/// Runs one search and validates the best solution it reports.
pub fn run_one(problem: &Problem, config: &SearchConfig) -> Result<RunOutcome> {
    let result = run(config, problem)?;
    let tours = result.best_record.tours();
    let score = validate_tours(problem, &tours)?;
    if score.scalar.to_bits() != result.best_score.scalar.to_bits() {
        return Err(Error::InvalidSolution {
            instance: problem.instance.name.clone(),
            violations: vec![format!(
                "search reported {} but the tours score {}",
                result.best_score.scalar, score.scalar
            )],
        });
    }
    Ok(RunOutcome {
        instance: problem.instance.name.to_ascii_lowercase(),
        config: config.clone(),
        tours,
        score,
        result,
    })
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub instance_paths: Vec<PathBuf>,
    /// Shared by every run; the seed field is replaced by each entry of `seeds`.
    pub config: SearchConfig,
    pub seeds: Vec<u64>,
    /// Worker threads; runs are independent so results do not depend on this.
    pub jobs: usize,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(instance_paths: Vec<PathBuf>, config: SearchConfig) -> Self {
        ExperimentSpec {
            instance_paths,
            config,
            seeds: (0..10).collect(),
            jobs: 1,
            output_dir: None,
        }
    }

    fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.instance_paths.is_empty() {
            return Err(Error::Config("no instance files given".into()));
        }
        if let Some(missing) = self.instance_paths.iter().find(|p| !p.is_file()) {
            return Err(Error::Config(format!(
                "instance file {} does not exist",
                missing.display()
            )));
        }
        Ok(())
    }
}

/// Best validated row per instance, in benchmark table order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    Ok(best_rows(&run_all(spec)?))
}

/// Every (instance, seed) run of the experiment, writing run files if an output directory is set.
pub fn run_all(spec: &ExperimentSpec) -> Result<Vec<RunOutcome>> {
    spec.validate()?;
    let problems = spec
        .instance_paths
        .iter()
        .map(|p| Instance::from_path(p).map(Problem::new))
        .collect::<Result<Vec<_>>>()?;
    if let Some(dir) = &spec.output_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let jobs: Vec<(&Problem, u64)> = problems
        .iter()
        .flat_map(|p| spec.seeds.iter().map(move |&s| (p, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes = pool.install(|| {
        jobs.par_iter()
            .map(|&(problem, seed)| {
                let config = SearchConfig {
                    seed,
                    ..spec.config.clone()
                };
                let outcome = run_one(problem, &config)?;
                if let Some(dir) = &spec.output_dir {
                    write_run_files(&outcome, dir)?;
                }
                Ok(outcome)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    if let Some(dir) = &spec.output_dir {
        let rows = best_rows(&outcomes);
        let path = dir.join(format!("summary-{}.csv", spec.config.algorithm));
        write_summary(&rows, &path)?;
    }
    Ok(outcomes)
}

pub fn write_run_files(outcome: &RunOutcome, dir: &Path) -> Result<()> {
    let stem = outcome.file_stem();
    outcome.solution().write(dir.join(format!("{stem}.json")))?;
    emit_trace(&outcome.result, dir.join(format!("{stem}.csv")))
}

/// Best seed per instance by (unvisited, vehicles, distance); ties keep the lower seed.
pub fn best_rows(outcomes: &[RunOutcome]) -> Vec<ResultRow> {
    let mut best: Vec<ResultRow> = Vec::new();
    for row in outcomes.iter().map(RunOutcome::row) {
        match best.iter_mut().find(|b| b.instance == row.instance) {
            Some(b) => {
                let order = row.score().lex_cmp(&b.score()).then(row.seed.cmp(&b.seed));
                if order == Ordering::Less {
                    *b = row;
                }
            }
            None => best.push(row),
        }
    }
    best.sort_by(|a, b| {
        table_position(&a.instance)
            .cmp(&table_position(&b.instance))
            .then_with(|| a.instance.cmp(&b.instance))
    });
    best
}

/// Mean best scalar over the instances of a class (`C1`, `R2`, ...).
pub fn class_summary(rows: &[ResultRow], class: &str) -> Result<f64> {
    let members: Vec<&str> = SOLOMON_INSTANCES
        .iter()
        .copied()
        .filter(|i| class_of(i).is_some_and(|c| c.eq_ignore_ascii_case(class)))
        .collect();
    if members.is_empty() {
        return Err(Error::Config(format!("unknown instance class {class:?}")));
    }
    let mut total = 0.0;
    let mut missing = Vec::new();
    for m in &members {
        match rows.iter().find(|r| r.instance.eq_ignore_ascii_case(m)) {
            Some(r) => total += r.scalar,
            None => missing.push(m.to_string()),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingInstances {
            class: class.to_string(),
            missing,
        });
    }
    Ok(total / members.len() as f64)
}

/// Writes the improvement trace as CSV.
pub fn emit_trace(result: &SearchResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["elapsed_seconds", "playouts", "best_scalar"])?;
    for p in &result.trace {
        w.write_record([
            format!("{:.6}", p.elapsed),
            p.playouts.to_string(),
            p.scalar.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads the measured columns of a summary CSV; other columns are ignored.
pub fn read_rows(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)?;
    let rows = reader
        .deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()?;
    Ok(rows)
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    instance: &'a str,
    nv: usize,
    km: f64,
    unvisited: usize,
    scalar: f64,
    seed: u64,
    elapsed: f64,
    ref_gnrpa_nv: Option<usize>,
    ref_gnrpa_km: Option<f64>,
    ortools_nv: Option<usize>,
    ortools_km: Option<f64>,
    best_nv: Option<usize>,
    best_km: Option<f64>,
}

/// Summary CSV: the measured row followed by the published columns when known.
pub fn write_summary(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let reference = reference_table();
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        let x = reference
            .iter()
            .find(|x| x.instance.eq_ignore_ascii_case(&row.instance));
        w.serialize(SummaryRecord {
            instance: &row.instance,
            nv: row.nv,
            km: row.km,
            unvisited: row.unvisited,
            scalar: row.scalar,
            seed: row.seed,
            elapsed: row.elapsed,
            ref_gnrpa_nv: x.map(|x| x.gnrpa_nv),
            ref_gnrpa_km: x.map(|x| x.gnrpa_km),
            ortools_nv: x.map(|x| x.ortools_nv),
            ortools_km: x.map(|x| x.ortools_km),
            best_nv: x.map(|x| x.best_nv),
            best_km: x.map(|x| x.best_km),
        })?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
