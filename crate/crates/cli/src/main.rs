use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use gnrpa_core::experiment::{
    bundled_instance_path, class_of, class_summary, emit_trace, read_rows, reference_class_means,
    reference_row, run_all, run_one, ExperimentSpec, CLASSES, SOLOMON_INSTANCES,
};
use gnrpa_core::{
    validate_solution, Algorithm, BiasWeights, Instance, Problem, SearchConfig, SolutionFile,
};

#[derive(Parser)]
#[command(
    name = "gnrpa",
    version,
    about = "Nested rollout policy adaptation for CVRPTW"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with one seed.
    Solve {
        /// Solomon file, or the name of a bundled instance (c101, rc208, ...).
        instance: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop once the best scalar score is at or below this value.
        #[arg(long)]
        target: Option<f64>,
        /// Directory for the solution JSON and trace CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every seed on every instance and keep the best per instance.
    Bench {
        /// Solomon files or bundled names; `all` or a class tag (C1, RC2, ...) expands to the bundled set.
        #[arg(required = true)]
        instances: Vec<String>,
        #[command(flatten)]
        search: SearchArgs,
        /// Seed list: `0-9` or `1,4,7`.
        #[arg(long, default_value = "0-9", value_parser = parse_seeds)]
        seeds: Seeds,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Check a solution file against its instance; exits nonzero if invalid.
    Validate { instance: String, solution: PathBuf },
    /// Per-class mean scores from a bench summary CSV.
    Summarize {
        summary: PathBuf,
        /// Restrict to these classes (default: every class fully covered by the summary).
        #[arg(long = "class")]
        classes: Vec<String>,
    },
}

#[derive(Args, Clone)]
struct SearchArgs {
    #[arg(long, default_value = "gnrpa")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 3)]
    level: usize,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Distance bias weight.
    #[arg(long, default_value_t = 15.0)]
    w1: f64,
    /// Waiting bias weight.
    #[arg(long, default_value_t = 75.0)]
    w2: f64,
    /// Lateness bias weight.
    #[arg(long, default_value_t = 10.0)]
    w3: f64,
    /// Seconds per run.
    #[arg(long, default_value_t = 1800.0)]
    time_budget: f64,
}

impl SearchArgs {
    fn config(&self, seed: u64, target: Option<f64>) -> Result<SearchConfig> {
        let config = SearchConfig {
            level: self.level,
            iterations: self.iterations,
            alpha: self.alpha,
            algorithm: self.algorithm,
            bias_weights: BiasWeights::new(self.w1, self.w2, self.w3)?,
            time_budget: self.time_budget,
            seed,
            target,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Clone, Debug)]
struct Seeds(Vec<u64>);

fn parse_seeds(s: &str) -> Result<Seeds, String> {
    let bad = |_| format!("invalid seed list {s:?}");
    if let Some((a, b)) = s.split_once('-') {
        let (a, b): (u64, u64) = (
            a.trim().parse().map_err(bad)?,
            b.trim().parse().map_err(bad)?,
        );
        if a > b {
            return Err(format!("empty seed range {s:?}"));
        }
        return Ok(Seeds((a..=b).collect()));
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(bad))
        .collect::<Result<_, _>>()
        .map(Seeds)
}

fn resolve_instance(arg: &str) -> Result<PathBuf> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(path.to_path_buf());
    }
    let bundled = bundled_instance_path(arg);
    if bundled.is_file() {
        return Ok(bundled);
    }
    bail!("{arg} is neither a file nor a bundled instance name")
}

fn expand_instances(args: &[String]) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for a in args {
        if a.eq_ignore_ascii_case("all") {
            paths.extend(SOLOMON_INSTANCES.iter().map(|i| bundled_instance_path(i)));
        } else if let Some(class) = CLASSES.iter().find(|c| c.eq_ignore_ascii_case(a)) {
            paths.extend(
                SOLOMON_INSTANCES
                    .iter()
                    .filter(|i| class_of(i) == Some(class))
                    .map(|i| bundled_instance_path(i)),
            );
        } else {
            paths.push(resolve_instance(a)?);
        }
    }
    Ok(paths)
}

fn load(arg: &str) -> Result<Problem> {
    let path = resolve_instance(arg)?;
    let inst = Instance::from_path(&path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Problem::new(inst))
}

fn solve(
    instance: &str,
    search: &SearchArgs,
    seed: u64,
    target: Option<f64>,
    out: Option<&Path>,
) -> Result<()> {
    let problem = load(instance)?;
    let config = search.config(seed, target)?;
    let outcome = run_one(&problem, &config)?;
    let s = outcome.score;
    println!(
        "{} {} seed={} nv={} km={:.2} unvisited={} scalar={:.2} playouts={} elapsed={:.1}s{}",
        outcome.instance,
        config.algorithm,
        seed,
        s.n_vehicles,
        s.distance,
        s.unvisited,
        s.scalar,
        outcome.result.playout_count,
        outcome.result.elapsed,
        if outcome.result.truncated {
            " (stopped early)"
        } else {
            ""
        }
    );
    if let Some(r) = reference_row(&outcome.instance) {
        println!(
            "  published: gnrpa {} / {:.2}, or-tools {} / {:.2}, best known {} / {:.2}",
            r.gnrpa_nv, r.gnrpa_km, r.ortools_nv, r.ortools_km, r.best_nv, r.best_km
        );
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let stem = outcome.file_stem();
        outcome.solution().write(dir.join(format!("{stem}.json")))?;
        emit_trace(&outcome.result, dir.join(format!("{stem}.csv")))?;
    }
    Ok(())
}

fn bench(
    instances: &[String],
    search: &SearchArgs,
    seeds: Vec<u64>,
    jobs: usize,
    out: PathBuf,
) -> Result<()> {
    let spec = ExperimentSpec {
        instance_paths: expand_instances(instances)?,
        config: search.config(0, None)?,
        seeds,
        jobs,
        output_dir: Some(out.clone()),
    };
    let outcomes = run_all(&spec)?;
    let rows = gnrpa_core::experiment::best_rows(&outcomes);
    println!(
        "{:<8} {:>4} {:>10} {:>5} {:>12} {:>5}",
        "instance", "NV", "Km", "unv", "scalar", "seed"
    );
    for r in &rows {
        println!(
            "{:<8} {:>4} {:>10.2} {:>5} {:>12.2} {:>5}",
            r.instance, r.nv, r.km, r.unvisited, r.scalar, r.seed
        );
    }
    println!(
        "summary written to {}",
        out.join(format!("summary-{}.csv", spec.config.algorithm))
            .display()
    );
    Ok(())
}

fn validate(instance: &str, solution: &Path) -> Result<()> {
    let problem = load(instance)?;
    let sol = SolutionFile::read(solution)?;
    let score = validate_solution(&problem, &sol)?;
    println!(
        "valid: nv={} km={} unvisited={} scalar={}",
        score.n_vehicles, score.distance, score.unvisited, score.scalar
    );
    Ok(())
}

fn summarize(summary: &Path, classes: &[String]) -> Result<()> {
    let rows = read_rows(summary)?;
    let wanted: Vec<String> = if classes.is_empty() {
        CLASSES
            .iter()
            .filter(|c| rows.iter().any(|r| class_of(&r.instance) == Some(c)))
            .map(|c| c.to_string())
            .collect()
    } else {
        classes.to_vec()
    };
    if wanted.is_empty() {
        bail!("no Solomon instances in {}", summary.display());
    }
    println!(
        "{:<5} {:>12} {:>12} {:>12}",
        "class", "mean", "pub L3N100", "best known"
    );
    for class in &wanted {
        let mean = class_summary(&rows, class)?;
        let reference = reference_class_means(class).unwrap_or_default();
        let col = |name: &str| {
            reference
                .iter()
                .find(|(h, _)| h == name)
                .map(|(_, v)| format!("{v:.2}"))
                .unwrap_or_default()
        };
        println!(
            "{:<5} {:>12.2} {:>12} {:>12}",
            class,
            mean,
            col("l3_n100"),
            col("best")
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            instance,
            search,
            seed,
            target,
            out,
        } => solve(&instance, &search, seed, target, out.as_deref()),
        Command::Bench {
            instances,
            search,
            seeds,
            jobs,
            out,
        } => bench(&instances, &search, seeds.0, jobs, out),
        Command::Validate { instance, solution } => validate(&instance, &solution),
        Command::Summarize { summary, classes } => summarize(&summary, &classes),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
