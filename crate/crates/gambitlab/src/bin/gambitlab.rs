//! Thin command-line front end over the library: run studies, compare
//! recorded counts, simulate clusters, and re-emit reports.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use gambitlab::hypothesis::compare_with_clusters;
use gambitlab::model::OutcomeCounts;
use gambitlab::sim::{simulate_experiment, write_scatter};
use gambitlab::study::{run_study, StudyFile};

#[derive(Parser)]
#[command(
    name = "gambitlab",
    about = "Controlled engine experiments for comparing chess openings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a study file: experiments, comparisons, and reports.
    Run {
        /// Study configuration (TOML).
        study: PathBuf,
        /// Output directory for all artifacts.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the study's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the study's simulated repetitions per cluster.
        #[arg(long)]
        reps: Option<u32>,
        /// Override the study's experiment-wide error rate.
        #[arg(long)]
        alpha: Option<f64>,
        /// Also render an SVG scatter plot per comparison.
        #[arg(long)]
        svg: bool,
        /// Worker threads for simulation (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Hypothesis test on two already-recorded count triples.
    Compare {
        /// Test counts as white,black,draws.
        #[arg(long, value_parser = parse_counts)]
        test: OutcomeCounts,
        /// Baseline counts as white,black,draws.
        #[arg(long, value_parser = parse_counts)]
        baseline: OutcomeCounts,
        /// Which side played the innovation (white or black), for grading.
        #[arg(long)]
        innovator: Option<String>,
        #[command(flatten)]
        stats: StatArgs,
    },
    /// Sample a synthetic cluster (or a pair) and emit scatter data.
    Simulate {
        /// Generator counts as white,black,draws (estimates the vector).
        #[arg(long, value_parser = parse_counts)]
        counts: OutcomeCounts,
        /// Optional second generator; emitted as the baseline cluster.
        #[arg(long, value_parser = parse_counts)]
        baseline: Option<OutcomeCounts>,
        /// Games per simulated match (defaults to the counts' total).
        #[arg(long)]
        games: Option<u32>,
        /// Scatter output file (CSV); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        stats: StatArgs,
    },
    /// Re-emit tables and figures from a previously persisted study.
    Report {
        /// Directory holding `study.resolved.toml` from an earlier run.
        #[arg(long, default_value = "out")]
        dir: PathBuf,
        /// Also render SVG scatter plots.
        #[arg(long)]
        svg: bool,
    },
}

#[derive(Args)]
struct StatArgs {
    /// Simulated repetitions per cluster.
    #[arg(long, default_value_t = 1000)]
    reps: u32,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-comparison error rate.
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
}

fn parse_counts(text: &str) -> Result<OutcomeCounts, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let [w, b, d] = parts.as_slice() else {
        return Err("expected white,black,draws".to_string());
    };
    let parse = |s: &str| s.trim().parse::<u32>().map_err(|e| e.to_string());
    Ok(OutcomeCounts::new(parse(w)?, parse(b)?, parse(d)?))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            study,
            out,
            seed,
            reps,
            alpha,
            svg,
            threads,
        } => {
            if let Some(threads) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global()
                    .context("configuring the worker pool")?;
            }
            let mut file = StudyFile::load(&study)?;
            if let Some(seed) = seed {
                file.study.seed = seed;
            }
            if let Some(reps) = reps {
                file.study.repetitions = reps;
            }
            if let Some(alpha) = alpha {
                file.study.family_alpha = alpha;
            }
            let report = run_study(&file, &out, svg)?;
            print!("{}", report.counts_table());
            if !report.comparisons.is_empty() {
                println!();
                print!("{}", report.comparisons_table());
            }
            for (id, error) in &report.failures {
                eprintln!("experiment {id} failed: {error}");
            }
            for notice in &report.notices {
                eprintln!("notice: {notice}");
            }
            eprintln!("artifacts written to {}", out.display());
            if !report.failures.is_empty() {
                bail!("{} experiment(s) failed", report.failures.len());
            }
        }
        Command::Compare {
            test,
            baseline,
            innovator,
            stats,
        } => {
            let (mut result, _) = compare_with_clusters(
                &test,
                &baseline,
                stats.reps,
                stats.seed,
                stats.alpha,
            )?;
            if let Some(side) = innovator {
                let color = match side.to_ascii_lowercase().as_str() {
                    "white" => gambitlab::chess::Color::White,
                    "black" => gambitlab::chess::Color::Black,
                    other => bail!("innovator must be white or black, got {other:?}"),
                };
                result = result.with_classification(color);
            }
            println!("distance  {:.3}", result.distance);
            println!("stdev     {:.3}", result.pooled_stdev);
            println!("t-value   {:.3}", result.t_value);
            println!("p-value   {:.6e}", result.p_value);
            println!("alpha     {}", result.alpha);
            println!("decision  {}", result.decision);
            if let Some(category) = result.category {
                println!("category  {category}");
            }
            if result.degenerate {
                println!("warning   degenerate dispersion: p = 0 by certainty");
            }
        }
        Command::Simulate {
            counts,
            baseline,
            games,
            out,
            stats,
        } => {
            let games = games.unwrap_or(counts.total);
            let pi = counts.estimate()?;
            let test = simulate_experiment(&pi, games, stats.reps, stats.seed);
            let base = match baseline {
                Some(b) => {
                    let pi_b = b.estimate()?;
                    simulate_experiment(&pi_b, games, stats.reps, stats.seed.wrapping_add(1))
                }
                None => test.clone(),
            };
            let mut buf = Vec::new();
            write_scatter(&base, &test, &mut buf)?;
            match out {
                Some(path) => std::fs::write(&path, buf)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{}", String::from_utf8_lossy(&buf)),
            }
        }
        Command::Report { dir, svg } => {
            let resolved = dir.join("study.resolved.toml");
            let file = StudyFile::load(&resolved).with_context(|| {
                format!(
                    "no resolved study at {}; run a study first",
                    resolved.display()
                )
            })?;
            let report = run_study(&file, &dir, svg)?;
            print!("{}", report.counts_table());
            if !report.comparisons.is_empty() {
                println!();
                print!("{}", report.comparisons_table());
            }
        }
    }
    Ok(())
}
