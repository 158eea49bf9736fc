//! Study configuration, orchestration, and reproducible report emission.
//!
//! A study file declares a set of experiments (each producing outcome
//! counts by recorded data, synthetic sampling, or engine play) and a plan
//! of test-vs-baseline comparisons. Running a study persists plain-text
//! artifacts under an output directory:
//!
//! - `counts.tsv` — one row per experiment;
//! - `comparisons.tsv` — one row per comparison;
//! - `<test>-vs-<baseline>.scatter.csv` (and optional `.svg`) — the
//!   simulated clusters behind each comparison;
//! - `experiment-<id>.pgn` — game records, when games were played;
//! - `study.resolved.toml` — the study with every experiment reduced to its
//!   observed counts, sufficient to re-emit all reports without replaying.
//!
//! All outputs are deterministic functions of the configuration and master
//! seed, independent of worker count.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypothesis::{bonferroni_alpha, compare_with_clusters, ComparisonResult};
use crate::model::{OutcomeCounts, ProbabilityVector};
use crate::openings::{builtin_opening, OpeningSpec};
use crate::pgn::{write_games, PgnMeta};
use crate::sim::{child_seed, scatter_svg, write_scatter, SimulatedCluster};
use crate::uci::{
    run_match, EngineConfig, MatchConfig, MatchMode, SearchLimit,
};

/// Environment variable consulted for the engine path when an engine-mode
/// experiment does not name one.
pub const ENGINE_PATH_VAR: &str = "GAMBITLAB_ENGINE";

/// The study file format this build reads and writes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config: {0}")]
    Validation(String),
}

/// Top-level study file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyFile {
    pub format_version: u32,
    pub study: StudySettings,
    #[serde(default, rename = "experiment")]
    pub experiments: Vec<ExperimentConfig>,
    #[serde(default, rename = "comparison")]
    pub comparisons: Vec<ComparisonPlan>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudySettings {
    /// Experiment-wide error rate, split over the comparisons made against
    /// each baseline.
    pub family_alpha: f64,
    /// Simulated repetitions per cluster.
    pub repetitions: u32,
    /// Master seed; every experiment and comparison derives its own stream.
    pub seed: u64,
}

/// One experiment: an opening plus exactly one outcome source.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    pub opening: OpeningRef,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<CountsMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<EngineMode>,
}

/// Either the ECO code of a built-in opening or an inline specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OpeningRef {
    Builtin(String),
    Inline(OpeningSpec),
}

impl OpeningRef {
    fn resolve(&self) -> Result<OpeningSpec, StudyError> {
        match self {
            OpeningRef::Builtin(eco) => builtin_opening(eco).ok_or_else(|| {
                StudyError::Validation(format!("unknown built-in opening {eco:?}"))
            }),
            OpeningRef::Inline(spec) => {
                let report = spec.validate(None);
                if report.is_valid() {
                    Ok(spec.clone())
                } else {
                    Err(StudyError::Validation(format!(
                        "opening {}: {}",
                        spec.eco,
                        report.violations.join("; ")
                    )))
                }
            }
        }
    }
}

/// Pre-recorded observed counts (e.g. an archived experiment).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CountsMode {
    pub white: u32,
    pub black: u32,
    pub draws: u32,
}

/// Outcomes sampled directly from a probability vector.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SyntheticMode {
    pub p_w: f64,
    pub p_b: f64,
    pub games: u32,
}

/// Outcomes played by a real UCI engine against itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EngineMode {
    /// Engine binary; falls back to the `GAMBITLAB_ENGINE` environment
    /// variable when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub games: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub movetime_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub options: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjudication_cap: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonPlan {
    pub test: String,
    pub baseline: String,
}

impl StudyFile {
    pub fn from_toml(text: &str) -> Result<StudyFile, StudyError> {
        let file: StudyFile = toml::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<StudyFile, StudyError> {
        let text = fs::read_to_string(path).map_err(|source| StudyError::Read {
            path: path.display().to_string(),
            source,
        })?;
        StudyFile::from_toml(&text)
    }

    /// Structural validation; runs before any experiment executes.
    pub fn validate(&self) -> Result<(), StudyError> {
        if self.format_version != FORMAT_VERSION {
            return Err(StudyError::Validation(format!(
                "format_version {} is not supported (this build reads {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if !(self.study.family_alpha > 0.0 && self.study.family_alpha < 1.0) {
            return Err(StudyError::Validation(format!(
                "family_alpha must lie strictly between 0 and 1, got {}",
                self.study.family_alpha
            )));
        }
        if self.study.repetitions < 2 {
            return Err(StudyError::Validation(
                "repetitions must be at least 2".to_string(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for exp in &self.experiments {
            if !seen.insert(exp.id.as_str()) {
                return Err(StudyError::Validation(format!(
                    "duplicate experiment id {:?}",
                    exp.id
                )));
            }
            let sources = usize::from(exp.counts.is_some())
                + usize::from(exp.synthetic.is_some())
                + usize::from(exp.engine.is_some());
            if sources != 1 {
                return Err(StudyError::Validation(format!(
                    "experiment {:?} must declare exactly one of counts, synthetic, engine",
                    exp.id
                )));
            }
            exp.opening.resolve()?;
        }
        for plan in &self.comparisons {
            for id in [&plan.test, &plan.baseline] {
                if !seen.contains(id.as_str()) {
                    return Err(StudyError::Validation(format!(
                        "comparison references unknown experiment id {id:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Comparisons per baseline beyond the budget of
    /// [`crate::hypothesis::COMPARISON_BUDGET`] are legal but flagged.
    pub fn budget_warnings(&self) -> Vec<String> {
        let mut per_baseline: BTreeMap<&str, usize> = BTreeMap::new();
        for plan in &self.comparisons {
            *per_baseline.entry(plan.baseline.as_str()).or_default() += 1;
        }
        per_baseline
            .into_iter()
            .filter(|&(_, n)| n > crate::hypothesis::COMPARISON_BUDGET)
            .map(|(id, n)| {
                format!(
                    "baseline {id:?} is compared {n} times; more than {} comparisons \
                     exceeds the per-baseline error budget",
                    crate::hypothesis::COMPARISON_BUDGET
                )
            })
            .collect()
    }
}

/// Executed experiment: the opening, its counts, and any game records.
#[derive(Debug)]
pub struct ExperimentRun {
    pub id: String,
    pub spec: OpeningSpec,
    pub counts: OutcomeCounts,
    pub records: Vec<crate::uci::GameRecord>,
    pub aborted: usize,
}

/// One executed comparison with its retained clusters.
#[derive(Debug)]
pub struct ComparisonRun {
    pub test_id: String,
    pub baseline_id: String,
    pub test_label: String,
    pub baseline_label: String,
    pub test_eco: String,
    pub baseline_eco: String,
    pub result: ComparisonResult,
    pub clusters: (SimulatedCluster, SimulatedCluster),
}

#[derive(Debug)]
pub struct StudyReport {
    pub experiments: Vec<ExperimentRun>,
    pub comparisons: Vec<ComparisonRun>,
    /// Experiments that failed to execute, with their errors.
    pub failures: Vec<(String, String)>,
    /// Comparisons skipped because an endpoint failed, plus budget notices.
    pub notices: Vec<String>,
}

fn format_p(p: f64) -> String {
    if p == 0.0 {
        "0".to_string()
    } else if p >= 1e-4 {
        format!("{p:.5}")
    } else {
        format!("{p:.1e}")
    }
}

impl StudyReport {
    /// Observed-count table, one row per executed experiment.
    pub fn counts_table(&self) -> String {
        let mut out = String::from("Expt#\tGroup\tDescription\tWhite\tBlack\tDraw\tTotal\n");
        for run in &self.experiments {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                run.id,
                run.spec.group,
                run.spec.label(),
                run.counts.white,
                run.counts.black,
                run.counts.draws,
                run.counts.total
            )
            .expect("string write");
        }
        out
    }

    /// Hypothesis-test table, one row per executed comparison.
    pub fn comparisons_table(&self) -> String {
        let mut out = String::from(
            "Expt#\tTest Opening\tCompare with\tDistance\tStdev\tt-value\tp-value\talpha\tDecision\tCategory\n",
        );
        for run in &self.comparisons {
            let r = &run.result;
            writeln!(
                out,
                "{}\t{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{}\t{}\t{}\t{}",
                run.test_id,
                run.test_label,
                run.baseline_label,
                r.distance,
                r.pooled_stdev,
                r.t_value,
                format_p(r.p_value),
                r.alpha,
                r.decision,
                r.category.map_or("-".to_string(), |c| c.to_string()),
            )
            .expect("string write");
        }
        out
    }
}

fn execute_experiment(
    exp: &ExperimentConfig,
    spec: &OpeningSpec,
    seed: u64,
) -> Result<(OutcomeCounts, Vec<crate::uci::GameRecord>, usize), String> {
    if let Some(counts) = &exp.counts {
        return Ok((
            OutcomeCounts::new(counts.white, counts.black, counts.draws),
            Vec::new(),
            0,
        ));
    }
    if let Some(synth) = &exp.synthetic {
        let pi = ProbabilityVector::new(synth.p_w, synth.p_b).map_err(|e| e.to_string())?;
        let config = MatchConfig::new(spec.clone(), MatchMode::Synthetic(pi))
            .games(synth.games)
            .seed(seed);
        let outcome = run_match(&config).map_err(|e| e.to_string())?;
        return Ok((outcome.counts, outcome.records, outcome.aborted.len()));
    }
    let engine = exp.engine.as_ref().expect("validated: one source present");
    let path = engine
        .path
        .clone()
        .or_else(|| std::env::var(ENGINE_PATH_VAR).ok())
        .ok_or_else(|| {
            format!("no engine path configured and {ENGINE_PATH_VAR} is not set")
        })?;
    let mut engine_config = EngineConfig::new(path);
    for (name, value) in &engine.options {
        engine_config = engine_config.option(name, value);
    }
    if let Some(ms) = engine.movetime_ms {
        engine_config = engine_config.limit(SearchLimit::MoveTime(
            std::time::Duration::from_millis(ms),
        ));
    }
    if let Some(depth) = engine.depth {
        engine_config = engine_config.limit(SearchLimit::Depth(depth));
    }
    let mut config = MatchConfig::new(spec.clone(), MatchMode::Engines(engine_config))
        .games(engine.games)
        .seed(seed);
    if let Some(cap) = engine.adjudication_cap {
        config = config.adjudication_cap(cap);
    }
    if let Some(workers) = engine.workers {
        config = config.workers(workers);
    }
    let outcome = run_match(&config).map_err(|e| e.to_string())?;
    if outcome.counts.total == 0 {
        let detail = outcome
            .aborted
            .first()
            .map(|a| a.message.clone())
            .unwrap_or_default();
        return Err(format!(
            "all {} games aborted; first failure: {detail}",
            outcome.aborted.len()
        ));
    }
    Ok((outcome.counts, outcome.records, outcome.aborted.len()))
}

/// Executes a validated study and persists all artifacts under `out_dir`.
pub fn run_study(file: &StudyFile, out_dir: &Path, svg: bool) -> Result<StudyReport, StudyError> {
    file.validate()?;
    fs::create_dir_all(out_dir).map_err(|source| StudyError::Write {
        path: out_dir.display().to_string(),
        source,
    })?;
    let write = |name: &str, contents: &str| -> Result<(), StudyError> {
        let path = out_dir.join(name);
        fs::write(&path, contents).map_err(|source| StudyError::Write {
            path: path.display().to_string(),
            source,
        })
    };

    let mut report = StudyReport {
        experiments: Vec::new(),
        comparisons: Vec::new(),
        failures: Vec::new(),
        notices: file.budget_warnings(),
    };

    // experiments, in declaration order
    for (index, exp) in file.experiments.iter().enumerate() {
        let spec = exp.opening.resolve()?;
        let seed = child_seed(file.study.seed, index as u64);
        match execute_experiment(exp, &spec, seed) {
            Ok((counts, records, aborted)) => {
                if !records.is_empty() {
                    let meta = PgnMeta {
                        event: format!("experiment {}", exp.id),
                        site: "gambitlab".to_string(),
                        white: experiment_player_name(exp),
                        black: experiment_player_name(exp),
                        ..PgnMeta::default()
                    };
                    write(&format!("experiment-{}.pgn", exp.id), &write_games(&records, &meta))?;
                }
                report.experiments.push(ExperimentRun {
                    id: exp.id.clone(),
                    spec,
                    counts,
                    records,
                    aborted,
                });
            }
            Err(message) => {
                report.failures.push((exp.id.clone(), message));
            }
        }
    }

    // comparisons: the family alpha splits over the comparisons made
    // against each baseline
    let mut per_baseline: BTreeMap<&str, u32> = BTreeMap::new();
    for plan in &file.comparisons {
        *per_baseline.entry(plan.baseline.as_str()).or_default() += 1;
    }
    for (plan_index, plan) in file.comparisons.iter().enumerate() {
        let endpoints: Vec<Option<&ExperimentRun>> = [&plan.test, &plan.baseline]
            .iter()
            .map(|id| report.experiments.iter().find(|r| &r.id == *id))
            .collect();
        let (Some(test), Some(base)) = (endpoints[0], endpoints[1]) else {
            report.notices.push(format!(
                "comparison {} vs {} skipped: an endpoint experiment failed",
                plan.test, plan.baseline
            ));
            continue;
        };
        let alpha = bonferroni_alpha(file.study.family_alpha, per_baseline[plan.baseline.as_str()]);
        let seed = child_seed(file.study.seed, 0x10_0000 + plan_index as u64);
        // one bad pairing must not sink the rest of the plan
        let (mut result, clusters) = match compare_with_clusters(
            &test.counts,
            &base.counts,
            file.study.repetitions,
            seed,
            alpha,
        ) {
            Ok(run) => run,
            Err(e) => {
                report.notices.push(format!(
                    "comparison {} vs {} skipped: {e}",
                    plan.test, plan.baseline
                ));
                continue;
            }
        };
        if let Some(innovator) = test.spec.innovator() {
            result = result.with_classification(innovator);
        }
        report.comparisons.push(ComparisonRun {
            test_id: test.id.clone(),
            baseline_id: base.id.clone(),
            test_label: test.spec.label(),
            baseline_label: base.spec.label(),
            test_eco: test.spec.eco.clone(),
            baseline_eco: base.spec.eco.clone(),
            result,
            clusters,
        });
    }

    write("counts.tsv", &report.counts_table())?;
    write("comparisons.tsv", &report.comparisons_table())?;
    for run in &report.comparisons {
        let stem = format!("{}-vs-{}", run.test_eco, run.baseline_eco);
        let mut buf = Vec::new();
        write_scatter(&run.clusters.1, &run.clusters.0, &mut buf)
            .expect("in-memory write");
        write(
            &format!("{stem}.scatter.csv"),
            std::str::from_utf8(&buf).expect("scatter data is ascii"),
        )?;
        if svg {
            write(
                &format!("{stem}.svg"),
                &scatter_svg(&run.clusters.1, &run.clusters.0),
            )?;
        }
    }
    write("study.resolved.toml", &resolved_toml(file, &report))?;
    Ok(report)
}

fn experiment_player_name(exp: &ExperimentConfig) -> String {
    if let Some(engine) = &exp.engine {
        let path = engine
            .path
            .clone()
            .or_else(|| std::env::var(ENGINE_PATH_VAR).ok())
            .unwrap_or_else(|| "engine".to_string());
        Path::new(&path)
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or(path)
    } else {
        "synthetic".to_string()
    }
}

/// The study with every executed experiment reduced to its observed counts:
/// enough to re-run all comparisons and reports without replaying games.
fn resolved_toml(file: &StudyFile, report: &StudyReport) -> String {
    let resolved = StudyFile {
        format_version: file.format_version,
        study: file.study.clone(),
        experiments: file
            .experiments
            .iter()
            .filter_map(|exp| {
                let run = report.experiments.iter().find(|r| r.id == exp.id)?;
                Some(ExperimentConfig {
                    id: exp.id.clone(),
                    opening: exp.opening.clone(),
                    counts: Some(CountsMode {
                        white: run.counts.white,
                        black: run.counts.black,
                        draws: run.counts.draws,
                    }),
                    synthetic: None,
                    engine: None,
                })
            })
            .collect(),
        comparisons: file
            .comparisons
            .iter()
            .filter(|plan| {
                report.experiments.iter().any(|r| r.id == plan.test)
                    && report.experiments.iter().any(|r| r.id == plan.baseline)
            })
            .cloned()
            .collect(),
    };
    toml::to_string(&resolved).expect("study files serialize")
}
