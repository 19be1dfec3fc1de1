//! Configured end-to-end runs: load or synthesize data, rebalance, split,
//! scale, fit a QSVC or QNN, and score the held-out set.
//!
//! Every random draw in a run comes from one root seed. Component seeds
//! (`svm.seed`, a quantum kernel's `seed`, `qnn.seed`) are replaced by values
//! derived from the root so a run is reproducible from its echoed config.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{
    generate_synthetic, minmax_scale, random_oversample, read_csv, split, ClassCounts, Dataset, IngestOptions,
    IngestReport, MissingPolicy, DEFAULT_ECOLI_COLUMN, DEFAULT_ECOLI_THRESHOLD,
};
use crate::encoding::FeatureVector;
use crate::error::{Error, Result};
use crate::kernels::{gram_matrix, rbf_beta_heuristic, GramDiagnostics, KernelMatrix, KernelSpec};
use crate::metrics::{metrics_report, MetricsReport, Scoring};
use crate::qnn::{train_qnn, DiagnosticEvent, DiagnosticKind, EpochRecord, QnnConfig};
use crate::rng::{stage_seed, Stage};
use crate::svc::{train_svm, SvmModel, SvmTrainConfig};

/// Environment variable consulted when neither the CLI nor the config sets a seed.
pub const SEED_ENV: &str = "AQUAKERN_SEED";

fn default_ecoli_column() -> String {
    DEFAULT_ECOLI_COLUMN.into()
}

fn default_threshold() -> f64 {
    DEFAULT_ECOLI_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DataSource {
    Synthetic {
        n: usize,
        imbalance: f64,
    },
    Csv {
        path: PathBuf,
        #[serde(default = "default_ecoli_column")]
        ecoli_column: String,
        #[serde(default = "default_threshold")]
        threshold: f64,
        #[serde(default)]
        missing: MissingPolicy,
    },
}

fn default_true() -> bool {
    true
}

fn default_test_fraction() -> f64 {
    0.2
}

fn default_scale_range() -> [f64; 2] {
    [0.0, std::f64::consts::FRAC_PI_2]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Oversample the whole dataset before splitting. Off by default because
    /// duplicated minority rows then land on both sides of the split.
    #[serde(default)]
    pub paper_order: bool,
    #[serde(default = "default_true")]
    pub oversample: bool,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default = "default_true")]
    pub stratify: bool,
    /// Feature range after min-max scaling (fitted on the training split).
    #[serde(default = "default_scale_range")]
    pub scale_range: [f64; 2],
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            paper_order: false,
            oversample: true,
            test_fraction: default_test_fraction(),
            stratify: true,
            scale_range: default_scale_range(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelConfig {
    Qsvc {
        kernel: KernelSpec<f64>,
        #[serde(default)]
        svm: SvmTrainConfig<f64>,
        /// Replace an rbf kernel's β with 1/(d·Var) of the training features.
        #[serde(default)]
        auto_beta: bool,
    },
    Qnn(QnnConfig<f64>),
}

impl ModelConfig {
    pub fn family(&self) -> &'static str {
        match self {
            ModelConfig::Qsvc { .. } => "qsvc",
            ModelConfig::Qnn(_) => "qnn",
        }
    }
}

fn default_name() -> String {
    "run".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub data: DataSource,
    #[serde(default)]
    pub pipeline: PipelineConfig,
    pub model: ModelConfig,
    #[serde(default)]
    pub scoring: Scoring,
    #[serde(default)]
    pub write_gram: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Every problem with the configuration, reported together.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.name.trim().is_empty() {
            out.push("name must not be empty".into());
        }
        let known_features = match &self.data {
            DataSource::Synthetic { n, imbalance } => {
                if *n < 4 {
                    out.push(format!("data.n must be ≥ 4, got {n}"));
                }
                if !(*imbalance > 0.0 && *imbalance < 1.0) {
                    out.push(format!("data.imbalance must lie in (0, 1), got {imbalance}"));
                }
                Some(crate::data::SYNTHETIC_COLUMNS.len())
            }
            DataSource::Csv { path, threshold, .. } => {
                if !path.is_file() {
                    out.push(format!("data.path {} does not exist", path.display()));
                }
                if !(*threshold >= 0.0) {
                    out.push(format!("data.threshold must be ≥ 0, got {threshold}"));
                }
                None
            }
        };
        let p = &self.pipeline;
        if !(p.test_fraction > 0.0 && p.test_fraction < 1.0) {
            out.push(format!("pipeline.test_fraction must lie in (0, 1), got {}", p.test_fraction));
        }
        if !(p.scale_range[0] < p.scale_range[1]) || p.scale_range.iter().any(|v| !v.is_finite()) {
            out.push(format!("pipeline.scale_range {:?} is not an increasing pair", p.scale_range));
        }
        match &self.model {
            ModelConfig::Qsvc { kernel, svm, auto_beta } => {
                if let Err(e) = kernel.validate() {
                    out.push(format!("model.kernel: {e}"));
                }
                if let Err(e) = svm.validate() {
                    out.push(format!("model.svm: {e}"));
                }
                if *auto_beta && !matches!(kernel, KernelSpec::Rbf { .. }) {
                    out.push("model.auto_beta applies only to the rbf kernel".into());
                }
                if let (KernelSpec::Quantum { feature_map, .. }, Some(d)) = (kernel, known_features) {
                    if let Err(e) = feature_map.validate_for(d) {
                        out.push(format!("model.kernel.feature_map: {e}"));
                    }
                }
            }
            ModelConfig::Qnn(q) => {
                out.extend(q.problems().into_iter().map(|m| format!("model: {m}")));
                if let Some(d) = known_features {
                    if let Err(e) = q.encoding.validate_for(d) {
                        out.push(format!("model.encoding: {e}"));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems))
        }
    }
}

/// Seed priority: CLI flag, then config, then `AQUAKERN_SEED`, then 0.
pub fn resolve_seed(cli: Option<u64>, config: Option<u64>, env: Option<&str>) -> Result<u64> {
    if let Some(s) = cli.or(config) {
        return Ok(s);
    }
    match env {
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| Error::Config(vec![format!("{SEED_ENV}={text:?} is not an unsigned integer")])),
        None => Ok(0),
    }
}

/// [`resolve_seed`] reading the environment variable.
pub fn resolve_seed_from_env(cli: Option<u64>, config: Option<u64>) -> Result<u64> {
    resolve_seed(cli, config, std::env::var(SEED_ENV).ok().as_deref())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub rows: usize,
    pub features: Vec<String>,
    pub original_counts: ClassCounts,
    pub train_size: usize,
    pub test_size: usize,
    pub train_counts: ClassCounts,
    pub test_counts: ClassCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ingest: Option<IngestReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmSummary {
    pub support_vectors: usize,
    pub iterations: usize,
    pub converged: bool,
    pub dual_objective: f64,
    pub bias: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rbf_beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    pub data_ms: f64,
    pub fit_ms: f64,
    pub evaluate_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunDiagnostics {
    pub dead_neuron: bool,
    pub plateau: bool,
    pub undefined_metrics: Vec<String>,
    pub events: Vec<DiagnosticEvent>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub family: String,
    pub version: String,
    pub seed: u64,
    /// The configuration as run, with the resolved seed filled in.
    pub config: ExperimentConfig,
    pub data: DataSummary,
    pub metrics: MetricsReport,
    pub train_metrics: MetricsReport,
    pub history: Vec<EpochRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<GramDiagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svm: Option<SvmSummary>,
    pub timing: Timing,
    pub diagnostics: RunDiagnostics,
}

impl RunReport {
    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// A finished run plus the artifacts that are written next to the report.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub gram: Option<KernelMatrix<f64>>,
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn load(config: &ExperimentConfig, seed: u64) -> Result<(Dataset, Option<IngestReport>)> {
    match &config.data {
        DataSource::Synthetic { n, imbalance } => Ok((generate_synthetic(*n, *imbalance, seed)?, None)),
        DataSource::Csv {
            path,
            ecoli_column,
            threshold,
            missing,
        } => {
            let opts = IngestOptions {
                ecoli_column: ecoli_column.clone(),
                threshold: *threshold,
                missing: *missing,
            };
            let (d, r) = read_csv(path, &opts)?;
            Ok((d, Some(r)))
        }
    }
}

fn prepare(dataset: &Dataset, p: &PipelineConfig, seed: u64) -> Result<(Dataset, Dataset)> {
    let (train, test) = if p.paper_order && p.oversample {
        let balanced = random_oversample(dataset, seed)?;
        split(&balanced, p.test_fraction, p.stratify, seed)?
    } else {
        let (train, test) = split(dataset, p.test_fraction, p.stratify, seed)?;
        let train = if p.oversample {
            random_oversample(&train, seed)?
        } else {
            train
        };
        (train, test)
    };
    let train = minmax_scale(&train, p.scale_range[0], p.scale_range[1])?;
    let scaler = train.scaling.clone().expect("fitted just above");
    let test = test.apply_scaling(&scaler)?;
    Ok((train, test))
}

/// Runs one experiment with an already-resolved root seed.
pub fn run_experiment(config: &ExperimentConfig, seed: u64) -> Result<RunOutcome> {
    config.validate()?;
    let start = Instant::now();
    let mut echo = config.clone();
    echo.seed = Some(seed);

    let (dataset, ingest) = load(config, seed)?;
    let (train, test) = prepare(&dataset, &config.pipeline, seed)?;
    let train_x = train.feature_vectors()?;
    let test_x = test.feature_vectors()?;
    let train_pos: Vec<bool> = train.labels().iter().map(|l| l.is_positive()).collect();
    let test_pos: Vec<bool> = test.labels().iter().map(|l| l.is_positive()).collect();
    let data_ms = elapsed_ms(start);

    let mut diagnostics = RunDiagnostics::default();
    let fit_start = Instant::now();
    let (train_scores, test_scores, threshold, history, gram, svm, fit_ms, evaluate_ms);
    match &config.model {
        ModelConfig::Qsvc { kernel, svm: svm_cfg, auto_beta } => {
            let (spec, rbf_beta) = resolve_kernel(kernel, *auto_beta, &train_x, seed);
            let mut svm_cfg = *svm_cfg;
            svm_cfg.seed = stage_seed(seed, Stage::SvmSolver);
            let labels = train.signs();
            let k = gram_matrix(&train_x, &spec).map_err(|e| stage_error("gram matrix", e))?;
            let diag = k.diagnostics();
            if diag.min_eigenvalue < -1e-7 {
                diagnostics
                    .warnings
                    .push(format!("Gram matrix has eigenvalue {:.3e} below zero", diag.min_eigenvalue));
            }
            let solution = train_svm(&k, &labels, &svm_cfg)?;
            if !solution.converged {
                diagnostics
                    .warnings
                    .push(format!("SMO stopped after {} iterations without converging", solution.iterations));
            }
            svm = Some(SvmSummary {
                support_vectors: solution.support_indices.len(),
                iterations: solution.iterations,
                converged: solution.converged,
                dual_objective: solution.objective,
                bias: solution.bias,
                rbf_beta,
            });
            let model = SvmModel::from_solution(solution, labels, train_x.clone(), spec)?;
            fit_ms = elapsed_ms(fit_start);
            let eval_start = Instant::now();
            train_scores = model.decision_values(&train_x)?;
            test_scores = model.decision_values(&test_x)?;
            evaluate_ms = elapsed_ms(eval_start);
            threshold = 0.0;
            history = Vec::new();
            gram = Some((diag, k));
        }
        ModelConfig::Qnn(qcfg) => {
            let mut qcfg = qcfg.clone();
            qcfg.seed = stage_seed(seed, Stage::QnnInit);
            let model = train_qnn(&train_x, &train.targets(), &qcfg)?;
            fit_ms = elapsed_ms(fit_start);
            let eval_start = Instant::now();
            train_scores = model.predict_outputs(&train_x)?;
            test_scores = model.predict_outputs(&test_x)?;
            evaluate_ms = elapsed_ms(eval_start);
            threshold = 0.5;
            diagnostics.dead_neuron = model.has_diagnostic(DiagnosticKind::DeadNeuron);
            diagnostics.plateau = model.has_diagnostic(DiagnosticKind::Plateau);
            diagnostics.events = model.diagnostics.clone();
            history = model.history;
            gram = None;
            svm = None;
        }
    }

    let metrics = metrics_report(&test_scores, threshold, &test_pos, config.scoring)?;
    let train_metrics = metrics_report(&train_scores, threshold, &train_pos, config.scoring)?;
    diagnostics.undefined_metrics = metrics.undefined.names().into_iter().map(String::from).collect();

    let (gram_diag, gram_matrix) = match gram {
        Some((d, k)) => (Some(d), config.write_gram.then_some(k)),
        None => (None, None),
    };
    let report = RunReport {
        name: config.name.clone(),
        family: config.model.family().into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        config: echo,
        data: DataSummary {
            rows: dataset.len(),
            features: dataset.column_names.clone(),
            original_counts: dataset.class_counts(),
            train_size: train.len(),
            test_size: test.len(),
            train_counts: train.class_counts(),
            test_counts: test.class_counts(),
            ingest,
        },
        metrics,
        train_metrics,
        history,
        gram: gram_diag,
        svm,
        timing: Timing {
            data_ms,
            fit_ms,
            evaluate_ms,
            total_ms: elapsed_ms(start),
        },
        diagnostics,
    };
    Ok(RunOutcome {
        report,
        gram: gram_matrix,
    })
}

/// The kernel as a run uses it: auto β filled in, shot seed derived from the root.
fn resolve_kernel(
    kernel: &KernelSpec<f64>,
    auto_beta: bool,
    train_x: &[FeatureVector<f64>],
    seed: u64,
) -> (KernelSpec<f64>, Option<f64>) {
    let mut spec = kernel.clone();
    let mut rbf_beta = None;
    match &mut spec {
        KernelSpec::Rbf { beta } if auto_beta => {
            *beta = rbf_beta_heuristic(train_x);
            rbf_beta = Some(*beta);
        }
        KernelSpec::Quantum { seed: s, .. } => *s = stage_seed(seed, Stage::KernelShots),
        _ => {}
    }
    (spec, rbf_beta)
}

/// Training-set Gram matrix of a QSVC experiment, without fitting.
pub fn experiment_gram(config: &ExperimentConfig, seed: u64) -> Result<KernelMatrix<f64>> {
    config.validate()?;
    let ModelConfig::Qsvc { kernel, auto_beta, .. } = &config.model else {
        return Err(Error::Config(vec!["inspect-gram needs a qsvc experiment".into()]));
    };
    let (dataset, _) = load(config, seed)?;
    let (train, _) = prepare(&dataset, &config.pipeline, seed)?;
    let train_x = train.feature_vectors()?;
    let (spec, _) = resolve_kernel(kernel, *auto_beta, &train_x, seed);
    gram_matrix(&train_x, &spec).map_err(|e| stage_error("gram matrix", e))
}

fn stage_error(stage: &str, e: Error) -> Error {
    match e {
        Error::InvalidSpec(m) => Error::InvalidSpec(format!("{stage}: {m}")),
        other => other,
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Writes `report.json`, plus `history.csv` for QNN runs and `gram.csv` when kept.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let mut written = Vec::new();
    let report_path = dir.join("report.json");
    write_file(&report_path, outcome.report.to_json_pretty()?.as_bytes())?;
    written.push(report_path);
    if outcome.report.family == "qnn" {
        let path = dir.join("history.csv");
        let mut buf = Vec::new();
        crate::qnn::write_history_csv(&outcome.report.history, &mut buf)?;
        write_file(&path, &buf)?;
        written.push(path);
    }
    if let Some(k) = &outcome.gram {
        let path = dir.join("gram.csv");
        write_gram_csv(k, &path)?;
        written.push(path);
    }
    Ok(written)
}

/// Gram matrix as a headerless square CSV.
pub fn write_gram_csv(k: &KernelMatrix<f64>, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path.display().to_string(), io),
            other => Error::InvalidInput(format!("{other:?}")),
        })?;
    for row in k.entries().rows() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

/// One line of a sweep comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub name: String,
    pub family: String,
    pub status: String,
    pub accuracy: Option<f64>,
    pub f1: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub auroc: Option<f64>,
    pub auprc: Option<f64>,
    pub final_loss: Option<f64>,
    pub train_accuracy: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn from_result(config: &ExperimentConfig, result: &Result<RunOutcome>) -> Self {
        let mut row = SweepRow {
            name: config.name.clone(),
            family: config.model.family().into(),
            status: "ok".into(),
            accuracy: None,
            f1: None,
            precision: None,
            recall: None,
            auroc: None,
            auprc: None,
            final_loss: None,
            train_accuracy: None,
            error: None,
        };
        match result {
            Ok(o) => {
                let m = &o.report.metrics;
                row.accuracy = Some(m.accuracy);
                row.f1 = Some(m.f1);
                row.precision = Some(m.precision);
                row.recall = Some(m.recall);
                row.auroc = Some(m.auroc);
                row.auprc = Some(m.auprc);
                row.final_loss = o.report.history.last().map(|h| h.loss);
                row.train_accuracy = Some(o.report.train_metrics.accuracy);
            }
            Err(e) => {
                row.status = "error".into();
                row.error = Some(e.to_string().lines().map(str::trim).collect::<Vec<_>>().join(" "));
            }
        }
        row
    }
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub outcomes: Vec<Result<RunOutcome>>,
}

/// Runs every config (concurrently), keeping failures as rows.
///
/// `seed_for` maps each config to its root seed.
pub fn run_sweep(configs: &[ExperimentConfig], seed_for: impl Fn(&ExperimentConfig) -> Result<u64> + Sync) -> Result<SweepResult> {
    if configs.is_empty() {
        return Err(Error::Config(vec!["a sweep needs at least one experiment".into()]));
    }
    let outcomes: Vec<Result<RunOutcome>> = configs
        .par_iter()
        .map(|c| seed_for(c).and_then(|s| run_experiment(c, s)))
        .collect();
    let rows = configs
        .iter()
        .zip(&outcomes)
        .map(|(c, r)| SweepRow::from_result(c, r))
        .collect();
    Ok(SweepResult { rows, outcomes })
}

const SWEEP_HEADER: [&str; 12] = [
    "name",
    "family",
    "status",
    "accuracy",
    "f1",
    "precision",
    "recall",
    "auroc",
    "auprc",
    "final_loss",
    "train_accuracy",
    "error",
];

fn cells(row: &SweepRow, digits: usize) -> Vec<String> {
    let num = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.digits$}"));
    vec![
        row.name.clone(),
        row.family.clone(),
        row.status.clone(),
        num(row.accuracy),
        num(row.f1),
        num(row.precision),
        num(row.recall),
        num(row.auroc),
        num(row.auprc),
        num(row.final_loss),
        num(row.train_accuracy),
        row.error.clone().unwrap_or_default(),
    ]
}

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(SWEEP_HEADER)?;
        for r in rows {
            w.write_record(cells(r, 17))?;
        }
        w.flush().map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    write_file(path, &buf)
}

/// Fixed-width text table with four decimals, the error column last.
pub fn sweep_table(rows: &[SweepRow]) -> String {
    let body: Vec<Vec<String>> = rows.iter().map(|r| cells(r, 4)).collect();
    let mut widths: Vec<usize> = SWEEP_HEADER.iter().map(|h| h.chars().count()).collect();
    for r in &body {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cols: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cols.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            if (3..11).contains(&i) {
                let _ = write!(s, "{c:>w$}");
            } else {
                let _ = write!(s, "{c:<w$}");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(SWEEP_HEADER.to_vec());
    for r in &body {
        line(r.iter().map(String::as_str).collect());
    }
    out
}

/// Directory for row `i` of a sweep.
pub fn sweep_row_dir(root: &Path, index: usize, name: &str) -> PathBuf {
    let slug: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    root.join(format!("{index:02}-{slug}"))
}
