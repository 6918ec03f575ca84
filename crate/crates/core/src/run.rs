//! Config-driven evaluation runs and their report bundles.
//!
//! A run loads every model and dataset named in a [`RunConfig`], evaluates
//! each (model, task) cell, merges externally supplied scores, and builds the
//! score table and correlation matrix. The resulting [`ReportBundle`] renders
//! to byte-identical files for identical inputs, whatever the thread count.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{
    consistency_matrix, emit_matrix, CorrelationMatrix, MatrixFormat, MetricDescriptor, MetricKind, ScoreTable,
};
use crate::datasets::{
    parse_analogy, parse_categorization, parse_conll, parse_linguistic_matrix, parse_outliers, parse_similarity,
    AnalogyDataset, AnalogyFormat, CategorizationDataset, LinguisticMatrix, OutlierDataset, OutlierFormat,
    SequenceCorpus, SimilarityDataset, TagScheme,
};
use crate::error::{Error, Result};
use crate::extrinsic::{evaluate_tagging, train, AdamConfig, TrainConfig};
use crate::intrinsic::{
    eval_analogy, eval_categorization_with, eval_outlier, eval_similarity, qvec_with, AnalogyMethod,
    DEFAULT_EPSILON, DEFAULT_RESTARTS,
};
use crate::score::{report_scale, Direction, EvalScore};
use crate::vecstore::{OovPolicy, VecStore, VectorFormat};

/// Environment variable consulted when neither `--jobs` nor the config sets
/// a job count.
pub const JOBS_ENV: &str = "EMBEVAL_JOBS";
pub const MANIFEST_SCHEMA: &str = "embeval.manifest.v1";
pub const SCORES_SCHEMA: &str = "embeval.scores.v1";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    Similarity,
    Analogy,
    Categorization,
    Outlier,
    Qvec,
    Tagging,
}

impl DatasetKind {
    pub fn metric_kind(self) -> MetricKind {
        match self {
            DatasetKind::Tagging => MetricKind::Extrinsic,
            _ => MetricKind::Intrinsic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelEntry {
    pub name: String,
    pub path: PathBuf,
    /// `text`, `text-header` or `binary`.
    #[serde(default = "default_vector_format")]
    pub format: String,
}

fn default_vector_format() -> String {
    "text".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: String,
    pub kind: DatasetKind,
    pub path: PathBuf,
    /// Analogy: `google` (default) or `msr`. Outlier: `wordsim500` (default)
    /// or `eight888`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    /// Tagging only: held-out CoNLL file scored after training on `path`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskEntry {
    pub dataset: String,
    /// Column name in the score table; defaults to the dataset name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    /// Score component used as the table value; defaults to the primary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    /// Analogy: `3cosadd` (default) or `3cosmul`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// QVEC: count only positive correlations.
    #[serde(default)]
    pub clamp: bool,
    /// Overrides the run seed for this task.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lr: Option<f64>,
}

impl TaskEntry {
    pub fn metric_name(&self) -> &str {
        self.metric.as_deref().unwrap_or(&self.dataset)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalEntry {
    pub model: String,
    pub metric: String,
    pub value: f64,
    /// `higher` (default) or `lower`.
    #[serde(default = "default_direction")]
    pub direction: String,
    /// `extrinsic` (default) or `intrinsic`.
    #[serde(default = "default_kind")]
    pub kind: String,
}

fn default_direction() -> String {
    "higher".into()
}

fn default_kind() -> String {
    "extrinsic".into()
}

fn default_formats() -> Vec<String> {
    vec!["csv".into(), "json".into()]
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Output directory, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Correlation matrix formats: `csv`, `json`.
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default, rename = "model")]
    pub models: Vec<ModelEntry>,
    #[serde(default, rename = "dataset")]
    pub datasets: Vec<DatasetEntry>,
    #[serde(default, rename = "task")]
    pub tasks: Vec<TaskEntry>,
    #[serde(default, rename = "external")]
    pub externals: Vec<ExternalEntry>,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    pub fn from_toml(source: &str) -> Result<Self> {
        toml::from_str(source).map_err(|e| config_err(e.to_string()))
    }

    /// Parses a config file; relative paths resolve against its directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::in_file(path, e.into()))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => config_err(format!("{}: {m}", path.display())),
            e => e,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn out_dir(&self) -> Option<PathBuf> {
        self.out.as_deref().map(|p| self.resolve(p))
    }

    pub fn matrix_formats(&self) -> Result<Vec<MatrixFormat>> {
        self.formats
            .iter()
            .map(|f| MatrixFormat::parse(f).ok_or_else(|| config_err(format!("unknown report format {f:?}"))))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(config_err("no [[model]] entries"));
        }
        if self.tasks.is_empty() {
            return Err(config_err("no [[task]] entries"));
        }
        if self.jobs == Some(0) {
            return Err(config_err("jobs must be at least 1"));
        }
        self.matrix_formats()?;
        unique("model", self.models.iter().map(|m| m.name.as_str()))?;
        unique("dataset", self.datasets.iter().map(|d| d.name.as_str()))?;
        unique("task metric", self.tasks.iter().map(TaskEntry::metric_name))?;
        for m in &self.models {
            non_empty(&m.name, "model name")?;
            non_empty_path(&m.path, &m.name)?;
            if VectorFormat::parse(&m.format).is_none() {
                return Err(config_err(format!("model {}: unknown format {:?}", m.name, m.format)));
            }
        }
        for d in &self.datasets {
            non_empty(&d.name, "dataset name")?;
            non_empty_path(&d.path, &d.name)?;
            match (d.kind, d.format.as_deref()) {
                (_, None) => {}
                (DatasetKind::Analogy, Some(f)) if analogy_format(f).is_some() => {}
                (DatasetKind::Outlier, Some(f)) if outlier_format(f).is_some() => {}
                (_, Some(f)) => {
                    return Err(config_err(format!("dataset {}: format {f:?} is not valid here", d.name)));
                }
            }
            if d.test_path.is_some() && d.kind != DatasetKind::Tagging {
                return Err(config_err(format!("dataset {}: test_path is for tagging only", d.name)));
            }
            if let Some(p) = &d.test_path {
                non_empty_path(p, &d.name)?;
            }
        }
        for t in &self.tasks {
            let d = self
                .datasets
                .iter()
                .find(|d| d.name == t.dataset)
                .ok_or_else(|| config_err(format!("task refers to undeclared dataset {:?}", t.dataset)))?;
            non_empty(t.metric_name(), "task metric")?;
            if let Some(m) = &t.method {
                if d.kind != DatasetKind::Analogy || AnalogyMethod::parse(m).is_none() {
                    return Err(config_err(format!("task {}: bad method {m:?}", t.metric_name())));
                }
            }
            if let Some(e) = t.epsilon {
                if !(e.is_finite() && e > 0.0) {
                    return Err(config_err(format!("task {}: epsilon must be positive", t.metric_name())));
                }
            }
            let tagger_opts = t.hidden.is_some() || t.epochs.is_some() || t.batch_size.is_some() || t.lr.is_some();
            if tagger_opts && d.kind != DatasetKind::Tagging {
                return Err(config_err(format!("task {}: tagger options on a non-tagging dataset", t.metric_name())));
            }
            if t.hidden == Some(0) || t.batch_size == Some(0) || t.restarts == Some(0) {
                return Err(config_err(format!("task {}: sizes must be positive", t.metric_name())));
            }
            if let Some(lr) = t.lr {
                if !(lr.is_finite() && lr >= 0.0) {
                    return Err(config_err(format!("task {}: bad learning rate", t.metric_name())));
                }
            }
        }
        let task_metrics: HashSet<&str> = self.tasks.iter().map(TaskEntry::metric_name).collect();
        let mut seen = HashSet::new();
        for e in &self.externals {
            if !self.models.iter().any(|m| m.name == e.model) {
                return Err(config_err(format!("external score for undeclared model {:?}", e.model)));
            }
            non_empty(&e.metric, "external metric")?;
            if task_metrics.contains(e.metric.as_str()) {
                return Err(config_err(format!("external metric {:?} clashes with a task", e.metric)));
            }
            if !seen.insert((e.model.as_str(), e.metric.as_str())) {
                return Err(config_err(format!("duplicate external score {}/{}", e.model, e.metric)));
            }
            if !e.value.is_finite() {
                return Err(config_err(format!("external score {}/{} is not finite", e.model, e.metric)));
            }
            if Direction::parse(&e.direction).is_none() || MetricKind::parse(&e.kind).is_none() {
                return Err(config_err(format!("external metric {:?}: bad direction or kind", e.metric)));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form of the config.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}

fn unique<'a>(what: &str, names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(config_err(format!("duplicate {what} name {n:?}")));
        }
    }
    Ok(())
}

fn non_empty(s: &str, what: &str) -> Result<()> {
    if s.trim().is_empty() {
        return Err(config_err(format!("empty {what}")));
    }
    Ok(())
}

fn non_empty_path(p: &Path, owner: &str) -> Result<()> {
    if p.as_os_str().is_empty() {
        return Err(config_err(format!("{owner}: empty path")));
    }
    Ok(())
}

fn analogy_format(s: &str) -> Option<AnalogyFormat> {
    match s.to_ascii_lowercase().as_str() {
        "google" => Some(AnalogyFormat::Google),
        "msr" => Some(AnalogyFormat::Msr),
        _ => None,
    }
}

fn outlier_format(s: &str) -> Option<OutlierFormat> {
    match s.to_ascii_lowercase().as_str() {
        "wordsim500" => Some(OutlierFormat::WordSim500),
        "eight888" => Some(OutlierFormat::Eight888),
        _ => None,
    }
}

/// Job count: the explicit value, else [`JOBS_ENV`], else the CPU count.
pub fn resolve_jobs(explicit: Option<usize>) -> Result<usize> {
    if let Some(j) = explicit {
        return Ok(j.max(1));
    }
    if let Ok(v) = std::env::var(JOBS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(j) if j > 0 => Ok(j),
            _ => Err(config_err(format!("{JOBS_ENV}={v:?} is not a positive integer"))),
        };
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

// ---------------------------------------------------------------------------
// loading

#[derive(Debug, Clone)]
enum Loaded {
    Similarity(SimilarityDataset),
    Analogy(AnalogyDataset),
    Categorization(CategorizationDataset),
    Outlier(OutlierDataset),
    Qvec(LinguisticMatrix),
    Tagging {
        train: SequenceCorpus,
        test: Option<SequenceCorpus>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub role: String,
    pub name: String,
    pub path: String,
    pub sha256: String,
}

struct Inputs {
    records: Vec<InputRecord>,
}

impl Inputs {
    fn read(&mut self, cfg: &RunConfig, role: &str, name: &str, p: &Path) -> Result<(PathBuf, Vec<u8>)> {
        let full = cfg.resolve(p);
        let bytes = fs::read(&full).map_err(|e| Error::in_file(&full, e.into()))?;
        self.records.push(InputRecord {
            role: role.into(),
            name: name.into(),
            path: p.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok((full, bytes))
    }

    fn read_text(&mut self, cfg: &RunConfig, role: &str, name: &str, p: &Path) -> Result<(PathBuf, String)> {
        let (full, bytes) = self.read(cfg, role, name, p)?;
        let text = String::from_utf8(bytes).map_err(|e| Error::in_file(&full, Error::Serde(e.to_string())))?;
        Ok((full, text))
    }
}

fn load_dataset(cfg: &RunConfig, inputs: &mut Inputs, d: &DatasetEntry) -> Result<Loaded> {
    let (full, text) = inputs.read_text(cfg, "dataset", &d.name, &d.path)?;
    let wrap = |e| Error::in_file(&full, e);
    let fmt = d.format.as_deref();
    Ok(match d.kind {
        DatasetKind::Similarity => Loaded::Similarity(parse_similarity(&d.name, &text).map_err(wrap)?),
        DatasetKind::Analogy => {
            let f = fmt.and_then(analogy_format).unwrap_or(AnalogyFormat::Google);
            Loaded::Analogy(parse_analogy(&d.name, &text, f).map_err(wrap)?)
        }
        DatasetKind::Categorization => Loaded::Categorization(parse_categorization(&d.name, &text).map_err(wrap)?),
        DatasetKind::Outlier => {
            let f = fmt.and_then(outlier_format).unwrap_or(OutlierFormat::WordSim500);
            Loaded::Outlier(parse_outliers(&d.name, &text, f).map_err(wrap)?)
        }
        DatasetKind::Qvec => Loaded::Qvec(parse_linguistic_matrix(&text).map_err(wrap)?),
        DatasetKind::Tagging => {
            let train = parse_conll(&text).map_err(wrap)?;
            let test = match &d.test_path {
                Some(p) => {
                    let (full, text) = inputs.read_text(cfg, "dataset-test", &d.name, p)?;
                    Some(
                        parse_conll(&text)
                            .map_err(|e| Error::in_file(&full, e))?
                            .with_scheme(train.scheme),
                    )
                }
                None => None,
            };
            Loaded::Tagging { train, test }
        }
    })
}

// ---------------------------------------------------------------------------
// evaluation

fn evaluate(store: &VecStore, data: &Loaded, task: &TaskEntry, seed: u64) -> Result<EvalScore> {
    match data {
        Loaded::Similarity(d) => eval_similarity(store, d),
        Loaded::Analogy(d) => {
            let eps = task.epsilon.unwrap_or(DEFAULT_EPSILON);
            let method = match task.method.as_deref().map(AnalogyMethod::parse) {
                Some(Some(AnalogyMethod::CosMul { .. })) => AnalogyMethod::CosMul { epsilon: eps },
                Some(Some(m)) => m,
                Some(None) => return Err(config_err("bad analogy method")),
                None => AnalogyMethod::CosAdd,
            };
            eval_analogy(store, d, method)
        }
        Loaded::Categorization(d) => eval_categorization_with(
            store,
            d,
            seed,
            task.restarts.unwrap_or(DEFAULT_RESTARTS),
        ),
        Loaded::Outlier(d) => eval_outlier(store, d),
        Loaded::Qvec(m) => qvec_with(store, m, task.clamp),
        Loaded::Tagging { train: tr, test } => {
            let defaults = TrainConfig::default();
            let config = TrainConfig {
                hidden: task.hidden.unwrap_or(defaults.hidden),
                epochs: task.epochs.unwrap_or(defaults.epochs),
                batch_size: task.batch_size.unwrap_or(defaults.batch_size),
                adam: AdamConfig {
                    lr: task.lr.unwrap_or(defaults.adam.lr),
                    ..defaults.adam
                },
                seed,
            };
            let store = store.clone().with_oov_policy(OovPolicy::SharedUnk);
            let trained = train(&store, tr, &config)?;
            let eval_on = test.as_ref().unwrap_or(tr);
            let metrics = evaluate_tagging(&trained.tagger, &store, eval_on)?;
            let known = eval_on
                .sentences
                .iter()
                .flatten()
                .filter(|t| store.resolve(t).is_some())
                .count();
            let coverage = if metrics.tokens == 0 { 0.0 } else { known as f64 / metrics.tokens as f64 };
            let primary = match (eval_on.scheme, metrics.span_f1()) {
                (TagScheme::BioSpans, Some(f1)) => f1,
                _ => metrics.token_accuracy,
            };
            let mut score = EvalScore::new("tagging", primary, coverage)
                .with_component("accuracy", metrics.token_accuracy)
                .with_component("tokens", metrics.tokens as f64);
            if let Some(f1) = metrics.span_f1() {
                score = score.with_component("f1", f1);
            }
            if let Some(loss) = trained.loss_trace.last() {
                score = score.with_component("final_loss", *loss);
            }
            Ok(score)
        }
    }
}

// ---------------------------------------------------------------------------
// reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub model: String,
    pub metric: String,
    pub dataset: String,
    pub seed: u64,
    /// Table value: the chosen component of `score`.
    pub value: Option<f64>,
    pub score: Option<EvalScore>,
    pub error: Option<String>,
}

impl CellRecord {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestCell {
    pub model: String,
    pub metric: String,
    pub seed: u64,
    pub status: String,
    pub coverage: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub config_sha256: String,
    pub seed: u64,
    pub inputs: Vec<InputRecord>,
    pub cells: Vec<ManifestCell>,
    pub files: Vec<FileRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub cells: Vec<CellRecord>,
    pub table: ScoreTable,
    pub matrix: CorrelationMatrix,
    pub formats: Vec<MatrixFormat>,
    pub config_sha256: String,
    pub seed: u64,
    pub inputs: Vec<InputRecord>,
    /// Metrics supplied from outside the run; shown unscaled in the summary.
    pub external_metrics: Vec<String>,
}

pub const SCORES_FILE: &str = "scores.json";
pub const TABLE_FILE: &str = "score_table.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const MATRIX_STEM: &str = "correlation";
pub const MANIFEST_FILE: &str = "manifest.json";

fn pretty_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

impl ReportBundle {
    pub fn failures(&self) -> impl Iterator<Item = &CellRecord> {
        self.cells.iter().filter(|c| !c.ok())
    }

    /// Every report file as `(name, bytes)`, manifest last.
    pub fn render(&self) -> Result<Vec<(String, Vec<u8>)>> {
        #[derive(Serialize)]
        struct Scores<'a> {
            schema: &'a str,
            cells: &'a [CellRecord],
        }
        let mut files = vec![
            (
                SCORES_FILE.to_string(),
                pretty_json(&Scores {
                    schema: SCORES_SCHEMA,
                    cells: &self.cells,
                })?,
            ),
            (TABLE_FILE.to_string(), self.table.to_csv()?),
            (SUMMARY_FILE.to_string(), self.summary().into_bytes()),
        ];
        for f in &self.formats {
            files.push((format!("{MATRIX_STEM}.{}", f.extension()), emit_matrix(&self.matrix, *f)?));
        }
        let manifest = Manifest {
            schema: MANIFEST_SCHEMA.into(),
            config_sha256: self.config_sha256.clone(),
            seed: self.seed,
            inputs: self.inputs.clone(),
            cells: self
                .cells
                .iter()
                .map(|c| ManifestCell {
                    model: c.model.clone(),
                    metric: c.metric.clone(),
                    seed: c.seed,
                    status: if c.ok() { "ok".into() } else { "failed".into() },
                    coverage: c.score.as_ref().map(|s| s.coverage),
                })
                .collect(),
            files: files
                .iter()
                .map(|(name, bytes)| FileRecord {
                    name: name.clone(),
                    sha256: hex::encode(Sha256::digest(bytes)),
                })
                .collect(),
        };
        files.push((MANIFEST_FILE.to_string(), pretty_json(&manifest)?));
        Ok(files)
    }

    /// Writes every report file into `dir` and returns their paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| Error::in_file(dir, e.into()))?;
        let mut paths = Vec::new();
        for (name, bytes) in self.render()? {
            let p = dir.join(name);
            fs::write(&p, bytes).map_err(|e| Error::in_file(&p, e.into()))?;
            paths.push(p);
        }
        Ok(paths)
    }

    /// Plain-text score grid; computed scores ×100 with 2 decimals.
    pub fn summary(&self) -> String {
        let mut header = vec!["model".to_string()];
        header.extend(self.table.metrics.iter().map(|m| m.name.clone()));
        let mut rows = vec![header];
        for (i, model) in self.table.models.iter().enumerate() {
            let mut row = vec![model.clone()];
            for (j, m) in self.table.metrics.iter().enumerate() {
                let failed = self.cells.iter().any(|c| &c.model == model && c.metric == m.name && !c.ok());
                row.push(match self.table.values[i][j] {
                    Some(v) if self.external_metrics.contains(&m.name) => format!("{v:.2}"),
                    Some(v) => report_scale(v),
                    None if failed => "fail".into(),
                    None => "-".into(),
                });
            }
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (s, w))| if c == 0 { format!("{s:<w$}") } else { format!("{s:>w$}") })
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        let failures: Vec<&CellRecord> = self.failures().collect();
        if !failures.is_empty() {
            let _ = writeln!(out, "\nfailed cells:");
            for c in failures {
                let _ = writeln!(out, "  {} / {}: {}", c.model, c.metric, c.error.as_deref().unwrap_or(""));
            }
        }
        out
    }
}

/// Loads every input, evaluates all cells on `jobs` threads and assembles
/// the report bundle.
///
/// Unreadable or malformed inputs abort the run with an error naming the
/// file. An evaluator error only fails its own cell.
pub fn run(config: &RunConfig, jobs: usize) -> Result<ReportBundle> {
    config.validate()?;
    let formats = config.matrix_formats()?;
    let mut inputs = Inputs { records: Vec::new() };

    let mut stores = Vec::with_capacity(config.models.len());
    for m in &config.models {
        let (full, bytes) = inputs.read(config, "model", &m.name, &m.path)?;
        let fmt = VectorFormat::parse(&m.format).expect("validated");
        stores.push(fmt.load(&bytes[..]).map_err(|e| Error::in_file(&full, e))?);
    }
    let mut data: BTreeMap<&str, Loaded> = BTreeMap::new();
    for d in &config.datasets {
        if config.tasks.iter().any(|t| t.dataset == d.name) {
            data.insert(&d.name, load_dataset(config, &mut inputs, d)?);
        }
    }

    let cells: Vec<(usize, usize)> = (0..config.models.len())
        .flat_map(|m| (0..config.tasks.len()).map(move |t| (m, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| config_err(e.to_string()))?;
    let records: Vec<CellRecord> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(m, t)| {
                let task = &config.tasks[t];
                let seed = task.seed.unwrap_or(config.seed);
                let result = evaluate(&stores[m], &data[task.dataset.as_str()], task, seed).and_then(|s| {
                    let comp = task.component.as_deref().unwrap_or("");
                    let v = s
                        .value(comp)
                        .ok_or_else(|| Error::InvalidArgument(format!("score has no component {comp:?}")))?;
                    Ok((s, v))
                });
                let (score, value, error) = match result {
                    Ok((s, v)) => (Some(s), Some(v), None),
                    Err(e) => (None, None, Some(e.to_string())),
                };
                CellRecord {
                    model: config.models[m].name.clone(),
                    metric: task.metric_name().to_string(),
                    dataset: task.dataset.clone(),
                    seed,
                    value,
                    score,
                    error,
                }
            })
            .collect()
    });

    let mut table = ScoreTable::new();
    for m in &config.models {
        table.add_model(&m.name);
    }
    for t in &config.tasks {
        let kind = config
            .datasets
            .iter()
            .find(|d| d.name == t.dataset)
            .expect("validated")
            .kind
            .metric_kind();
        table.add_metric(MetricDescriptor::new(t.metric_name(), kind, Direction::HigherBetter))?;
    }
    for r in &records {
        if let Some(v) = r.value {
            let j = table.metrics.iter().position(|d| d.name == r.metric).expect("declared");
            let desc = table.metrics[j].clone();
            table.set(&r.model, &desc, v)?;
        }
    }
    let mut external_metrics = Vec::new();
    for e in &config.externals {
        let desc = MetricDescriptor::new(
            e.metric.as_str(),
            MetricKind::parse(&e.kind).expect("validated"),
            Direction::parse(&e.direction).expect("validated"),
        );
        table.set(&e.model, &desc, e.value).map_err(|err| config_err(err.to_string()))?;
        if !external_metrics.contains(&e.metric) {
            external_metrics.push(e.metric.clone());
        }
    }
    let matrix = consistency_matrix(&table);
    Ok(ReportBundle {
        cells: records,
        table,
        matrix,
        formats,
        config_sha256: config.hash(),
        seed: config.seed,
        inputs: inputs.records,
        external_metrics,
    })
}

/// Reads a long-format score table and returns its correlation matrix.
pub fn correlate(table_csv: &[u8]) -> Result<CorrelationMatrix> {
    let table = ScoreTable::from_csv(table_csv)?;
    Ok(consistency_matrix(&table))
}

/// Vocabulary size, dimension, norm summary and nearest neighbours of each
/// probe word. Per-word norms are listed for stores of at most `list_limit`
/// words.
pub fn inspect(store: &VecStore, probes: &[String], k: usize, list_limit: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "words: {}", store.len());
    let _ = writeln!(out, "dim: {}", store.dim());
    let norms: Vec<f64> = (0..store.len()).map(|i| store.row_norm(i)).collect();
    if !norms.is_empty() {
        let min = norms.iter().copied().fold(f64::INFINITY, f64::min);
        let max = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = norms.iter().sum::<f64>() / norms.len() as f64;
        let zero = norms.iter().filter(|&&n| n == 0.0).count();
        let _ = writeln!(out, "norm: min {min:.6} mean {mean:.6} max {max:.6} zero {zero}");
    }
    if store.len() <= list_limit {
        for (i, n) in norms.iter().enumerate() {
            let _ = writeln!(out, "  {}\t{n:.6}", store.word(i));
        }
    }
    for p in probes {
        match store.resolve(p) {
            None => {
                let _ = writeln!(out, "{p}: not in vocabulary");
            }
            Some(i) => {
                let exclude: HashSet<&str> = [store.word(i)].into_iter().collect();
                match store.nearest(store.row(i), k, &exclude) {
                    Ok(nn) => {
                        let list: Vec<String> = nn.iter().map(|n| format!("{} {:.4}", n.word, n.score)).collect();
                        let _ = writeln!(out, "{p}: {}", list.join(", "));
                    }
                    Err(e) => {
                        let _ = writeln!(out, "{p}: {e}");
                    }
                }
            }
        }
    }
    out
}
