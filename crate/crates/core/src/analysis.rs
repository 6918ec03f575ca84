//! Correlation statistics and the intrinsic × extrinsic consistency matrix.
//!
//! A [`ScoreTable`] collects one value per (model, metric). For every pair of
//! an intrinsic and an extrinsic metric, [`consistency_matrix`] computes the
//! Pearson correlation across the models that have both values. Metrics
//! marked lower-better (perplexity, error rates) are negated first so that a
//! positive cell always means "better on one, better on the other".

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::score::Direction;

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::Insufficient(format!(
            "correlation needs at least 2 points, got {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("correlation input".into()));
    }
    if x.iter().all(|v| *v == x[0]) || y.iter().all(|v| *v == y[0]) {
        return Err(Error::ZeroVariance);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the average of their positions.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) hold ties; average 1-based rank
        let avg = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        i = j;
    }
    ranks
}

/// Spearman rank correlation: Pearson over average-tied ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("correlation input".into()));
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Intrinsic,
    Extrinsic,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Intrinsic => "intrinsic",
            MetricKind::Extrinsic => "extrinsic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "intrinsic" => Some(MetricKind::Intrinsic),
            "extrinsic" => Some(MetricKind::Extrinsic),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetricDescriptor {
    pub name: String,
    pub kind: MetricKind,
    pub direction: Direction,
}

impl MetricDescriptor {
    pub fn new(name: impl Into<String>, kind: MetricKind, direction: Direction) -> Self {
        MetricDescriptor {
            name: name.into(),
            kind,
            direction,
        }
    }
}

/// Models × metrics grid of scores; missing entries are `None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreTable {
    pub models: Vec<String>,
    pub metrics: Vec<MetricDescriptor>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl ScoreTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_model(&mut self, name: &str) -> usize {
        if let Some(i) = self.models.iter().position(|m| m == name) {
            return i;
        }
        self.models.push(name.to_string());
        self.values.push(vec![None; self.metrics.len()]);
        self.models.len() - 1
    }

    /// Adds a metric, or returns the existing one if the descriptor matches.
    pub fn add_metric(&mut self, metric: MetricDescriptor) -> Result<usize> {
        if let Some(j) = self.metrics.iter().position(|m| m.name == metric.name) {
            if self.metrics[j] != metric {
                return Err(Error::InvalidArgument(format!(
                    "metric {:?} declared twice with different kind or direction",
                    metric.name
                )));
            }
            return Ok(j);
        }
        self.metrics.push(metric);
        for row in &mut self.values {
            row.push(None);
        }
        Ok(self.metrics.len() - 1)
    }

    pub fn set(&mut self, model: &str, metric: &MetricDescriptor, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("{model}/{}", metric.name)));
        }
        let j = self.add_metric(metric.clone())?;
        let i = self.add_model(model);
        self.values[i][j] = Some(value);
        Ok(())
    }

    pub fn get(&self, model: &str, metric: &str) -> Option<f64> {
        let i = self.models.iter().position(|m| m == model)?;
        let j = self.metrics.iter().position(|m| m.name == metric)?;
        self.values[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<Option<f64>> {
        self.values.iter().map(|row| row[j]).collect()
    }

    /// Long-format CSV: `model,metric,kind,direction,value`, one row per
    /// present value, in model then metric order.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["model", "metric", "kind", "direction", "value"])?;
        for (i, model) in self.models.iter().enumerate() {
            for (j, m) in self.metrics.iter().enumerate() {
                if let Some(v) = self.values[i][j] {
                    w.write_record([
                        model.as_str(),
                        m.name.as_str(),
                        m.kind.as_str(),
                        m.direction.as_str(),
                        &v.to_string(),
                    ])?;
                }
            }
        }
        w.into_inner().map_err(|e| Error::Serde(e.to_string()))
    }

    /// Reads the long-format CSV written by [`ScoreTable::to_csv`].
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::parse(1, format!("missing column {name:?}")))
        };
        let (cm, cmet, ck, cd, cv) = (
            col("model")?,
            col("metric")?,
            col("kind")?,
            col("direction")?,
            col("value")?,
        );
        let mut table = ScoreTable::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let field = |c: usize| rec.get(c).unwrap_or("").trim();
            let kind = MetricKind::parse(field(ck))
                .ok_or_else(|| Error::parse(line, format!("bad kind {:?}", field(ck))))?;
            let direction = Direction::parse(field(cd))
                .ok_or_else(|| Error::parse(line, format!("bad direction {:?}", field(cd))))?;
            let raw = field(cv);
            let metric = MetricDescriptor::new(field(cmet), kind, direction);
            if raw.is_empty() {
                table.add_metric(metric).map_err(|e| Error::parse(line, e.to_string()))?;
                table.add_model(field(cm));
                continue;
            }
            let value: f64 = raw
                .parse()
                .map_err(|_| Error::parse(line, format!("bad value {raw:?}")))?;
            table
                .set(field(cm), &metric, value)
                .map_err(|e| Error::parse(line, e.to_string()))?;
        }
        Ok(table)
    }
}

/// Intrinsic rows × extrinsic columns of Pearson r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    /// `None` where fewer than 2 models had both values or an input was constant.
    pub r: Vec<Vec<Option<f64>>>,
    /// Number of models with both values, per cell.
    pub n: Vec<Vec<usize>>,
}

impl CorrelationMatrix {
    pub fn get(&self, row: &str, col: &str) -> Option<f64> {
        let i = self.rows.iter().position(|r| r == row)?;
        let j = self.cols.iter().position(|c| c == col)?;
        self.r[i][j]
    }
}

fn oriented(v: f64, d: Direction) -> f64 {
    match d {
        Direction::HigherBetter => v,
        Direction::LowerBetter => -v,
    }
}

/// Pearson r for every (intrinsic, extrinsic) metric pair, using pairwise
/// deletion for missing values.
pub fn consistency_matrix(table: &ScoreTable) -> CorrelationMatrix {
    let intr: Vec<usize> = kind_indices(table, MetricKind::Intrinsic);
    let extr: Vec<usize> = kind_indices(table, MetricKind::Extrinsic);
    let mut r = Vec::with_capacity(intr.len());
    let mut n = Vec::with_capacity(intr.len());
    for &i in &intr {
        let mi = &table.metrics[i];
        let mut r_row = Vec::with_capacity(extr.len());
        let mut n_row = Vec::with_capacity(extr.len());
        for &j in &extr {
            let mj = &table.metrics[j];
            let (xs, ys): (Vec<f64>, Vec<f64>) = table
                .values
                .iter()
                .filter_map(|row| match (row[i], row[j]) {
                    (Some(a), Some(b)) => Some((oriented(a, mi.direction), oriented(b, mj.direction))),
                    _ => None,
                })
                .unzip();
            n_row.push(xs.len());
            r_row.push(pearson(&xs, &ys).ok());
        }
        r.push(r_row);
        n.push(n_row);
    }
    CorrelationMatrix {
        rows: intr.iter().map(|&i| table.metrics[i].name.clone()).collect(),
        cols: extr.iter().map(|&j| table.metrics[j].name.clone()).collect(),
        r,
        n,
    }
}

fn kind_indices(table: &ScoreTable, kind: MetricKind) -> Vec<usize> {
    table
        .metrics
        .iter()
        .enumerate()
        .filter(|(_, m)| m.kind == kind)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl MatrixFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Some(MatrixFormat::Csv),
            "json" => Some(MatrixFormat::Json),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            MatrixFormat::Csv => "csv",
            MatrixFormat::Json => "json",
        }
    }
}

pub const MATRIX_SCHEMA: &str = "embeval.correlation-matrix.v1";

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    schema: String,
    rows: Vec<String>,
    cols: Vec<String>,
    r: Vec<Vec<Option<f64>>>,
    n: Vec<Vec<usize>>,
}

/// Serializes a matrix.
///
/// CSV: header `intrinsic,<col>…,n:<col>…`; one line per row with r values
/// (empty when absent) followed by per-cell model counts. JSON:
/// `{"schema", "rows", "cols", "r", "n"}` with `null` for absent cells.
pub fn emit_matrix(m: &CorrelationMatrix, format: MatrixFormat) -> Result<Vec<u8>> {
    match format {
        MatrixFormat::Json => {
            let doc = MatrixJson {
                schema: MATRIX_SCHEMA.to_string(),
                rows: m.rows.clone(),
                cols: m.cols.clone(),
                r: m.r.clone(),
                n: m.n.clone(),
            };
            let mut out = serde_json::to_vec_pretty(&doc)?;
            out.push(b'\n');
            Ok(out)
        }
        MatrixFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["intrinsic".to_string()];
            header.extend(m.cols.iter().cloned());
            header.extend(m.cols.iter().map(|c| format!("n:{c}")));
            w.write_record(&header)?;
            for (i, row) in m.rows.iter().enumerate() {
                let mut rec = vec![row.clone()];
                rec.extend(m.r[i].iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()));
                rec.extend(m.n[i].iter().map(|n| n.to_string()));
                w.write_record(&rec)?;
            }
            w.into_inner().map_err(|e| Error::Serde(e.to_string()))
        }
    }
}

/// Reads either serialization back into a matrix.
pub fn read_matrix(bytes: &[u8], format: MatrixFormat) -> Result<CorrelationMatrix> {
    match format {
        MatrixFormat::Json => {
            let doc: MatrixJson = serde_json::from_slice(bytes)?;
            if doc.schema != MATRIX_SCHEMA {
                return Err(Error::Serde(format!("unknown schema {:?}", doc.schema)));
            }
            Ok(CorrelationMatrix {
                rows: doc.rows,
                cols: doc.cols,
                r: doc.r,
                n: doc.n,
            })
        }
        MatrixFormat::Csv => {
            let mut r = csv::Reader::from_reader(bytes);
            let header = r.headers()?.clone();
            if header.len() % 2 == 0 || header.get(0) != Some("intrinsic") {
                return Err(Error::parse(1, "expected intrinsic,<cols>…,n:<cols>…"));
            }
            let k = (header.len() - 1) / 2;
            let cols: Vec<String> = header.iter().skip(1).take(k).map(str::to_string).collect();
            let mut m = CorrelationMatrix {
                rows: Vec::new(),
                cols,
                r: Vec::new(),
                n: Vec::new(),
            };
            for (i, rec) in r.records().enumerate() {
                let rec = rec?;
                let line = i + 2;
                if rec.len() != 2 * k + 1 {
                    return Err(Error::parse(line, "wrong number of fields"));
                }
                m.rows.push(rec[0].to_string());
                let mut rs = Vec::with_capacity(k);
                for f in rec.iter().skip(1).take(k) {
                    rs.push(if f.is_empty() {
                        None
                    } else {
                        Some(f.parse().map_err(|_| Error::parse(line, format!("bad r {f:?}")))?)
                    });
                }
                let mut ns = Vec::with_capacity(k);
                for f in rec.iter().skip(1 + k) {
                    ns.push(f.parse().map_err(|_| Error::parse(line, format!("bad n {f:?}")))?);
                }
                m.r.push(rs);
                m.n.push(ns);
            }
            Ok(m)
        }
    }
}

/// Builds a table from per-model value rows aligned with `metrics`.
pub fn table_from_rows(
    metrics: &[MetricDescriptor],
    rows: &[(&str, Vec<Option<f64>>)],
) -> Result<ScoreTable> {
    let mut t = ScoreTable::new();
    for m in metrics {
        t.add_metric(m.clone())?;
    }
    for (model, vals) in rows {
        if vals.len() != metrics.len() {
            return Err(Error::LengthMismatch(vals.len(), metrics.len()));
        }
        t.add_model(model);
        for (m, v) in metrics.iter().zip(vals) {
            if let Some(v) = v {
                t.set(model, m, *v)?;
            }
        }
    }
    Ok(t)
}
