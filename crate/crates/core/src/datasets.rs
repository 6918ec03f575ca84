//! Gold-data parsers and coverage accounting.
//!
//! File grammars:
//!
//! | kind            | line grammar                                                      |
//! |-----------------|-------------------------------------------------------------------|
//! | similarity      | `w1 w2 score`, separated by tabs, commas, or spaces (one per file) |
//! | google analogy  | `: section-name` headers, then `a a* b b*` lines                  |
//! | msr analogy     | `a a* b b*` lines, one implicit section                           |
//! | categorization  | `word<TAB>category`                                               |
//! | outliers        | cluster words one per line, blank line, outlier words, blank line |
//! | linguistic      | `word prop:value prop:value …`                                    |
//! | CoNLL           | whitespace columns, token first, tag last, blank line ends a sentence |
//!
//! Blank lines and lines starting with `#` are ignored except where blank
//! lines are structural (outliers, CoNLL).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vecstore::VecStore;

fn data_lines(source: &str) -> impl Iterator<Item = (usize, &str)> {
    source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Words a dataset item references. An item is usable iff all resolve.
pub trait GoldData {
    fn items(&self) -> Vec<Vec<&str>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coverage {
    pub usable: usize,
    pub total: usize,
    pub ratio: f64,
}

impl Coverage {
    pub fn new(usable: usize, total: usize) -> Self {
        let ratio = if total == 0 {
            0.0
        } else {
            usable as f64 / total as f64
        };
        Coverage {
            usable,
            total,
            ratio,
        }
    }
}

/// Fraction of items whose words all resolve in `store`.
///
/// Under the skip policy a word resolves when it has a usable (non-zero)
/// row. Under the shared-UNK policy every word resolves.
pub fn coverage<D: GoldData + ?Sized>(dataset: &D, store: &VecStore) -> Coverage {
    let items = dataset.items();
    let usable = items
        .iter()
        .filter(|words| words.iter().all(|w| resolves(store, w)))
        .count();
    Coverage::new(usable, items.len())
}

pub(crate) fn resolves(store: &VecStore, word: &str) -> bool {
    match store.oov_policy() {
        crate::OovPolicy::SharedUnk => true,
        crate::OovPolicy::Skip => store.resolve(word).is_some(),
    }
}

// ---------------------------------------------------------------------------
// similarity

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityPair {
    pub word1: String,
    pub word2: String,
    pub gold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityDataset {
    pub name: String,
    pub pairs: Vec<SimilarityPair>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Separator {
    Tab,
    Comma,
    Space,
}

impl Separator {
    fn detect(line: &str) -> Self {
        if line.contains('\t') {
            Separator::Tab
        } else if line.contains(',') {
            Separator::Comma
        } else {
            Separator::Space
        }
    }

    fn split(self, line: &str) -> Vec<&str> {
        match self {
            Separator::Tab => line.split('\t').map(str::trim).collect(),
            Separator::Comma => line.split(',').map(str::trim).collect(),
            Separator::Space => line.split_whitespace().collect(),
        }
    }
}

pub fn parse_similarity(name: &str, source: &str) -> Result<SimilarityDataset> {
    let mut sep = None;
    let mut pairs = Vec::new();
    for (lineno, line) in data_lines(source) {
        let s = *sep.get_or_insert_with(|| Separator::detect(line));
        if s != Separator::detect(line) {
            return Err(Error::parse(lineno, "separator differs from the rest of the file"));
        }
        let fields = s.split(line);
        if fields.len() != 3 {
            return Err(Error::parse(
                lineno,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        }
        let gold: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad score {:?}", fields[2])))?;
        if !gold.is_finite() {
            return Err(Error::parse(lineno, "score is not finite"));
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(Error::parse(lineno, "empty word"));
        }
        pairs.push(SimilarityPair {
            word1: fields[0].to_string(),
            word2: fields[1].to_string(),
            gold,
        });
    }
    if pairs.len() < 2 {
        return Err(Error::Insufficient(format!(
            "similarity dataset needs at least 2 pairs, found {}",
            pairs.len()
        )));
    }
    Ok(SimilarityDataset {
        name: name.to_string(),
        pairs,
    })
}

impl SimilarityDataset {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            let _ = writeln!(out, "{}\t{}\t{}", p.word1, p.word2, p.gold);
        }
        out
    }
}

impl GoldData for SimilarityDataset {
    fn items(&self) -> Vec<Vec<&str>> {
        self.pairs
            .iter()
            .map(|p| vec![p.word1.as_str(), p.word2.as_str()])
            .collect()
    }
}

// ---------------------------------------------------------------------------
// analogy

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalogyFormat {
    Google,
    Msr,
}

/// `a : a_star :: b : b_star`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalogyQuestion {
    pub a: String,
    pub a_star: String,
    pub b: String,
    pub b_star: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalogySection {
    pub name: String,
    pub questions: Vec<AnalogyQuestion>,
}

impl AnalogySection {
    /// Google-format sections named `gram…` hold morpho-syntactic questions.
    pub fn is_syntactic(&self) -> bool {
        self.name.starts_with("gram")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalogyDataset {
    pub name: String,
    pub format: AnalogyFormat,
    pub sections: Vec<AnalogySection>,
}

pub const MSR_SECTION: &str = "all";

fn parse_question(lineno: usize, line: &str) -> Result<AnalogyQuestion> {
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != 4 {
        return Err(Error::parse(
            lineno,
            format!("expected 4 words, found {}", f.len()),
        ));
    }
    Ok(AnalogyQuestion {
        a: f[0].to_string(),
        a_star: f[1].to_string(),
        b: f[2].to_string(),
        b_star: f[3].to_string(),
    })
}

pub fn parse_analogy(name: &str, source: &str, format: AnalogyFormat) -> Result<AnalogyDataset> {
    let mut sections: Vec<AnalogySection> = Vec::new();
    let mut seen = HashSet::new();
    if format == AnalogyFormat::Msr {
        sections.push(AnalogySection {
            name: MSR_SECTION.to_string(),
            questions: Vec::new(),
        });
    }
    for (lineno, line) in data_lines(source) {
        if let Some(header) = line.strip_prefix(':') {
            if format == AnalogyFormat::Msr {
                return Err(Error::parse(lineno, "section headers are not allowed in MSR format"));
            }
            let header = header.trim();
            if header.is_empty() {
                return Err(Error::parse(lineno, "empty section name"));
            }
            if !seen.insert(header.to_string()) {
                return Err(Error::parse(lineno, format!("duplicate section {header:?}")));
            }
            sections.push(AnalogySection {
                name: header.to_string(),
                questions: Vec::new(),
            });
            continue;
        }
        let q = parse_question(lineno, line)?;
        match sections.last_mut() {
            Some(s) => s.questions.push(q),
            None => return Err(Error::parse(lineno, "question before any \": section\" header")),
        }
    }
    Ok(AnalogyDataset {
        name: name.to_string(),
        format,
        sections,
    })
}

impl AnalogyDataset {
    pub fn len(&self) -> usize {
        self.sections.iter().map(|s| s.questions.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn questions(&self) -> impl Iterator<Item = (&AnalogySection, &AnalogyQuestion)> {
        self.sections
            .iter()
            .flat_map(|s| s.questions.iter().map(move |q| (s, q)))
    }

    /// `(semantic, syntactic)` question counts.
    pub fn split_counts(&self) -> (usize, usize) {
        self.sections.iter().fold((0, 0), |(sem, syn), s| {
            if s.is_syntactic() {
                (sem, syn + s.questions.len())
            } else {
                (sem + s.questions.len(), syn)
            }
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            if self.format == AnalogyFormat::Google {
                let _ = writeln!(out, ": {}", s.name);
            }
            for q in &s.questions {
                let _ = writeln!(out, "{} {} {} {}", q.a, q.a_star, q.b, q.b_star);
            }
        }
        out
    }
}

impl GoldData for AnalogyDataset {
    fn items(&self) -> Vec<Vec<&str>> {
        self.questions()
            .map(|(_, q)| vec![q.a.as_str(), q.a_star.as_str(), q.b.as_str(), q.b_star.as_str()])
            .collect()
    }
}

// ---------------------------------------------------------------------------
// categorization

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorizationDataset {
    pub name: String,
    pub entries: Vec<(String, String)>,
    pub categories: Vec<String>,
}

pub fn parse_categorization(name: &str, source: &str) -> Result<CategorizationDataset> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    let mut categories = Vec::new();
    for (lineno, line) in data_lines(source) {
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::parse(lineno, "expected \"word<TAB>category\""));
        }
        if !seen.insert(fields[0].to_string()) {
            return Err(Error::parse(lineno, format!("word {:?} listed twice", fields[0])));
        }
        if !categories.iter().any(|c| c == fields[1]) {
            categories.push(fields[1].to_string());
        }
        entries.push((fields[0].to_string(), fields[1].to_string()));
    }
    if categories.len() < 2 {
        return Err(Error::Insufficient(format!(
            "categorization needs at least 2 categories, found {}",
            categories.len()
        )));
    }
    Ok(CategorizationDataset {
        name: name.to_string(),
        entries,
        categories,
    })
}

impl CategorizationDataset {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (w, c) in &self.entries {
            let _ = writeln!(out, "{w}\t{c}");
        }
        out
    }
}

impl GoldData for CategorizationDataset {
    fn items(&self) -> Vec<Vec<&str>> {
        self.entries.iter().map(|(w, _)| vec![w.as_str()]).collect()
    }
}

// ---------------------------------------------------------------------------
// outliers

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutlierFormat {
    /// Cluster block then an outlier block of any size.
    #[serde(rename = "wordsim500")]
    WordSim500,
    /// Exactly 8 cluster words then exactly 8 outliers.
    #[serde(rename = "eight888")]
    Eight888,
}

/// One cluster plus one designated outlier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutlierGroup {
    pub words: Vec<String>,
    pub outlier: usize,
}

impl OutlierGroup {
    pub fn new(words: Vec<String>, outlier: usize) -> Result<Self> {
        if words.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "outlier group needs at least 3 words, got {}",
                words.len()
            )));
        }
        if outlier >= words.len() {
            return Err(Error::InvalidArgument(format!(
                "outlier index {outlier} out of range for {} words",
                words.len()
            )));
        }
        let distinct: HashSet<&String> = words.iter().collect();
        if distinct.len() != words.len() {
            return Err(Error::InvalidArgument("outlier group has repeated words".into()));
        }
        Ok(OutlierGroup { words, outlier })
    }

    pub fn outlier_word(&self) -> &str {
        &self.words[self.outlier]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutlierDataset {
    pub name: String,
    pub groups: Vec<OutlierGroup>,
}

fn blocks(source: &str) -> Vec<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push((i + 1, line));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Parses alternating cluster / outlier blocks. Each (cluster, outlier)
/// pairing becomes one group with the outlier appended last.
pub fn parse_outliers(name: &str, source: &str, format: OutlierFormat) -> Result<OutlierDataset> {
    let blocks = blocks(source);
    if blocks.len() % 2 != 0 {
        let line = blocks.last().map_or(0, |b| b[0].0);
        return Err(Error::parse(line, "cluster block without an outlier block"));
    }
    let mut groups = Vec::new();
    for pair in blocks.chunks(2) {
        let (cluster, outliers) = (&pair[0], &pair[1]);
        let first = cluster[0].0;
        if format == OutlierFormat::Eight888 && (cluster.len() != 8 || outliers.len() != 8) {
            return Err(Error::parse(
                first,
                format!(
                    "8-8-8 format needs 8 cluster words and 8 outliers, found {} and {}",
                    cluster.len(),
                    outliers.len()
                ),
            ));
        }
        if cluster.len() < 2 {
            return Err(Error::parse(first, "cluster needs at least 2 words"));
        }
        let members: Vec<String> = cluster.iter().map(|(_, w)| w.to_string()).collect();
        for &(lineno, outlier) in outliers {
            let mut words = members.clone();
            words.push(outlier.to_string());
            let n = words.len() - 1;
            groups.push(
                OutlierGroup::new(words, n).map_err(|e| Error::parse(lineno, e.to_string()))?,
            );
        }
    }
    if groups.is_empty() {
        return Err(Error::Empty);
    }
    Ok(OutlierDataset {
        name: name.to_string(),
        groups,
    })
}

impl OutlierDataset {
    /// Serializes in the cluster-block / outlier-block grammar.
    ///
    /// Consecutive groups sharing the same members are merged into one block
    /// pair, so parse(to_text()) is the identity for parsed datasets.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.groups.len() {
            let members = self.members(i);
            let mut j = i;
            while j < self.groups.len() && self.members(j) == members {
                j += 1;
            }
            for w in &members {
                let _ = writeln!(out, "{w}");
            }
            out.push('\n');
            for g in &self.groups[i..j] {
                let _ = writeln!(out, "{}", g.outlier_word());
            }
            out.push('\n');
            i = j;
        }
        out
    }

    fn members(&self, i: usize) -> Vec<&str> {
        let g = &self.groups[i];
        g.words
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != g.outlier)
            .map(|(_, w)| w.as_str())
            .collect()
    }
}

impl GoldData for OutlierDataset {
    fn items(&self) -> Vec<Vec<&str>> {
        self.groups
            .iter()
            .map(|g| g.words.iter().map(String::as_str).collect())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// linguistic matrix

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinguisticMatrix {
    pub vocab: Vec<String>,
    pub props: Vec<String>,
    /// Row-major `vocab.len() × props.len()`.
    pub values: Vec<f64>,
}

pub fn parse_linguistic_matrix(source: &str) -> Result<LinguisticMatrix> {
    let mut vocab = Vec::new();
    let mut seen = HashSet::new();
    let mut prop_index: HashMap<String, usize> = HashMap::new();
    let mut props = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    for (lineno, line) in data_lines(source) {
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("data line is non-empty");
        if !seen.insert(word.to_string()) {
            return Err(Error::parse(lineno, format!("word {word:?} listed twice")));
        }
        let mut row = Vec::new();
        let mut in_row = HashSet::new();
        for f in fields {
            let (p, v) = f
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(lineno, format!("expected prop:value, got {f:?}")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad value in {f:?}")))?;
            if !v.is_finite() || p.is_empty() {
                return Err(Error::parse(lineno, format!("bad entry {f:?}")));
            }
            if !in_row.insert(p) {
                return Err(Error::parse(lineno, format!("property {p:?} repeated")));
            }
            let next = props.len();
            let j = *prop_index.entry(p.to_string()).or_insert(next);
            if j == next {
                props.push(p.to_string());
            }
            row.push((j, v));
        }
        vocab.push(word.to_string());
        rows.push(row);
    }
    if vocab.is_empty() {
        return Err(Error::Empty);
    }
    let mut values = vec![0.0; vocab.len() * props.len()];
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row {
            values[i * props.len() + j] = v;
        }
    }
    Ok(LinguisticMatrix {
        vocab,
        props,
        values,
    })
}

impl LinguisticMatrix {
    pub fn new(vocab: Vec<String>, props: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if values.len() != vocab.len() * props.len() {
            return Err(Error::SizeMismatch("linguistic matrix shape".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("linguistic matrix".into()));
        }
        let distinct: HashSet<&String> = props.iter().collect();
        if distinct.len() != props.len() {
            return Err(Error::InvalidArgument("property names must be unique".into()));
        }
        Ok(LinguisticMatrix {
            vocab,
            props,
            values,
        })
    }

    pub fn value(&self, word: usize, prop: usize) -> f64 {
        self.values[word * self.props.len() + prop]
    }

    /// Zero entries are omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, w) in self.vocab.iter().enumerate() {
            out.push_str(w);
            for (j, p) in self.props.iter().enumerate() {
                let v = self.value(i, j);
                if v != 0.0 {
                    let _ = write!(out, " {p}:{v}");
                }
            }
            out.push('\n');
        }
        out
    }
}

impl GoldData for LinguisticMatrix {
    fn items(&self) -> Vec<Vec<&str>> {
        self.vocab.iter().map(|w| vec![w.as_str()]).collect()
    }
}

// ---------------------------------------------------------------------------
// CoNLL

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TagScheme {
    PerToken,
    BioSpans,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceCorpus {
    pub sentences: Vec<Vec<String>>,
    pub labels: Vec<Vec<String>>,
    /// Sorted.
    pub tagset: Vec<String>,
    pub scheme: TagScheme,
}

fn looks_bio(tag: &str) -> bool {
    tag == "O" || tag.starts_with("B-") || tag.starts_with("I-")
}

/// Blank lines end sentences; `-DOCSTART-` lines are skipped. The scheme is
/// BIO when every tag is `O`, `B-*` or `I-*`.
pub fn parse_conll(source: &str) -> Result<SequenceCorpus> {
    let mut sentences = Vec::new();
    let mut labels = Vec::new();
    let (mut toks, mut tags) = (Vec::new(), Vec::new());
    for (i, line) in source.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            if !toks.is_empty() {
                sentences.push(std::mem::take(&mut toks));
                labels.push(std::mem::take(&mut tags));
            }
            continue;
        }
        if line.starts_with("-DOCSTART-") {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() < 2 {
            return Err(Error::parse(i + 1, "expected at least a token and a tag column"));
        }
        toks.push(cols[0].to_string());
        tags.push(cols[cols.len() - 1].to_string());
    }
    if !toks.is_empty() {
        sentences.push(toks);
        labels.push(tags);
    }
    SequenceCorpus::new(sentences, labels)
}

impl SequenceCorpus {
    pub fn new(sentences: Vec<Vec<String>>, labels: Vec<Vec<String>>) -> Result<Self> {
        if sentences.is_empty() {
            return Err(Error::Empty);
        }
        if sentences.len() != labels.len()
            || sentences.iter().zip(&labels).any(|(s, l)| s.len() != l.len())
        {
            return Err(Error::InvalidArgument("tokens and labels are not parallel".into()));
        }
        let tagset: BTreeSet<&String> = labels.iter().flatten().collect();
        let scheme = if tagset.iter().all(|t| looks_bio(t)) {
            TagScheme::BioSpans
        } else {
            TagScheme::PerToken
        };
        let tagset = tagset.into_iter().cloned().collect();
        Ok(SequenceCorpus {
            sentences,
            labels,
            tagset,
            scheme,
        })
    }

    pub fn with_scheme(mut self, scheme: TagScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, l) in self.sentences.iter().zip(&self.labels) {
            for (tok, tag) in s.iter().zip(l) {
                let _ = writeln!(out, "{tok} {tag}");
            }
            out.push('\n');
        }
        out
    }
}

impl GoldData for SequenceCorpus {
    fn items(&self) -> Vec<Vec<&str>> {
        self.sentences
            .iter()
            .map(|s| s.iter().map(String::as_str).collect())
            .collect()
    }
}
