//! Seeded synthetic stores with planted structure.
//!
//! Every generator builds a [`Fixture`] and runs [`Fixture::verify`] on it
//! before returning, so a returned fixture always satisfies its certificate.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::datasets::{
    AnalogyDataset, AnalogyFormat, AnalogyQuestion, AnalogySection, CategorizationDataset, OutlierDataset,
    OutlierGroup, SequenceCorpus, SimilarityDataset, SimilarityPair,
};
use crate::error::{Error, Result};
use crate::rng::{normal, seeded, Rng};
use crate::vecstore::{cosine, dot, norm, store_binary_embeddings, store_text_embeddings, Header, VecStore};

/// Largest cosine any analogy distractor may have with the offset target.
pub const ANALOGY_DISTRACTOR_BOUND: f64 = 0.5;
/// Gap between the outlier's mean cosine and the lowest member's.
pub const OUTLIER_MARGIN: f64 = 0.1;
/// Minimum `|u · x|` of every tagging word.
pub const TAGGING_MARGIN: f64 = 0.25;
/// Minimum gap between any two planted similarity cosines.
pub const SIMILARITY_GAP: f64 = 1e-9;

pub const POSITIVE_TAG: &str = "P";
pub const NEGATIVE_TAG: &str = "N";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Structure {
    /// Gaussian rows, no gold data.
    Random,
    /// Gold scores are the ranks of the true cosines.
    SimilarityMonotone { pairs: usize },
    /// `b* = b + (a* − a)` holds exactly for every question.
    AnalogyOffsets { relations: usize, questions: usize },
    /// `k` well separated clusters, one category each.
    Blobs { k: usize, separation: f64 },
    /// Tight groups, each with one word from elsewhere appended last.
    OutlierGroups { groups: usize, group_size: usize },
    /// The tag of a token is the sign of a fixed linear functional of its row.
    SeparableTagging { sentences: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub seed: u64,
    pub vocab: usize,
    pub dim: usize,
    pub structure: Structure,
}

impl PlantedSpec {
    pub fn new(seed: u64, vocab: usize, dim: usize, structure: Structure) -> Self {
        PlantedSpec {
            seed,
            vocab,
            dim,
            structure,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.vocab == 0 || self.dim == 0 {
            return Err(Error::InvalidArgument("vocab and dim must be positive".into()));
        }
        let positive = match &self.structure {
            Structure::Random => true,
            Structure::SimilarityMonotone { pairs } => *pairs > 0,
            Structure::AnalogyOffsets { relations, questions } => *relations > 0 && *questions > 0,
            Structure::Blobs { k, separation } => {
                if !(separation.is_finite() && *separation > 0.0) {
                    return Err(Error::InvalidArgument(format!("separation {separation} must be positive")));
                }
                *k > 0
            }
            Structure::OutlierGroups { groups, group_size } => *groups > 0 && *group_size > 0,
            Structure::SeparableTagging { sentences } => *sentences > 0,
        };
        if !positive {
            return Err(Error::InvalidArgument("structure sizes must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gold {
    None,
    Similarity(SimilarityDataset),
    Analogy(AnalogyDataset),
    Categorization(CategorizationDataset),
    Outlier(OutlierDataset),
    Tagging {
        corpus: SequenceCorpus,
        /// Unit vector whose sign against a row decides the row's tag.
        functional: Vec<f64>,
    },
}

impl Gold {
    /// File name used by [`Fixture::write_to`], if there is gold data.
    pub fn file_name(&self) -> Option<&'static str> {
        match self {
            Gold::None => None,
            Gold::Similarity(_) => Some("similarity.txt"),
            Gold::Analogy(_) => Some("analogy.txt"),
            Gold::Categorization(_) => Some("categorization.txt"),
            Gold::Outlier(_) => Some("outliers.txt"),
            Gold::Tagging { .. } => Some("tagging.conll"),
        }
    }

    /// The gold data in the grammar its parser reads.
    pub fn to_text(&self) -> Option<String> {
        match self {
            Gold::None => None,
            Gold::Similarity(d) => Some(d.to_text()),
            Gold::Analogy(d) => Some(d.to_text()),
            Gold::Categorization(d) => Some(d.to_text()),
            Gold::Outlier(d) => Some(d.to_text()),
            Gold::Tagging { corpus, .. } => Some(corpus.to_text()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub spec: PlantedSpec,
    pub store: VecStore,
    pub gold: Gold,
}

pub const VECTORS_FILE: &str = "vectors.txt";
pub const VECTORS_BIN_FILE: &str = "vectors.bin";
pub const SPEC_FILE: &str = "spec.json";

impl Fixture {
    /// Re-checks the structure's certificate against the stored data.
    pub fn verify(&self) -> Result<()> {
        match (&self.spec.structure, &self.gold) {
            (Structure::Random, Gold::None) => Ok(()),
            (Structure::SimilarityMonotone { .. }, Gold::Similarity(d)) => verify_similarity(&self.store, d),
            (Structure::AnalogyOffsets { .. }, Gold::Analogy(d)) => verify_analogy(&self.store, d),
            (Structure::Blobs { separation, .. }, Gold::Categorization(d)) => {
                verify_blobs(&self.store, d, *separation)
            }
            (Structure::OutlierGroups { .. }, Gold::Outlier(d)) => verify_outliers(&self.store, d),
            (Structure::SeparableTagging { .. }, Gold::Tagging { corpus, functional }) => {
                verify_tagging(&self.store, corpus, functional)
            }
            _ => Err(Error::InvalidArgument("gold data does not match the structure".into())),
        }
    }

    /// Writes `spec.json`, `vectors.txt` and the gold file into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        self.write_with(dir, false)
    }

    /// As [`Fixture::write_to`]; with `binary` the vectors go to
    /// `vectors.bin` in word2vec binary format instead.
    pub fn write_with(&self, dir: &Path, binary: bool) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let spec = dir.join(SPEC_FILE);
        let mut json = serde_json::to_string_pretty(&self.spec)?;
        json.push('\n');
        fs::write(&spec, json)?;
        written.push(spec);

        let mut buf = Vec::new();
        let vectors = if binary {
            store_binary_embeddings(&self.store, &mut buf)?;
            dir.join(VECTORS_BIN_FILE)
        } else {
            store_text_embeddings(&self.store, Header::Absent, &mut buf)?;
            dir.join(VECTORS_FILE)
        };
        fs::write(&vectors, buf)?;
        written.push(vectors);

        if let (Some(name), Some(text)) = (self.gold.file_name(), self.gold.to_text()) {
            let path = dir.join(name);
            fs::write(&path, text)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// A spec with the directory name it is written under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedSpec {
    pub name: String,
    pub seed: u64,
    pub vocab: usize,
    pub dim: usize,
    pub structure: Structure,
}

impl NamedSpec {
    pub fn spec(&self) -> PlantedSpec {
        PlantedSpec::new(self.seed, self.vocab, self.dim, self.structure.clone())
    }
}

/// A TOML list of `[[fixture]]` tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureSet {
    #[serde(rename = "fixture")]
    pub fixtures: Vec<NamedSpec>,
}

impl FixtureSet {
    pub fn from_toml(source: &str) -> Result<Self> {
        toml::from_str(source).map_err(|e| Error::Config(e.to_string()))
    }
}

/// One small fixture per structure, all seeded with `seed`.
pub fn default_suite(seed: u64) -> FixtureSet {
    let named = |name: &str, vocab, dim, structure| NamedSpec {
        name: name.into(),
        seed,
        vocab,
        dim,
        structure,
    };
    FixtureSet {
        fixtures: vec![
            named("random", 100, 16, Structure::Random),
            named("similarity", 200, 16, Structure::SimilarityMonotone { pairs: 100 }),
            named(
                "analogy",
                160,
                100,
                Structure::AnalogyOffsets {
                    relations: 4,
                    questions: 200,
                },
            ),
            named("blobs", 90, 8, Structure::Blobs { k: 3, separation: 10.0 }),
            named(
                "outliers",
                64,
                16,
                Structure::OutlierGroups {
                    groups: 8,
                    group_size: 8,
                },
            ),
            named("tagging", 300, 20, Structure::SeparableTagging { sentences: 200 }),
        ],
    }
}

fn word_names(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("w{i:0width$}")).collect()
}

fn gaussian_rows(rng: &mut Rng, n: usize, dim: usize) -> Vec<f64> {
    let mut data = Vec::with_capacity(n * dim);
    while data.len() < n * dim {
        let row: Vec<f64> = (0..dim).map(|_| normal(rng)).collect();
        // keep every row usable
        if norm(&row) > 0.0 {
            data.extend(row);
        }
    }
    data
}

fn unit_gaussian(rng: &mut Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| normal(rng)).collect();
        let n = norm(&v);
        if n > 0.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Builds the fixture described by `spec`, checking its certificate.
pub fn generate(spec: &PlantedSpec) -> Result<Fixture> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);
    let (store, gold) = match &spec.structure {
        Structure::Random => {
            let data = gaussian_rows(&mut rng, spec.vocab, spec.dim);
            (VecStore::from_rows(word_names(spec.vocab), data, spec.dim)?, Gold::None)
        }
        Structure::SimilarityMonotone { pairs } => similarity_monotone(&mut rng, spec, *pairs)?,
        Structure::AnalogyOffsets { relations, questions } => {
            analogy_offsets(&mut rng, spec, *relations, *questions)?
        }
        Structure::Blobs { k, separation } => blobs(&mut rng, spec, *k, *separation)?,
        Structure::OutlierGroups { groups, group_size } => outlier_groups(&mut rng, spec, *groups, *group_size)?,
        Structure::SeparableTagging { sentences } => separable_tagging(&mut rng, spec, *sentences)?,
    };
    let fixture = Fixture {
        spec: spec.clone(),
        store,
        gold,
    };
    fixture.verify()?;
    Ok(fixture)
}

// ---------------------------------------------------------------------------
// similarity

fn similarity_monotone(rng: &mut Rng, spec: &PlantedSpec, pairs: usize) -> Result<(VecStore, Gold)> {
    let available = spec.vocab * spec.vocab.saturating_sub(1) / 2;
    if pairs < 2 || pairs > available {
        return Err(Error::InvalidArgument(format!(
            "similarity fixture needs 2..={available} pairs, asked for {pairs}"
        )));
    }
    let words = word_names(spec.vocab);
    let store = VecStore::from_rows(words.clone(), gaussian_rows(rng, spec.vocab, spec.dim), spec.dim)?;
    let mut seen = HashSet::new();
    let mut chosen: Vec<(usize, usize, f64)> = Vec::with_capacity(pairs);
    let mut attempts = 0usize;
    while chosen.len() < pairs {
        attempts += 1;
        if attempts > 100 * available.max(pairs) {
            return Err(Error::InvalidArgument(format!(
                "could not find {pairs} pairs with distinct cosines"
            )));
        }
        let i = rng.gen_range(0..spec.vocab);
        let j = rng.gen_range(0..spec.vocab);
        let key = (i.min(j), i.max(j));
        if i == j || seen.contains(&key) {
            continue;
        }
        let c = cosine(store.row(i), store.row(j))?;
        if chosen.iter().any(|&(_, _, o)| (o - c).abs() < SIMILARITY_GAP) {
            continue;
        }
        seen.insert(key);
        chosen.push((i, j, c));
    }
    let mut order: Vec<usize> = (0..pairs).collect();
    order.sort_by(|&a, &b| chosen[a].2.total_cmp(&chosen[b].2));
    let mut gold = vec![0.0; pairs];
    for (rank, &k) in order.iter().enumerate() {
        gold[k] = (rank + 1) as f64;
    }
    let ds = SimilarityDataset {
        name: "planted-similarity".into(),
        pairs: chosen
            .iter()
            .zip(gold)
            .map(|(&(i, j, _), g)| SimilarityPair {
                word1: words[i].clone(),
                word2: words[j].clone(),
                gold: g,
            })
            .collect(),
    };
    Ok((store, Gold::Similarity(ds)))
}

fn verify_similarity(store: &VecStore, ds: &SimilarityDataset) -> Result<()> {
    let mut scored = Vec::with_capacity(ds.pairs.len());
    for p in &ds.pairs {
        let (Some(i), Some(j)) = (store.resolve(&p.word1), store.resolve(&p.word2)) else {
            return Err(Error::Oov(format!("{} / {}", p.word1, p.word2)));
        };
        scored.push((cosine(store.row(i), store.row(j))?, p.gold));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in scored.windows(2) {
        if !(w[1].0 - w[0].0 >= SIMILARITY_GAP && w[1].1 > w[0].1) {
            return Err(Error::InvalidArgument(
                "similarity certificate: gold is not strictly increasing in cosine".into(),
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// analogy

/// Each relation `r` owns `m` lexeme axes and two state axes. Word `(r, i)`
/// in state `s` is `lexeme(r, i) + 0.5 · state(r, s)`, so every row has the
/// same norm and the offset between the two states is shared by the relation.
fn analogy_offsets(
    rng: &mut Rng,
    spec: &PlantedSpec,
    relations: usize,
    questions: usize,
) -> Result<(VecStore, Gold)> {
    if spec.vocab % (2 * relations) != 0 {
        return Err(Error::InvalidArgument(format!(
            "vocab {} is not a multiple of 2 × {relations} relations",
            spec.vocab
        )));
    }
    let m = spec.vocab / (2 * relations);
    if m < 2 {
        return Err(Error::InvalidArgument("each relation needs at least 2 word pairs".into()));
    }
    let needed = relations * m + 2 * relations;
    if spec.dim < needed {
        return Err(Error::InvalidArgument(format!(
            "analogy fixture needs dim >= {needed}, got {}",
            spec.dim
        )));
    }
    let available = relations * m * (m - 1);
    if questions > available {
        return Err(Error::InvalidArgument(format!(
            "only {available} distinct questions exist, asked for {questions}"
        )));
    }
    let d = spec.dim;
    let state_axis = |r: usize, s: usize| relations * m + 2 * r + s;
    let index = |r: usize, i: usize, s: usize| (r * m + i) * 2 + s;
    let words: Vec<String> = (0..spec.vocab)
        .map(|k| {
            let (lex, s) = (k / 2, k % 2);
            format!("r{}x{}{}", lex / m, lex % m, if s == 0 { "a" } else { "b" })
        })
        .collect();
    let mut data = vec![0.0; spec.vocab * d];
    for r in 0..relations {
        for i in 0..m {
            for s in 0..2 {
                let row = &mut data[index(r, i, s) * d..(index(r, i, s) + 1) * d];
                row[r * m + i] = 1.0;
                row[state_axis(r, s)] = 0.5;
            }
        }
    }
    let store = VecStore::from_rows(words.clone(), data, d)?;

    let mut all: Vec<(usize, usize, usize)> = Vec::with_capacity(available);
    for r in 0..relations {
        for i in 0..m {
            for j in (0..m).filter(|&j| j != i) {
                all.push((r, i, j));
            }
        }
    }
    let mut picked: Vec<(usize, usize, usize)> = all.choose_multiple(rng, questions).copied().collect();
    picked.sort_unstable();
    let sections = (0..relations)
        .map(|r| AnalogySection {
            name: format!("relation-{r}"),
            questions: picked
                .iter()
                .filter(|q| q.0 == r)
                .map(|&(r, i, j)| AnalogyQuestion {
                    a: words[index(r, i, 0)].clone(),
                    a_star: words[index(r, i, 1)].clone(),
                    b: words[index(r, j, 0)].clone(),
                    b_star: words[index(r, j, 1)].clone(),
                })
                .collect(),
        })
        .filter(|s: &AnalogySection| !s.questions.is_empty())
        .collect();
    let ds = AnalogyDataset {
        name: "planted-analogy".into(),
        format: AnalogyFormat::Google,
        sections,
    };
    Ok((store, Gold::Analogy(ds)))
}

fn verify_analogy(store: &VecStore, ds: &AnalogyDataset) -> Result<()> {
    let row = |w: &str| store.resolve(w).map(|i| store.row(i)).ok_or_else(|| Error::Oov(w.to_string()));
    for (_, q) in ds.questions() {
        let (a, a_star, b, b_star) = (row(&q.a)?, row(&q.a_star)?, row(&q.b)?, row(&q.b_star)?);
        let target: Vec<f64> = (0..store.dim()).map(|k| a_star[k] - a[k] + b[k]).collect();
        if target != b_star {
            return Err(Error::InvalidArgument(format!(
                "analogy certificate: {} != {} + ({} - {})",
                q.b_star, q.b, q.a_star, q.a
            )));
        }
        let excluded = [&q.a, &q.a_star, &q.b, &q.b_star];
        for (w, r) in store.words().iter().zip(store.rows()) {
            if excluded.contains(&w) {
                continue;
            }
            if cosine(r, &target)? > ANALOGY_DISTRACTOR_BOUND {
                return Err(Error::InvalidArgument(format!(
                    "analogy certificate: distractor {w} too close to the target of {} {} {}",
                    q.a, q.a_star, q.b
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// blobs

/// Centres on orthonormal axes (pairwise distance √2) and uniform-direction
/// noise of radius at most `√2 / (2 · separation)`.
fn blobs(rng: &mut Rng, spec: &PlantedSpec, k: usize, separation: f64) -> Result<(VecStore, Gold)> {
    if k > spec.vocab {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds vocab {}", spec.vocab)));
    }
    if k > spec.dim {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds dim {}", spec.dim)));
    }
    let d = spec.dim;
    let max_radius = std::f64::consts::SQRT_2 / (2.0 * separation);
    let words = word_names(spec.vocab);
    let mut data = Vec::with_capacity(spec.vocab * d);
    let mut entries = Vec::with_capacity(spec.vocab);
    for (n, w) in words.iter().enumerate() {
        let c = n % k;
        let dir = unit_gaussian(rng, d);
        let radius = max_radius * rng.gen::<f64>();
        let mut row: Vec<f64> = dir.iter().map(|x| x * radius).collect();
        row[c] += 1.0;
        data.extend(row);
        entries.push((w.clone(), format!("cat{c}")));
    }
    let categories = (0..k).map(|c| format!("cat{c}")).collect();
    let store = VecStore::from_rows(words, data, d)?;
    let ds = CategorizationDataset {
        name: "planted-blobs".into(),
        entries,
        categories,
    };
    Ok((store, Gold::Categorization(ds)))
}

fn verify_blobs(store: &VecStore, ds: &CategorizationDataset, separation: f64) -> Result<()> {
    let d = store.dim();
    let mut members: Vec<Vec<&[f64]>> = vec![Vec::new(); ds.categories.len()];
    for (w, c) in &ds.entries {
        let ci = ds.categories.iter().position(|x| x == c).ok_or_else(|| {
            Error::InvalidArgument(format!("unknown category {c}"))
        })?;
        let i = store.resolve(w).ok_or_else(|| Error::Oov(w.clone()))?;
        members[ci].push(store.row(i));
    }
    let centroids: Vec<Vec<f64>> = members
        .iter()
        .map(|m| (0..d).map(|k| m.iter().map(|r| r[k]).sum::<f64>() / m.len() as f64).collect())
        .collect();
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let max_radius = members
        .iter()
        .zip(&centroids)
        .flat_map(|(m, c)| m.iter().map(move |r| dist(r, c)))
        .fold(0.0, f64::max);
    for a in 0..centroids.len() {
        for b in (a + 1)..centroids.len() {
            if dist(&centroids[a], &centroids[b]) < separation * max_radius {
                return Err(Error::InvalidArgument(format!(
                    "blobs certificate: clusters {a} and {b} are closer than {separation} radii"
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// outliers

/// Group `g` clusters around axis `2g`; its outlier sits near axis `2g + 1`.
/// Words beyond the groups are plain Gaussian rows.
fn outlier_groups(rng: &mut Rng, spec: &PlantedSpec, groups: usize, size: usize) -> Result<(VecStore, Gold)> {
    if size < 3 {
        return Err(Error::InvalidArgument("outlier groups need at least 3 words".into()));
    }
    if groups * size > spec.vocab {
        return Err(Error::InvalidArgument(format!(
            "{groups} groups of {size} need {} words, vocab is {}",
            groups * size,
            spec.vocab
        )));
    }
    if spec.dim < 2 * groups {
        return Err(Error::InvalidArgument(format!("outlier fixture needs dim >= {}", 2 * groups)));
    }
    let d = spec.dim;
    let noise = 0.2 / (d as f64).sqrt();
    let words = word_names(spec.vocab);
    let mut data = Vec::with_capacity(spec.vocab * d);
    let mut out = Vec::with_capacity(groups);
    for g in 0..groups {
        let mut group_words = Vec::with_capacity(size);
        for m in 0..size {
            let axis = if m + 1 == size { 2 * g + 1 } else { 2 * g };
            let mut row: Vec<f64> = (0..d).map(|_| noise * normal(rng)).collect();
            row[axis] += 1.0;
            data.extend(row);
            group_words.push(words[g * size + m].clone());
        }
        out.push(OutlierGroup::new(group_words, size - 1)?);
    }
    data.extend(gaussian_rows(rng, spec.vocab - groups * size, d));
    let store = VecStore::from_rows(words, data, d)?;
    let ds = OutlierDataset {
        name: "planted-outliers".into(),
        groups: out,
    };
    Ok((store, Gold::Outlier(ds)))
}

fn verify_outliers(store: &VecStore, ds: &OutlierDataset) -> Result<()> {
    for g in &ds.groups {
        let rows = g
            .words
            .iter()
            .map(|w| store.resolve(w).map(|i| store.row(i)).ok_or_else(|| Error::Oov(w.clone())))
            .collect::<Result<Vec<_>>>()?;
        let n = rows.len();
        let mean_cos = |i: usize| -> Result<f64> {
            let mut s = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                s += cosine(rows[i], rows[j])?;
            }
            Ok(s / (n - 1) as f64)
        };
        let outlier = mean_cos(g.outlier)?;
        for i in (0..n).filter(|&i| i != g.outlier) {
            if mean_cos(i)? - outlier < OUTLIER_MARGIN {
                return Err(Error::InvalidArgument(format!(
                    "outlier certificate: {} is within the margin of outlier {}",
                    g.words[i],
                    g.outlier_word()
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// tagging

fn separable_tagging(rng: &mut Rng, spec: &PlantedSpec, sentences: usize) -> Result<(VecStore, Gold)> {
    let d = spec.dim;
    let functional = unit_gaussian(rng, d);
    let mut data = Vec::with_capacity(spec.vocab * d);
    let mut tags = Vec::with_capacity(spec.vocab);
    while tags.len() < spec.vocab {
        let row: Vec<f64> = (0..d).map(|_| normal(rng)).collect();
        let s = dot(&row, &functional);
        if s.abs() < TAGGING_MARGIN {
            continue;
        }
        tags.push(if s > 0.0 { POSITIVE_TAG } else { NEGATIVE_TAG });
        data.extend(row);
    }
    if !tags.contains(&POSITIVE_TAG) || !tags.contains(&NEGATIVE_TAG) {
        return Err(Error::InvalidArgument("tagging vocabulary has a single class; raise vocab".into()));
    }
    let words = word_names(spec.vocab);
    let mut sents = Vec::with_capacity(sentences);
    let mut labels = Vec::with_capacity(sentences);
    for _ in 0..sentences {
        let len = rng.gen_range(3..=10);
        let ids: Vec<usize> = (0..len).map(|_| rng.gen_range(0..spec.vocab)).collect();
        sents.push(ids.iter().map(|&i| words[i].clone()).collect());
        labels.push(ids.iter().map(|&i| tags[i].to_string()).collect());
    }
    let store = VecStore::from_rows(words, data, d)?;
    let corpus = SequenceCorpus::new(sents, labels)?;
    Ok((store, Gold::Tagging { corpus, functional }))
}

fn verify_tagging(store: &VecStore, corpus: &SequenceCorpus, functional: &[f64]) -> Result<()> {
    for (s, l) in corpus.sentences.iter().zip(&corpus.labels) {
        for (w, t) in s.iter().zip(l) {
            let i = store.resolve(w).ok_or_else(|| Error::Oov(w.clone()))?;
            let v = dot(store.row(i), functional);
            let expected = if v > 0.0 { POSITIVE_TAG } else { NEGATIVE_TAG };
            if v.abs() < TAGGING_MARGIN || t != expected {
                return Err(Error::InvalidArgument(format!(
                    "tagging certificate: {w} has projection {v} but tag {t}"
                )));
            }
        }
    }
    Ok(())
}
