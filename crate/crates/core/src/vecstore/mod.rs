//! Word-vector storage, lookup, and cosine primitives.
//!
//! A [`VecStore`] is immutable once built. All arithmetic is done in `f64`;
//! 32-bit floats only appear at the binary file boundary.

mod io;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{
    load_binary_embeddings, load_text_embeddings, store_binary_embeddings, store_text_embeddings,
    Header, VectorFormat,
};

/// What `lookup` returns for words that are not in the vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OovPolicy {
    /// Unknown words are reported as missing.
    #[default]
    Skip,
    /// Unknown words map to one shared vector, the mean of all rows.
    SharedUnk,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor {
    pub word: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VecStore {
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
    dim: usize,
    norms: Vec<f64>,
    unit_normalized: bool,
    oov_policy: OovPolicy,
    unk: Vec<f64>,
}

impl VecStore {
    /// Builds a store from a vocabulary and a row-major `words.len() × dim` matrix.
    pub fn from_rows(words: Vec<String>, data: Vec<f64>, dim: usize) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Empty);
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if data.len() != words.len() * dim {
            return Err(Error::SizeMismatch(format!(
                "{} words × {} dims needs {} values, got {}",
                words.len(),
                dim,
                words.len() * dim,
                data.len()
            )));
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::DuplicateWord {
                    line: i + 1,
                    word: w.clone(),
                });
            }
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "row {} ({:?}) column {}",
                pos / dim,
                words[pos / dim],
                pos % dim
            )));
        }
        let norms = data.chunks_exact(dim).map(norm).collect();
        let mut store = VecStore {
            words,
            index,
            data,
            dim,
            norms,
            unit_normalized: false,
            oov_policy: OovPolicy::Skip,
            unk: Vec::new(),
        };
        store.unk = store.mean_row();
        Ok(store)
    }

    /// Convenience constructor from `(word, vector)` pairs.
    pub fn from_pairs<S, I>(pairs: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, Vec<f64>)>,
    {
        let mut words = Vec::new();
        let mut data = Vec::new();
        let mut dim = None;
        for (i, (w, v)) in pairs.into_iter().enumerate() {
            let expected = *dim.get_or_insert(v.len());
            if v.len() != expected {
                return Err(Error::DimensionMismatch {
                    line: i + 1,
                    expected,
                    found: v.len(),
                });
            }
            words.push(w.into());
            data.extend(v);
        }
        VecStore::from_rows(words, data, dim.unwrap_or(0))
    }

    fn mean_row(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for row in self.data.chunks_exact(self.dim) {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        let n = self.words.len() as f64;
        mean.iter_mut().for_each(|m| *m /= n);
        mean
    }

    pub fn with_oov_policy(mut self, policy: OovPolicy) -> Self {
        self.oov_policy = policy;
        self
    }

    pub fn oov_policy(&self) -> OovPolicy {
        self.oov_policy
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, idx: usize) -> &str {
        &self.words[idx]
    }

    pub fn row(&self, idx: usize) -> &[f64] {
        &self.data[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn row_norm(&self, idx: usize) -> f64 {
        self.norms[idx]
    }

    pub fn is_unit_normalized(&self) -> bool {
        self.unit_normalized
    }

    /// A row is unusable when it is all zeros; cosine is undefined for it.
    pub fn is_usable(&self, idx: usize) -> bool {
        self.norms[idx] > 0.0
    }

    /// The shared UNK vector: mean of all rows.
    pub fn unk_vector(&self) -> &[f64] {
        &self.unk
    }

    /// Exact match first, then the lowercased form.
    pub fn index_of(&self, word: &str) -> Option<usize> {
        if let Some(&i) = self.index.get(word) {
            return Some(i);
        }
        let lower = word.to_lowercase();
        if lower != word {
            self.index.get(&lower).copied()
        } else {
            None
        }
    }

    /// Index of a word whose row can take part in cosine computations.
    pub fn resolve(&self, word: &str) -> Option<usize> {
        self.index_of(word).filter(|&i| self.is_usable(i))
    }

    /// Row for `word`, honoring the OOV policy. `None` is the OOV marker.
    pub fn lookup(&self, word: &str) -> Option<&[f64]> {
        match (self.index_of(word), self.oov_policy) {
            (Some(i), _) => Some(self.row(i)),
            (None, OovPolicy::SharedUnk) => Some(&self.unk),
            (None, OovPolicy::Skip) => None,
        }
    }

    /// Row for `word`, or the shared UNK vector regardless of policy.
    pub fn row_or_unk(&self, word: &str) -> &[f64] {
        match self.index_of(word) {
            Some(i) => self.row(i),
            None => &self.unk,
        }
    }

    /// Scales each row to unit length. All-zero rows stay zero and unusable.
    pub fn unit_normalize(&self) -> VecStore {
        let mut out = self.clone();
        if self.unit_normalized {
            return out;
        }
        for (row, n) in out.data.chunks_exact_mut(self.dim).zip(&self.norms) {
            if *n > 0.0 {
                row.iter_mut().for_each(|v| *v /= n);
            }
        }
        out.norms = out.data.chunks_exact(self.dim).map(norm).collect();
        out.unit_normalized = true;
        out.unk = out.mean_row();
        out
    }

    /// Top-`k` words by cosine to `query`, skipping `exclude` and unusable rows.
    ///
    /// Scores are sorted descending; equal scores keep vocabulary order.
    pub fn nearest(&self, query: &[f64], k: usize, exclude: &HashSet<&str>) -> Result<Vec<Neighbor>> {
        if query.len() != self.dim {
            return Err(Error::LengthMismatch(query.len(), self.dim));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let qn = norm(query);
        if qn == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut scored: Vec<(f64, usize)> = (0..self.len())
            .filter(|&i| self.is_usable(i) && !exclude.contains(self.words[i].as_str()))
            .map(|i| (dot(query, self.row(i)) / (qn * self.norms[i]), i))
            .collect();
        let by_rank = |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
        if scored.len() > k {
            scored.select_nth_unstable_by(k - 1, by_rank);
            scored.truncate(k);
        }
        scored.sort_unstable_by(by_rank);
        Ok(scored
            .into_iter()
            .map(|(score, i)| Neighbor {
                word: self.words[i].clone(),
                score,
            })
            .collect())
    }
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Cosine similarity `u·v / (‖u‖‖v‖)`.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(dot(u, v) / (nu * nv))
}
