use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::tagger::WindowTagger;
use crate::datasets::{SequenceCorpus, TagScheme};
use crate::error::{Error, Result};
use crate::vecstore::VecStore;

/// A labeled span `[start, end)` within one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub label: String,
}

fn split_tag(tag: &str) -> (Option<char>, &str) {
    match tag.split_once('-') {
        Some((p, label)) if p == "B" || p == "I" => (p.chars().next(), label),
        _ => (None, tag),
    }
}

/// Decodes BIO tags with conlleval semantics: a span is a `B-X` followed by
/// `I-X` tags, and an `I-X` that does not continue an `X` span opens one.
pub fn bio_spans<S: AsRef<str>>(tags: &[S]) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut open: Option<(usize, &str)> = None;
    for (i, tag) in tags.iter().enumerate() {
        let tag = tag.as_ref();
        let (prefix, label) = split_tag(tag);
        let continues = matches!((prefix, open), (Some('I'), Some((_, l))) if l == label);
        if continues {
            continue;
        }
        if let Some((start, l)) = open.take() {
            spans.push(Span {
                start,
                end: i,
                label: l.to_string(),
            });
        }
        if prefix.is_some() {
            open = Some((i, label));
        }
    }
    if let Some((start, l)) = open {
        spans.push(Span {
            start,
            end: tags.len(),
            label: l.to_string(),
        });
    }
    spans
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpanScores {
    pub gold_spans: usize,
    pub predicted_spans: usize,
    pub correct_spans: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Micro-averaged exact-match span precision, recall and F1.
///
/// Precision (recall) is 0 when nothing was predicted (nothing is gold);
/// F1 is 0 when P + R = 0.
pub fn span_scores<S: AsRef<str>, T: AsRef<str>>(gold: &[Vec<S>], predicted: &[Vec<T>]) -> Result<SpanScores> {
    if gold.len() != predicted.len() {
        return Err(Error::LengthMismatch(gold.len(), predicted.len()));
    }
    let mut s = SpanScores::default();
    for (g, p) in gold.iter().zip(predicted) {
        if g.len() != p.len() {
            return Err(Error::LengthMismatch(g.len(), p.len()));
        }
        let gs: HashSet<Span> = bio_spans(g).into_iter().collect();
        let ps = bio_spans(p);
        s.gold_spans += gs.len();
        s.predicted_spans += ps.len();
        s.correct_spans += ps.iter().filter(|sp| gs.contains(sp)).count();
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    s.precision = ratio(s.correct_spans, s.predicted_spans);
    s.recall = ratio(s.correct_spans, s.gold_spans);
    s.f1 = if s.precision + s.recall == 0.0 {
        0.0
    } else {
        2.0 * s.precision * s.recall / (s.precision + s.recall)
    };
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TagCounts {
    pub gold: usize,
    pub predicted: usize,
    pub correct: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagMetrics {
    pub token_accuracy: f64,
    pub tokens: usize,
    /// Present for BIO-tagged corpora.
    pub spans: Option<SpanScores>,
    pub per_tag: BTreeMap<String, TagCounts>,
}

impl TagMetrics {
    /// Computes metrics from parallel gold and predicted tag sequences.
    pub fn from_predictions(gold: &[Vec<String>], predicted: &[Vec<String>], scheme: TagScheme) -> Result<Self> {
        let mut per_tag: BTreeMap<String, TagCounts> = BTreeMap::new();
        let (mut tokens, mut correct) = (0usize, 0usize);
        if gold.len() != predicted.len() {
            return Err(Error::LengthMismatch(gold.len(), predicted.len()));
        }
        for (g, p) in gold.iter().zip(predicted) {
            if g.len() != p.len() {
                return Err(Error::LengthMismatch(g.len(), p.len()));
            }
            for (gt, pt) in g.iter().zip(p) {
                tokens += 1;
                per_tag.entry(gt.clone()).or_default().gold += 1;
                per_tag.entry(pt.clone()).or_default().predicted += 1;
                if gt == pt {
                    correct += 1;
                    per_tag.entry(gt.clone()).or_default().correct += 1;
                }
            }
        }
        let spans = match scheme {
            TagScheme::BioSpans => Some(span_scores(gold, predicted)?),
            TagScheme::PerToken => None,
        };
        Ok(TagMetrics {
            token_accuracy: if tokens == 0 { 0.0 } else { correct as f64 / tokens as f64 },
            tokens,
            spans,
            per_tag,
        })
    }

    pub fn span_f1(&self) -> Option<f64> {
        self.spans.map(|s| s.f1)
    }
}

/// Tags every sentence of `corpus` and scores against its labels.
///
/// Gold tags the tagger never saw simply count as errors.
pub fn evaluate_tagging(tagger: &WindowTagger, store: &VecStore, corpus: &SequenceCorpus) -> Result<TagMetrics> {
    use rayon::prelude::*;
    let predicted = corpus
        .sentences
        .par_iter()
        .map(|s| tagger.tag_sentence(store, s))
        .collect::<Result<Vec<_>>>()?;
    TagMetrics::from_predictions(&corpus.labels, &predicted, corpus.scheme)
}
