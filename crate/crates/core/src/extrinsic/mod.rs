//! Extrinsic proxy task: a window-based feed-forward tagger trained on
//! frozen embeddings, scored by token accuracy and BIO span F1.

mod adam;
mod metrics;
mod tagger;

pub use adam::{AdamConfig, AdamState};
pub use metrics::{bio_spans, evaluate_tagging, span_scores, Span, SpanScores, TagCounts, TagMetrics};
pub use tagger::{featurize, train, Gradients, TrainConfig, Trained, WindowTagger, WINDOW};
