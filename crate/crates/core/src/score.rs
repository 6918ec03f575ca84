//! Result records shared by every evaluator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Whether larger or smaller values of a metric indicate a better model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::HigherBetter => "higher",
            Direction::LowerBetter => "lower",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "higher" | "higher-better" | "higher_better" => Some(Direction::HigherBetter),
            "lower" | "lower-better" | "lower_better" => Some(Direction::LowerBetter),
            _ => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::HigherBetter => Direction::LowerBetter,
            Direction::LowerBetter => Direction::HigherBetter,
        }
    }
}

/// One evaluator's result on one (model, dataset) pair.
///
/// Scores are kept in raw units (accuracies in `[0, 1]`, correlations in
/// `[-1, 1]`). Human-readable reports multiply by 100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalScore {
    pub evaluator: String,
    pub primary: f64,
    pub components: BTreeMap<String, f64>,
    pub coverage: f64,
    pub direction: Direction,
}

impl EvalScore {
    pub fn new(evaluator: impl Into<String>, primary: f64, coverage: f64) -> Self {
        EvalScore {
            evaluator: evaluator.into(),
            primary,
            components: BTreeMap::new(),
            coverage,
            direction: Direction::HigherBetter,
        }
    }

    pub fn with_component(mut self, name: impl Into<String>, value: f64) -> Self {
        self.components.insert(name.into(), value);
        self
    }

    /// Looks up `primary` or a named component.
    pub fn value(&self, name: &str) -> Option<f64> {
        if name.is_empty() || name == "primary" {
            Some(self.primary)
        } else {
            self.components.get(name).copied()
        }
    }
}

/// Formats a raw score the way report tables show it: ×100, two decimals.
pub fn report_scale(value: f64) -> String {
    format!("{:.2}", value * 100.0)
}
