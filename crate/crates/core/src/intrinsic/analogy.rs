use std::borrow::Cow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datasets::{AnalogyDataset, AnalogyFormat};
use crate::error::{Error, Result};
use crate::score::EvalScore;
use crate::vecstore::{dot, norm, VecStore};

pub const DEFAULT_EPSILON: f64 = 0.001;

/// Analogy inference rule for `a : a* :: b : ?`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalogyMethod {
    /// `argmax cos(b', a* − a + b)`.
    CosAdd,
    /// `argmax cos(b', b)·cos(b', a*) / (cos(b', a) + ε)`, cosines shifted to `[0, 1]`.
    CosMul { epsilon: f64 },
}

impl AnalogyMethod {
    pub fn cos_mul() -> Self {
        AnalogyMethod::CosMul {
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AnalogyMethod::CosAdd => "3cosadd",
            AnalogyMethod::CosMul { .. } => "3cosmul",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "3cosadd" | "cosadd" | "add" => Some(AnalogyMethod::CosAdd),
            "3cosmul" | "cosmul" | "mul" => Some(AnalogyMethod::cos_mul()),
            _ => None,
        }
    }
}

fn normalized(store: &VecStore) -> Cow<'_, VecStore> {
    if store.is_unit_normalized() {
        Cow::Borrowed(store)
    } else {
        Cow::Owned(store.unit_normalize())
    }
}

fn resolve(store: &VecStore, w: &str) -> Result<usize> {
    store.resolve(w).ok_or_else(|| Error::Oov(w.to_string()))
}

/// Index of the best candidate; `store` must be unit-normalized.
fn solve_indexed(
    store: &VecStore,
    a: usize,
    a_star: usize,
    b: usize,
    method: AnalogyMethod,
) -> Result<Option<usize>> {
    let (ra, ras, rb) = (store.row(a), store.row(a_star), store.row(b));
    let candidates = (0..store.len()).filter(|&i| i != a && i != a_star && i != b && store.is_usable(i));
    let mut best: Option<(f64, usize)> = None;
    let mut consider = |score: f64, i: usize| {
        if best.map_or(true, |(s, _)| score > s) {
            best = Some((score, i));
        }
    };
    match method {
        AnalogyMethod::CosAdd => {
            let target: Vec<f64> = ras
                .iter()
                .zip(ra)
                .zip(rb)
                .map(|((x, y), z)| x - y + z)
                .collect();
            let tn = norm(&target);
            if tn == 0.0 {
                return Err(Error::ZeroNorm);
            }
            for i in candidates {
                consider(dot(store.row(i), &target) / tn, i);
            }
        }
        AnalogyMethod::CosMul { epsilon } => {
            if !(epsilon > 0.0) {
                return Err(Error::InvalidArgument("3CosMul epsilon must be positive".into()));
            }
            let shift = |x: f64| (x + 1.0) / 2.0;
            for i in candidates {
                let r = store.row(i);
                let score = shift(dot(r, rb)) * shift(dot(r, ras)) / (shift(dot(r, ra)) + epsilon);
                consider(score, i);
            }
        }
    }
    Ok(best.map(|(_, i)| i))
}

/// Answers `a : a_star :: b : ?` over the whole vocabulary minus the query
/// words. Ties go to the lower vocabulary index.
pub fn solve_analogy(
    store: &VecStore,
    a: &str,
    a_star: &str,
    b: &str,
    method: AnalogyMethod,
) -> Result<String> {
    let store = normalized(store);
    let (ia, ias, ib) = (resolve(&store, a)?, resolve(&store, a_star)?, resolve(&store, b)?);
    match solve_indexed(&store, ia, ias, ib, method)? {
        Some(i) => Ok(store.word(i).to_string()),
        None => Err(Error::Insufficient("no candidate words besides the query".into())),
    }
}

/// Accuracy over answerable questions.
///
/// A question is answerable when all four words resolve. Components:
/// `accuracy_all` (unanswerable count as wrong), `answered`, `total`,
/// `section:<name>` for every section with an answerable question, and
/// `semantic` / `syntactic` rollups for Google-format data.
pub fn eval_analogy(store: &VecStore, ds: &AnalogyDataset, method: AnalogyMethod) -> Result<EvalScore> {
    let store = normalized(store);
    let questions: Vec<_> = ds.questions().collect();
    let outcomes: Vec<Option<bool>> = questions
        .par_iter()
        .map(|(_, q)| -> Result<Option<bool>> {
            let ids = [&q.a, &q.a_star, &q.b, &q.b_star].map(|w| store.resolve(w));
            let [Some(a), Some(a_star), Some(b), Some(b_star)] = ids else {
                return Ok(None);
            };
            match solve_indexed(&store, a, a_star, b, method) {
                Ok(pred) => Ok(Some(pred == Some(b_star))),
                // a* − a + b can cancel to zero; such a question has no answer
                Err(Error::ZeroNorm) => Ok(Some(false)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    #[derive(Default, Clone, Copy)]
    struct Tally {
        answered: usize,
        correct: usize,
    }
    let mut per_section: Vec<(String, bool, Tally)> = ds
        .sections
        .iter()
        .map(|s| (s.name.clone(), s.is_syntactic(), Tally::default()))
        .collect();
    let mut total = Tally::default();
    let section_pos = |name: &str| ds.sections.iter().position(|s| s.name == name).expect("own section");
    for ((section, _), outcome) in questions.iter().zip(&outcomes) {
        if let Some(ok) = outcome {
            let t = &mut per_section[section_pos(&section.name)].2;
            t.answered += 1;
            total.answered += 1;
            if *ok {
                t.correct += 1;
                total.correct += 1;
            }
        }
    }
    if total.answered == 0 {
        return Err(Error::Insufficient(format!(
            "{}: none of {} questions is answerable",
            ds.name,
            questions.len()
        )));
    }

    let acc = |t: Tally| t.correct as f64 / t.answered as f64;
    let primary = acc(total);
    let coverage = total.answered as f64 / questions.len() as f64;
    let mut score = EvalScore::new(format!("analogy-{}", method.name()), primary, coverage)
        .with_component("accuracy_all", total.correct as f64 / questions.len() as f64)
        .with_component("answered", total.answered as f64)
        .with_component("total", questions.len() as f64);
    for (name, _, t) in &per_section {
        if t.answered > 0 {
            score = score.with_component(format!("section:{name}"), acc(*t));
        }
    }
    if ds.format == AnalogyFormat::Google {
        for (label, syntactic) in [("semantic", false), ("syntactic", true)] {
            let t = per_section
                .iter()
                .filter(|(_, syn, _)| *syn == syntactic)
                .fold(Tally::default(), |a, (_, _, t)| Tally {
                    answered: a.answered + t.answered,
                    correct: a.correct + t.correct,
                });
            if t.answered > 0 {
                score = score.with_component(label, acc(t));
            }
        }
    }
    Ok(score)
}
