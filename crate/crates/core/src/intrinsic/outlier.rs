//! Outlier detection by compactness.
//!
//! For a group `W` of `n + 1` words, the compactness of `w` is the mean
//! pairwise similarity of `W \ {w}`:
//!
//! ```text
//! c(w) = 1/(n(n-1)) · Σ_{wi ∈ W\w} Σ_{wj ∈ W\w, wj ≠ wi} sim(wi, wj)
//! ```
//!
//! Removing the true outlier leaves the tightest remainder, so the outlier
//! is the word with the *highest* `c(w)`. Since the double sum equals the
//! total pairwise sum minus twice `w`'s row sum, this is the same word as the
//! one with the lowest summed similarity to the rest of the group.

use crate::datasets::{OutlierDataset, OutlierGroup};
use crate::error::{Error, Result};
use crate::score::EvalScore;
use crate::vecstore::{cosine, VecStore};

/// Symmetric pairwise similarity table over a group.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTable {
    n: usize,
    sim: Vec<f64>,
}

impl SimTable {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut sim = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                sim[i * n + j] = v;
                sim[j * n + i] = v;
            }
        }
        SimTable { n, sim }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.sim[i * self.n + j]
    }
}

/// Compactness of member `w`; the table needs at least 3 members.
pub fn compactness(sim: &SimTable, w: usize) -> Result<f64> {
    let total = sim.len();
    if total < 3 {
        return Err(Error::InvalidArgument(format!(
            "compactness needs at least 3 words, got {total}"
        )));
    }
    if w >= total {
        return Err(Error::InvalidArgument(format!("member {w} out of range")));
    }
    let n = (total - 1) as f64;
    let mut sum = 0.0;
    for i in (0..total).filter(|&i| i != w) {
        for j in (0..total).filter(|&j| j != w && j != i) {
            sum += sim.get(i, j);
        }
    }
    Ok(sum / (n * (n - 1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutlierOutcome {
    /// Index (into the group) of the word ranked most outlier-like.
    pub predicted: usize,
    /// 0-based position of the true outlier in ascending compactness order.
    pub position: usize,
    /// Group size minus one; `position == n` means detected.
    pub n: usize,
    pub compactness: Vec<f64>,
}

impl OutlierOutcome {
    pub fn detected(&self) -> bool {
        self.position == self.n
    }
}

const TIE_TOLERANCE: f64 = 1e-12;

/// Ranks a group's members by ascending compactness.
///
/// Words whose scores agree within `1e-12` are tied; inside a tie the true
/// outlier goes first (the pessimistic choice) and the rest follow by word.
pub fn rank_outlier(sim: &SimTable, words: &[&str], true_outlier: usize) -> Result<OutlierOutcome> {
    if words.len() != sim.len() {
        return Err(Error::LengthMismatch(words.len(), sim.len()));
    }
    let scores = (0..sim.len())
        .map(|w| compactness(sim, w))
        .collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..sim.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Re-order each run of tied scores.
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] - scores[order[end - 1]] <= TIE_TOLERANCE {
            end += 1;
        }
        order[start..end].sort_by(|&a, &b| {
            (a != true_outlier)
                .cmp(&(b != true_outlier))
                .then_with(|| words[a].cmp(words[b]))
        });
        start = end;
    }

    let position = order.iter().position(|&i| i == true_outlier).expect("member");
    Ok(OutlierOutcome {
        predicted: *order.last().expect("non-empty"),
        position,
        n: sim.len() - 1,
        compactness: scores,
    })
}

/// Cosine-similarity ranking of one group; `None` if a word does not resolve.
pub fn detect_outlier(store: &VecStore, group: &OutlierGroup) -> Result<Option<OutlierOutcome>> {
    if group.words.len() < 3 {
        return Err(Error::InvalidArgument("outlier group smaller than 3".into()));
    }
    let Some(ids) = group
        .words
        .iter()
        .map(|w| store.resolve(w))
        .collect::<Option<Vec<usize>>>()
    else {
        return Ok(None);
    };
    let mut err = None;
    let sim = SimTable::from_fn(ids.len(), |i, j| {
        cosine(store.row(ids[i]), store.row(ids[j])).unwrap_or_else(|e| {
            err = Some(e);
            0.0
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let words: Vec<&str> = group.words.iter().map(String::as_str).collect();
    rank_outlier(&sim, &words, group.outlier).map(Some)
}

/// Accuracy (share of groups with the outlier ranked last) and OPP (mean
/// `position / n`, raw, in `[0, 1]`).
pub fn eval_outlier(store: &VecStore, ds: &OutlierDataset) -> Result<EvalScore> {
    let mut groups = 0usize;
    let mut detected = 0usize;
    let mut opp = 0.0;
    for g in &ds.groups {
        if let Some(out) = detect_outlier(store, g)? {
            groups += 1;
            detected += usize::from(out.detected());
            opp += out.position as f64 / out.n as f64;
        }
    }
    if groups == 0 {
        return Err(Error::Insufficient(format!("{}: no group fully in vocabulary", ds.name)));
    }
    let accuracy = detected as f64 / groups as f64;
    let coverage = groups as f64 / ds.groups.len() as f64;
    Ok(EvalScore::new("outlier", accuracy, coverage)
        .with_component("accuracy", accuracy)
        .with_component("opp", opp / groups as f64)
        .with_component("groups", groups as f64))
}
