use crate::analysis::{pearson, spearman};
use crate::datasets::SimilarityDataset;
use crate::error::{Error, Result};
use crate::score::EvalScore;
use crate::vecstore::{cosine, VecStore};

/// Spearman correlation between pair cosines and gold judgments.
///
/// Pairs with an unresolvable word are skipped and show up in `coverage`.
/// Components: `spearman`, `pearson` (absent when undefined), `pairs`.
pub fn eval_similarity(store: &VecStore, ds: &SimilarityDataset) -> Result<EvalScore> {
    let mut predicted = Vec::with_capacity(ds.pairs.len());
    let mut gold = Vec::with_capacity(ds.pairs.len());
    for p in &ds.pairs {
        let (Some(i), Some(j)) = (store.resolve(&p.word1), store.resolve(&p.word2)) else {
            continue;
        };
        predicted.push(cosine(store.row(i), store.row(j))?);
        gold.push(p.gold);
    }
    if predicted.len() < 2 {
        return Err(Error::Insufficient(format!(
            "{}: {} of {} pairs usable, need at least 2",
            ds.name,
            predicted.len(),
            ds.pairs.len()
        )));
    }
    let rho = spearman(&predicted, &gold)?;
    let coverage = predicted.len() as f64 / ds.pairs.len() as f64;
    let mut score = EvalScore::new("similarity", rho, coverage)
        .with_component("spearman", rho)
        .with_component("pairs", predicted.len() as f64);
    if let Ok(r) = pearson(&predicted, &gold) {
        score = score.with_component("pearson", r);
    }
    Ok(score)
}
