use crate::analysis::pearson;
use crate::datasets::LinguisticMatrix;
use crate::error::{Error, Result};
use crate::score::EvalScore;
use crate::vecstore::VecStore;

/// Σ over embedding dimensions of the best Pearson r against any linguistic
/// property column, over the words both resources share.
///
/// A constant embedding column contributes 0; constant property columns are
/// never chosen. Negative best correlations are kept.
pub fn qvec(store: &VecStore, ling: &LinguisticMatrix) -> Result<EvalScore> {
    qvec_with(store, ling, false)
}

/// As [`qvec`]; with `clamp_negative` each dimension contributes `max(0, r)`.
pub fn qvec_with(store: &VecStore, ling: &LinguisticMatrix, clamp_negative: bool) -> Result<EvalScore> {
    let shared: Vec<(usize, usize)> = ling
        .vocab
        .iter()
        .enumerate()
        .filter_map(|(li, w)| store.index_of(w).map(|si| (si, li)))
        .collect();
    if shared.len() < 2 {
        return Err(Error::Insufficient(format!(
            "qvec needs at least 2 shared words, found {}",
            shared.len()
        )));
    }
    let props: Vec<Vec<f64>> = (0..ling.props.len())
        .map(|j| shared.iter().map(|&(_, li)| ling.value(li, j)).collect())
        .collect();

    let mut total = 0.0;
    let mut aligned = 0usize;
    for d in 0..store.dim() {
        let column: Vec<f64> = shared.iter().map(|&(si, _)| store.row(si)[d]).collect();
        let best = props
            .iter()
            .filter_map(|p| pearson(&column, p).ok())
            .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
        if let Some(r) = best {
            aligned += 1;
            total += if clamp_negative { r.max(0.0) } else { r };
        }
    }
    let coverage = shared.len() as f64 / ling.vocab.len() as f64;
    Ok(EvalScore::new("qvec", total, coverage)
        .with_component("shared_words", shared.len() as f64)
        .with_component("aligned_dims", aligned as f64))
}
