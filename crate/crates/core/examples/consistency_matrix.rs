// Correlate intrinsic and extrinsic scores across models.

use embeval::analysis::{consistency_matrix, emit_matrix, MatrixFormat, MetricDescriptor, MetricKind, ScoreTable};
use embeval::Direction;

pub fn run_example() -> embeval::Result<()> {
    let ws = MetricDescriptor::new("ws353", MetricKind::Intrinsic, Direction::HigherBetter);
    let analogy = MetricDescriptor::new("google", MetricKind::Intrinsic, Direction::HigherBetter);
    let pos = MetricDescriptor::new("pos", MetricKind::Extrinsic, Direction::HigherBetter);
    let ppl = MetricDescriptor::new("nmt-perplexity", MetricKind::Extrinsic, Direction::LowerBetter);

    let mut table = ScoreTable::new();
    for (i, model) in ["cbow", "skipgram", "glove", "fasttext", "ngram2vec", "dict2vec"].iter().enumerate() {
        let x = i as f64;
        table.set(model, &ws, 0.50 + 0.03 * x)?;
        table.set(model, &analogy, 0.60 - 0.01 * x * x)?;
        table.set(model, &pos, 0.90 + 0.005 * x)?;
        // lower perplexity is better, so it correlates positively after the flip
        table.set(model, &ppl, 40.0 - 1.5 * x)?;
    }
    let m = consistency_matrix(&table);
    print!("{}", String::from_utf8_lossy(&emit_matrix(&m, MatrixFormat::Csv)?));
    println!("ws353 vs perplexity: {:?}", m.get("ws353", "nmt-perplexity"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> embeval::Result<()> {
    run_example()
}
