// Train the window tagger on frozen vectors and score it.

use embeval::datasets::parse_conll;
use embeval::extrinsic::{evaluate_tagging, train, TrainConfig};
use embeval::synthgen::{generate, Gold, PlantedSpec, Structure};
use embeval::vecstore::{load_text_embeddings, Header};
use embeval::OovPolicy;

pub fn run_example() -> embeval::Result<()> {
    let f = generate(&PlantedSpec::new(5, 200, 10, Structure::SeparableTagging { sentences: 300 }))?;
    let Gold::Tagging { corpus, .. } = &f.gold else { unreachable!() };
    let config = TrainConfig {
        hidden: 50,
        ..TrainConfig::default()
    };
    let trained = train(&f.store, corpus, &config)?;
    let m = evaluate_tagging(&trained.tagger, &f.store, corpus)?;
    println!(
        "separable: loss {:.4} -> {:.4}, accuracy {:.4}",
        trained.loss_trace[0],
        trained.loss_trace.last().unwrap(),
        m.token_accuracy
    );

    // BIO-tagged corpora also get span F1; unknown tokens use the mean row.
    let store = load_text_embeddings("john 1 0\nsmith 0.9 0.1\nlives 0 1\nin 0.1 0.8\nparis 0.8 0.3\n".as_bytes(), Header::Absent)?
        .with_oov_policy(OovPolicy::SharedUnk);
    let ner = parse_conll("john B-PER\nsmith I-PER\nlives O\nin O\nparis B-LOC\n\nmary B-PER\nlives O\n")?;
    let trained = train(&store, &ner, &TrainConfig { hidden: 20, epochs: 50, batch_size: 4, ..TrainConfig::default() })?;
    let m = evaluate_tagging(&trained.tagger, &store, &ner)?;
    println!("ner: accuracy {:.4}, span F1 {:.4}", m.token_accuracy, m.span_f1().unwrap_or(0.0));
    Ok(())
}

#[allow(dead_code)]
fn main() -> embeval::Result<()> {
    run_example()
}
