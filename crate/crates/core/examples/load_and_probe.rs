// Load vectors from text, convert to word2vec binary and back, and probe
// nearest neighbours.

use std::collections::HashSet;

use embeval::vecstore::{load_binary_embeddings, load_text_embeddings, store_binary_embeddings, Header};

pub fn run_example() -> embeval::Result<()> {
    let text = "\
king 0.8 0.6 0.1
queen 0.75 0.65 0.2
man 0.6 0.1 0.05
woman 0.55 0.2 0.15
apple 0.0 0.1 0.9
";
    let store = load_text_embeddings(text.as_bytes(), Header::Absent)?;
    println!("{} words, dim {}", store.len(), store.dim());

    let mut bin = Vec::new();
    store_binary_embeddings(&store, &mut bin)?;
    let back = load_binary_embeddings(&bin[..])?;
    assert_eq!(back.words(), store.words());
    println!("binary size: {} bytes", bin.len());

    let king = store.lookup("King").expect("lowercase fallback finds king");
    let exclude: HashSet<&str> = ["king"].into_iter().collect();
    for n in store.nearest(king, 3, &exclude)? {
        println!("  {:<6} {:.4}", n.word, n.score);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> embeval::Result<()> {
    run_example()
}
