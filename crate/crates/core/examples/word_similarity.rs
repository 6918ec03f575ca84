// Spearman correlation between cosine similarity and human ratings.

use embeval::datasets::parse_similarity;
use embeval::intrinsic::eval_similarity;
use embeval::synthgen::{generate, Gold, PlantedSpec, Structure};
use embeval::vecstore::{load_text_embeddings, Header};

pub fn run_example() -> embeval::Result<()> {
    let store = load_text_embeddings(
        "cat 1 0.1\ndog 0.9 0.3\ncar 0 1\ntruck 0.1 0.95\nbanana 0.7 -0.7\n".as_bytes(),
        Header::Absent,
    )?;
    let gold = parse_similarity(
        "toy",
        "# word1\tword2\tscore\ncat\tdog\t8.5\ncar\ttruck\t9.0\ncat\tcar\t1.2\ndog\ttruck\t2.0\ncat\tbanana\t0.5\ncat\tzebra\t3.0\n",
    )?;
    let s = eval_similarity(&store, &gold)?;
    println!("spearman {:.4}, coverage {:.2}", s.primary, s.coverage);

    // Gold that ranks pairs exactly by true cosine scores 1.0.
    let f = generate(&PlantedSpec::new(1, 200, 16, Structure::SimilarityMonotone { pairs: 150 }))?;
    if let Gold::Similarity(ds) = &f.gold {
        let s = eval_similarity(&f.store, ds)?;
        println!("planted: spearman {}", s.primary);
        assert_eq!(s.primary, 1.0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> embeval::Result<()> {
    run_example()
}
