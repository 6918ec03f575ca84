// k-means over word vectors scored by cluster purity.

use embeval::datasets::parse_categorization;
use embeval::intrinsic::eval_categorization;
use embeval::synthgen::{generate, Gold, PlantedSpec, Structure};
use embeval::vecstore::{load_text_embeddings, Header};

pub fn run_example() -> embeval::Result<()> {
    let f = generate(&PlantedSpec::new(42, 60, 6, Structure::Blobs { k: 3, separation: 10.0 }))?;
    let Gold::Categorization(ds) = &f.gold else { unreachable!() };
    let s = eval_categorization(&f.store, ds)?;
    println!("blobs: purity {:.4} (k = {})", s.primary, s.components["k"]);

    let store = load_text_embeddings(
        "dog 1 0.1\ncat 0.9 0.2\ncow 0.95 0\ncar 0 1\nbus 0.1 0.9\n".as_bytes(),
        Header::Absent,
    )?;
    let gold = parse_categorization("toy", "dog\tanimal\ncat\tanimal\ncow\tanimal\ncar\tvehicle\nbus\tvehicle\ntrain\tvehicle\n")?;
    let s = eval_categorization(&store, &gold)?;
    println!("toy: purity {:.4}, coverage {:.2}", s.primary, s.coverage);
    Ok(())
}

#[allow(dead_code)]
fn main() -> embeval::Result<()> {
    run_example()
}
