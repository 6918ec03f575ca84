// QVEC: alignment of embedding dimensions with linguistic property columns.

use embeval::datasets::parse_linguistic_matrix;
use embeval::intrinsic::{qvec, qvec_with};
use embeval::vecstore::{load_text_embeddings, Header};

pub fn run_example() -> embeval::Result<()> {
    let store = load_text_embeddings(
        "run 0.9 0.1 0.3\nwalk 0.8 0.2 0.1\ndog 0.1 0.9 0.2\ncat 0.2 0.8 0.4\nquickly 0.3 0.1 0.9\n".as_bytes(),
        Header::Absent,
    )?;
    let ling = parse_linguistic_matrix(
        "run verb.motion:0.8 noun.animal:0\n\
         walk verb.motion:0.9\n\
         dog noun.animal:1.0\n\
         cat noun.animal:0.9\n\
         quickly adv.all:1.0\n",
    )?;
    let s = qvec(&store, &ling)?;
    println!(
        "qvec {:.4} over {} shared words",
        s.primary, s.components["shared_words"]
    );
    println!("clamped {:.4}", qvec_with(&store, &ling, true)?.primary);
    Ok(())
}

#[allow(dead_code)]
fn main() -> embeval::Result<()> {
    run_example()
}
