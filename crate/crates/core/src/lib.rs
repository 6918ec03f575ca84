//! Word-embedding evaluation.
//!
//! `embeval` loads pre-trained word vectors and scores them with five
//! intrinsic evaluators (word similarity, word analogy, concept
//! categorization, outlier detection and QVEC) and one extrinsic proxy, a
//! window-based feed-forward tagger. Scores from many models can then be
//! correlated to see which intrinsic benchmarks predict downstream quality.
//!
//! ```
//! use embeval::vecstore::{load_text_embeddings, Header};
//! use embeval::datasets::parse_similarity;
//! use embeval::intrinsic::eval_similarity;
//!
//! let store = load_text_embeddings(
//!     "cat 1 0.1\ndog 0.9 0.2\ncar 0 1\nroad 0.2 0.9\n".as_bytes(),
//!     Header::Absent,
//! )?;
//! let gold = parse_similarity("test", "cat dog 9\ncar road 7\ncat car 1\n")?;
//! let score = eval_similarity(&store, &gold)?;
//! assert_eq!(score.coverage, 1.0);
//! # Ok::<(), embeval::Error>(())
//! ```

pub mod analysis;
pub mod datasets;
pub mod error;
pub mod extrinsic;
pub mod intrinsic;
pub mod rng;
pub mod run;
pub mod score;
pub mod synthgen;
pub mod vecstore;

pub use error::{Error, Result};
pub use score::{Direction, EvalScore};
pub use vecstore::{cosine, Neighbor, OovPolicy, VecStore};
