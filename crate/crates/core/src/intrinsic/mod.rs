//! The five intrinsic evaluators.

mod analogy;
mod categorization;
mod outlier;
mod qvec;
mod similarity;

pub use analogy::{eval_analogy, solve_analogy, AnalogyMethod, DEFAULT_EPSILON};
pub use categorization::{
    eval_categorization, eval_categorization_with, kmeans, purity, KMeansResult, DEFAULT_RESTARTS, DEFAULT_SEED,
    MAX_ITERATIONS,
};
pub use outlier::{compactness, detect_outlier, eval_outlier, rank_outlier, OutlierOutcome, SimTable};
pub use qvec::{qvec, qvec_with};
pub use similarity::eval_similarity;
