use std::collections::HashMap;
use std::hash::Hash;

use rand::Rng as _;

use crate::datasets::CategorizationDataset;
use crate::error::{Error, Result};
use crate::rng::{seeded, Rng};
use crate::score::EvalScore;
use crate::vecstore::VecStore;

pub const MAX_ITERATIONS: usize = 300;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RESTARTS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squared Euclidean distances.
    pub wcss: f64,
    pub iterations: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest_centroid(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, cen) in centroids.iter().enumerate() {
        let d = sq_dist(p, cen);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    let mut chosen = vec![rng.gen_range(0..points.len())];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &points[chosen[0]])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 {
                    pick = Some(i);
                    if target < d {
                        break;
                    }
                    target -= d;
                }
            }
            pick.expect("positive total has a positive entry")
        } else {
            // every point coincides with a chosen centre
            (0..points.len()).find(|i| !chosen.contains(i)).expect("k <= |points|")
        };
        chosen.push(next);
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &points[next]));
        }
    }
    chosen.into_iter().map(|i| points[i].clone()).collect()
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> KMeansResult {
    let k = centroids.len();
    let dim = points[0].len();
    let mut assignment: Vec<usize> = points.iter().map(|p| nearest_centroid(p, &centroids).0).collect();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        // Re-seed empty clusters with the point farthest from its centroid,
        // taking it from a cluster that can spare it.
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let far = (0..points.len())
                .filter(|&i| counts[assignment[i]] > 1)
                .max_by(|&i, &j| {
                    let di = sq_dist(&points[i], &centroids[assignment[i]]);
                    let dj = sq_dist(&points[j], &centroids[assignment[j]]);
                    di.total_cmp(&dj).then(j.cmp(&i))
                });
            if let Some(i) = far {
                counts[assignment[i]] -= 1;
                counts[c] = 1;
                assignment[i] = c;
                centroids[c] = points[i].clone();
            }
        }
        let next: Vec<usize> = points.iter().map(|p| nearest_centroid(p, &centroids).0).collect();
        let stable = next == assignment;
        assignment = next;
        if stable || iterations >= MAX_ITERATIONS {
            break;
        }
    }
    let wcss = points
        .iter()
        .zip(&assignment)
        .map(|(p, &c)| sq_dist(p, &centroids[c]))
        .sum();
    KMeansResult {
        assignment,
        centroids,
        wcss,
        iterations,
    }
}

/// Lloyd's k-means with k-means++ seeding, best of `restarts` runs by WCSS.
///
/// All restarts draw from one ChaCha8 stream seeded with `seed`.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, restarts: usize) -> Result<KMeansResult> {
    if k == 0 || k > points.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must be in 1..={}",
            points.len()
        )));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidArgument("points have different dimensions".into()));
    }
    let mut rng = seeded(seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..restarts.max(1) {
        let init = plus_plus_init(points, k, &mut rng);
        let run = lloyd(points, init);
        if best.as_ref().map_or(true, |b| run.wcss < b.wcss) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// `(1/N) Σ_clusters max_category |cluster ∩ category|`.
pub fn purity<L: Eq + Hash>(assignment: &[usize], gold: &[L]) -> Result<f64> {
    if assignment.is_empty() {
        return Err(Error::Insufficient("empty assignment".into()));
    }
    if assignment.len() != gold.len() {
        return Err(Error::LengthMismatch(assignment.len(), gold.len()));
    }
    let mut counts: HashMap<usize, HashMap<&L, usize>> = HashMap::new();
    for (c, l) in assignment.iter().zip(gold) {
        *counts.entry(*c).or_default().entry(l).or_default() += 1;
    }
    let majority: usize = counts
        .values()
        .map(|m| m.values().copied().max().unwrap_or(0))
        .sum();
    Ok(majority as f64 / assignment.len() as f64)
}

/// Clusters the usable words into as many clusters as there are categories
/// represented, with seed 42 and 10 restarts, and scores purity.
pub fn eval_categorization(store: &VecStore, ds: &CategorizationDataset) -> Result<EvalScore> {
    eval_categorization_with(store, ds, DEFAULT_SEED, DEFAULT_RESTARTS)
}

pub fn eval_categorization_with(
    store: &VecStore,
    ds: &CategorizationDataset,
    seed: u64,
    restarts: usize,
) -> Result<EvalScore> {
    let store = store.unit_normalize();
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (w, c) in &ds.entries {
        if let Some(i) = store.resolve(w) {
            points.push(store.row(i).to_vec());
            labels.push(c.as_str());
        }
    }
    if points.is_empty() {
        return Err(Error::Insufficient(format!("{}: no word is in the vocabulary", ds.name)));
    }
    let mut present: Vec<&str> = labels.clone();
    present.sort_unstable();
    present.dedup();
    let k = present.len();
    let result = kmeans(&points, k, seed, restarts)?;
    let p = purity(&result.assignment, &labels)?;
    let coverage = points.len() as f64 / ds.entries.len() as f64;
    Ok(EvalScore::new("categorization", p, coverage)
        .with_component("k", k as f64)
        .with_component("wcss", result.wcss)
        .with_component("words", points.len() as f64))
}
