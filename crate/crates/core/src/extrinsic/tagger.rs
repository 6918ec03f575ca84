use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::adam::{AdamConfig, AdamState};
use crate::datasets::SequenceCorpus;
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::vecstore::{OovPolicy, VecStore};

/// Tokens per input window: the centre plus two on each side.
pub const WINDOW: usize = 5;

/// Concatenated embeddings of tokens `position-2 ..= position+2`.
///
/// Slots outside the sentence are zero (PAD); unknown tokens take the
/// store's shared UNK vector.
pub fn featurize<S: AsRef<str>>(store: &VecStore, sentence: &[S], position: usize) -> Vec<f64> {
    let mut out = vec![0.0; WINDOW * store.dim()];
    write_window(store, sentence, position, &mut out);
    out
}

fn write_window<S: AsRef<str>>(store: &VecStore, sentence: &[S], position: usize, out: &mut [f64]) {
    let d = store.dim();
    let half = (WINDOW / 2) as isize;
    for (slot, offset) in (-half..=half).enumerate() {
        let block = &mut out[slot * d..(slot + 1) * d];
        let idx = position as isize + offset;
        if idx < 0 || idx >= sentence.len() as isize {
            block.fill(0.0);
        } else {
            block.copy_from_slice(store.row_or_unk(sentence[idx as usize].as_ref()));
        }
    }
}

/// `softmax(W2ᵀ · tanh(W1ᵀ x + b1) + b2)`.
///
/// Weights are row-major: `w1` is `input × hidden`, `w2` is `hidden × classes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowTagger {
    pub input: usize,
    pub hidden: usize,
    pub tags: Vec<String>,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// Gradients shaped like the tagger's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

struct Activations {
    hidden: Vec<f64>,
    logits: Vec<f64>,
}

impl WindowTagger {
    pub fn zeros(input: usize, hidden: usize, tags: Vec<String>) -> Self {
        let c = tags.len();
        WindowTagger {
            input,
            hidden,
            w1: vec![0.0; input * hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden * c],
            b2: vec![0.0; c],
            tags,
        }
    }

    /// Uniform `±1/√fan_in` initialization from a seeded ChaCha8 stream.
    pub fn init(input: usize, hidden: usize, tags: Vec<String>, rng: &mut crate::rng::Rng) -> Self {
        let mut t = WindowTagger::zeros(input, hidden, tags);
        let a1 = 1.0 / (input as f64).sqrt();
        let a2 = 1.0 / (hidden as f64).sqrt();
        for v in t.w1.iter_mut().chain(t.b1.iter_mut()) {
            *v = rng.gen_range(-a1..a1);
        }
        for v in t.w2.iter_mut().chain(t.b2.iter_mut()) {
            *v = rng.gen_range(-a2..a2);
        }
        t
    }

    pub fn classes(&self) -> usize {
        self.tags.len()
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input {
            return Err(Error::LengthMismatch(x.len(), self.input));
        }
        Ok(())
    }

    fn activations(&self, x: &[f64]) -> Activations {
        let (h, c) = (self.hidden, self.classes());
        let mut pre = self.b1.clone();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let row = &self.w1[i * h..(i + 1) * h];
            for (p, w) in pre.iter_mut().zip(row) {
                *p += xi * w;
            }
        }
        let hidden: Vec<f64> = pre.into_iter().map(f64::tanh).collect();
        let mut logits = self.b2.clone();
        for (k, &hk) in hidden.iter().enumerate() {
            let row = &self.w2[k * c..(k + 1) * c];
            for (l, w) in logits.iter_mut().zip(row) {
                *l += hk * w;
            }
        }
        Activations { hidden, logits }
    }

    /// Class probabilities for one feature vector.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(softmax(&self.activations(x).logits))
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        self.check_input(x)?;
        let logits = self.activations(x).logits;
        Ok(argmax(&logits))
    }

    /// Mean cross-entropy of the gold classes and its gradient.
    pub fn loss_and_gradients(&self, batch: &[(Vec<f64>, usize)]) -> Result<(f64, Gradients)> {
        if batch.is_empty() {
            return Err(Error::InvalidArgument("empty batch".into()));
        }
        let (h, c) = (self.hidden, self.classes());
        let mut g = Gradients {
            w1: vec![0.0; self.w1.len()],
            b1: vec![0.0; h],
            w2: vec![0.0; self.w2.len()],
            b2: vec![0.0; c],
        };
        let mut loss = 0.0;
        let mut dpre = vec![0.0; h];
        for (x, gold) in batch {
            self.check_input(x)?;
            if *gold >= c {
                return Err(Error::InvalidArgument(format!("gold class {gold} out of range")));
            }
            let act = self.activations(x);
            let lse = log_sum_exp(&act.logits);
            loss += lse - act.logits[*gold];

            let mut dlogits: Vec<f64> = act.logits.iter().map(|l| (l - lse).exp()).collect();
            dlogits[*gold] -= 1.0;

            for (k, &hk) in act.hidden.iter().enumerate() {
                let grow = &mut g.w2[k * c..(k + 1) * c];
                let wrow = &self.w2[k * c..(k + 1) * c];
                let mut dh = 0.0;
                for j in 0..c {
                    grow[j] += hk * dlogits[j];
                    dh += wrow[j] * dlogits[j];
                }
                dpre[k] = dh * (1.0 - hk * hk);
            }
            for (b, d) in g.b2.iter_mut().zip(&dlogits) {
                *b += d;
            }
            for (b, d) in g.b1.iter_mut().zip(&dpre) {
                *b += d;
            }
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0.0 {
                    continue;
                }
                let row = &mut g.w1[i * h..(i + 1) * h];
                for (gw, d) in row.iter_mut().zip(&dpre) {
                    *gw += xi * d;
                }
            }
        }
        let n = batch.len() as f64;
        for v in g.w1.iter_mut().chain(&mut g.b1).chain(&mut g.w2).chain(&mut g.b2) {
            *v /= n;
        }
        Ok((loss / n, g))
    }

    pub(crate) fn shapes(&self) -> [usize; 4] {
        [self.w1.len(), self.b1.len(), self.w2.len(), self.b2.len()]
    }

    pub fn apply(&mut self, adam: &mut AdamState, g: &Gradients) -> Result<()> {
        adam.step(
            &mut [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2],
            &[&g.w1, &g.b1, &g.w2, &g.b2],
        )
    }

    /// Predicted tag for every token of a sentence.
    pub fn tag_sentence<S: AsRef<str>>(&self, store: &VecStore, sentence: &[S]) -> Result<Vec<String>> {
        let mut buf = vec![0.0; WINDOW * store.dim()];
        self.check_input(&buf)?;
        (0..sentence.len())
            .map(|p| {
                write_window(store, sentence, p, &mut buf);
                Ok(self.tags[argmax(&self.activations(&buf).logits)].clone())
            })
            .collect()
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

fn log_sum_exp(logits: &[f64]) -> f64 {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}

pub(crate) fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden: 300,
            epochs: 10,
            batch_size: 50,
            adam: AdamConfig::default(),
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trained {
    pub tagger: WindowTagger,
    /// Mean training loss of each epoch.
    pub loss_trace: Vec<f64>,
}

/// Trains a tagger on frozen embeddings with mini-batch Adam.
///
/// Initialization and per-epoch shuffling draw from one ChaCha8 stream
/// seeded with `config.seed`, so results are a pure function of the inputs.
pub fn train(store: &VecStore, corpus: &SequenceCorpus, config: &TrainConfig) -> Result<Trained> {
    if corpus.tagset.is_empty() {
        return Err(Error::InvalidArgument("empty tagset".into()));
    }
    if corpus.token_count() == 0 {
        return Err(Error::Empty);
    }
    if config.batch_size == 0 || config.hidden == 0 {
        return Err(Error::InvalidArgument("batch size and hidden size must be positive".into()));
    }
    if store.oov_policy() == OovPolicy::Skip
        && !corpus.sentences.iter().flatten().any(|t| store.index_of(t).is_some())
    {
        return Err(Error::Insufficient("every training token is out of vocabulary".into()));
    }
    let tag_index = |t: &str| corpus.tagset.binary_search_by(|x| x.as_str().cmp(t)).expect("tag in tagset");
    let positions: Vec<(usize, usize, usize)> = corpus
        .labels
        .iter()
        .enumerate()
        .flat_map(|(s, tags)| tags.iter().enumerate().map(move |(p, t)| (s, p, t)))
        .map(|(s, p, t)| (s, p, tag_index(t)))
        .collect();

    let mut rng = seeded(config.seed);
    let input = WINDOW * store.dim();
    let mut tagger = WindowTagger::init(input, config.hidden, corpus.tagset.clone(), &mut rng);
    let mut adam = AdamState::new(config.adam, &tagger.shapes());
    let mut order: Vec<usize> = (0..positions.len()).collect();
    let mut loss_trace = Vec::with_capacity(config.epochs);
    let mut batch: Vec<(Vec<f64>, usize)> = Vec::with_capacity(config.batch_size);

    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for chunk in order.chunks(config.batch_size) {
            batch.clear();
            for &k in chunk {
                let (s, p, tag) = positions[k];
                batch.push((featurize(store, &corpus.sentences[s], p), tag));
            }
            let (loss, grads) = tagger.loss_and_gradients(&batch)?;
            if !loss.is_finite() {
                return Err(Error::NonFinite(format!("training loss {loss}")));
            }
            epoch_loss += loss * chunk.len() as f64;
            tagger.apply(&mut adam, &grads)?;
        }
        loss_trace.push(epoch_loss / positions.len() as f64);
    }
    Ok(Trained { tagger, loss_trace })
}
