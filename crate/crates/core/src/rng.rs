//! The one PRNG used for seeding, shuffling, and fixture generation.
//!
//! ChaCha8 with `seed_from_u64` produces the same stream on every platform,
//! so seeded results are reproducible across machines.

use rand::SeedableRng;

pub type Rng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut Rng) -> f64 {
    use rand::Rng as _;
    rng.sample(rand_distr::StandardNormal)
}
