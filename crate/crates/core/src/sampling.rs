//! Seeded iid path sampling.
//!
//! Every instance uses `ChaCha8Rng::seed_from_u64(seed)`; training draws use
//! stream 0 and validation draws stream 1, so the two never overlap.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::uncertainty::{ScenarioPath, UncertaintySet};

pub const TRAINING_STREAM: u64 = 0;
pub const VALIDATION_STREAM: u64 = 1;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws one path; stages are sampled independently by default.
pub trait PathSampler: Sync {
    fn draw(&self, set: &UncertaintySet, rng: &mut ChaCha8Rng) -> ScenarioPath;
}

/// Uniform on each stage support.
#[derive(Clone, Copy, Debug, Default)]
pub struct Uniform;

impl PathSampler for Uniform {
    fn draw(&self, set: &UncertaintySet, rng: &mut ChaCha8Rng) -> ScenarioPath {
        ScenarioPath::new(set.stages.iter().map(|s| s.sample(rng)).collect())
    }
}

impl<F: Fn(&UncertaintySet, &mut ChaCha8Rng) -> ScenarioPath + Sync> PathSampler for F {
    fn draw(&self, set: &UncertaintySet, rng: &mut ChaCha8Rng) -> ScenarioPath {
        self(set, rng)
    }
}

pub fn draw_with(set: &UncertaintySet, n: usize, rng: &mut ChaCha8Rng, sampler: &dyn PathSampler) -> Vec<ScenarioPath> {
    (0..n).map(|_| sampler.draw(set, rng)).collect()
}

/// `n` uniform training paths for `seed`.
pub fn draw_paths(set: &UncertaintySet, n: usize, seed: u64) -> Vec<ScenarioPath> {
    draw_with(set, n, &mut rng_for(seed, TRAINING_STREAM), &Uniform)
}
