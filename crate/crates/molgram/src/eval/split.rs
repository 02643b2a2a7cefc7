//! Deterministic random train/test splits.

use serde::Serialize;

use super::rng::{fisher_yates_shuffle, SplitMix64, Xoshiro256PlusPlus};
use super::EvalError;

/// How to split a dataset: fraction, repeat count, and the base seed.
/// The defaults (70–30, 5 repeats) reproduce the evaluation protocol the
/// metric suite was designed around.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.7,
            repeats: 5,
            seed: 42,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(EvalError::InvalidSplitSpec(format!(
                "train_fraction must lie in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if self.repeats == 0 {
            return Err(EvalError::InvalidSplitSpec(
                "repeats must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// Shuffle `0..n` and take the first ⌊train_fraction·n⌋ indices as the
/// training set; the rest are the test set. A deterministic function of
/// `(spec.seed, repeat_index)`: the shuffle stream is seeded with the
/// `(repeat_index + 1)`-th splitmix64 output of the base seed, giving each
/// repeat an independent, reproducible permutation.
pub fn random_split(
    n: usize,
    spec: &SplitSpec,
    repeat_index: usize,
) -> Result<(Vec<usize>, Vec<usize>), EvalError> {
    spec.validate()?;
    if n < 2 {
        return Err(EvalError::DatasetTooSmall { n });
    }
    if repeat_index >= spec.repeats {
        return Err(EvalError::InvalidSplitSpec(format!(
            "repeat_index {repeat_index} out of range for {} repeats",
            spec.repeats
        )));
    }
    let mut derive = SplitMix64::new(spec.seed);
    let mut stream_seed = 0;
    for _ in 0..=repeat_index {
        stream_seed = derive.next_u64();
    }
    let mut rng = Xoshiro256PlusPlus::from_seed(stream_seed);
    let mut indices: Vec<usize> = (0..n).collect();
    fisher_yates_shuffle(&mut indices, &mut rng);
    let train_size = (spec.train_fraction * n as f64).floor() as usize;
    if train_size == 0 || train_size == n {
        return Err(EvalError::DegenerateSplit {
            train: train_size,
            test: n - train_size,
        });
    }
    let test = indices.split_off(train_size);
    Ok((indices, test))
}
