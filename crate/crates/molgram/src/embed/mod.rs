//! Fixed-length feature vectors for molecules: circular (Morgan-style)
//! fingerprints over parsed graphs, and k-mer / IDF-weighted k-mer counts
//! over raw SMILES text.

mod fnv;
mod kmer;
mod morgan;

pub use fnv::{fnv1a64, FNV_OFFSET_BASIS, FNV_PRIME};
pub use kmer::{build_vocabulary, kmer_vector, weighted_kmer_vector, KmerVocabulary};
pub use morgan::morgan_fingerprint;

use ndarray::Array1;
use thiserror::Error;

/// Which embedding produced a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    /// Binary circular fingerprint; every entry is 0 or 1.
    Morgan,
    /// Raw k-mer occurrence counts; entries are non-negative integers.
    Kmers,
    /// IDF-weighted k-mer counts; entries are ≥ 0.
    WeightedKmers,
}

/// A fixed-length numeric embedding of one molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Array1<f64>,
    pub kind: FeatureKind,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of set bits; meaningful for binary fingerprints.
    pub fn popcount(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }
}

/// Errors from the text-based (k-mer) embeddings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("corpus string {index} has {len} characters, shorter than k = {k}")]
    StringShorterThanK { index: usize, len: usize, k: usize },
    #[error("text has {len} characters, shorter than k = {k}")]
    TextShorterThanK { len: usize, k: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("corpus size {corpus_size} is smaller than the largest document frequency {max_df}")]
    CorpusSizeTooSmall { corpus_size: usize, max_df: usize },
}
