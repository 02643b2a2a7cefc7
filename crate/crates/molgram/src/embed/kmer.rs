//! k-mer counting over raw SMILES characters — the sequence-based baseline.
//! Brackets, digits, and parentheses all count as characters.

use std::collections::BTreeMap;

use ndarray::Array1;

use super::{EmbedError, FeatureKind, FeatureVector};

/// All distinct k-mers of a corpus with lexicographic dense indices and
/// per-k-mer document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerVocabulary {
    k: usize,
    kmer_to_index: BTreeMap<String, usize>,
    document_frequency: Vec<usize>,
}

impl KmerVocabulary {
    /// Substring length this vocabulary was built with.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of distinct k-mers.
    pub fn len(&self) -> usize {
        self.kmer_to_index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kmer_to_index.is_empty()
    }

    /// Dense index of a k-mer, if it occurs in the corpus.
    pub fn index_of(&self, kmer: &str) -> Option<usize> {
        self.kmer_to_index.get(kmer).copied()
    }

    /// Number of corpus strings containing k-mer `index` at least once.
    pub fn document_frequency(&self, index: usize) -> usize {
        self.document_frequency[index]
    }

    /// K-mers in index (lexicographic) order.
    pub fn kmers(&self) -> impl Iterator<Item = &str> {
        self.kmer_to_index.keys().map(String::as_str)
    }
}

fn windows(text: &str, k: usize) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    chars.windows(k).map(|w| w.iter().collect()).collect()
}

/// Collect every distinct contiguous length-`k` character substring of the
/// corpus, with document frequencies. Indices are assigned in lexicographic
/// order.
///
/// ```
/// use molgram::embed::build_vocabulary;
///
/// let vocab = build_vocabulary(&["CCO", "OCC"], 2).unwrap();
/// assert_eq!(vocab.len(), 3); // CC, CO, OC
/// assert_eq!(vocab.document_frequency(vocab.index_of("CC").unwrap()), 2);
/// assert_eq!(vocab.document_frequency(vocab.index_of("CO").unwrap()), 1);
/// ```
pub fn build_vocabulary<S: AsRef<str>>(
    corpus: &[S],
    k: usize,
) -> Result<KmerVocabulary, EmbedError> {
    if k == 0 {
        return Err(EmbedError::ZeroK);
    }
    let mut document_counts: BTreeMap<String, usize> = BTreeMap::new();
    for (index, text) in corpus.iter().enumerate() {
        let text = text.as_ref();
        let len = text.chars().count();
        if len < k {
            return Err(EmbedError::StringShorterThanK { index, len, k });
        }
        let mut seen = windows(text, k);
        seen.sort_unstable();
        seen.dedup();
        for kmer in seen {
            *document_counts.entry(kmer).or_insert(0) += 1;
        }
    }
    let kmer_to_index: BTreeMap<String, usize> = document_counts
        .keys()
        .cloned()
        .enumerate()
        .map(|(i, kmer)| (kmer, i))
        .collect();
    let document_frequency = document_counts.into_values().collect();
    Ok(KmerVocabulary {
        k,
        kmer_to_index,
        document_frequency,
    })
}

/// Occurrence counts (overlapping allowed) of every vocabulary k-mer in
/// `text`. K-mers of `text` absent from the vocabulary are ignored.
///
/// ```
/// use molgram::embed::{build_vocabulary, kmer_vector};
///
/// let vocab = build_vocabulary(&["CCCC"], 2).unwrap();
/// let v = kmer_vector("CCCC", &vocab).unwrap();
/// assert_eq!(v.values[vocab.index_of("CC").unwrap()], 3.0);
/// ```
pub fn kmer_vector(text: &str, vocab: &KmerVocabulary) -> Result<FeatureVector, EmbedError> {
    let len = text.chars().count();
    if len < vocab.k {
        return Err(EmbedError::TextShorterThanK { len, k: vocab.k });
    }
    let mut values = Array1::zeros(vocab.len());
    for window in windows(text, vocab.k) {
        if let Some(index) = vocab.index_of(&window) {
            values[index] += 1.0;
        }
    }
    Ok(FeatureVector {
        values,
        kind: FeatureKind::Kmers,
    })
}

/// k-mer counts scaled by IDF: entry `i` is `count_i × ln(corpus_size /
/// document_frequency_i)`. Natural log, no smoothing; document frequencies
/// are ≥ 1 by construction so the ratio is always finite.
pub fn weighted_kmer_vector(
    text: &str,
    vocab: &KmerVocabulary,
    corpus_size: usize,
) -> Result<FeatureVector, EmbedError> {
    let max_df = vocab.document_frequency.iter().copied().max().unwrap_or(0);
    if corpus_size < max_df {
        return Err(EmbedError::CorpusSizeTooSmall {
            corpus_size,
            max_df,
        });
    }
    let counts = kmer_vector(text, vocab)?;
    let mut values = counts.values;
    for (index, value) in values.iter_mut().enumerate() {
        let idf = (corpus_size as f64 / vocab.document_frequency[index] as f64).ln();
        *value *= idf;
    }
    Ok(FeatureVector {
        values,
        kind: FeatureKind::WeightedKmers,
    })
}
