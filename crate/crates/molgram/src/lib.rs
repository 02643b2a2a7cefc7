//! Sinkhorn-balanced molecular Gram matrices and kernel-PCA embeddings.
//!
//! The crate turns SMILES strings into fixed-length feature vectors, builds
//! a Gaussian similarity matrix over them, normalizes it into a joint
//! probability matrix, balances that matrix to uniform marginals with the
//! Sinkhorn–Knopp iteration, and embeds the result via kernel PCA. An
//! evaluation harness scores the embeddings with KNN classification and
//! linear/ridge regression over repeated random splits.
//!
//! Modules, in pipeline order:
//!
//! - [`smiles`] — organic-subset SMILES parser producing molecular graphs
//!   with ring-membership annotation.
//! - [`embed`] — circular (Morgan) fingerprints over those graphs, and
//!   character k-mer count/TF-IDF vectors over the raw strings.
//! - [`gram`] — Gaussian matrix, probability normalization, log-domain
//!   Sinkhorn balancing, and the assembled Gram matrix.
//! - [`kpca`] — kernel PCA on the balanced Gram matrix.
//! - [`eval`] — repeated-split KNN/ridge experiments, metric suites, and
//!   class-similarity heatmaps.
//! - [`export`] — CSV and binary matrix serialization.
//! - [`datasets`] — bundled demo molecules and parser corpora.
//!
//! # Quick start
//!
//! ```
//! use molgram::embed::morgan_fingerprint;
//! use molgram::gram::{build_gram, GramPipelineConfig};
//! use molgram::kpca::fit_kpca;
//! use molgram::smiles::parse_smiles;
//!
//! let molecules = ["CCO", "CCN", "CCCC", "c1ccccc1"];
//! let features = molecules
//!     .iter()
//!     .map(|s| parse_smiles(s).map(|graph| morgan_fingerprint(&graph, 2, 512)))
//!     .collect::<Result<Vec<_>, _>>()?;
//!
//! let balanced = build_gram(&features, &GramPipelineConfig::default())?;
//! assert!(balanced.converged);
//!
//! let model = fit_kpca(&balanced.kernel, 2)?;
//! let embedding = model.transform();
//! assert_eq!(embedding.scores.dim(), (4, 2));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod datasets;
pub mod embed;
pub mod eval;
pub mod export;
pub mod gram;
pub mod kpca;
pub mod smiles;

// Compile and run the guide's code blocks as doctests so the book cannot
// drift from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/smiles.md")]
    pub mod smiles {}
    #[doc = include_str!("../../../book/src/embeddings.md")]
    pub mod embeddings {}
    #[doc = include_str!("../../../book/src/gram.md")]
    pub mod gram {}
    #[doc = include_str!("../../../book/src/kernel-pca.md")]
    pub mod kernel_pca {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    pub mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
