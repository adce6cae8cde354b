//! Core library for the `dim` dataset curation pipeline.
//!
//! The pipeline turns raw image-edit pairs into chain-of-thought annotated
//! editing datasets:
//!
//! 1. [`ingest`] normalizes heterogeneous source corpora into edit-pair
//!    streams under reviewable per-source selection rules.
//! 2. [`simfilter`] computes joint consistency scores (SSIM natively,
//!    embedding cosine similarities through a provider) and applies
//!    threshold + keyword policies.
//! 3. [`annotate`] runs the three-stage annotation flow: alignment verdict,
//!    per-verdict instruction optimization, and four-step blueprint
//!    generation. A long-caption path annotates single images across a
//!    fixed dimension list.
//! 4. [`audit`] grades a seeded sample of the output on a four-tier rubric
//!    and computes corpus statistics (average prompt length in words).
//! 5. [`designer`] produces the same four-step blueprint at inference time
//!    from the source image and instruction only.
//! 6. [`evalharness`] collects judge scores per benchmark task and
//!    aggregates per-task means into overall averages.
//!
//! All provider traffic flows through [`gateway`], which adds retries,
//! rate limiting, bounded concurrency, response caching and cost
//! accounting. With mock providers registered, every stage runs with zero
//! network access.

pub mod annotate;
pub mod audit;
pub mod designer;
pub mod evalharness;
pub mod gateway;
pub mod grammar;
pub mod ingest;
pub mod jsonl;
pub mod model;
pub mod simfilter;

#[cfg(feature = "testsupport")]
pub mod testsupport;

pub use model::{
    AlignmentVerdict, BlueprintCandidate, BlueprintCoT, DatasetRecord, EditPair, FilterScores,
    ImageRef, JudgeScore, PairId, SchemaError, SourceDataset, StepName, Tier, TierLabel, Verdict,
};
