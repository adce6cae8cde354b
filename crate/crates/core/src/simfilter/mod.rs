//! Joint consistency filtering: SSIM, embedding cosine similarity, and the
//! threshold + keyword policy that turns scores into keep/drop decisions.

pub mod ssim;

use crate::model::{EditPair, FilterScores, PairId, SourceDataset};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub use ssim::{ssim_files, ssim_images, ssim_luma, LumaPlane};

#[derive(Debug, thiserror::Error)]
pub enum SimFilterError {
    #[error("luma plane length mismatch: expected {expected}, got {got}")]
    BadPlane { expected: usize, got: usize },
    #[error("image dimensions differ: {a:?} vs {b:?}")]
    DimensionMismatch {
        a: (usize, usize),
        b: (usize, usize),
    },
    #[error("image {width}x{height} smaller than the {window}x{window} window")]
    TooSmall {
        width: usize,
        height: usize,
        window: usize,
    },
    #[error("cannot read image {path}: {detail}")]
    Unreadable { path: String, detail: String },
    #[error("embedding dimension mismatch: {a} vs {b}")]
    EmbeddingDimMismatch { a: usize, b: usize },
    #[error("zero-norm embedding vector")]
    ZeroNorm,
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("embedding provider: {0}")]
    Embedding(String),
}

// ---------------------------------------------------------------------------
// Cosine similarity
// ---------------------------------------------------------------------------

/// Cosine similarity of two embedding vectors, clamped to [-1, 1] against
/// rounding.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64, SimFilterError> {
    if u.len() != v.len() {
        return Err(SimFilterError::EmbeddingDimMismatch {
            a: u.len(),
            b: v.len(),
        });
    }
    let mut dot = 0.0;
    let mut norm_u = 0.0;
    let mut norm_v = 0.0;
    for (a, b) in u.iter().zip(v.iter()) {
        dot += a * b;
        norm_u += a * a;
        norm_v += b * b;
    }
    if norm_u == 0.0 || norm_v == 0.0 {
        return Err(SimFilterError::ZeroNorm);
    }
    Ok((dot / (norm_u.sqrt() * norm_v.sqrt())).clamp(-1.0, 1.0))
}

// ---------------------------------------------------------------------------
// Keyword matching
// ---------------------------------------------------------------------------

/// How forbidden keywords are matched against instructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum KeywordMatch {
    /// Case-insensitive substring ("rainbow" matches "rainbows").
    #[default]
    Substring,
    /// Case-insensitive whole word ("remove" does not match "removal").
    WholeWord,
}

/// Case-insensitive keyword test. `keyword` is expected lowercase.
pub fn keyword_hit(text: &str, keyword: &str, mode: KeywordMatch) -> bool {
    if keyword.is_empty() {
        return false;
    }
    let lowered = text.to_lowercase();
    match mode {
        KeywordMatch::Substring => lowered.contains(keyword),
        KeywordMatch::WholeWord => {
            let is_word = |c: char| c.is_alphanumeric() || c == '_';
            let mut start = 0;
            while let Some(pos) = lowered[start..].find(keyword) {
                let at = start + pos;
                let end = at + keyword.len();
                let before_ok = lowered[..at].chars().next_back().is_none_or(|c| !is_word(c));
                let after_ok = lowered[end..].chars().next().is_none_or(|c| !is_word(c));
                if before_ok && after_ok {
                    return true;
                }
                start = at + keyword.len().max(1);
            }
            false
        }
    }
}

// ---------------------------------------------------------------------------
// Filter policy and decisions
// ---------------------------------------------------------------------------

/// Threshold + keyword policy. Defaults follow the published collection
/// recipe: CLIP and DINOv2 similarity strictly above 0.9, SSIM strictly
/// above 0.8, no "rainbow" instructions, applied to UltraEdit only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterPolicy {
    pub clip_min: f64,
    pub dino_min: f64,
    pub ssim_min: f64,
    pub forbidden_keywords: Vec<String>,
    pub applies_to: BTreeSet<SourceDataset>,
    pub keyword_match: KeywordMatch,
}

impl Default for FilterPolicy {
    fn default() -> Self {
        FilterPolicy {
            clip_min: 0.9,
            dino_min: 0.9,
            ssim_min: 0.8,
            forbidden_keywords: vec!["rainbow".to_string()],
            applies_to: BTreeSet::from([SourceDataset::UltraEdit]),
            keyword_match: KeywordMatch::Substring,
        }
    }
}

impl FilterPolicy {
    pub fn validate(&self) -> Result<(), SimFilterError> {
        for (name, value) in [
            ("clip_min", self.clip_min),
            ("dino_min", self.dino_min),
            ("ssim_min", self.ssim_min),
        ] {
            if !(-1.0..=1.0).contains(&value) {
                return Err(SimFilterError::InvalidPolicy(format!(
                    "{name}={value} outside [-1, 1]"
                )));
            }
        }
        for kw in &self.forbidden_keywords {
            if kw.is_empty() {
                return Err(SimFilterError::InvalidPolicy(
                    "forbidden keyword entries must be non-empty".into(),
                ));
            }
            if kw.to_lowercase() != *kw {
                return Err(SimFilterError::InvalidPolicy(format!(
                    "forbidden keyword {kw:?} must be lowercase"
                )));
            }
        }
        Ok(())
    }

    /// First forbidden keyword (in policy order) matching the instruction.
    pub fn find_forbidden_keyword(&self, instruction: &str) -> Option<String> {
        self.forbidden_keywords
            .iter()
            .find(|kw| keyword_hit(instruction, kw, self.keyword_match))
            .cloned()
    }
}

/// First rule that failed, in the fixed check order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    ClipBelow,
    DinoBelow,
    SsimBelow,
    ForbiddenKeyword,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "decision")]
pub enum FilterOutcome {
    Keep { policy_exempt: bool },
    Drop { reason: DropReason },
}

impl FilterOutcome {
    pub fn is_keep(&self) -> bool {
        matches!(self, FilterOutcome::Keep { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterDecision {
    pub pair_id: PairId,
    pub scores: FilterScores,
    pub outcome: FilterOutcome,
}

/// Pure keep/drop decision for one scored pair.
///
/// Keep iff the pair's source is outside the policy's `applies_to` set, or
/// every score is strictly above its threshold and no forbidden keyword
/// matches. Scores exactly equal to a threshold are dropped. A drop carries
/// the first failed rule in the fixed order clip, dino, ssim, keyword.
pub fn decide(pair: &EditPair, scores: &FilterScores, policy: &FilterPolicy) -> FilterDecision {
    let outcome = if !policy.applies_to.contains(&pair.source_dataset) {
        FilterOutcome::Keep { policy_exempt: true }
    } else if !(scores.clip_sim > policy.clip_min) {
        FilterOutcome::Drop {
            reason: DropReason::ClipBelow,
        }
    } else if !(scores.dino_sim > policy.dino_min) {
        FilterOutcome::Drop {
            reason: DropReason::DinoBelow,
        }
    } else if !(scores.ssim > policy.ssim_min) {
        FilterOutcome::Drop {
            reason: DropReason::SsimBelow,
        }
    } else if policy.find_forbidden_keyword(&pair.raw_instruction).is_some() {
        FilterOutcome::Drop {
            reason: DropReason::ForbiddenKeyword,
        }
    } else {
        FilterOutcome::Keep {
            policy_exempt: false,
        }
    };
    FilterDecision {
        pair_id: pair.pair_id.clone(),
        scores: scores.clone(),
        outcome,
    }
}

/// Source of image embeddings for similarity scoring. Implemented by the
/// gateway; tests may provide fixed vectors.
pub trait PairEmbedder: Sync {
    fn embed_image(&self, model_tag: &str, image_path: &str) -> Result<Vec<f64>, SimFilterError>;
}

/// Cosine similarity of the embeddings of two images under one model tag.
pub fn embed_similarity(
    embedder: &dyn PairEmbedder,
    model_tag: &str,
    image_a: &str,
    image_b: &str,
) -> Result<f64, SimFilterError> {
    let u = embedder.embed_image(model_tag, image_a)?;
    let v = embedder.embed_image(model_tag, image_b)?;
    cosine_similarity(&u, &v)
}

/// Model tags used for the two embedding channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingModels {
    pub clip: String,
    pub dino: String,
}

impl Default for EmbeddingModels {
    fn default() -> Self {
        EmbeddingModels {
            clip: "clip-like".into(),
            dino: "dino-like".into(),
        }
    }
}

/// Compute the full score set for one pair.
pub fn score_pair(
    pair: &EditPair,
    policy: &FilterPolicy,
    embedder: &dyn PairEmbedder,
    models: &EmbeddingModels,
) -> Result<FilterScores, SimFilterError> {
    let ssim = ssim_files(
        std::path::Path::new(&pair.source_image.path),
        std::path::Path::new(&pair.target_image.path),
    )?;
    let clip_sim = embed_similarity(
        embedder,
        &models.clip,
        &pair.source_image.path,
        &pair.target_image.path,
    )?;
    let dino_sim = embed_similarity(
        embedder,
        &models.dino,
        &pair.source_image.path,
        &pair.target_image.path,
    )?;
    Ok(FilterScores {
        clip_sim,
        dino_sim,
        ssim,
        forbidden_keyword_hit: policy.find_forbidden_keyword(&pair.raw_instruction),
    })
}

/// Score and decide a batch in parallel. Output order follows input order
/// (callers pass pair_id-sorted input for deterministic files).
pub fn filter_pairs(
    pairs: &[EditPair],
    policy: &FilterPolicy,
    embedder: &dyn PairEmbedder,
    models: &EmbeddingModels,
) -> Vec<(EditPair, Result<FilterDecision, SimFilterError>)> {
    use rayon::prelude::*;
    pairs
        .par_iter()
        .map(|pair| {
            let decision =
                score_pair(pair, policy, embedder, models).map(|s| decide(pair, &s, policy));
            (pair.clone(), decision)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ImageRef, PairId};

    fn pair(source: SourceDataset, instruction: &str) -> EditPair {
        EditPair {
            pair_id: PairId::from_hex("aa"),
            source_image: ImageRef::new("s.png", 640, 640).unwrap(),
            target_image: ImageRef::new("t.png", 640, 640).unwrap(),
            raw_instruction: instruction.to_string(),
            source_dataset: source,
        }
    }

    fn scores(clip: f64, dino: f64, ssim: f64) -> FilterScores {
        FilterScores {
            clip_sim: clip,
            dino_sim: dino,
            ssim,
            forbidden_keyword_hit: None,
        }
    }

    #[test]
    fn keeps_pair_passing_all_thresholds() {
        let policy = FilterPolicy::default();
        let p = pair(SourceDataset::UltraEdit, "turn the car red");
        let d = decide(&p, &scores(0.95, 0.92, 0.85), &policy);
        assert_eq!(
            d.outcome,
            FilterOutcome::Keep {
                policy_exempt: false
            }
        );
    }

    #[test]
    fn drops_on_first_failed_rule_in_order() {
        let policy = FilterPolicy::default();
        let p = pair(SourceDataset::UltraEdit, "turn the car red");
        let d = decide(&p, &scores(0.95, 0.92, 0.79), &policy);
        assert_eq!(
            d.outcome,
            FilterOutcome::Drop {
                reason: DropReason::SsimBelow
            }
        );
        // Multiple failures report the first in clip, dino, ssim order.
        let d = decide(&p, &scores(0.1, 0.1, 0.1), &policy);
        assert_eq!(
            d.outcome,
            FilterOutcome::Drop {
                reason: DropReason::ClipBelow
            }
        );
    }

    #[test]
    fn drops_forbidden_keyword_even_with_good_scores() {
        let policy = FilterPolicy::default();
        let p = pair(SourceDataset::UltraEdit, "add a rainbow over the hill");
        let d = decide(&p, &scores(0.95, 0.95, 0.90), &policy);
        assert_eq!(
            d.outcome,
            FilterOutcome::Drop {
                reason: DropReason::ForbiddenKeyword
            }
        );
    }

    #[test]
    fn exempt_sources_keep_regardless_of_scores() {
        let policy = FilterPolicy::default();
        let p = pair(SourceDataset::MagicBrush, "add a rainbow");
        let d = decide(&p, &scores(-1.0, -1.0, -1.0), &policy);
        assert_eq!(d.outcome, FilterOutcome::Keep { policy_exempt: true });
    }

    #[test]
    fn boundary_scores_are_dropped() {
        let policy = FilterPolicy::default();
        let p = pair(SourceDataset::UltraEdit, "x");
        assert_eq!(
            decide(&p, &scores(0.9, 0.95, 0.85), &policy).outcome,
            FilterOutcome::Drop {
                reason: DropReason::ClipBelow
            }
        );
        assert_eq!(
            decide(&p, &scores(0.95, 0.9, 0.85), &policy).outcome,
            FilterOutcome::Drop {
                reason: DropReason::DinoBelow
            }
        );
        assert_eq!(
            decide(&p, &scores(0.95, 0.95, 0.8), &policy).outcome,
            FilterOutcome::Drop {
                reason: DropReason::SsimBelow
            }
        );
    }

    #[test]
    fn cosine_identities() {
        let v = vec![0.3, -0.2, 0.9, 0.1];
        assert!((cosine_similarity(&v, &v).unwrap() - 1.0).abs() < 1e-12);
        let doubled: Vec<f64> = v.iter().map(|x| 2.0 * x).collect();
        assert!((cosine_similarity(&v, &doubled).unwrap() - 1.0).abs() < 1e-12);
        let u = vec![1.0, 0.0];
        let w = vec![0.0, 1.0];
        assert_eq!(cosine_similarity(&u, &w).unwrap(), 0.0);
        assert!(matches!(
            cosine_similarity(&[0.0, 0.0], &[1.0, 0.0]),
            Err(SimFilterError::ZeroNorm)
        ));
        assert!(matches!(
            cosine_similarity(&[1.0], &[1.0, 0.0]),
            Err(SimFilterError::EmbeddingDimMismatch { .. })
        ));
    }

    #[test]
    fn keyword_modes() {
        assert!(keyword_hit("Add a RAINBOW now", "rainbow", KeywordMatch::Substring));
        assert!(keyword_hit("rainbows everywhere", "rainbow", KeywordMatch::Substring));
        assert!(!keyword_hit("rainbows everywhere", "rainbow", KeywordMatch::WholeWord));
        assert!(keyword_hit("please remove the cat", "remove", KeywordMatch::WholeWord));
        assert!(!keyword_hit("removal of the cat", "remove", KeywordMatch::WholeWord));
        assert!(keyword_hit("Remove.", "remove", KeywordMatch::WholeWord));
    }

    #[test]
    fn policy_validation() {
        let mut policy = FilterPolicy::default();
        assert!(policy.validate().is_ok());
        policy.clip_min = 1.5;
        assert!(policy.validate().is_err());
        policy.clip_min = 0.9;
        policy.forbidden_keywords = vec!["Rainbow".into()];
        assert!(policy.validate().is_err());
    }
}
