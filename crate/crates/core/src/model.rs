//! Shared domain types, schema validation and canonical serialization for
//! every record that flows between pipeline stages.
//!
//! All types here are immutable after construction and safe to share across
//! threads; validation is pure. The canonical on-disk encoding is UTF-8
//! JSON, one record per line (see [`crate::jsonl`]), with snake_case field
//! names and a `schema_version` field on every line.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;

/// Schema version stamped on every serialized record. Readers reject lines
/// whose major version differs.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// Errors raised by domain-type constructors and validators.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("image dimensions must be positive, got {width}x{height}")]
    BadDimensions { width: u32, height: u32 },
    #[error("score {field} must be finite, got {value}")]
    NonFiniteScore { field: &'static str, value: f64 },
    #[error("score {field}={value} outside [{lo}, {hi}]")]
    ScoreOutOfRange {
        field: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("forbidden_keyword_hit {keyword:?} is not a lowercase substring of the instruction")]
    KeywordNotSubstring { keyword: String },
    #[error("misaligned pairs are discarded and never become dataset records")]
    MisalignedRecord,
    #[error("blueprint schema: {0}")]
    Schema(#[from] SchemaError),
    #[error("invalid {field}: {detail}")]
    InvalidField { field: &'static str, detail: String },
}

// ---------------------------------------------------------------------------
// Identifiers
// ---------------------------------------------------------------------------

/// Content-derived stable identifier of an edit pair: hex-encoded SHA-256
/// over a length-prefixed concatenation of source bytes, target bytes and
/// the raw instruction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PairId(String);

impl PairId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Wrap an already-computed identifier. Used by readers; producers go
    /// through [`stable_pair_id`].
    pub fn from_hex(hex: impl Into<String>) -> Self {
        PairId(hex.into())
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Deterministic, collision-resistant pair identifier.
///
/// Each input is framed as `len_be64 || bytes` before hashing so that
/// boundary-shifted inputs (and swapped source/target) cannot collide.
pub fn stable_pair_id(
    source_bytes: &[u8],
    target_bytes: &[u8],
    raw_instruction: &str,
) -> Result<PairId, ModelError> {
    if source_bytes.is_empty() {
        return Err(ModelError::EmptyInput("source_bytes"));
    }
    if target_bytes.is_empty() {
        return Err(ModelError::EmptyInput("target_bytes"));
    }
    let mut hasher = Sha256::new();
    for part in [source_bytes, target_bytes, raw_instruction.as_bytes()] {
        hasher.update((part.len() as u64).to_be_bytes());
        hasher.update(part);
    }
    Ok(PairId(hex::encode(hasher.finalize())))
}

// ---------------------------------------------------------------------------
// Source datasets and edit pairs
// ---------------------------------------------------------------------------

/// Provenance of an edit pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceDataset {
    UltraEdit,
    MagicBrush,
    SeedEditPart3,
    #[serde(rename = "sharegpt4o_image")]
    ShareGpt4oImage,
    Other(String),
}

impl SourceDataset {
    /// Stable label used in reports and per-source maps.
    pub fn label(&self) -> String {
        match self {
            SourceDataset::UltraEdit => "ultra_edit".into(),
            SourceDataset::MagicBrush => "magic_brush".into(),
            SourceDataset::SeedEditPart3 => "seed_edit_part3".into(),
            SourceDataset::ShareGpt4oImage => "sharegpt4o_image".into(),
            SourceDataset::Other(name) => format!("other:{name}"),
        }
    }
}

impl fmt::Display for SourceDataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Reference to an image on disk (or any resolvable handle) together with
/// its dimensions in pixels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRef {
    pub path: String,
    pub width: u32,
    pub height: u32,
}

impl ImageRef {
    pub fn new(path: impl Into<String>, width: u32, height: u32) -> Result<Self, ModelError> {
        if width == 0 || height == 0 {
            return Err(ModelError::BadDimensions { width, height });
        }
        Ok(ImageRef {
            path: path.into(),
            width,
            height,
        })
    }
}

/// One raw edit pair: source image, target image, instruction, provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditPair {
    pub pair_id: PairId,
    pub source_image: ImageRef,
    pub target_image: ImageRef,
    pub raw_instruction: String,
    pub source_dataset: SourceDataset,
}

// ---------------------------------------------------------------------------
// Filter scores
// ---------------------------------------------------------------------------

/// Joint consistency scores for one pair plus the first forbidden keyword
/// found in its instruction, if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterScores {
    pub clip_sim: f64,
    pub dino_sim: f64,
    pub ssim: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden_keyword_hit: Option<String>,
}

impl FilterScores {
    /// Check the type invariants: all three scores finite, and the keyword
    /// hit (when present) a lowercase substring of the lowercased
    /// instruction.
    pub fn validate(&self, raw_instruction: &str) -> Result<(), ModelError> {
        for (field, value) in [
            ("clip_sim", self.clip_sim),
            ("dino_sim", self.dino_sim),
            ("ssim", self.ssim),
        ] {
            if !value.is_finite() {
                return Err(ModelError::NonFiniteScore { field, value });
            }
        }
        if let Some(kw) = &self.forbidden_keyword_hit {
            let lowered = raw_instruction.to_lowercase();
            if kw.to_lowercase() != *kw || !lowered.contains(kw.as_str()) {
                return Err(ModelError::KeywordNotSubstring {
                    keyword: kw.clone(),
                });
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Alignment verdicts
// ---------------------------------------------------------------------------

/// Three-way triage of whether an instruction matches the actual change
/// between source and edited image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Misaligned,
    PartiallyAligned,
    Aligned,
}

impl Verdict {
    pub fn parse(token: &str) -> Option<Verdict> {
        match token.trim().to_ascii_lowercase().as_str() {
            "misaligned" => Some(Verdict::Misaligned),
            "partiallyaligned" | "partially_aligned" | "partially aligned" => {
                Some(Verdict::PartiallyAligned)
            }
            "aligned" => Some(Verdict::Aligned),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Misaligned => "Misaligned",
            Verdict::PartiallyAligned => "PartiallyAligned",
            Verdict::Aligned => "Aligned",
        })
    }
}

/// Triage outcome with the judge's rationale and raw response preserved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentVerdict {
    pub verdict: Verdict,
    pub rationale: String,
    pub judge_model: String,
    pub raw_response: String,
}

// ---------------------------------------------------------------------------
// Blueprint (four-step chain-of-thought)
// ---------------------------------------------------------------------------

/// The four imagination steps, in their fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepName {
    GlobalLayoutPerception,
    LocalObjectPerception,
    EditAreaLocalization,
    EditedImageImagination,
}

impl StepName {
    pub const ALL: [StepName; 4] = [
        StepName::GlobalLayoutPerception,
        StepName::LocalObjectPerception,
        StepName::EditAreaLocalization,
        StepName::EditedImageImagination,
    ];

    /// 1-based position in the fixed step order.
    pub fn index(self) -> u8 {
        match self {
            StepName::GlobalLayoutPerception => 1,
            StepName::LocalObjectPerception => 2,
            StepName::EditAreaLocalization => 3,
            StepName::EditedImageImagination => 4,
        }
    }

    pub fn from_index(index: u8) -> Option<StepName> {
        Self::ALL.get(index.checked_sub(1)? as usize).copied()
    }

    /// Uppercase title used in rendered text and section headers.
    pub fn title(self) -> &'static str {
        match self {
            StepName::GlobalLayoutPerception => "GLOBAL LAYOUT PERCEPTION",
            StepName::LocalObjectPerception => "LOCAL OBJECT PERCEPTION",
            StepName::EditAreaLocalization => "EDIT AREA LOCALIZATION",
            StepName::EditedImageImagination => "EDITED IMAGE IMAGINATION",
        }
    }

    /// snake_case name used in serialized records.
    pub fn snake_name(self) -> &'static str {
        match self {
            StepName::GlobalLayoutPerception => "global_layout_perception",
            StepName::LocalObjectPerception => "local_object_perception",
            StepName::EditAreaLocalization => "edit_area_localization",
            StepName::EditedImageImagination => "edited_image_imagination",
        }
    }
}

/// One violation found while validating a raw blueprint candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "step")]
pub enum SchemaViolation {
    MissingStep(StepName),
    EmptyStep(StepName),
    OutOfOrderSteps,
    MissingInstruction,
}

/// Schema failure naming every violated field.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub struct SchemaError {
    pub violations: Vec<SchemaViolation>,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "blueprint violates schema: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match v {
                SchemaViolation::MissingStep(s) => write!(f, "missing_step:{}", s.snake_name())?,
                SchemaViolation::EmptyStep(s) => write!(f, "empty_step:{}", s.snake_name())?,
                SchemaViolation::OutOfOrderSteps => write!(f, "out_of_order_steps")?,
                SchemaViolation::MissingInstruction => write!(f, "missing_instruction")?,
            }
        }
        Ok(())
    }
}

/// Raw blueprint fields as extracted from a provider response, before
/// validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BlueprintCandidate {
    pub optimized_instruction: Option<String>,
    /// Steps in order of appearance, keyed by the step each section header
    /// declared.
    pub steps: Vec<(StepName, String)>,
    pub generator_model: String,
}

/// The four ordered imagination steps plus the optimized instruction.
///
/// Construction goes through [`validate_blueprint`]; all five text fields
/// are non-empty after trimming and the steps are stored in the fixed
/// order. Serialized form carries both `step_index` and `step_name` so
/// corrupt files fail loudly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BlueprintWire", into = "BlueprintWire")]
pub struct BlueprintCoT {
    optimized_instruction: String,
    global_layout_perception: String,
    local_object_perception: String,
    edit_area_localization: String,
    edited_image_imagination: String,
    generator_model: String,
}

impl BlueprintCoT {
    pub fn optimized_instruction(&self) -> &str {
        &self.optimized_instruction
    }

    pub fn generator_model(&self) -> &str {
        &self.generator_model
    }

    pub fn step(&self, name: StepName) -> &str {
        match name {
            StepName::GlobalLayoutPerception => &self.global_layout_perception,
            StepName::LocalObjectPerception => &self.local_object_perception,
            StepName::EditAreaLocalization => &self.edit_area_localization,
            StepName::EditedImageImagination => &self.edited_image_imagination,
        }
    }

    /// Steps in the fixed order GLP, LOP, EAL, EII.
    pub fn steps(&self) -> [(StepName, &str); 4] {
        StepName::ALL.map(|name| (name, self.step(name)))
    }

    /// Instruction plus the four step bodies joined by single spaces.
    /// This is the text measured by word-count statistics.
    pub fn full_text(&self) -> String {
        let mut out = self.optimized_instruction.clone();
        for (_, body) in self.steps() {
            out.push(' ');
            out.push_str(body);
        }
        out
    }
}

/// Validate a raw candidate into a [`BlueprintCoT`], reporting every
/// violated field at once.
pub fn validate_blueprint(candidate: BlueprintCandidate) -> Result<BlueprintCoT, SchemaError> {
    let mut violations = Vec::new();

    let instruction = candidate
        .optimized_instruction
        .as_deref()
        .map(str::trim)
        .unwrap_or("");
    if instruction.is_empty() {
        violations.push(SchemaViolation::MissingInstruction);
    }

    let mut texts: [Option<String>; 4] = [None, None, None, None];
    let mut appearance: Vec<StepName> = Vec::with_capacity(4);
    let mut duplicated = false;
    for (name, text) in &candidate.steps {
        let slot = &mut texts[(name.index() - 1) as usize];
        if slot.is_some() {
            duplicated = true;
        }
        *slot = Some(text.trim().to_string());
        appearance.push(*name);
    }

    for name in StepName::ALL {
        match &texts[(name.index() - 1) as usize] {
            None => violations.push(SchemaViolation::MissingStep(name)),
            Some(t) if t.is_empty() => violations.push(SchemaViolation::EmptyStep(name)),
            Some(_) => {}
        }
    }

    // Order is violated when all four steps are present but not in the
    // fixed sequence, or when a step header appears more than once.
    let all_present = texts.iter().all(Option::is_some);
    let ordered = appearance
        .iter()
        .zip(StepName::ALL.iter())
        .all(|(a, b)| a == b)
        && appearance.len() == 4;
    if duplicated || (all_present && !ordered) {
        violations.push(SchemaViolation::OutOfOrderSteps);
    }

    if !violations.is_empty() {
        return Err(SchemaError { violations });
    }

    let [glp, lop, eal, eii] = texts.map(Option::unwrap);
    Ok(BlueprintCoT {
        optimized_instruction: instruction.to_string(),
        global_layout_perception: glp,
        local_object_perception: lop,
        edit_area_localization: eal,
        edited_image_imagination: eii,
        generator_model: candidate.generator_model,
    })
}

/// Wire form of a blueprint: positional AND named steps.
#[derive(Serialize, Deserialize)]
struct BlueprintWire {
    optimized_instruction: String,
    generator_model: String,
    steps: Vec<StepWire>,
}

#[derive(Serialize, Deserialize)]
struct StepWire {
    step_index: u8,
    step_name: String,
    text: String,
}

impl From<BlueprintCoT> for BlueprintWire {
    fn from(bp: BlueprintCoT) -> Self {
        BlueprintWire {
            optimized_instruction: bp.optimized_instruction.clone(),
            generator_model: bp.generator_model.clone(),
            steps: StepName::ALL
                .iter()
                .map(|&name| StepWire {
                    step_index: name.index(),
                    step_name: name.snake_name().to_string(),
                    text: bp.step(name).to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<BlueprintWire> for BlueprintCoT {
    type Error = String;

    fn try_from(wire: BlueprintWire) -> Result<Self, Self::Error> {
        let mut steps = Vec::with_capacity(wire.steps.len());
        for step in &wire.steps {
            let by_index = StepName::from_index(step.step_index)
                .ok_or_else(|| format!("unknown step_index {}", step.step_index))?;
            if by_index.snake_name() != step.step_name {
                return Err(format!(
                    "step_index {} does not match step_name {:?}",
                    step.step_index, step.step_name
                ));
            }
            steps.push((by_index, step.text.clone()));
        }
        validate_blueprint(BlueprintCandidate {
            optimized_instruction: Some(wire.optimized_instruction),
            steps,
            generator_model: wire.generator_model,
        })
        .map_err(|e| e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Dataset records
// ---------------------------------------------------------------------------

/// Final annotated record emitted by the pipeline.
///
/// Misaligned pairs are discarded outright and can never become records:
/// every construction path (including deserialization) enforces it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DatasetRecordWire", into = "DatasetRecordWire")]
pub struct DatasetRecord {
    schema_version: String,
    pair_id: PairId,
    source_dataset: SourceDataset,
    raw_instruction: String,
    filter_scores: FilterScores,
    verdict: AlignmentVerdict,
    blueprint: BlueprintCoT,
    pipeline_version: String,
    created_at: chrono::DateTime<chrono::Utc>,
}

impl DatasetRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        pair_id: PairId,
        source_dataset: SourceDataset,
        raw_instruction: String,
        filter_scores: FilterScores,
        verdict: AlignmentVerdict,
        blueprint: BlueprintCoT,
        pipeline_version: String,
        created_at: chrono::DateTime<chrono::Utc>,
    ) -> Result<Self, ModelError> {
        if verdict.verdict == Verdict::Misaligned {
            return Err(ModelError::MisalignedRecord);
        }
        filter_scores.validate(&raw_instruction)?;
        Ok(DatasetRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            pair_id,
            source_dataset,
            raw_instruction,
            filter_scores,
            verdict,
            blueprint,
            pipeline_version,
            created_at,
        })
    }

    pub fn schema_version(&self) -> &str {
        &self.schema_version
    }
    pub fn pair_id(&self) -> &PairId {
        &self.pair_id
    }
    pub fn source_dataset(&self) -> &SourceDataset {
        &self.source_dataset
    }
    pub fn raw_instruction(&self) -> &str {
        &self.raw_instruction
    }
    pub fn filter_scores(&self) -> &FilterScores {
        &self.filter_scores
    }
    pub fn verdict(&self) -> &AlignmentVerdict {
        &self.verdict
    }
    pub fn blueprint(&self) -> &BlueprintCoT {
        &self.blueprint
    }
    pub fn pipeline_version(&self) -> &str {
        &self.pipeline_version
    }
    pub fn created_at(&self) -> chrono::DateTime<chrono::Utc> {
        self.created_at
    }
}

#[derive(Serialize, Deserialize)]
struct DatasetRecordWire {
    schema_version: String,
    pair_id: PairId,
    source_dataset: SourceDataset,
    raw_instruction: String,
    filter_scores: FilterScores,
    verdict: AlignmentVerdict,
    blueprint: BlueprintCoT,
    pipeline_version: String,
    created_at: chrono::DateTime<chrono::Utc>,
}

impl From<DatasetRecord> for DatasetRecordWire {
    fn from(r: DatasetRecord) -> Self {
        DatasetRecordWire {
            schema_version: r.schema_version,
            pair_id: r.pair_id,
            source_dataset: r.source_dataset,
            raw_instruction: r.raw_instruction,
            filter_scores: r.filter_scores,
            verdict: r.verdict,
            blueprint: r.blueprint,
            pipeline_version: r.pipeline_version,
            created_at: r.created_at,
        }
    }
}

impl TryFrom<DatasetRecordWire> for DatasetRecord {
    type Error = String;

    fn try_from(w: DatasetRecordWire) -> Result<Self, Self::Error> {
        let mut record = DatasetRecord::new(
            w.pair_id,
            w.source_dataset,
            w.raw_instruction,
            w.filter_scores,
            w.verdict,
            w.blueprint,
            w.pipeline_version,
            w.created_at,
        )
        .map_err(|e| e.to_string())?;
        record.schema_version = w.schema_version;
        Ok(record)
    }
}

// ---------------------------------------------------------------------------
// Audit tiers
// ---------------------------------------------------------------------------

/// Four-level quality grade assigned by the audit judge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Low,
    Medium,
    High,
    UltraHigh,
}

impl Tier {
    pub const ALL: [Tier; 4] = [Tier::Low, Tier::Medium, Tier::High, Tier::UltraHigh];

    /// Parse a tier token from the documented rubric grammar. Accepts the
    /// hyphenated spelling of the top tier.
    pub fn parse(token: &str) -> Option<Tier> {
        match token.trim().to_ascii_lowercase().as_str() {
            "low" => Some(Tier::Low),
            "medium" => Some(Tier::Medium),
            "high" => Some(Tier::High),
            "ultrahigh" | "ultra-high" | "ultra_high" | "ultra high" => Some(Tier::UltraHigh),
            _ => None,
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Low => "Low",
            Tier::Medium => "Medium",
            Tier::High => "High",
            Tier::UltraHigh => "UltraHigh",
        })
    }
}

/// Tier assignment with judge provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TierLabel {
    pub tier: Tier,
    pub judge_model: String,
    pub rationale: String,
}

// ---------------------------------------------------------------------------
// Judge scores
// ---------------------------------------------------------------------------

/// Optional sub-scores carried by dual-axis rubrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreComponents {
    pub semantic_consistency: f64,
    pub perceptual_quality: f64,
}

/// Per-sample, per-task evaluation score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JudgeScoreWire", into = "JudgeScoreWire")]
pub struct JudgeScore {
    sample_id: String,
    task: String,
    score: f64,
    scale_max: f64,
    judge_model: String,
    components: Option<ScoreComponents>,
}

impl JudgeScore {
    pub fn new(
        sample_id: impl Into<String>,
        task: impl Into<String>,
        score: f64,
        scale_max: f64,
        judge_model: impl Into<String>,
        components: Option<ScoreComponents>,
    ) -> Result<Self, ModelError> {
        if !score.is_finite() {
            return Err(ModelError::NonFiniteScore {
                field: "score",
                value: score,
            });
        }
        if !(0.0..=f64::MAX).contains(&scale_max) || scale_max <= 0.0 {
            return Err(ModelError::InvalidField {
                field: "scale_max",
                detail: format!("must be positive, got {scale_max}"),
            });
        }
        if !(0.0..=scale_max).contains(&score) {
            return Err(ModelError::ScoreOutOfRange {
                field: "score",
                value: score,
                lo: 0.0,
                hi: scale_max,
            });
        }
        Ok(JudgeScore {
            sample_id: sample_id.into(),
            task: task.into(),
            score,
            scale_max,
            judge_model: judge_model.into(),
            components,
        })
    }

    pub fn sample_id(&self) -> &str {
        &self.sample_id
    }
    pub fn task(&self) -> &str {
        &self.task
    }
    pub fn score(&self) -> f64 {
        self.score
    }
    pub fn scale_max(&self) -> f64 {
        self.scale_max
    }
    pub fn judge_model(&self) -> &str {
        &self.judge_model
    }
    pub fn components(&self) -> Option<&ScoreComponents> {
        self.components.as_ref()
    }
}

#[derive(Serialize, Deserialize)]
struct JudgeScoreWire {
    sample_id: String,
    task: String,
    score: f64,
    scale_max: f64,
    judge_model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    components: Option<ScoreComponents>,
}

impl From<JudgeScore> for JudgeScoreWire {
    fn from(s: JudgeScore) -> Self {
        JudgeScoreWire {
            sample_id: s.sample_id,
            task: s.task,
            score: s.score,
            scale_max: s.scale_max,
            judge_model: s.judge_model,
            components: s.components,
        }
    }
}

impl TryFrom<JudgeScoreWire> for JudgeScore {
    type Error = String;

    fn try_from(w: JudgeScoreWire) -> Result<Self, Self::Error> {
        JudgeScore::new(
            w.sample_id,
            w.task,
            w.score,
            w.scale_max,
            w.judge_model,
            w.components,
        )
        .map_err(|e| e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Intermediate pipeline records
// ---------------------------------------------------------------------------

/// Ingest output: one edit pair per line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditPairRecord {
    pub schema_version: String,
    #[serde(flatten)]
    pub pair: EditPair,
}

impl EditPairRecord {
    pub fn new(pair: EditPair) -> Self {
        EditPairRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            pair,
        }
    }
}
