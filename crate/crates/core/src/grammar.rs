//! The blueprint text grammar: one format, two producers (dataset-time
//! annotation and inference-time design) and one parser.
//!
//! Rendered form:
//!
//! ```text
//! INSTRUCTION:
//! <optimized instruction>
//! STEP 1: GLOBAL LAYOUT PERCEPTION
//! <body>
//! STEP 2: LOCAL OBJECT PERCEPTION
//! <body>
//! STEP 3: EDIT AREA LOCALIZATION
//! <body>
//! STEP 4: EDITED IMAGE IMAGINATION
//! <body>
//! ```
//!
//! Parsing is case-insensitive on headers and tolerant of surrounding
//! prose; section bodies run until the next header and are trimmed.
//! Validation of the parsed sections is [`crate::model::validate_blueprint`]'s
//! job, so malformed responses surface every violation at once.

use crate::model::{BlueprintCandidate, BlueprintCoT, StepName};

/// Key introducing the optimized instruction section.
pub const INSTRUCTION_KEY: &str = "INSTRUCTION";

/// Sections of a blueprint-shaped text, in order of appearance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedBlueprintText {
    pub instruction: Option<String>,
    pub steps: Vec<(StepName, String)>,
}

impl ParsedBlueprintText {
    /// Convert into a candidate for schema validation.
    pub fn into_candidate(self, generator_model: impl Into<String>) -> BlueprintCandidate {
        BlueprintCandidate {
            optimized_instruction: self.instruction,
            steps: self.steps,
            generator_model: generator_model.into(),
        }
    }
}

/// Try to interpret a line as a step header, returning the declared step.
///
/// Accepts `STEP <n>: <TITLE>` case-insensitively. The declared index must
/// match the title's canonical position; mismatches are not headers (they
/// become body text and the schema check reports what is missing).
fn parse_step_header(line: &str) -> Option<StepName> {
    let trimmed = line.trim();
    let rest = strip_prefix_ci(trimmed, "STEP")?;
    let rest = rest.trim_start();
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return None;
    }
    let rest = rest[digits.len()..].trim_start();
    let rest = rest.strip_prefix(':')?.trim();
    let index: u8 = digits.parse().ok()?;
    let declared = StepName::from_index(index)?;
    if rest.eq_ignore_ascii_case(declared.title()) {
        Some(declared)
    } else {
        None
    }
}

fn strip_prefix_ci<'a>(text: &'a str, prefix: &str) -> Option<&'a str> {
    if text.len() >= prefix.len() && text[..prefix.len()].eq_ignore_ascii_case(prefix) {
        Some(&text[prefix.len()..])
    } else {
        None
    }
}

fn is_instruction_header(line: &str) -> Option<&str> {
    let trimmed = line.trim();
    let rest = strip_prefix_ci(trimmed, INSTRUCTION_KEY)?;
    rest.strip_prefix(':').map(str::trim)
}

/// Split a blueprint-shaped text into its sections.
pub fn parse_blueprint_text(text: &str) -> ParsedBlueprintText {
    enum Section {
        Preamble,
        Instruction,
        Step(StepName),
    }

    let mut parsed = ParsedBlueprintText::default();
    let mut current = Section::Preamble;
    let mut buffer = String::new();

    let mut flush = |section: &Section, buffer: &mut String, parsed: &mut ParsedBlueprintText| {
        let body = buffer.trim().to_string();
        match section {
            Section::Preamble => {}
            Section::Instruction => parsed.instruction = Some(body),
            Section::Step(name) => parsed.steps.push((*name, body)),
        }
        buffer.clear();
    };

    for line in text.lines() {
        if let Some(step) = parse_step_header(line) {
            flush(&current, &mut buffer, &mut parsed);
            current = Section::Step(step);
        } else if let Some(inline) = is_instruction_header(line) {
            flush(&current, &mut buffer, &mut parsed);
            current = Section::Instruction;
            if !inline.is_empty() {
                buffer.push_str(inline);
                buffer.push('\n');
            }
        } else {
            buffer.push_str(line);
            buffer.push('\n');
        }
    }
    flush(&current, &mut buffer, &mut parsed);
    parsed
}

/// Deterministic single-text rendering of a blueprint, suitable as the
/// conditioning prompt for a downstream editor. `render` followed by
/// [`parse_blueprint_text`] recovers the identical sections; no
/// locale-dependent formatting is involved.
pub fn render_blueprint(blueprint: &BlueprintCoT) -> String {
    let mut out = String::new();
    out.push_str(INSTRUCTION_KEY);
    out.push_str(":\n");
    out.push_str(blueprint.optimized_instruction());
    for (name, body) in blueprint.steps() {
        out.push_str("\nSTEP ");
        out.push_str(&name.index().to_string());
        out.push_str(": ");
        out.push_str(name.title());
        out.push('\n');
        out.push_str(body);
    }
    out
}

/// Extract the value of the first line of the form `KEY: value`.
/// The key must match exactly; the value is trimmed.
pub fn extract_labeled_line<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    for line in text.lines() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix(key) {
            if let Some(value) = rest.strip_prefix(':') {
                return Some(value.trim());
            }
        }
    }
    None
}

/// Everything except lines beginning with `KEY:`, trimmed. Used to keep a
/// judge's rationale once the labeled verdict line is extracted.
pub fn text_without_labeled_lines(text: &str, key: &str) -> String {
    text.lines()
        .filter(|line| {
            let trimmed = line.trim();
            !(trimmed.starts_with(key) && trimmed[key.len()..].starts_with(':'))
        })
        .collect::<Vec<_>>()
        .join("\n")
        .trim()
        .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_blueprint;

    fn blueprint() -> BlueprintCoT {
        validate_blueprint(BlueprintCandidate {
            optimized_instruction: Some("Replace the oak tree with a pine tree.".into()),
            steps: vec![
                (
                    StepName::GlobalLayoutPerception,
                    "A park scene with a large oak tree on the right.".into(),
                ),
                (
                    StepName::LocalObjectPerception,
                    "The oak has a thick trunk and broad leaves.".into(),
                ),
                (
                    StepName::EditAreaLocalization,
                    "Only the tree on the right will change.".into(),
                ),
                (
                    StepName::EditedImageImagination,
                    "The same park, now with a tall pine in place of the oak.".into(),
                ),
            ],
            generator_model: "mock-designer".into(),
        })
        .unwrap()
    }

    #[test]
    fn render_then_parse_recovers_sections() {
        let bp = blueprint();
        let text = render_blueprint(&bp);
        let parsed = parse_blueprint_text(&text);
        assert_eq!(
            parsed.instruction.as_deref(),
            Some(bp.optimized_instruction())
        );
        assert_eq!(parsed.steps.len(), 4);
        for ((name, body), expected) in parsed.steps.iter().zip(bp.steps()) {
            assert_eq!(*name, expected.0);
            assert_eq!(body, expected.1);
        }
        let revalidated =
            validate_blueprint(parsed.into_candidate(bp.generator_model())).unwrap();
        assert_eq!(revalidated, bp);
    }

    #[test]
    fn render_is_idempotent_under_reparse() {
        let bp = blueprint();
        let once = render_blueprint(&bp);
        let reparsed = validate_blueprint(
            parse_blueprint_text(&once).into_candidate(bp.generator_model()),
        )
        .unwrap();
        assert_eq!(render_blueprint(&reparsed), once);
    }

    #[test]
    fn parser_tolerates_preamble_and_case() {
        let text = "Sure, here is the plan.\n\
                    Instruction: Make the sky pink.\n\
                    step 1: Global Layout Perception\nA beach.\n\
                    STEP 2: LOCAL OBJECT PERCEPTION\nWaves and sand.\n\
                    Step 3: Edit Area Localization\nThe sky region only.\n\
                    STEP 4: edited image imagination\nThe beach under a pink sky.";
        let parsed = parse_blueprint_text(text);
        assert_eq!(parsed.instruction.as_deref(), Some("Make the sky pink."));
        assert_eq!(parsed.steps.len(), 4);
        assert_eq!(parsed.steps[3].1, "The beach under a pink sky.");
    }

    #[test]
    fn out_of_order_sections_parse_in_appearance_order() {
        let text = "STEP 1: GLOBAL LAYOUT PERCEPTION\na\n\
                    STEP 2: LOCAL OBJECT PERCEPTION\nb\n\
                    STEP 4: EDITED IMAGE IMAGINATION\nd\n\
                    STEP 3: EDIT AREA LOCALIZATION\nc";
        let parsed = parse_blueprint_text(text);
        let order: Vec<u8> = parsed.steps.iter().map(|(n, _)| n.index()).collect();
        assert_eq!(order, vec![1, 2, 4, 3]);
    }

    #[test]
    fn mismatched_header_title_is_body_text() {
        // "STEP 2" with step 3's title is not a header.
        let text = "STEP 1: GLOBAL LAYOUT PERCEPTION\na\nSTEP 2: EDIT AREA LOCALIZATION\nb";
        let parsed = parse_blueprint_text(text);
        assert_eq!(parsed.steps.len(), 1);
        assert_eq!(
            parsed.steps[0].1,
            "a\nSTEP 2: EDIT AREA LOCALIZATION\nb"
        );
    }

    #[test]
    fn labeled_line_extraction() {
        let body = "Some preamble\nVERDICT: Aligned\nThe prompt fully matches.";
        assert_eq!(extract_labeled_line(body, "VERDICT"), Some("Aligned"));
        assert_eq!(extract_labeled_line(body, "TIER"), None);
        assert_eq!(
            text_without_labeled_lines(body, "VERDICT"),
            "Some preamble\nThe prompt fully matches."
        );
    }
}
