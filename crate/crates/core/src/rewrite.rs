//! Applies generated names and a new ordering back onto test source files,
//! byte-exactly preserving everything that is not a renamed identifier or a
//! moved method block. Can also emit a fresh suite file from the IR alone.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{BodyAssertion, SourceDialect, TestSuite};
use crate::naming::{name_suite, GeneratedName, NamingConfig, NamingError};
use crate::ordering::sort_suite;
use crate::parser::url::serialize_url;
use crate::parser::{parse_source, MethodBlock, ParseError, ParseOptions, SourceFile};

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("duplicate new name '{name}' in rename plan")]
    DuplicateName { name: String },
    #[error("new name '{name}' is not a valid identifier")]
    InvalidIdentifier { name: String },
    #[error("method name '{name}' occurs {count} times in its signature span")]
    AmbiguousIdentifier { name: String, count: usize },
    #[error("permutation does not cover every method block exactly once")]
    PermutationMismatch,
    #[error("method block spans overlap")]
    OverlappingSpans,
    #[error("rename plan references unknown block index {index}")]
    UnknownBlock { index: usize },
    #[error("{count} names supplied for {tests} tests")]
    PlanMismatch { count: usize, tests: usize },
    #[error(transparent)]
    Naming(#[from] NamingError),
}

/// The edits to apply to one parsed file: new names per block index, and the
/// order in which the blocks should appear.
#[derive(Debug, Clone)]
pub struct RewritePlan {
    pub renames: BTreeMap<usize, String>,
    pub permutation: Vec<usize>,
}

impl RewritePlan {
    pub fn identity(block_count: usize) -> Self {
        RewritePlan {
            renames: BTreeMap::new(),
            permutation: (0..block_count).collect(),
        }
    }
}

fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'$'
}

/// Whole-word occurrences of `name` within `text`.
fn ident_occurrences(text: &str, name: &str) -> Vec<usize> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(rel) = text[from..].find(name) {
        let at = from + rel;
        let before_ok = at == 0 || !is_ident_char(bytes[at - 1]);
        let after = at + name.len();
        let after_ok = after >= bytes.len() || !is_ident_char(bytes[after]);
        if before_ok && after_ok {
            out.push(at);
        }
        from = at + 1;
    }
    out
}

/// Start offset of the comment run immediately above the block, bounded
/// below by `lower`. Comments count only when nothing but whitespace
/// separates them from the block and each other.
fn attached_comment_start(text: &str, block_start: usize, lower: usize) -> usize {
    let line_start = |offset: usize| -> usize {
        text[..offset].rfind('\n').map(|i| i + 1).unwrap_or(0)
    };
    let block_line = line_start(block_start);
    if block_line < lower || !text[block_line..block_start].trim().is_empty() {
        return block_start;
    }

    let mut start = block_line;
    loop {
        if start == 0 || start <= lower {
            break;
        }
        let prev_line_start = line_start(start - 1);
        if prev_line_start < lower {
            break;
        }
        let prev_line = text[prev_line_start..start - 1].trim();
        if prev_line.starts_with("//") {
            start = prev_line_start;
            continue;
        }
        if prev_line.ends_with("*/") {
            // attach the whole block comment, but only when its opener is
            // the first thing on its own line
            if let Some(open_rel) = text[lower..start - 1].rfind("/*") {
                let open = lower + open_rel;
                let open_line = line_start(open);
                if open_line >= lower && text[open_line..open].trim().is_empty() {
                    start = open_line;
                    continue;
                }
            }
        }
        break;
    }
    if start == block_line {
        block_start
    } else {
        start
    }
}

fn validate_blocks(blocks: &[MethodBlock]) -> Result<(), RewriteError> {
    for pair in blocks.windows(2) {
        if pair[0].full_span.1 > pair[1].full_span.0 {
            return Err(RewriteError::OverlappingSpans);
        }
    }
    for block in blocks {
        let (full, ann, body) = (block.full_span, block.annotation_span, block.body_span);
        if full.0 > ann.0 || ann.1 > body.0 || body.1 > full.1 {
            return Err(RewriteError::OverlappingSpans);
        }
    }
    Ok(())
}

/// Applies renames and reordering in one pass. Blocks move together with
/// their immediately preceding comment lines; the whitespace gaps between
/// blocks are reused in their original order, and all bytes outside the
/// blocks stay untouched.
pub fn apply_plan(
    text: &str,
    blocks: &[MethodBlock],
    plan: &RewritePlan,
) -> Result<String, RewriteError> {
    validate_blocks(blocks)?;

    let mut seen_names = BTreeSet::new();
    for (index, name) in &plan.renames {
        if *index >= blocks.len() {
            return Err(RewriteError::UnknownBlock { index: *index });
        }
        if !is_valid_identifier(name) {
            return Err(RewriteError::InvalidIdentifier { name: name.clone() });
        }
        if !seen_names.insert(name.clone()) {
            return Err(RewriteError::DuplicateName { name: name.clone() });
        }
    }
    if plan.permutation.len() != blocks.len()
        || plan.permutation.iter().collect::<BTreeSet<_>>().len() != blocks.len()
        || plan.permutation.iter().any(|i| *i >= blocks.len())
    {
        return Err(RewriteError::PermutationMismatch);
    }

    if blocks.is_empty() {
        return Ok(text.to_string());
    }

    // extended spans: full span plus attached comments, clamped to the
    // previous block's end
    let mut extended = Vec::with_capacity(blocks.len());
    let mut prev_end = 0usize;
    for block in blocks {
        let start = attached_comment_start(text, block.full_span.0, prev_end);
        extended.push((start, block.full_span.1));
        prev_end = block.full_span.1;
    }

    // rendered text of each block, with its rename applied
    let mut rendered: Vec<String> = Vec::with_capacity(blocks.len());
    for (i, block) in blocks.iter().enumerate() {
        let (ext_start, ext_end) = extended[i];
        let slice = &text[ext_start..ext_end];
        match plan.renames.get(&i) {
            None => rendered.push(slice.to_string()),
            Some(new_name) => {
                let sig_start = block.annotation_span.1 - ext_start;
                let sig_end = block.body_span.0 - ext_start;
                let signature = &slice[sig_start..sig_end];
                let hits = ident_occurrences(signature, &block.name);
                if hits.len() != 1 {
                    return Err(RewriteError::AmbiguousIdentifier {
                        name: block.name.clone(),
                        count: hits.len(),
                    });
                }
                let at = sig_start + hits[0];
                let mut out = String::with_capacity(slice.len());
                out.push_str(&slice[..at]);
                out.push_str(new_name);
                out.push_str(&slice[at + block.name.len()..]);
                rendered.push(out);
            }
        }
    }

    // reassemble: leading text, then blocks in permutation order separated
    // by the original gaps, then trailing text
    let mut out = String::with_capacity(text.len());
    out.push_str(&text[..extended[0].0]);
    for (slot, block_index) in plan.permutation.iter().enumerate() {
        out.push_str(&rendered[*block_index]);
        if slot + 1 < extended.len() {
            out.push_str(&text[extended[slot].1..extended[slot + 1].0]);
        }
    }
    out.push_str(&text[extended[extended.len() - 1].1..]);
    Ok(out)
}

/// Replaces only the method-name identifiers, leaving every other byte as-is.
pub fn rename_in_place(
    text: &str,
    blocks: &[MethodBlock],
    renames: &BTreeMap<usize, String>,
) -> Result<String, RewriteError> {
    let plan = RewritePlan {
        renames: renames.clone(),
        permutation: (0..blocks.len()).collect(),
    };
    apply_plan(text, blocks, &plan)
}

/// Moves whole method blocks (with their attached comments) into the given
/// order without renaming anything.
pub fn reorder_in_place(
    text: &str,
    blocks: &[MethodBlock],
    permutation: &[usize],
) -> Result<String, RewriteError> {
    let plan = RewritePlan {
        renames: BTreeMap::new(),
        permutation: permutation.to_vec(),
    };
    apply_plan(text, blocks, &plan)
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

impl From<NamingError> for PipelineError {
    fn from(err: NamingError) -> Self {
        PipelineError::Rewrite(RewriteError::Naming(err))
    }
}

/// One-call pipeline over a source file: parse, sort the suite, name every
/// test, and rewrite the text with the new names and order.
pub fn apply_to_source(
    file: &SourceFile,
    parse_options: &ParseOptions,
    config: &NamingConfig,
    templates: Option<&[String]>,
) -> Result<String, PipelineError> {
    let outcome = parse_source(file, parse_options)?;
    let mut suite = outcome.suite;
    if let Some(templates) = templates {
        suite.templates = Some(templates.to_vec());
    }
    let sorted = sort_suite(&suite)?;
    let names = name_suite(&sorted, config)?;

    let mut position_by_creation = BTreeMap::new();
    for (i, test) in suite.tests.iter().enumerate() {
        position_by_creation.insert(test.creation_index, i);
    }
    let permutation: Vec<usize> = sorted
        .tests
        .iter()
        .map(|t| position_by_creation[&t.creation_index])
        .collect();
    let renames: BTreeMap<usize, String> = permutation
        .iter()
        .zip(&names)
        .map(|(original_index, name)| (*original_index, name.rendered.clone()))
        .collect();
    let plan = RewritePlan {
        renames,
        permutation,
    };
    Ok(apply_plan(&file.text, &outcome.blocks, &plan)?)
}

fn escape_string_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '$' => out.push_str("\\$"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Generates a fresh suite file from the IR in the familiar fluent style,
/// one method per test, in suite order, with the given names.
pub fn emit_suite(
    suite: &TestSuite,
    names: &[GeneratedName],
    dialect: SourceDialect,
) -> Result<String, RewriteError> {
    if names.len() != suite.tests.len() {
        return Err(RewriteError::PlanMismatch {
            count: names.len(),
            tests: suite.tests.len(),
        });
    }

    let class_name = if suite.name.is_empty() {
        "GeneratedSuite"
    } else {
        &suite.name
    };
    let mut out = String::new();
    match dialect {
        SourceDialect::JavaLike => out.push_str(&format!("public class {class_name} {{\n")),
        SourceDialect::KotlinLike => out.push_str(&format!("class {class_name} {{\n")),
    }

    for (test, name) in suite.tests.iter().zip(names) {
        if test.calls.is_empty() {
            return Err(RewriteError::Naming(NamingError::NoFocalCall {
                test: test.original_name.clone(),
            }));
        }
        out.push('\n');
        out.push_str("    @Test\n");
        match dialect {
            SourceDialect::JavaLike => out.push_str(&format!(
                "    public void {}() throws Exception {{\n",
                name.rendered
            )),
            SourceDialect::KotlinLike => {
                out.push_str(&format!("    fun {}() {{\n", name.rendered))
            }
        }

        let terminator = match dialect {
            SourceDialect::JavaLike => ";",
            SourceDialect::KotlinLike => "",
        };

        for action in &test.setup {
            match &action.detail {
                Some(detail) => {
                    for line in detail.lines() {
                        out.push_str("        ");
                        out.push_str(line.trim());
                        out.push('\n');
                    }
                }
                None => {
                    out.push_str(&format!(
                        "        // setup via {} (no captured statement)\n",
                        action.mechanism.name_token()
                    ));
                }
            }
        }
        if !test.setup.is_empty() {
            out.push('\n');
        }

        let mut deferred_comments: Vec<String> = Vec::new();
        for (i, call) in test.calls.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let url = serialize_url(&call.path, &call.query);
            out.push_str("        given()\n");
            out.push_str(&format!(
                "                .{}(\"{}\")\n",
                call.verb.lower(),
                escape_string_literal(&url)
            ));
            out.push_str("                .then()\n");
            let mut steps: Vec<String> = Vec::new();
            if let Some(status) = call.expected_status {
                steps.push(format!(".statusCode({status})"));
            }
            steps.push(".assertThat()".to_string());
            if let Some(ct) = &call.content_type {
                steps.push(format!(".contentType(\"{}\")", escape_string_literal(ct)));
            }
            for assertion in &call.body_assertions {
                match assertion {
                    BodyAssertion::EmptyOrNull => {
                        steps.push(".body(isEmptyOrNullString())".to_string())
                    }
                    BodyAssertion::EqualsLiteral { literal } => steps.push(format!(
                        ".body(equalTo(\"{}\"))",
                        escape_string_literal(literal)
                    )),
                    BodyAssertion::SizeEquals { count } => {
                        steps.push(format!(".body(\"size()\", equalTo({count}))"))
                    }
                    BodyAssertion::Field { path_expr } => steps.push(format!(
                        ".body(\"{}\", notNullValue())",
                        escape_string_literal(path_expr)
                    )),
                    BodyAssertion::Other { raw } => {
                        let single_line: String =
                            raw.chars().map(|c| if c == '\n' { ' ' } else { c }).collect();
                        deferred_comments.push(format!("// unmapped assertion: {single_line}"));
                    }
                }
            }
            for (si, step) in steps.iter().enumerate() {
                out.push_str("                ");
                out.push_str(step);
                if si + 1 == steps.len() {
                    out.push_str(terminator);
                }
                out.push('\n');
            }
            for comment in deferred_comments.drain(..) {
                out.push_str("        ");
                out.push_str(&comment);
                out.push('\n');
            }
        }
        out.push_str("    }\n");
    }

    out.push_str("}\n");
    Ok(out)
}
