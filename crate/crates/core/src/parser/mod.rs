//! Parser for the constrained REST-Assured-style fluent DSL found in
//! generated JVM test suites.
//!
//! The accepted subset is deliberately small: `@Test` methods whose bodies
//! contain `given()...` request chains plus data-insertion statements. Each
//! method becomes one [`TestCase`]; each fluent chain becomes one
//! [`HttpCall`]. Byte spans of every method are recorded so the rewriter can
//! later rename and reorder without touching anything else.

mod lexer;
pub mod setup;
pub mod url;

pub use setup::{detect_setup, detect_setup_with, KeywordPattern, KeywordRule, SetupKeywords};
pub use url::{
    infer_param_segments, match_template, parse_url, resolve_template, serialize_url,
    template_segments,
};

use std::fmt;

use thiserror::Error;

use crate::model::{
    BodyAssertion, HttpCall, HttpVerb, SetupAction, SourceDialect, TestCase, TestSuite,
};

use lexer::{Lexer, LineIndex, Token, TokenKind};

/// 1-based line/column pair for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{position}: {message}")]
    Syntax { position: Position, message: String },
    #[error("{position}: unsupported construct: {construct}")]
    Unsupported { position: Position, construct: String },
    #[error("malformed URL '{url}': {reason}")]
    MalformedUrl { url: String, reason: String },
}

impl ParseError {
    pub fn position(&self) -> Option<Position> {
        match self {
            ParseError::Syntax { position, .. } | ParseError::Unsupported { position, .. } => {
                Some(*position)
            }
            ParseError::MalformedUrl { .. } => None,
        }
    }

    /// The message without its position, for `file:line:col: message`
    /// composition by callers that know the file.
    pub fn bare_message(&self) -> String {
        match self {
            ParseError::Syntax { message, .. } => message.clone(),
            ParseError::Unsupported { construct, .. } => {
                format!("unsupported construct: {construct}")
            }
            ParseError::MalformedUrl { .. } => self.to_string(),
        }
    }
}

/// A non-fatal note emitted in lenient mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub position: Position,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.position, self.message)
    }
}

/// One input file to parse.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
    pub dialect: SourceDialect,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: impl Into<String>, dialect: SourceDialect) -> Self {
        SourceFile {
            path: path.into(),
            text: text.into(),
            dialect,
        }
    }

    /// Picks the dialect from the file extension (`.kt`/`.kts` is Kotlin).
    pub fn from_path_and_text(path: impl Into<String>, text: impl Into<String>) -> Self {
        let path = path.into();
        let dialect = if path.ends_with(".kt") || path.ends_with(".kts") {
            SourceDialect::KotlinLike
        } else {
            SourceDialect::JavaLike
        };
        SourceFile::new(path, text, dialect)
    }
}

/// Byte spans of one test method: its annotations, its body, and the whole
/// region from the first annotation through the closing brace. Slicing the
/// file text by `full_span` reproduces exactly the annotations + signature +
/// body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodBlock {
    pub name: String,
    pub annotation_span: (usize, usize),
    pub body_span: (usize, usize),
    pub full_span: (usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Degrade unsupported constructs to diagnostics instead of failing.
    pub lenient: bool,
    pub keywords: SetupKeywords,
}

#[derive(Debug)]
pub struct ParseOutcome {
    pub suite: TestSuite,
    pub blocks: Vec<MethodBlock>,
    pub warnings: Vec<Diagnostic>,
}

/// Parses every `@Test` method of a source file into the IR.
pub fn parse_source(file: &SourceFile, options: &ParseOptions) -> Result<ParseOutcome, ParseError> {
    let (tokens, line_index) = Lexer::new(&file.text).tokenize()?;
    let mut parser = FileParser {
        file,
        tokens: &tokens,
        line_index: &line_index,
        options,
        warnings: Vec::new(),
    };
    parser.parse()
}

struct FileParser<'a> {
    file: &'a SourceFile,
    tokens: &'a [Token],
    line_index: &'a LineIndex,
    options: &'a ParseOptions,
    warnings: Vec<Diagnostic>,
}

impl<'a> FileParser<'a> {
    fn pos(&self, offset: usize) -> Position {
        self.line_index.position(offset)
    }

    fn syntax(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.pos(offset),
            message: message.into(),
        }
    }

    fn warn(&mut self, offset: usize, message: impl Into<String>) {
        self.warnings.push(Diagnostic {
            position: self.pos(offset),
            message: message.into(),
        });
    }

    fn slice(&self, start: usize, end: usize) -> &'a str {
        &self.file.text[start..end]
    }

    /// Index of the ')' matching tokens[open], which must be '('.
    fn matching_paren(&self, open: usize) -> Result<usize, ParseError> {
        let mut depth = 0usize;
        for (i, token) in self.tokens.iter().enumerate().skip(open) {
            if token.is_punct('(') {
                depth += 1;
            } else if token.is_punct(')') {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
        }
        Err(self.syntax(self.tokens[open].start, "unbalanced parentheses"))
    }

    fn matching_brace(&self, open: usize) -> Result<usize, ParseError> {
        let mut depth = 0usize;
        for (i, token) in self.tokens.iter().enumerate().skip(open) {
            if token.is_punct('{') {
                depth += 1;
            } else if token.is_punct('}') {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
        }
        Err(self.syntax(self.tokens[open].start, "unbalanced braces in test method"))
    }

    fn suite_name(&self) -> String {
        for (i, token) in self.tokens.iter().enumerate() {
            if matches!(token.ident(), Some("class" | "object")) {
                if let Some(name) = self.tokens.get(i + 1).and_then(|t| t.ident()) {
                    return name.to_string();
                }
            }
        }
        let stem = std::path::Path::new(&self.file.path)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("");
        if stem.is_empty() {
            "suite".to_string()
        } else {
            stem.to_string()
        }
    }

    fn parse(&mut self) -> Result<ParseOutcome, ParseError> {
        let mut suite = TestSuite::new(self.suite_name());
        suite.source_dialect = Some(self.file.dialect);
        let mut blocks = Vec::new();

        let mut i = 0;
        while i < self.tokens.len() {
            if !self.tokens[i].is_punct('@') {
                i += 1;
                continue;
            }
            // collect a contiguous annotation run
            let run_start_tok = i;
            let mut test_annotation: Option<(usize, usize)> = None;
            let mut j = i;
            while j + 1 < self.tokens.len()
                && self.tokens[j].is_punct('@')
                && self.tokens[j + 1].ident().is_some()
            {
                let ann_at = self.tokens[j].start;
                let is_test = self.tokens[j + 1].ident() == Some("Test");
                let mut ann_end = self.tokens[j + 1].end;
                j += 2;
                if j < self.tokens.len() && self.tokens[j].is_punct('(') {
                    let close = self.matching_paren(j)?;
                    ann_end = self.tokens[close].end;
                    j = close + 1;
                }
                if is_test {
                    test_annotation = Some((ann_at, ann_end));
                }
            }
            let Some(annotation_span) = test_annotation else {
                i = j.max(i + 1);
                continue;
            };

            let (block, test, next) =
                self.parse_method(run_start_tok, j, annotation_span, blocks.len() as u64)?;
            blocks.push(block);
            suite.tests.push(test);
            i = next;
        }

        Ok(ParseOutcome {
            suite,
            blocks,
            warnings: std::mem::take(&mut self.warnings),
        })
    }

    /// Parses one method after its annotation run. Returns the block, the
    /// test case, and the token index just past the body.
    fn parse_method(
        &mut self,
        run_start_tok: usize,
        header_start: usize,
        annotation_span: (usize, usize),
        creation_index: u64,
    ) -> Result<(MethodBlock, TestCase, usize), ParseError> {
        let mut name_idx: Option<usize> = None;
        let mut body_open: Option<usize> = None;
        let mut k = header_start;
        while k < self.tokens.len() {
            let token = &self.tokens[k];
            if token.is_punct('{') {
                body_open = Some(k);
                break;
            }
            if token.is_punct(';') {
                return Err(self.syntax(token.start, "expected a method body after @Test"));
            }
            if name_idx.is_none()
                && token.ident().is_some()
                && self.tokens.get(k + 1).is_some_and(|t| t.is_punct('('))
            {
                name_idx = Some(k);
                k = self.matching_paren(k + 1)? + 1;
                continue;
            }
            k += 1;
        }
        let body_open = body_open.ok_or_else(|| {
            self.syntax(annotation_span.0, "expected a method body after @Test")
        })?;
        let name_idx = name_idx.ok_or_else(|| {
            self.syntax(annotation_span.0, "expected a method name after @Test")
        })?;
        let body_close = self.matching_brace(body_open)?;

        let name = self.tokens[name_idx]
            .ident()
            .expect("checked above")
            .to_string();
        let full_span = (self.tokens[run_start_tok].start, self.tokens[body_close].end);
        let body_span = (self.tokens[body_open].start, self.tokens[body_close].end);
        let block = MethodBlock {
            name: name.clone(),
            annotation_span,
            body_span,
            full_span,
        };

        let mut test = TestCase::new(name, creation_index);
        test.source_span = Some(full_span);
        self.extract_body(body_open + 1, body_close, &mut test)?;

        Ok((block, test, body_close + 1))
    }

    /// Walks the body tokens, extracting HTTP chains and setup statements.
    fn extract_body(
        &mut self,
        start: usize,
        end: usize,
        test: &mut TestCase,
    ) -> Result<(), ParseError> {
        let mut stmt_start = start;
        let mut stmt_has_chain = false;
        let mut i = start;
        let mut depth = 0usize;
        while i < end {
            let token = &self.tokens[i];
            if token.is_punct('(') {
                depth += 1;
                i += 1;
                continue;
            }
            if token.is_punct(')') {
                depth = depth.saturating_sub(1);
            }
            if token.ident() == Some("given")
                && self.tokens.get(i + 1).is_some_and(|t| t.is_punct('('))
            {
                let (call, chain_end) = self.parse_http_chain(i)?;
                if let Some(call) = call {
                    test.calls.push(call);
                }
                stmt_has_chain = true;
                i = chain_end;
                continue;
            }
            let boundary = if depth == 0 {
                if token.is_punct(';') || token.is_punct('{') || token.is_punct('}') {
                    true
                } else {
                    self.is_newline_boundary(i, end)
                }
            } else {
                false
            };
            if boundary {
                // braces stay outside the statement text, ';' stays inside
                let stmt_end = if token.is_punct('{') || token.is_punct('}') {
                    i
                } else {
                    i + 1
                };
                self.finish_statement(stmt_start, stmt_end.min(end), stmt_has_chain, test);
                stmt_start = i + 1;
                stmt_has_chain = false;
            }
            i += 1;
        }
        if stmt_start < end {
            self.finish_statement(stmt_start, end, stmt_has_chain, test);
        }
        Ok(())
    }

    /// Statement break between token i and i+1 for newline-separated
    /// dialects: the next token starts a new line and neither side continues
    /// an expression.
    fn is_newline_boundary(&self, i: usize, end: usize) -> bool {
        if self.file.dialect != SourceDialect::KotlinLike {
            return false;
        }
        let Some(next) = self.tokens.get(i + 1) else {
            return false;
        };
        if i + 1 >= end {
            return false;
        }
        let cur = &self.tokens[i];
        let ends_expr = matches!(
            cur.kind,
            TokenKind::Ident(_) | TokenKind::Str(_) | TokenKind::Num { .. }
        ) || cur.is_punct(')')
            || cur.is_punct('}');
        if !ends_expr {
            return false;
        }
        if next.is_punct('.') || next.is_punct('=') || next.is_punct('?') || next.is_punct(':') {
            return false;
        }
        self.line_index.position(cur.end).line < self.line_index.position(next.start).line
    }

    /// Applies setup detection to a finished non-HTTP statement.
    fn finish_statement(
        &mut self,
        start_tok: usize,
        end_tok: usize,
        has_chain: bool,
        test: &mut TestCase,
    ) {
        if has_chain || start_tok >= end_tok {
            return;
        }
        let text_start = self.tokens[start_tok].start;
        let text_end = self.tokens[end_tok - 1].end;
        let text = self.slice(text_start, text_end).trim();
        if text.is_empty() || text == ";" {
            return;
        }

        // a companion execInsertions… call extends the preceding action
        let is_exec_companion = (start_tok..end_tok).any(|t| {
            self.tokens[t]
                .ident()
                .is_some_and(|id| id.starts_with("execInsertions"))
        });
        if is_exec_companion {
            if let Some(last) = test.setup.last_mut() {
                let joined = match &last.detail {
                    Some(detail) => format!("{detail}\n{text}"),
                    None => text.to_string(),
                };
                last.detail = Some(joined);
            }
            return;
        }

        for mechanism in self.options.keywords.match_statement(text) {
            test.setup.push(SetupAction {
                mechanism,
                detail: Some(text.to_string()),
            });
        }
    }

    /// Parses one fluent chain starting at the `given` token. Returns the
    /// call (None when the chain was skipped leniently) and the index of the
    /// first token after the chain.
    fn parse_http_chain(
        &mut self,
        given_idx: usize,
    ) -> Result<(Option<HttpCall>, usize), ParseError> {
        let given_at = self.tokens[given_idx].start;
        let mut i = self.matching_paren(given_idx + 1)? + 1;

        let mut after_then = false;
        let mut verb: Option<(HttpVerb, usize)> = None;
        let mut raw_url = String::new();
        let mut url_value: Option<String> = None;
        let mut expected_status: Option<u16> = None;
        let mut content_type: Option<String> = None;
        let mut assertions: Vec<BodyAssertion> = Vec::new();

        while i + 1 < self.tokens.len()
            && self.tokens[i].is_punct('.')
            && self.tokens[i + 1].ident().is_some()
        {
            let step_idx = i + 1;
            let step = self.tokens[step_idx].ident().expect("checked").to_string();
            let step_at = self.tokens[step_idx].start;
            let (args, past) = if self.tokens.get(step_idx + 1).is_some_and(|t| t.is_punct('(')) {
                let close = self.matching_paren(step_idx + 1)?;
                ((step_idx + 2, close), close + 1)
            } else {
                ((step_idx + 1, step_idx + 1), step_idx + 1)
            };
            i = past;

            if let Some(v) = HttpVerb::from_step(&step) {
                if verb.is_some() {
                    let err = ParseError::Unsupported {
                        position: self.pos(step_at),
                        construct: "multiple HTTP verb steps in one chain".to_string(),
                    };
                    if self.options.lenient {
                        self.warn(step_at, err.bare_message());
                        continue;
                    }
                    return Err(err);
                }
                verb = Some((v, step_at));
                raw_url = if args.0 < args.1 {
                    self.slice(self.tokens[args.0].start, self.tokens[args.1 - 1].end)
                        .to_string()
                } else {
                    String::new()
                };
                url_value = self.literal_url(args)?;
                if url_value.is_none() {
                    let err =
                        self.syntax(step_at, "HTTP verb step requires a string-literal URL");
                    if self.options.lenient {
                        self.warn(step_at, err.bare_message());
                        verb = None;
                    } else {
                        return Err(err);
                    }
                }
                continue;
            }

            match step.as_str() {
                "when" | "assertThat" | "and" => {}
                "then" => after_then = true,
                "baseUri" | "accept" | "header" | "port" | "cookie" => {}
                "contentType" => {
                    if after_then {
                        content_type = self.first_string_arg(args);
                    }
                }
                "statusCode" => {
                    match self.first_int_arg(args) {
                        Some(n) if n <= u16::MAX as u64 => expected_status = Some(n as u16),
                        _ => {
                            let err = self.syntax(
                                step_at,
                                "statusCode requires an integer status literal",
                            );
                            if self.options.lenient {
                                self.warn(step_at, err.bare_message());
                            } else {
                                return Err(err);
                            }
                        }
                    }
                }
                "body" => {
                    if after_then {
                        assertions.push(self.classify_body_assertion(args));
                    }
                    // before then() the body is the request payload
                }
                _ => {
                    let raw = self
                        .slice(self.tokens[step_idx].start, self.tokens[past - 1].end)
                        .to_string();
                    let err = ParseError::Unsupported {
                        position: self.pos(step_at),
                        construct: format!(".{step}(...)"),
                    };
                    if self.options.lenient {
                        self.warn(step_at, err.bare_message());
                        assertions.push(BodyAssertion::other(raw));
                    } else {
                        return Err(err);
                    }
                }
            }
        }

        let Some((verb, _)) = verb else {
            let err = ParseError::Unsupported {
                position: self.pos(given_at),
                construct: "fluent chain without an HTTP verb step".to_string(),
            };
            if self.options.lenient {
                self.warn(given_at, err.bare_message());
                return Ok((None, i));
            }
            return Err(err);
        };

        let url = url_value.expect("verb implies a URL literal");
        let (path, query) = parse_url(&url)?;
        let call = HttpCall {
            verb,
            raw_url,
            path,
            path_template: None,
            query,
            expected_status,
            content_type,
            body_assertions: assertions,
        };
        Ok((Some(call), i))
    }

    /// Concatenated string-literal content of an argument range, with any
    /// leading base-URL fragment (identifier + '+', or a Kotlin `$name`
    /// template head) dropped.
    fn literal_url(&self, (start, end): (usize, usize)) -> Result<Option<String>, ParseError> {
        let mut depth = 0usize;
        let mut combined = String::new();
        let mut any = false;
        for token in &self.tokens[start..end] {
            if token.is_punct('(') {
                depth += 1;
            } else if token.is_punct(')') {
                depth = depth.saturating_sub(1);
            } else if depth == 0 {
                if let Some(value) = token.str_value() {
                    combined.push_str(value);
                    any = true;
                }
            }
        }
        if !any {
            return Ok(None);
        }
        if let Some(rest) = combined.strip_prefix("${") {
            if let Some(close) = rest.find('}') {
                combined = rest[close + 1..].to_string();
            }
        } else if combined.starts_with('$') {
            let tail = combined[1..]
                .trim_start_matches(|c: char| c.is_ascii_alphanumeric() || c == '_');
            combined = tail.to_string();
        }
        Ok(Some(combined))
    }

    fn first_string_arg(&self, (start, end): (usize, usize)) -> Option<String> {
        self.tokens[start..end]
            .iter()
            .find_map(|t| t.str_value().map(str::to_string))
    }

    fn first_int_arg(&self, (start, end): (usize, usize)) -> Option<u64> {
        self.tokens[start..end].iter().find_map(|t| match &t.kind {
            TokenKind::Num { int, .. } => *int,
            _ => None,
        })
    }

    /// Maps a response-side `.body(...)` argument list onto an assertion
    /// descriptor. Shapes that match no known pattern are kept as `Other`.
    fn classify_body_assertion(&self, (start, end): (usize, usize)) -> BodyAssertion {
        let raw = if start < end {
            self.slice(self.tokens[start].start, self.tokens[end - 1].end)
                .to_string()
        } else {
            String::new()
        };
        let first = match self.tokens.get(start) {
            Some(t) if start < end => t,
            _ => return BodyAssertion::other(raw),
        };

        if let Some(field) = first.str_value() {
            if field == "size()" {
                // "size()" must pair with equalTo(<int>) to be a size check
                if let Some(count) = self.equal_to_int(start + 1, end) {
                    return BodyAssertion::SizeEquals { count };
                }
                return BodyAssertion::other(raw);
            }
            return BodyAssertion::field(field);
        }

        match first.ident() {
            Some("isEmptyOrNullString") | Some("emptyOrNullString") => BodyAssertion::EmptyOrNull,
            Some("equalTo") => {
                if let Some(literal) = self.first_string_arg((start + 1, end)) {
                    BodyAssertion::equals_literal(literal)
                } else {
                    BodyAssertion::other(raw)
                }
            }
            _ => BodyAssertion::other(raw),
        }
    }

    fn equal_to_int(&self, start: usize, end: usize) -> Option<u64> {
        let mut i = start;
        while i < end {
            if self.tokens[i].ident() == Some("equalTo")
                && self.tokens.get(i + 1).is_some_and(|t| t.is_punct('('))
            {
                return self.first_int_arg((i + 2, end));
            }
            i += 1;
        }
        None
    }
}
