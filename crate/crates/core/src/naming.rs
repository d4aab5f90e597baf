//! The four naming conventions for generated REST API tests.
//!
//! Three grammar-backed conventions build names of the shape
//! `test_<index>_<verb>On[<Parent>]<Qualifier>[WithQueryParams<conditions>]<result>[Using<mechanism>]`,
//! each adding more detail than the previous one; the numeric baseline just
//! counts (`test_0`, `test_1`, ...). Everything here is a pure function of
//! the suite and the configuration.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{HttpCall, HttpVerb, Mechanism, TestCase, TestSuite};
use crate::parser::url::{resolve_template, template_segments};

/// Which naming convention to render.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Numeric baseline: `test_<i>`.
    Number,
    /// Verb + primary resource + expected result.
    Result,
    /// Adds the parent resource and a query-parameter marker.
    Query,
    /// Adds the qualifying query-parameter conditions.
    Condition,
}

impl Convention {
    pub const ALL: [Convention; 4] = [
        Convention::Number,
        Convention::Result,
        Convention::Query,
        Convention::Condition,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Number => "number",
            Convention::Result => "result",
            Convention::Query => "query",
            Convention::Condition => "condition",
        }
    }
}

/// Fault labels shipped by default. The full catalog lives in external fault
/// taxonomies; unknown codes simply render as `ShowsFaults_<codes>`.
pub fn default_fault_labels() -> BTreeMap<String, String> {
    BTreeMap::from([
        (
            "500".to_string(),
            "causes500_internalServerError".to_string(),
        ),
        (
            "schemaInvalidResponse".to_string(),
            "returnsSchemaInvalidResponse".to_string(),
        ),
    ])
}

#[derive(Debug, Clone)]
pub struct NamingConfig {
    pub convention: Convention,
    /// Hard cap on rendered name length; longer names are truncated.
    pub max_name_length: usize,
    /// Drop the `Using<mechanism>` suffix when a strict majority of the
    /// suite's tests share that mechanism.
    pub suppress_majority_mechanism: bool,
    pub fault_label_map: BTreeMap<String, String>,
    /// Render `Returns3Elements` rather than the lowercase `Returns3elements`.
    pub element_token_capitalized: bool,
    /// Truncate at rendered-token boundaries instead of mid-token.
    pub truncate_on_token_boundary: bool,
}

impl Default for NamingConfig {
    fn default() -> Self {
        NamingConfig {
            convention: Convention::Condition,
            max_name_length: 120,
            suppress_majority_mechanism: true,
            fault_label_map: default_fault_labels(),
            element_token_capitalized: true,
            truncate_on_token_boundary: false,
        }
    }
}

impl NamingConfig {
    pub fn with_convention(convention: Convention) -> Self {
        NamingConfig {
            convention,
            ..NamingConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), NamingError> {
        if self.max_name_length < 16 {
            return Err(NamingError::InvalidConfig {
                reason: format!(
                    "max name length {} leaves no room for `test_<i>_` plus a token (minimum 16)",
                    self.max_name_length
                ),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NamingError {
    #[error("test '{test}' has no HTTP call to name")]
    NoFocalCall { test: String },
    #[error("index prefix '{prefix}' alone exceeds the maximum name length {max}")]
    PrefixOverflow { prefix: String, max: usize },
    #[error("invalid naming configuration: {reason}")]
    InvalidConfig { reason: String },
}

/// Summary of the asserted response content for a (GET, 200) call, or the
/// plain status code otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedResult {
    StatusCode(u16),
    Empty,
    EmptyList,
    Elements(u64),
    EmptyObject,
    Object,
    Str,
    Content,
}

/// The result component of a name: a `Returns...` form, a fault label, or a
/// `ShowsFaults_...` code list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResultPart {
    Returns(ExpectedResult),
    FaultLabel(String),
    ShowsFaults(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionPrefix {
    /// The parameter value was the boolean constant `true`.
    None,
    Negative,
    Empty,
}

/// A query parameter worth naming, with the prefix describing why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionToken {
    pub prefix: ConditionPrefix,
    pub param_name: String,
}

/// The decomposed fields of one grammar-based name, before rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameParts {
    pub index: usize,
    pub verb: HttpVerb,
    pub parent_qualifier: Option<String>,
    pub name_qualifier: String,
    pub has_query_marker: bool,
    pub conditions: Vec<ConditionToken>,
    pub result: ResultPart,
    pub mechanisms: Vec<Mechanism>,
}

/// A rendered identifier plus the parts it came from. `parts` is absent for
/// the numeric baseline, which has no grammar fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedName {
    pub index: usize,
    pub parts: Option<NameParts>,
    pub rendered: String,
    pub truncated: bool,
}

/// The call a name describes: the last HTTP call of the test. Earlier calls
/// only set up server state.
pub fn focal_call(test: &TestCase) -> Result<&HttpCall, NamingError> {
    test.calls.last().ok_or_else(|| NamingError::NoFocalCall {
        test: test.original_name.clone(),
    })
}

/// Upper-cases the first letter of each alphanumeric run and drops everything
/// else, preserving inner casing: `includeItems` -> `IncludeItems`,
/// `x-EMextraHeader123` -> `XEMextraHeader123`. Non-ASCII characters act as
/// separators so the output is always identifier-safe.
pub fn camel_token(token: &str) -> String {
    let mut out = String::with_capacity(token.len());
    let mut at_boundary = true;
    for c in token.chars() {
        if c.is_ascii_alphanumeric() {
            if at_boundary {
                out.extend(c.to_uppercase());
                at_boundary = false;
            } else {
                out.push(c);
            }
        } else {
            at_boundary = true;
        }
    }
    out
}

fn sanitize_identifier_fragment(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
        .collect()
}

/// Derives the (name, parent) qualifier pair from the call's path, read
/// through its endpoint template: the last and second-to-last static
/// segments, camel-cased. A path with no static segments qualifies as
/// `Root`.
pub fn derive_qualifiers(
    call: &HttpCall,
    templates: Option<&[String]>,
) -> (String, Option<String>) {
    let template = resolve_template(call, templates);
    let statics: Vec<String> = template_segments(&template)
        .into_iter()
        .filter(|(_, placeholder)| !placeholder)
        .map(|(seg, _)| camel_token(&seg))
        .filter(|tok| !tok.is_empty())
        .collect();
    match statics.len() {
        0 => ("Root".to_string(), None),
        1 => (statics[0].clone(), None),
        n => (statics[n - 1].clone(), Some(statics[n - 2].clone())),
    }
}

/// Classifies the response-body assertions of a (GET, 200) call into the
/// expected-result token. Rows are checked in a fixed order and the first
/// row any assertion matches wins; `Content` is the total fallback.
pub fn classify_expected_result(call: &HttpCall) -> ExpectedResult {
    use crate::model::BodyAssertion as A;
    let assertions = &call.body_assertions;

    if assertions.iter().any(|a| {
        matches!(a, A::EmptyOrNull) || matches!(a, A::EqualsLiteral { literal } if literal.is_empty())
    }) {
        return ExpectedResult::Empty;
    }
    if assertions
        .iter()
        .any(|a| matches!(a, A::SizeEquals { count: 0 }))
    {
        return ExpectedResult::EmptyList;
    }
    if let Some(count) = assertions.iter().find_map(|a| match a {
        A::SizeEquals { count } if *count > 0 => Some(*count),
        _ => None,
    }) {
        return ExpectedResult::Elements(count);
    }
    if assertions
        .iter()
        .any(|a| matches!(a, A::EqualsLiteral { literal } if literal == "{}"))
    {
        return ExpectedResult::EmptyObject;
    }
    if assertions
        .iter()
        .any(|a| matches!(a, A::Field { path_expr } if path_expr != "size()"))
    {
        return ExpectedResult::Object;
    }
    if assertions.iter().any(
        |a| matches!(a, A::EqualsLiteral { literal } if !literal.is_empty() && literal != "{}"),
    ) {
        return ExpectedResult::Str;
    }
    ExpectedResult::Content
}

/// Decides the result component of a test's name. Fault annotations always
/// win over the `Returns...` branch; without faults, only (GET, 200) looks
/// at the body assertions, every other status renders as `Returns<code>`.
pub fn derive_result_part(test: &TestCase, call: &HttpCall, config: &NamingConfig) -> ResultPart {
    if !test.faults.is_empty() {
        if test.faults.len() == 1 {
            let fault = &test.faults[0];
            let label = fault
                .label
                .clone()
                .or_else(|| config.fault_label_map.get(&fault.code).cloned());
            if let Some(label) = label {
                return ResultPart::FaultLabel(label);
            }
        }
        let codes: BTreeSet<String> = test.faults.iter().map(|f| f.code.clone()).collect();
        return ResultPart::ShowsFaults(codes.into_iter().collect());
    }
    match call.expected_status {
        Some(200) if call.verb == HttpVerb::Get => {
            ResultPart::Returns(classify_expected_result(call))
        }
        Some(code) => ResultPart::Returns(ExpectedResult::StatusCode(code)),
        None => ResultPart::Returns(ExpectedResult::Content),
    }
}

fn is_negative_number(value: &str) -> bool {
    let Some(rest) = value.strip_prefix('-') else {
        return false;
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (rest, None),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return false;
    }
    match frac_part {
        Some(f) => !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()),
        None => true,
    }
}

/// Extracts the query parameters worth naming: `true` booleans, negative
/// numbers, and empty strings, in query order. All other values contribute
/// nothing.
pub fn extract_query_conditions(call: &HttpCall) -> Vec<ConditionToken> {
    call.query
        .iter()
        .filter_map(|param| {
            let prefix = if param.value == "true" {
                ConditionPrefix::None
            } else if is_negative_number(&param.value) {
                ConditionPrefix::Negative
            } else if param.value.is_empty() {
                ConditionPrefix::Empty
            } else {
                return None;
            };
            Some(ConditionToken {
                prefix,
                param_name: param.name.clone(),
            })
        })
        .collect()
}

/// Mechanisms used by a strict majority of the suite's tests. Such a
/// mechanism is redundant in individual names within that suite.
pub fn majority_mechanisms(suite: &TestSuite) -> BTreeSet<Mechanism> {
    let mut counts: BTreeMap<Mechanism, usize> = BTreeMap::new();
    for test in &suite.tests {
        let used: BTreeSet<&Mechanism> = test.setup.iter().map(|a| &a.mechanism).collect();
        for mech in used {
            *counts.entry(mech.clone()).or_insert(0) += 1;
        }
    }
    let threshold = suite.tests.len() / 2;
    counts
        .into_iter()
        .filter(|(_, n)| *n > threshold)
        .map(|(m, _)| m)
        .collect()
}

fn result_fragments(result: &ResultPart, config: &NamingConfig, out: &mut Vec<String>) {
    match result {
        ResultPart::Returns(er) => {
            out.push("Returns".to_string());
            match er {
                ExpectedResult::StatusCode(code) => out.push(code.to_string()),
                ExpectedResult::Empty => out.push("Empty".to_string()),
                ExpectedResult::EmptyList => out.push("EmptyList".to_string()),
                ExpectedResult::Elements(n) => {
                    out.push(n.to_string());
                    let token = match (config.element_token_capitalized, *n) {
                        (true, 1) => "Element",
                        (true, _) => "Elements",
                        (false, 1) => "element",
                        (false, _) => "elements",
                    };
                    out.push(token.to_string());
                }
                ExpectedResult::EmptyObject => out.push("EmptyObject".to_string()),
                ExpectedResult::Object => out.push("Object".to_string()),
                ExpectedResult::Str => out.push("String".to_string()),
                ExpectedResult::Content => out.push("Content".to_string()),
            }
        }
        ResultPart::FaultLabel(label) => {
            // established fault labels are kept verbatim apart from the
            // leading capital, so they stay recognizable
            let sanitized = sanitize_identifier_fragment(label);
            let mut chars = sanitized.chars();
            let fragment = match chars.next() {
                Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
                None => String::new(),
            };
            out.push(fragment);
        }
        ResultPart::ShowsFaults(codes) => {
            out.push("ShowsFaults".to_string());
            for code in codes {
                out.push(format!("_{}", sanitize_identifier_fragment(code)));
            }
        }
    }
}

/// Renders name parts into the final identifier, applying the length cap.
/// Truncation cuts trailing characters (or whole trailing tokens when the
/// config asks for it) and never touches the `test_<index>_` prefix.
pub fn render_name(parts: &NameParts, config: &NamingConfig) -> Result<GeneratedName, NamingError> {
    let prefix = format!("test_{}_", parts.index);
    if prefix.len() > config.max_name_length {
        return Err(NamingError::PrefixOverflow {
            prefix,
            max: config.max_name_length,
        });
    }

    let mut fragments: Vec<String> = vec![parts.verb.lower().to_string(), "On".to_string()];
    if let Some(parent) = &parts.parent_qualifier {
        fragments.push(parent.clone());
    }
    fragments.push(parts.name_qualifier.clone());
    if parts.has_query_marker {
        fragments.push("WithQueryParams".to_string());
    }
    for condition in &parts.conditions {
        match condition.prefix {
            ConditionPrefix::None => {}
            ConditionPrefix::Negative => fragments.push("Negative".to_string()),
            ConditionPrefix::Empty => fragments.push("Empty".to_string()),
        }
        fragments.push(camel_token(&condition.param_name));
    }
    result_fragments(&parts.result, config, &mut fragments);
    if !parts.mechanisms.is_empty() {
        fragments.push("Using".to_string());
        for (i, mech) in parts.mechanisms.iter().enumerate() {
            if i > 0 {
                fragments.push("And".to_string());
            }
            fragments.push(sanitize_identifier_fragment(&mech.name_token()));
        }
    }

    let full: String = prefix.clone() + &fragments.concat();
    if full.len() <= config.max_name_length {
        return Ok(GeneratedName {
            index: parts.index,
            parts: Some(parts.clone()),
            rendered: full,
            truncated: false,
        });
    }

    let rendered = if config.truncate_on_token_boundary {
        let mut cut = prefix.clone();
        for fragment in &fragments {
            if cut.len() + fragment.len() > config.max_name_length {
                break;
            }
            cut.push_str(fragment);
        }
        if cut.len() == prefix.len() {
            // no whole token fits; fall back to a character cut
            full[..config.max_name_length].to_string()
        } else {
            cut
        }
    } else {
        full[..config.max_name_length].to_string()
    };

    Ok(GeneratedName {
        index: parts.index,
        parts: Some(parts.clone()),
        rendered,
        truncated: true,
    })
}

/// Names every test of the suite under the configured convention. Indices
/// follow the suite's current test order, so sort first if the suite should
/// read top-to-bottom.
pub fn name_suite(
    suite: &TestSuite,
    config: &NamingConfig,
) -> Result<Vec<GeneratedName>, NamingError> {
    config.validate()?;

    if config.convention == Convention::Number {
        return suite
            .tests
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let rendered = format!("test_{i}");
                if rendered.len() > config.max_name_length {
                    return Err(NamingError::PrefixOverflow {
                        prefix: rendered,
                        max: config.max_name_length,
                    });
                }
                Ok(GeneratedName {
                    index: i,
                    parts: None,
                    rendered,
                    truncated: false,
                })
            })
            .collect();
    }

    let suppressed = if config.suppress_majority_mechanism {
        majority_mechanisms(suite)
    } else {
        BTreeSet::new()
    };
    let templates = suite.templates.as_deref();

    suite
        .tests
        .iter()
        .enumerate()
        .map(|(index, test)| {
            let focal = focal_call(test)?;
            let (name_qualifier, parent) = derive_qualifiers(focal, templates);
            let result = derive_result_part(test, focal, config);
            let (parent_qualifier, has_query_marker, conditions) = match config.convention {
                Convention::Result => (None, false, Vec::new()),
                Convention::Query => (parent, !focal.query.is_empty(), Vec::new()),
                Convention::Condition => {
                    (parent, !focal.query.is_empty(), extract_query_conditions(focal))
                }
                Convention::Number => unreachable!("handled above"),
            };
            let mechanisms: Vec<Mechanism> = test
                .setup
                .iter()
                .map(|a| a.mechanism.clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .filter(|m| !suppressed.contains(m))
                .collect();
            let parts = NameParts {
                index,
                verb: focal.verb,
                parent_qualifier,
                name_qualifier,
                has_query_marker,
                conditions,
                result,
                mechanisms,
            };
            render_name(&parts, config)
        })
        .collect()
}
