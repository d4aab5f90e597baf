//! Intermediate representation of REST test suites.
//!
//! Every type here is immutable plain data: parsing builds values, naming and
//! sorting read them, and transformations return new values instead of
//! mutating in place. The JSON wire format for these types lives in [`crate::ir`].

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The eight HTTP verbs a test call may use. Anything else is a parse error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum HttpVerb {
    Get,
    Post,
    Put,
    Delete,
    Options,
    Patch,
    Trace,
    Head,
}

impl HttpVerb {
    pub const ALL: [HttpVerb; 8] = [
        HttpVerb::Get,
        HttpVerb::Post,
        HttpVerb::Put,
        HttpVerb::Delete,
        HttpVerb::Options,
        HttpVerb::Patch,
        HttpVerb::Trace,
        HttpVerb::Head,
    ];

    /// Lowercase method name as it appears in a fluent chain (`.get(...)`).
    pub fn lower(&self) -> &'static str {
        match self {
            HttpVerb::Get => "get",
            HttpVerb::Post => "post",
            HttpVerb::Put => "put",
            HttpVerb::Delete => "delete",
            HttpVerb::Options => "options",
            HttpVerb::Patch => "patch",
            HttpVerb::Trace => "trace",
            HttpVerb::Head => "head",
        }
    }

    /// Uppercase wire name (`GET`).
    pub fn as_str(&self) -> &'static str {
        match self {
            HttpVerb::Get => "GET",
            HttpVerb::Post => "POST",
            HttpVerb::Put => "PUT",
            HttpVerb::Delete => "DELETE",
            HttpVerb::Options => "OPTIONS",
            HttpVerb::Patch => "PATCH",
            HttpVerb::Trace => "TRACE",
            HttpVerb::Head => "HEAD",
        }
    }

    /// Position in the suite-ordering verb priority (GET first, HEAD last).
    pub fn rank(&self) -> u8 {
        match self {
            HttpVerb::Get => 0,
            HttpVerb::Post => 1,
            HttpVerb::Put => 2,
            HttpVerb::Delete => 3,
            HttpVerb::Options => 4,
            HttpVerb::Patch => 5,
            HttpVerb::Trace => 6,
            HttpVerb::Head => 7,
        }
    }

    /// Recognizes the lowercase chain-step spelling. Unknown verbs are `None`.
    pub fn from_step(step: &str) -> Option<HttpVerb> {
        Self::ALL.iter().copied().find(|v| v.lower() == step)
    }
}

impl fmt::Display for HttpVerb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One decoded query parameter. The value may be empty ("country=").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryParam {
    pub name: String,
    pub value: String,
}

impl QueryParam {
    pub fn new(name: impl Into<String>, value: impl Into<String>) -> Self {
        QueryParam {
            name: name.into(),
            value: value.into(),
        }
    }
}

/// A descriptor of one response-body assertion, abstracted away from the
/// concrete matcher call. A size check must be encoded as `SizeEquals`, never
/// as `Field("size()")`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodyAssertion {
    EmptyOrNull,
    EqualsLiteral { literal: String },
    SizeEquals { count: u64 },
    Field { path_expr: String },
    Other { raw: String },
}

impl BodyAssertion {
    pub fn equals_literal(literal: impl Into<String>) -> Self {
        BodyAssertion::EqualsLiteral {
            literal: literal.into(),
        }
    }

    pub fn field(path_expr: impl Into<String>) -> Self {
        BodyAssertion::Field {
            path_expr: path_expr.into(),
        }
    }

    pub fn other(raw: impl Into<String>) -> Self {
        BodyAssertion::Other { raw: raw.into() }
    }
}

/// Auxiliary infrastructure a test relies on (data insertion, stubbing).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mechanism {
    Sql,
    Mongo,
    WireMock,
    Other(String),
}

impl Mechanism {
    /// Token used when the mechanism is rendered into a test name
    /// ("UsingSQL", "UsingMongo", "UsingWireMock").
    pub fn name_token(&self) -> String {
        match self {
            Mechanism::Sql => "SQL".to_string(),
            Mechanism::Mongo => "Mongo".to_string(),
            Mechanism::WireMock => "WireMock".to_string(),
            Mechanism::Other(label) => label.clone(),
        }
    }

    fn wire_str(&self) -> &str {
        match self {
            Mechanism::Sql => "sql",
            Mechanism::Mongo => "mongo",
            Mechanism::WireMock => "wiremock",
            Mechanism::Other(label) => label,
        }
    }

    fn from_wire(s: &str) -> Mechanism {
        match s {
            "sql" => Mechanism::Sql,
            "mongo" => Mechanism::Mongo,
            "wiremock" => Mechanism::WireMock,
            other => Mechanism::Other(other.to_string()),
        }
    }
}

impl Serialize for Mechanism {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.wire_str())
    }
}

impl<'de> Deserialize<'de> for Mechanism {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s.is_empty() {
            return Err(D::Error::custom("mechanism must be a nonempty string"));
        }
        Ok(Mechanism::from_wire(&s))
    }
}

/// One setup action (e.g. a SQL insertion chain). `detail` carries the raw
/// source statement text when the action came from parsing, so a suite can be
/// re-emitted with its insertions intact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetupAction {
    pub mechanism: Mechanism,
    #[serde(default)]
    pub detail: Option<String>,
}

impl SetupAction {
    pub fn new(mechanism: Mechanism) -> Self {
        SetupAction {
            mechanism,
            detail: None,
        }
    }
}

/// An expected-fault annotation on a test (code plus optional short label).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultAnnotation {
    pub code: String,
    #[serde(default)]
    pub label: Option<String>,
}

impl FaultAnnotation {
    pub fn new(code: impl Into<String>) -> Self {
        FaultAnnotation {
            code: code.into(),
            label: None,
        }
    }
}

/// One HTTP call inside a test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HttpCall {
    pub verb: HttpVerb,
    /// URL exactly as written in the source (may include concatenated
    /// base-URL fragments); empty when the call was built programmatically.
    pub raw_url: String,
    pub path: String,
    #[serde(default)]
    pub path_template: Option<String>,
    #[serde(default)]
    pub query: Vec<QueryParam>,
    #[serde(default)]
    pub expected_status: Option<u16>,
    #[serde(default)]
    pub content_type: Option<String>,
    #[serde(default)]
    pub body_assertions: Vec<BodyAssertion>,
}

impl HttpCall {
    pub fn new(verb: HttpVerb, path: impl Into<String>) -> Self {
        let path = path.into();
        HttpCall {
            verb,
            raw_url: path.clone(),
            path,
            path_template: None,
            query: Vec::new(),
            expected_status: None,
            content_type: None,
            body_assertions: Vec::new(),
        }
    }
}

/// One generated test: ordered HTTP calls plus setup and fault metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub original_name: String,
    /// Position at generation time; unique within a suite and never
    /// recomputed, so it anchors stable tie-breaking when sorting.
    pub creation_index: u64,
    #[serde(default)]
    pub calls: Vec<HttpCall>,
    #[serde(default)]
    pub setup: Vec<SetupAction>,
    #[serde(default)]
    pub faults: Vec<FaultAnnotation>,
    #[serde(default)]
    pub source_span: Option<(usize, usize)>,
}

impl TestCase {
    pub fn new(original_name: impl Into<String>, creation_index: u64) -> Self {
        TestCase {
            original_name: original_name.into(),
            creation_index,
            calls: Vec::new(),
            setup: Vec::new(),
            faults: Vec::new(),
            source_span: None,
        }
    }
}

/// Source language flavor of a parsed suite file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceDialect {
    #[serde(rename = "java")]
    JavaLike,
    #[serde(rename = "kotlin")]
    KotlinLike,
}

/// A whole test class worth of tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestSuite {
    pub name: String,
    #[serde(default)]
    pub source_dialect: Option<SourceDialect>,
    /// Endpoint path templates (OpenAPI style) used to qualify concrete paths;
    /// when absent, parameter segments are inferred from the paths themselves.
    #[serde(default)]
    pub templates: Option<Vec<String>>,
    #[serde(default)]
    pub tests: Vec<TestCase>,
}

impl TestSuite {
    pub fn new(name: impl Into<String>) -> Self {
        TestSuite {
            name: name.into(),
            source_dialect: None,
            templates: None,
            tests: Vec::new(),
        }
    }
}

/// One broken invariant, described as data rather than an error: the suite
/// stays usable and the caller decides what to do with the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Which test the violation belongs to; "suite" for suite-level rules.
    pub test: String,
    pub field: String,
    pub rule: String,
}

impl Violation {
    fn new(test: impl Into<String>, field: impl Into<String>, rule: impl Into<String>) -> Self {
        Violation {
            test: test.into(),
            field: field.into(),
            rule: rule.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.test, self.field, self.rule)
    }
}

fn is_identifier_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Checks every structural invariant of the IR and reports violations.
///
/// Returns an empty list iff the suite is fully valid. Identical input always
/// yields the identical list.
pub fn validate_suite(suite: &TestSuite) -> Vec<Violation> {
    let mut out = Vec::new();

    // creation_index uniqueness, reporting each clashing pair once
    for (i, a) in suite.tests.iter().enumerate() {
        for b in suite.tests.iter().skip(i + 1) {
            if a.creation_index == b.creation_index {
                out.push(Violation::new(
                    format!("{} / {}", a.original_name, b.original_name),
                    "creation_index",
                    format!(
                        "creation_index {} is shared by tests '{}' and '{}'",
                        a.creation_index, a.original_name, b.original_name
                    ),
                ));
            }
        }
    }

    for test in &suite.tests {
        let tname = test.original_name.as_str();

        if let Some((start, end)) = test.source_span {
            if start >= end {
                out.push(Violation::new(
                    tname,
                    "source_span",
                    format!("span start {start} must be less than end {end}"),
                ));
            }
        }

        let mut seen_codes = std::collections::BTreeSet::new();
        for fault in &test.faults {
            if fault.code.is_empty() {
                out.push(Violation::new(tname, "faults.code", "fault code is empty"));
            }
            if !seen_codes.insert(&fault.code) {
                out.push(Violation::new(
                    tname,
                    "faults.code",
                    format!("duplicate fault code '{}'", fault.code),
                ));
            }
        }

        for action in &test.setup {
            if let Mechanism::Other(label) = &action.mechanism {
                if !is_identifier_token(label) {
                    out.push(Violation::new(
                        tname,
                        "setup.mechanism",
                        format!("custom mechanism label '{label}' is not an identifier-safe token"),
                    ));
                }
            }
        }

        for (ci, call) in test.calls.iter().enumerate() {
            let field = |name: &str| format!("calls[{ci}].{name}");

            if !call.path.starts_with('/') {
                out.push(Violation::new(
                    tname,
                    field("path"),
                    format!("path '{}' must begin with '/'", call.path),
                ));
            }
            if call.path.contains('?') || call.path.contains('#') {
                out.push(Violation::new(
                    tname,
                    field("path"),
                    format!("path '{}' must not contain '?' or '#'", call.path),
                ));
            }
            if let Some(status) = call.expected_status {
                if !(100..=599).contains(&status) {
                    out.push(Violation::new(
                        tname,
                        field("expected_status"),
                        format!("status {status} is outside [100, 599]"),
                    ));
                }
            }
            if let Some(template) = &call.path_template {
                let path_segs: Vec<&str> = call.path.split('/').skip(1).collect();
                let tmpl_segs: Vec<&str> = template.split('/').skip(1).collect();
                if path_segs.len() != tmpl_segs.len() {
                    out.push(Violation::new(
                        tname,
                        field("path_template"),
                        format!(
                            "template '{}' has {} segments but path '{}' has {}",
                            template,
                            tmpl_segs.len(),
                            call.path,
                            path_segs.len()
                        ),
                    ));
                } else {
                    for (p, t) in path_segs.iter().zip(&tmpl_segs) {
                        let is_placeholder = t.starts_with('{') && t.ends_with('}');
                        if !is_placeholder && p != t {
                            out.push(Violation::new(
                                tname,
                                field("path_template"),
                                format!("static segment '{t}' of template '{template}' does not match path segment '{p}'"),
                            ));
                        }
                    }
                }
            }
            for (qi, param) in call.query.iter().enumerate() {
                if param.name.is_empty() {
                    out.push(Violation::new(
                        tname,
                        format!("calls[{ci}].query[{qi}].name"),
                        "query parameter name is empty",
                    ));
                } else if param.name.contains(['=', '&', '?']) {
                    out.push(Violation::new(
                        tname,
                        format!("calls[{ci}].query[{qi}].name"),
                        format!("decoded name '{}' contains '=', '&' or '?'", param.name),
                    ));
                }
            }
            for (ai, assertion) in call.body_assertions.iter().enumerate() {
                if let BodyAssertion::Field { path_expr } = assertion {
                    if path_expr.is_empty() {
                        out.push(Violation::new(
                            tname,
                            format!("calls[{ci}].body_assertions[{ai}]"),
                            "field path expression is empty",
                        ));
                    } else if path_expr == "size()" {
                        out.push(Violation::new(
                            tname,
                            format!("calls[{ci}].body_assertions[{ai}]"),
                            "a size check must be encoded as size_equals, not a field assertion",
                        ));
                    }
                }
            }
        }
    }

    out
}
