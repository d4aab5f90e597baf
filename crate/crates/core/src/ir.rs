//! Canonical JSON encoding of the test-suite IR.
//!
//! The document shape is `{"suite": {...}}`, UTF-8. Reading is strict by
//! default: unknown fields anywhere in the document are rejected with the
//! offending path. Lenient mode ignores them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::TestSuite;

#[derive(Debug, Error)]
pub enum IrError {
    #[error("invalid IR JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown field '{field}' at {path}")]
    UnknownField { path: String, field: String },
}

#[derive(Serialize, Deserialize)]
struct IrDocument {
    suite: TestSuite,
}

/// Serializes a suite to the canonical pretty-printed document.
pub fn to_json(suite: &TestSuite) -> String {
    let doc = IrDocument {
        suite: suite.clone(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("IR types always serialize");
    text.push('\n');
    text
}

/// The document as a JSON value, for callers that aggregate several suites
/// into one output.
pub fn document_value(suite: &TestSuite) -> serde_json::Value {
    serde_json::to_value(IrDocument {
        suite: suite.clone(),
    })
    .expect("IR types always serialize")
}

/// Parses an IR document. With `strict` set, any unknown JSON field is an
/// error; otherwise unknown fields are ignored.
pub fn from_json(text: &str, strict: bool) -> Result<TestSuite, IrError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if strict {
        check_object(&value, "$", &["suite"])?;
        if let Some(suite) = value.get("suite") {
            check_suite(suite)?;
        }
    }
    let doc: IrDocument = serde_json::from_value(value)?;
    Ok(doc.suite)
}

fn check_object(
    value: &serde_json::Value,
    path: &str,
    allowed: &[&str],
) -> Result<(), IrError> {
    if let Some(map) = value.as_object() {
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(IrError::UnknownField {
                    path: path.to_string(),
                    field: key.clone(),
                });
            }
        }
    }
    Ok(())
}

fn check_suite(suite: &serde_json::Value) -> Result<(), IrError> {
    check_object(suite, "$.suite", &["name", "source_dialect", "templates", "tests"])?;
    let Some(tests) = suite.get("tests").and_then(|t| t.as_array()) else {
        return Ok(());
    };
    for (ti, test) in tests.iter().enumerate() {
        let tpath = format!("$.suite.tests[{ti}]");
        check_object(
            test,
            &tpath,
            &["original_name", "creation_index", "calls", "setup", "faults", "source_span"],
        )?;
        if let Some(calls) = test.get("calls").and_then(|c| c.as_array()) {
            for (ci, call) in calls.iter().enumerate() {
                let cpath = format!("{tpath}.calls[{ci}]");
                check_object(
                    call,
                    &cpath,
                    &[
                        "verb",
                        "raw_url",
                        "path",
                        "path_template",
                        "query",
                        "expected_status",
                        "content_type",
                        "body_assertions",
                    ],
                )?;
                if let Some(query) = call.get("query").and_then(|q| q.as_array()) {
                    for (qi, param) in query.iter().enumerate() {
                        check_object(param, &format!("{cpath}.query[{qi}]"), &["name", "value"])?;
                    }
                }
                if let Some(assertions) = call.get("body_assertions").and_then(|a| a.as_array()) {
                    for (ai, assertion) in assertions.iter().enumerate() {
                        let apath = format!("{cpath}.body_assertions[{ai}]");
                        let kind = assertion.get("kind").and_then(|k| k.as_str()).unwrap_or("");
                        let allowed: &[&str] = match kind {
                            "equals_literal" => &["kind", "literal"],
                            "size_equals" => &["kind", "count"],
                            "field" => &["kind", "path_expr"],
                            "other" => &["kind", "raw"],
                            _ => &["kind"],
                        };
                        check_object(assertion, &apath, allowed)?;
                    }
                }
            }
        }
        if let Some(setup) = test.get("setup").and_then(|s| s.as_array()) {
            for (si, action) in setup.iter().enumerate() {
                check_object(
                    action,
                    &format!("{tpath}.setup[{si}]"),
                    &["mechanism", "detail"],
                )?;
            }
        }
        if let Some(faults) = test.get("faults").and_then(|f| f.as_array()) {
            for (fi, fault) in faults.iter().enumerate() {
                check_object(fault, &format!("{tpath}.faults[{fi}]"), &["code", "label"])?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        BodyAssertion, FaultAnnotation, HttpCall, HttpVerb, Mechanism, QueryParam, SetupAction,
        TestCase, TestSuite,
    };

    fn sample_suite() -> TestSuite {
        let mut call = HttpCall::new(HttpVerb::Get, "/news");
        call.raw_url = "/news?country=".to_string();
        call.query.push(QueryParam::new("country", ""));
        call.expected_status = Some(200);
        call.content_type = Some("application/json".to_string());
        call.body_assertions.push(BodyAssertion::SizeEquals { count: 0 });
        let mut test = TestCase::new("test_3", 0);
        test.calls.push(call);
        test.setup.push(SetupAction::new(Mechanism::Sql));
        test.faults.push(FaultAnnotation::new("401"));
        test.source_span = Some((10, 200));
        let mut suite = TestSuite::new("NewsApiTest");
        suite.source_dialect = Some(crate::model::SourceDialect::JavaLike);
        suite.tests.push(test);
        suite
    }

    #[test]
    fn round_trip_preserves_structure() {
        let suite = sample_suite();
        let json = to_json(&suite);
        let back = from_json(&json, true).unwrap();
        assert_eq!(back, suite);
    }

    #[test]
    fn unknown_field_rejected_in_strict_mode() {
        let mut json = to_json(&sample_suite());
        json = json.replace("\"original_name\"", "\"bogus\": 1, \"original_name\"");
        let err = from_json(&json, true).unwrap_err();
        match err {
            IrError::UnknownField { path, field } => {
                assert_eq!(field, "bogus");
                assert!(path.contains("tests[0]"));
            }
            other => panic!("expected UnknownField, got {other:?}"),
        }
        assert!(from_json(&json, false).is_ok());
    }

    #[test]
    fn mechanism_wire_values_round_trip() {
        let mut suite = TestSuite::new("s");
        let mut test = TestCase::new("t", 0);
        test.setup.push(SetupAction::new(Mechanism::Mongo));
        test.setup.push(SetupAction::new(Mechanism::WireMock));
        test.setup.push(SetupAction::new(Mechanism::Other("kafka".into())));
        suite.tests.push(test);
        let json = to_json(&suite);
        assert!(json.contains("\"mongo\""));
        assert!(json.contains("\"wiremock\""));
        assert!(json.contains("\"kafka\""));
        assert_eq!(from_json(&json, true).unwrap(), suite);
    }

    #[test]
    fn malformed_json_is_an_error() {
        assert!(matches!(from_json("{not json", true), Err(IrError::Json(_))));
    }
}
