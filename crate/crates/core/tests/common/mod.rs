//! Random-suite generators shared by the integration test targets.
//!
//! Generated values always satisfy the IR invariants: paths lead with '/',
//! query names are clean, fault codes are unique per test, creation indices
//! are unique per suite, and every test carries at least one call.

use proptest::prelude::*;

use restname::model::{
    BodyAssertion, FaultAnnotation, HttpCall, HttpVerb, Mechanism, QueryParam, SetupAction,
    TestCase, TestSuite,
};
use restname::parser::serialize_url;

pub fn arb_verb() -> impl Strategy<Value = HttpVerb> {
    prop::sample::select(HttpVerb::ALL.to_vec())
}

fn arb_segment() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => "[a-z]{1,8}",
        1 => "(0|[1-9][0-9]{0,3})",
    ]
}

pub fn arb_path() -> impl Strategy<Value = String> {
    prop::collection::vec(arb_segment(), 0..4).prop_map(|segs| {
        if segs.is_empty() {
            "/".to_string()
        } else {
            format!("/{}", segs.join("/"))
        }
    })
}

fn arb_query_param() -> impl Strategy<Value = QueryParam> {
    let value = prop_oneof![
        2 => Just("true".to_string()),
        2 => Just(String::new()),
        1 => "-(0|[1-9][0-9]{0,2})",
        1 => "-[1-9][0-9]{0,2}\\.[0-9]{1,2}",
        4 => "[a-zA-Z0-9]{1,6}",
    ];
    ("[a-zA-Z][a-zA-Z0-9]{0,7}", value).prop_map(|(name, value)| QueryParam::new(name, value))
}

pub fn arb_assertion() -> impl Strategy<Value = BodyAssertion> {
    prop_oneof![
        Just(BodyAssertion::EmptyOrNull),
        Just(BodyAssertion::equals_literal("")),
        Just(BodyAssertion::equals_literal("{}")),
        "[a-z]{1,5}".prop_map(BodyAssertion::equals_literal),
        (0u64..6).prop_map(|count| BodyAssertion::SizeEquals { count }),
        "[a-z][a-z0-9.]{0,6}".prop_map(BodyAssertion::field),
        "[a-zA-Z(). ]{0,12}".prop_map(BodyAssertion::other),
    ]
}

fn arb_status() -> impl Strategy<Value = Option<u16>> {
    prop_oneof![
        1 => Just(None),
        2 => Just(Some(200u16)),
        4 => (100u16..600).prop_map(Some),
    ]
}

fn arb_mechanism() -> impl Strategy<Value = Mechanism> {
    prop_oneof![
        3 => Just(Mechanism::Sql),
        2 => Just(Mechanism::Mongo),
        2 => Just(Mechanism::WireMock),
        1 => "[A-Z][a-zA-Z0-9]{1,5}".prop_map(Mechanism::Other),
    ]
}

fn arb_call() -> impl Strategy<Value = HttpCall> {
    (
        arb_verb(),
        arb_path(),
        arb_status(),
        prop::collection::vec(arb_query_param(), 0..4),
        prop::collection::vec(arb_assertion(), 0..3),
    )
        .prop_map(|(verb, path, expected_status, query, body_assertions)| HttpCall {
            verb,
            raw_url: serialize_url(&path, &query),
            path,
            path_template: None,
            query,
            expected_status,
            content_type: None,
            body_assertions,
        })
}

fn arb_test() -> impl Strategy<Value = TestCase> {
    (
        prop::collection::vec(arb_call(), 1..3),
        prop::collection::btree_set("[0-9]{3}|[a-z][a-zA-Z0-9]{1,6}", 0..3),
        prop::collection::vec(arb_mechanism(), 0..3),
        prop::option::of("[a-z][a-zA-Z0-9_]{1,12}"),
    )
        .prop_map(|(calls, fault_codes, mechanisms, fault_label)| {
            let faults: Vec<FaultAnnotation> = fault_codes
                .into_iter()
                .enumerate()
                .map(|(i, code)| FaultAnnotation {
                    code,
                    label: if i == 0 { fault_label.clone() } else { None },
                })
                .collect();
            let setup = mechanisms.into_iter().map(SetupAction::new).collect();
            TestCase {
                original_name: String::new(),
                creation_index: 0,
                calls,
                setup,
                faults,
                source_span: None,
            }
        })
}

/// A structurally valid suite of up to `max_tests` tests. Creation indices
/// are unique, and the suite order is shuffled independently of creation
/// order so tie-breaking actually gets exercised.
pub fn arb_suite(max_tests: usize) -> impl Strategy<Value = TestSuite> {
    prop::collection::vec(arb_test(), 0..=max_tests)
        .prop_map(|mut tests| {
            for (i, test) in tests.iter_mut().enumerate() {
                test.creation_index = i as u64;
                test.original_name = format!("test{i}");
            }
            tests
        })
        .prop_shuffle()
        .prop_map(|tests| {
            let mut suite = TestSuite::new("GeneratedSuite");
            suite.tests = tests;
            suite
        })
}
