//! Cross-module invariants checked over generated suites: IR round-trips,
//! validator agreement, the grammar-extension law between conventions, and
//! emit/parse coherence.

mod common;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use restname::ir;
use restname::model::{validate_suite, BodyAssertion, SourceDialect, TestSuite};
use restname::naming::{name_suite, Convention, NamingConfig, ResultPart};
use restname::parser::{parse_source, ParseOptions, SourceFile};
use restname::rewrite::emit_suite;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

#[test]
fn ir_json_round_trips_structurally() {
    runner(256)
        .run(&common::arb_suite(12), |suite| {
            let json = ir::to_json(&suite);
            let back = ir::from_json(&json, true).expect("own output reads back strictly");
            prop_assert_eq!(back, suite);
            Ok(())
        })
        .unwrap();
}

#[test]
fn generated_suites_satisfy_every_invariant() {
    runner(256)
        .run(&common::arb_suite(12), |suite| {
            let violations = validate_suite(&suite);
            prop_assert!(violations.is_empty(), "violations: {violations:?}");
            // purity: the same input yields the same report
            prop_assert_eq!(validate_suite(&suite), validate_suite(&suite));
            Ok(())
        })
        .unwrap();
}

/// Each grammar convention extends the previous one: stripping the condition
/// tokens from a CONDITION name yields the QUERY name, and stripping the
/// parent qualifier and query marker from a QUERY name yields the RESULT
/// name.
#[test]
fn conventions_extend_each_other() {
    // no truncation: the law is about full names
    let base = NamingConfig {
        max_name_length: 4096,
        ..NamingConfig::default()
    };

    runner(256)
        .run(&common::arb_suite(10), |suite| {
            let result_names = name_suite(&suite, &NamingConfig {
                convention: Convention::Result,
                ..base.clone()
            })
            .expect("generated tests have calls");
            let query_names = name_suite(&suite, &NamingConfig {
                convention: Convention::Query,
                ..base.clone()
            })
            .expect("generated tests have calls");
            let condition_names = name_suite(&suite, &NamingConfig {
                convention: Convention::Condition,
                ..base.clone()
            })
            .expect("generated tests have calls");

            for ((r, q), c) in result_names.iter().zip(&query_names).zip(&condition_names) {
                let mut q_parts = q.parts.clone().expect("grammar name has parts");
                q_parts.parent_qualifier = None;
                q_parts.has_query_marker = false;
                let reduced_q =
                    restname::naming::render_name(&q_parts, &base).expect("render succeeds");
                prop_assert_eq!(&reduced_q.rendered, &r.rendered);

                let mut c_parts = c.parts.clone().expect("grammar name has parts");
                c_parts.conditions.clear();
                let reduced_c =
                    restname::naming::render_name(&c_parts, &base).expect("render succeeds");
                prop_assert_eq!(&reduced_c.rendered, &q.rendered);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn shows_faults_codes_equal_the_sorted_fault_code_set() {
    runner(256)
        .run(&common::arb_suite(10), |suite| {
            let names = name_suite(&suite, &NamingConfig::default())
                .expect("generated tests have calls");
            for (test, name) in suite.tests.iter().zip(&names) {
                let Some(parts) = &name.parts else { continue };
                if let ResultPart::ShowsFaults(codes) = &parts.result {
                    let mut expected: Vec<String> =
                        test.faults.iter().map(|f| f.code.clone()).collect();
                    expected.sort();
                    expected.dedup();
                    prop_assert_eq!(codes, &expected);
                }
            }
            Ok(())
        })
        .unwrap();
}

/// Emitting a suite and parsing the result preserves every call up to the
/// source spelling of the URL and any free-form `Other` assertions, which
/// emit as comments.
#[test]
fn emitted_suites_parse_back_to_the_same_calls() {
    runner(128)
        .run(&common::arb_suite(6), |suite| {
            let names = name_suite(&suite, &NamingConfig {
                convention: Convention::Number,
                ..NamingConfig::default()
            })
            .expect("number names always render");
            let text = emit_suite(&suite, &names, SourceDialect::JavaLike)
                .expect("generated tests have calls");
            let file = SourceFile::new("Emitted.java", text.clone(), SourceDialect::JavaLike);
            let outcome =
                parse_source(&file, &ParseOptions::default()).expect("emitted files parse");

            prop_assert_eq!(outcome.suite.tests.len(), suite.tests.len());
            for (orig, parsed) in suite.tests.iter().zip(&outcome.suite.tests) {
                prop_assert_eq!(orig.calls.len(), parsed.calls.len());
                for (oc, pc) in orig.calls.iter().zip(&parsed.calls) {
                    prop_assert_eq!(&oc.path, &pc.path);
                    prop_assert_eq!(&oc.query, &pc.query);
                    prop_assert_eq!(oc.expected_status, pc.expected_status);
                    prop_assert_eq!(oc.verb, pc.verb);
                    let kept: Vec<&BodyAssertion> = oc
                        .body_assertions
                        .iter()
                        .filter(|a| !matches!(a, BodyAssertion::Other { .. }))
                        .collect();
                    let reparsed: Vec<&BodyAssertion> = pc.body_assertions.iter().collect();
                    prop_assert_eq!(kept, reparsed);
                }
            }

            // span fidelity holds on emitted files too
            for block in &outcome.blocks {
                let slice = &text[block.full_span.0..block.full_span.1];
                prop_assert!(slice.starts_with("@Test"));
                let closes_on_brace = slice.ends_with('}');
                prop_assert!(closes_on_brace, "block must end at its closing brace");
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn sorting_never_loses_or_duplicates_tests() {
    runner(256)
        .run(&common::arb_suite(16), |suite| {
            let sorted = restname::ordering::sort_suite(&suite).expect("tests have calls");
            let mut before: Vec<String> = suite
                .tests
                .iter()
                .map(|t| t.original_name.clone())
                .collect();
            let mut after: Vec<String> = sorted
                .tests
                .iter()
                .map(|t| t.original_name.clone())
                .collect();
            before.sort();
            after.sort();
            prop_assert_eq!(before, after);
            Ok(())
        })
        .unwrap();
}

// Suites with setup-only tests stay representable in the IR even though they
// cannot be named or emitted.
#[test]
fn empty_calls_are_ir_legal_but_naming_time_errors() {
    let mut suite = TestSuite::new("s");
    suite.tests.push(restname::model::TestCase::new("orphan", 0));
    assert!(validate_suite(&suite).is_empty());
    let json = ir::to_json(&suite);
    assert_eq!(ir::from_json(&json, true).unwrap(), suite);
    assert!(name_suite(&suite, &NamingConfig::default()).is_err());
}
