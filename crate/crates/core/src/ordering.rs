//! Reordering of tests inside a suite: by endpoint path (general before
//! specific), then status-code group (5xx, 2xx, 4xx, rest), then HTTP verb,
//! with creation order breaking all remaining ties.

use crate::model::{TestCase, TestSuite};
use crate::naming::{focal_call, NamingError};
use crate::parser::url::{resolve_template, template_segments};

/// One path segment as seen by the comparator. Placeholders are normalized
/// to a single token that sorts after every static segment at the same
/// depth, so `/users/all` precedes `/users/{id}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PathToken {
    Static(String),
    Placeholder,
}

impl std::fmt::Display for PathToken {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PathToken::Static(s) => f.write_str(s),
            PathToken::Placeholder => f.write_str("{}"),
        }
    }
}

/// The composite sort key of one test. Keys compare lexicographically field
/// by field; `tie_rank` is the creation index, which makes the order total.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderKey {
    pub path_rank: Vec<PathToken>,
    pub status_group: u8,
    pub verb_rank: u8,
    pub tie_rank: u64,
}

fn status_group(status: Option<u16>) -> u8 {
    match status {
        Some(s) if (500..600).contains(&s) => 0,
        Some(s) if (200..300).contains(&s) => 1,
        Some(s) if (400..500).contains(&s) => 2,
        _ => 3,
    }
}

/// Computes the sort key from the test's focal call, reading the path
/// through its endpoint template.
pub fn order_key(test: &TestCase, templates: Option<&[String]>) -> Result<OrderKey, NamingError> {
    let focal = focal_call(test)?;
    let template = resolve_template(focal, templates);
    // the root path ranks as the empty segment list, a prefix of everything
    let path_rank = if template == "/" {
        Vec::new()
    } else {
        template_segments(&template)
            .into_iter()
            .map(|(seg, placeholder)| {
                if placeholder {
                    PathToken::Placeholder
                } else {
                    PathToken::Static(seg)
                }
            })
            .collect()
    };
    Ok(OrderKey {
        path_rank,
        status_group: status_group(focal.expected_status),
        verb_rank: focal.verb.rank(),
        tie_rank: test.creation_index,
    })
}

/// Returns a new suite with the tests reordered. The result is always a
/// permutation of the input, and resorting it changes nothing.
pub fn sort_suite(suite: &TestSuite) -> Result<TestSuite, NamingError> {
    let templates = suite.templates.as_deref();
    let mut keyed: Vec<(OrderKey, TestCase)> = suite
        .tests
        .iter()
        .map(|t| Ok((order_key(t, templates)?, t.clone())))
        .collect::<Result<_, NamingError>>()?;
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut sorted = suite.clone();
    sorted.tests = keyed.into_iter().map(|(_, t)| t).collect();
    Ok(sorted)
}
