//! Detection of data-insertion and stubbing statements inside test bodies.

use crate::model::{Mechanism, SetupAction};

use super::lexer::Lexer;

/// How a keyword rule is matched against a statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeywordPattern {
    /// Matches when the statement, with all whitespace removed, contains the
    /// given chain-head text (e.g. `sql().insertInto` or `mongo(`).
    ChainHead(String),
    /// Matches when any identifier in the statement contains the text.
    IdentContains(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordRule {
    pub pattern: KeywordPattern,
    pub mechanism: Mechanism,
}

/// Configurable table mapping statement shapes to setup mechanisms.
#[derive(Debug, Clone)]
pub struct SetupKeywords {
    pub rules: Vec<KeywordRule>,
}

impl Default for SetupKeywords {
    fn default() -> Self {
        SetupKeywords {
            rules: vec![
                KeywordRule {
                    pattern: KeywordPattern::ChainHead("sql().insertInto".to_string()),
                    mechanism: Mechanism::Sql,
                },
                KeywordRule {
                    pattern: KeywordPattern::ChainHead("mongo(".to_string()),
                    mechanism: Mechanism::Mongo,
                },
                KeywordRule {
                    pattern: KeywordPattern::IdentContains("wireMock".to_string()),
                    mechanism: Mechanism::WireMock,
                },
                KeywordRule {
                    pattern: KeywordPattern::IdentContains("WireMock".to_string()),
                    mechanism: Mechanism::WireMock,
                },
            ],
        }
    }
}

impl SetupKeywords {
    /// Mechanisms triggered by one statement, deduplicated, in table order.
    pub fn match_statement(&self, statement: &str) -> Vec<Mechanism> {
        let (squeezed, idents) = statement_shape(statement);
        let mut out: Vec<Mechanism> = Vec::new();
        for rule in &self.rules {
            let hit = match &rule.pattern {
                KeywordPattern::ChainHead(head) => squeezed.contains(head.as_str()),
                KeywordPattern::IdentContains(text) => {
                    idents.iter().any(|id| id.contains(text.as_str()))
                }
            };
            if hit && !out.contains(&rule.mechanism) {
                out.push(rule.mechanism.clone());
            }
        }
        out
    }
}

/// Whitespace-free code text (string contents blanked to `""`) plus the
/// identifiers of a statement, so keyword rules never fire on literals.
fn statement_shape(statement: &str) -> (String, Vec<String>) {
    use super::lexer::TokenKind;
    match Lexer::new(statement).tokenize() {
        Ok((tokens, _)) => {
            let mut squeezed = String::new();
            let mut idents = Vec::new();
            for token in &tokens {
                match &token.kind {
                    TokenKind::Ident(name) => {
                        squeezed.push_str(name);
                        idents.push(name.clone());
                    }
                    TokenKind::Str(_) => squeezed.push_str("\"\""),
                    TokenKind::Char => squeezed.push_str("''"),
                    TokenKind::Num { raw, .. } => squeezed.push_str(raw),
                    TokenKind::Punct(c) => squeezed.push(*c),
                }
            }
            (squeezed, idents)
        }
        // unlexable fragments fall back to a crude scan
        Err(_) => {
            let squeezed: String = statement.chars().filter(|c| !c.is_whitespace()).collect();
            let idents = statement
                .split(|c: char| !c.is_ascii_alphanumeric() && c != '_')
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            (squeezed, idents)
        }
    }
}

/// Maps a single parsed statement to the setup actions it performs, using the
/// default keyword table. Unmatched statements yield nothing.
pub fn detect_setup(chain_text: &str) -> Vec<SetupAction> {
    detect_setup_with(chain_text, &SetupKeywords::default())
}

pub fn detect_setup_with(chain_text: &str, keywords: &SetupKeywords) -> Vec<SetupAction> {
    keywords
        .match_statement(chain_text)
        .into_iter()
        .map(|mechanism| SetupAction {
            mechanism,
            detail: Some(chain_text.trim().to_string()),
        })
        .collect()
}
