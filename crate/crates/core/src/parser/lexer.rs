//! Token scanner for the JVM-language subset the suite parser accepts.
//!
//! Comments and whitespace are skipped; every token keeps its byte span so
//! later stages can slice the original text and report `line:col` positions.

use super::{ParseError, Position};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    /// String literal with escape sequences decoded. The raw span still
    /// covers the quotes.
    Str(String),
    Char,
    Num { raw: String, int: Option<u64> },
    Punct(char),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn ident(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Ident(name) => Some(name),
            _ => None,
        }
    }

    pub fn str_value(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Str(value) => Some(value),
            _ => None,
        }
    }

    pub fn is_punct(&self, c: char) -> bool {
        matches!(self.kind, TokenKind::Punct(p) if p == c)
    }
}

/// Maps byte offsets to 1-based line/column pairs.
#[derive(Debug, Clone)]
pub struct LineIndex {
    line_starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut line_starts = vec![0];
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                line_starts.push(i + 1);
            }
        }
        LineIndex { line_starts }
    }

    pub fn position(&self, offset: usize) -> Position {
        let line = match self.line_starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Position {
            line: line + 1,
            col: offset - self.line_starts[line] + 1,
        }
    }
}

pub struct Lexer<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    index: LineIndex,
}

impl<'a> Lexer<'a> {
    pub fn new(text: &'a str) -> Self {
        Lexer {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            index: LineIndex::new(text),
        }
    }

    fn error(&self, at: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.index.position(at),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<u8> {
        self.bytes.get(self.pos + ahead).copied()
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'/') if self.peek_at(1) == Some(b'/') => {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.pos += 1;
                    }
                }
                Some(b'/') if self.peek_at(1) == Some(b'*') => {
                    let start = self.pos;
                    self.pos += 2;
                    loop {
                        match self.peek() {
                            Some(b'*') if self.peek_at(1) == Some(b'/') => {
                                self.pos += 2;
                                break;
                            }
                            Some(_) => self.pos += 1,
                            None => return Err(self.error(start, "unterminated block comment")),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn lex_string(&mut self) -> Result<Token, ParseError> {
        let start = self.pos;
        // Kotlin raw string """..."""
        if self.text[self.pos..].starts_with("\"\"\"") {
            self.pos += 3;
            let Some(rel) = self.text[self.pos..].find("\"\"\"") else {
                return Err(self.error(start, "unterminated raw string literal"));
            };
            let value = self.text[self.pos..self.pos + rel].to_string();
            self.pos += rel + 3;
            return Ok(Token {
                kind: TokenKind::Str(value),
                start,
                end: self.pos,
            });
        }
        self.pos += 1;
        let mut value = String::new();
        loop {
            match self.peek() {
                Some(b'"') => {
                    self.pos += 1;
                    break;
                }
                Some(b'\\') => {
                    self.pos += 1;
                    let esc = self
                        .peek()
                        .ok_or_else(|| self.error(start, "unterminated string literal"))?;
                    self.pos += 1;
                    match esc {
                        b'n' => value.push('\n'),
                        b't' => value.push('\t'),
                        b'r' => value.push('\r'),
                        b'b' => value.push('\u{8}'),
                        b'f' => value.push('\u{c}'),
                        b'0' => value.push('\0'),
                        b'\\' => value.push('\\'),
                        b'\'' => value.push('\''),
                        b'"' => value.push('"'),
                        b'$' => value.push('$'),
                        b'u' => {
                            let hex_end = self.pos + 4;
                            if hex_end > self.bytes.len() {
                                return Err(self.error(start, "truncated unicode escape"));
                            }
                            let hex = &self.text[self.pos..hex_end];
                            let code = u32::from_str_radix(hex, 16)
                                .map_err(|_| self.error(self.pos, "invalid unicode escape"))?;
                            value.push(char::from_u32(code).unwrap_or('\u{fffd}'));
                            self.pos = hex_end;
                        }
                        other => {
                            value.push('\\');
                            value.push(other as char);
                        }
                    }
                }
                Some(b'\n') | None => {
                    return Err(self.error(start, "unterminated string literal"));
                }
                Some(_) => {
                    let ch_start = self.pos;
                    let ch = self.text[ch_start..]
                        .chars()
                        .next()
                        .expect("byte peeked, char exists");
                    value.push(ch);
                    self.pos += ch.len_utf8();
                }
            }
        }
        Ok(Token {
            kind: TokenKind::Str(value),
            start,
            end: self.pos,
        })
    }

    fn lex_char(&mut self) -> Result<Token, ParseError> {
        let start = self.pos;
        self.pos += 1;
        loop {
            match self.peek() {
                Some(b'\\') => self.pos += 2,
                Some(b'\'') => {
                    self.pos += 1;
                    break;
                }
                Some(_) => self.pos += 1,
                None => return Err(self.error(start, "unterminated character literal")),
            }
        }
        Ok(Token {
            kind: TokenKind::Char,
            start,
            end: self.pos,
        })
    }

    fn lex_number(&mut self) -> Token {
        let start = self.pos;
        if self.text[self.pos..].starts_with("0x") || self.text[self.pos..].starts_with("0X") {
            self.pos += 2;
            while matches!(self.peek(), Some(b) if b.is_ascii_hexdigit() || b == b'_') {
                self.pos += 1;
            }
        } else {
            while matches!(self.peek(), Some(b) if b.is_ascii_digit() || b == b'_') {
                self.pos += 1;
            }
            if self.peek() == Some(b'.') && matches!(self.peek_at(1), Some(b) if b.is_ascii_digit())
            {
                self.pos += 1;
                while matches!(self.peek(), Some(b) if b.is_ascii_digit() || b == b'_') {
                    self.pos += 1;
                }
            }
        }
        // type suffix (138L, 1.5f)
        if matches!(self.peek(), Some(b'L' | b'l' | b'F' | b'f' | b'D' | b'd')) {
            self.pos += 1;
        }
        let raw = self.text[start..self.pos].to_string();
        let digits: String = raw
            .trim_end_matches(['L', 'l', 'F', 'f', 'D', 'd'])
            .chars()
            .filter(|c| *c != '_')
            .collect();
        let int = if digits.contains('.') || digits.starts_with("0x") || digits.starts_with("0X") {
            None
        } else {
            digits.parse::<u64>().ok()
        };
        Token {
            kind: TokenKind::Num { raw, int },
            start,
            end: self.pos,
        }
    }

    fn lex_ident(&mut self) -> Token {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_alphanumeric() || b == b'_' || b >= 0x80 {
                self.pos += 1;
            } else {
                break;
            }
        }
        Token {
            kind: TokenKind::Ident(self.text[start..self.pos].to_string()),
            start,
            end: self.pos,
        }
    }

    pub fn tokenize(mut self) -> Result<(Vec<Token>, LineIndex), ParseError> {
        let mut tokens = Vec::new();
        loop {
            self.skip_trivia()?;
            let Some(b) = self.peek() else {
                break;
            };
            let token = match b {
                b'"' => self.lex_string()?,
                b'\'' => self.lex_char()?,
                b if b.is_ascii_digit() => self.lex_number(),
                b if b.is_ascii_alphabetic() || b == b'_' || b == b'$' || b >= 0x80 => {
                    if b == b'$' {
                        // Kotlin-style leading marker folds into the identifier
                        let start = self.pos;
                        self.pos += 1;
                        let mut tok = self.lex_ident();
                        tok.start = start;
                        tok.kind = TokenKind::Ident(self.text[start..tok.end].to_string());
                        tok
                    } else {
                        self.lex_ident()
                    }
                }
                _ => {
                    let start = self.pos;
                    self.pos += 1;
                    Token {
                        kind: TokenKind::Punct(b as char),
                        start,
                        end: self.pos,
                    }
                }
            };
            tokens.push(token);
        }
        Ok((tokens, self.index))
    }
}
