// SPDX-License-Identifier: Apache-2.0

//! Tokenizer for yquant source.
//!
//! Two bracket forms are context dependent: a `[` at the start of a statement
//! opens an attribute list and is returned whole as [`TokenKind::Attrs`];
//! anywhere else it is an index bracket. A line starting with `===` at the
//! start of a statement is returned whole as [`TokenKind::Directive`].

use std::fmt;

use crate::frontend::ParseError;
use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(u64),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Semi,
    Pipe,
    Tilde,
    Dash,
    Eq,
    Str(String),
    /// Brace-balanced value; `raw` excludes the outer braces and comments.
    Value {
        raw: String,
        content: SourceSpan,
    },
    /// Attribute list contents without the surrounding brackets.
    Attrs(String),
    /// Text between the `===` markers of a section line.
    Directive(String),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Int(i) => write!(f, "integer `{i}`"),
            TokenKind::LBrack => f.write_str("`[`"),
            TokenKind::RBrack => f.write_str("`]`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Semi => f.write_str("`;`"),
            TokenKind::Pipe => f.write_str("`|`"),
            TokenKind::Tilde => f.write_str("`~`"),
            TokenKind::Dash => f.write_str("`-`"),
            TokenKind::Eq => f.write_str("`=`"),
            TokenKind::Str(_) => f.write_str("quoted string"),
            TokenKind::Value { .. } => f.write_str("value `{...}`"),
            TokenKind::Attrs(_) => f.write_str("attribute list"),
            TokenKind::Directive(_) => f.write_str("section line"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

/// Tokenize a complete source text.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    Lexer::new(source).collect()
}

pub(crate) struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    end: usize,
    line: u32,
    col: u32,
    at_stmt_start: bool,
    failed: bool,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            end: src.len(),
            line: 1,
            col: 1,
            at_stmt_start: true,
            failed: false,
        }
    }

    /// Lex only `src[span.byte_start..span.byte_end]`, reporting absolute positions.
    pub fn within(src: &'a str, span: SourceSpan) -> Self {
        Lexer {
            src,
            pos: span.byte_start,
            end: span.byte_end,
            line: span.line,
            col: span.column,
            at_stmt_start: true,
            failed: false,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..self.end].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> SourceSpan {
        SourceSpan::new(self.pos, self.pos, self.line, self.col)
    }

    fn span_from(&self, start: SourceSpan) -> SourceSpan {
        SourceSpan::new(start.byte_start, self.pos, start.line, start.column)
    }

    fn skip_line_comment(&mut self) {
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' {
                self.skip_line_comment();
            } else {
                break;
            }
        }
    }

    /// True when only whitespace precedes the cursor on the current line.
    fn at_line_start(&self) -> bool {
        self.src[..self.pos]
            .rsplit('\n')
            .next()
            .is_none_or(|prefix| prefix.chars().all(char::is_whitespace))
    }

    /// Scan a balanced region up to `close`, dropping `%` comments and keeping
    /// escape pairs. Returns the collected text; the cursor is left past `close`.
    fn scan_balanced(&mut self, open_span: SourceSpan, close: char, what: &str) -> Result<String, ParseError> {
        let mut out = String::new();
        let mut depth = 0usize;
        let mut bracket_depth = 0usize;
        let mut in_quote = false;
        loop {
            let Some(c) = self.peek() else {
                return Err(ParseError::new(
                    format!("unterminated {what}"),
                    self.span_from(open_span),
                ));
            };
            match c {
                '\\' => {
                    self.bump();
                    out.push('\\');
                    if let Some(n) = self.bump() {
                        out.push(n);
                    }
                    continue;
                }
                '%' if !in_quote => {
                    self.skip_line_comment();
                    continue;
                }
                '"' if close == ']' => in_quote = !in_quote,
                '{' if !in_quote => depth += 1,
                '[' if !in_quote && close == ']' => bracket_depth += 1,
                '}' if !in_quote && depth > 0 => depth -= 1,
                ']' if !in_quote && close == ']' && bracket_depth > 0 && depth == 0 => bracket_depth -= 1,
                _ if c == close && depth == 0 && !in_quote => {
                    self.bump();
                    return Ok(out);
                }
                _ => {}
            }
            self.bump();
            out.push(c);
        }
    }

    fn lex_value(&mut self, start: SourceSpan) -> Result<Token, ParseError> {
        let content_start = self.here();
        // The closing brace is the one that brings the depth back to zero.
        let raw = self.scan_balanced(start, '}', "brace value")?;
        let content = SourceSpan::new(
            content_start.byte_start,
            self.pos - 1,
            content_start.line,
            content_start.column,
        );
        Ok(Token {
            kind: TokenKind::Value { raw, content },
            span: self.span_from(start),
        })
    }

    fn lex_directive(&mut self, start: SourceSpan) -> Result<Token, ParseError> {
        for _ in 0..3 {
            self.bump();
        }
        let mut text = String::new();
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.bump();
            text.push(c);
        }
        let text = text.trim_end();
        let Some(inner) = text.strip_suffix("===") else {
            return Err(ParseError::new(
                "section line must end with `===`",
                self.span_from(start),
            ));
        };
        Ok(Token {
            kind: TokenKind::Directive(inner.trim().to_string()),
            span: self.span_from(start),
        })
    }

    fn next_token(&mut self) -> Result<Option<Token>, ParseError> {
        self.skip_trivia();
        let start = self.here();
        let Some(c) = self.peek() else {
            return Ok(None);
        };

        if self.at_stmt_start && self.src[self.pos..self.end].starts_with("===") && self.at_line_start() {
            let tok = self.lex_directive(start)?;
            return Ok(Some(tok));
        }

        let kind = match c {
            '[' if self.at_stmt_start => {
                self.bump();
                let raw = self.scan_balanced(start, ']', "attribute list")?;
                return Ok(Some(Token {
                    kind: TokenKind::Attrs(raw),
                    span: self.span_from(start),
                }));
            }
            '{' => {
                self.bump();
                return self.lex_value(start).map(Some);
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(ParseError::new("unterminated quoted string", self.span_from(start))),
                    }
                }
                return Ok(Some(Token {
                    kind: TokenKind::Str(s),
                    span: self.span_from(start),
                }));
            }
            '[' => Some(TokenKind::LBrack),
            ']' => Some(TokenKind::RBrack),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            ',' => Some(TokenKind::Comma),
            ';' => Some(TokenKind::Semi),
            '|' => Some(TokenKind::Pipe),
            '~' => Some(TokenKind::Tilde),
            '-' => Some(TokenKind::Dash),
            '=' => Some(TokenKind::Eq),
            _ => None,
        };
        if let Some(kind) = kind {
            self.bump();
            return Ok(Some(Token {
                kind,
                span: self.span_from(start),
            }));
        }

        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            return Ok(Some(Token {
                kind: TokenKind::Ident(s),
                span: self.span_from(start),
            }));
        }

        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
            }
            let span = self.span_from(start);
            let n = s
                .parse::<u64>()
                .map_err(|_| ParseError::new(format!("integer `{s}` is too large"), span))?;
            return Ok(Some(Token {
                kind: TokenKind::Int(n),
                span,
            }));
        }

        self.bump();
        Err(ParseError::new(
            format!("illegal character `{}`", c.escape_default()),
            self.span_from(start),
        ))
    }
}

impl Iterator for Lexer<'_> {
    type Item = Result<Token, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.next_token() {
            Ok(Some(tok)) => {
                self.at_stmt_start = matches!(
                    tok.kind,
                    TokenKind::Semi | TokenKind::Attrs(_) | TokenKind::Directive(_)
                );
                Some(Ok(tok))
            }
            Ok(None) => None,
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}
