// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser for yquant statements.

use crate::frontend::ast::*;
use crate::frontend::lexer::{Lexer, Token, TokenKind};
use crate::frontend::ParseError;
use crate::registers::RegisterType;
use crate::span::SourceSpan;

/// Parse a complete yquant source text.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let tokens = Lexer::new(source).collect::<Result<Vec<_>, _>>()?;
    Parser::new(source, tokens, SourceSpan::new(0, source.len(), 1, 1)).program()
}

/// Parse the body of a `subcircuit` given on its own. Spans are relative to
/// `blob.raw`.
pub fn parse_subcircuit_value(blob: &ValueText) -> Result<Program, ParseError> {
    parse_program(&blob.raw)
}

fn parse_nested(source: &str, content: SourceSpan) -> Result<Program, ParseError> {
    let tokens = Lexer::within(source, content).collect::<Result<Vec<_>, _>>()?;
    Parser::new(source, tokens, content).program()
}

struct Parser<'a> {
    source: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    region: SourceSpan,
}

impl<'a> Parser<'a> {
    fn new(source: &'a str, tokens: Vec<Token>, region: SourceSpan) -> Self {
        Parser {
            source,
            tokens,
            pos: 0,
            region,
        }
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_is(&self, kind: &TokenKind) -> bool {
        self.peek() == Some(kind)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> Option<Token> {
        if self.peek_is(kind) {
            self.next()
        } else {
            None
        }
    }

    /// Span of the current token, or an empty span at the end of the region.
    fn here(&self) -> SourceSpan {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => self.end_span(),
        }
    }

    fn end_span(&self) -> SourceSpan {
        match self.tokens.last() {
            Some(t) => self.after(t),
            None => SourceSpan::new(
                self.region.byte_start,
                self.region.byte_start,
                self.region.line,
                self.region.column,
            ),
        }
    }

    /// Empty span just past `t`.
    fn after(&self, t: &Token) -> SourceSpan {
        let mut line = t.span.line;
        let mut col = t.span.column;
        for c in self.source[t.span.byte_start..t.span.byte_end].chars() {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        SourceSpan::new(t.span.byte_end, t.span.byte_end, line, col)
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos - 1].span
    }

    fn unexpected(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(k) => ParseError::new(format!("expected {what}, found {k}"), self.here()),
            None => ParseError::new(format!("expected {what}, found end of input"), self.here()),
        }
    }

    fn program(mut self) -> Result<Program, ParseError> {
        let mut statements = Vec::new();
        while self.peek().is_some() {
            statements.push(self.statement()?);
        }
        Ok(Program { statements })
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let start = self.here();
        if let Some(TokenKind::Directive(text)) = self.peek().cloned() {
            self.next();
            let directive = parse_directive(&text, start)?;
            return Ok(Statement {
                attrs: Vec::new(),
                kind: StatementKind::GroupDirective(directive),
                span: start,
            });
        }

        let mut attrs = Vec::new();
        while let Some(TokenKind::Attrs(raw)) = self.peek().cloned() {
            self.next();
            attrs.extend(parse_attributes(&raw));
        }

        let name_span = self.here();
        let name = match self.next() {
            Some(Token {
                kind: TokenKind::Ident(name),
                ..
            }) => name.to_ascii_lowercase(),
            Some(t) => {
                return Err(ParseError::new(
                    format!("expected a command name, found {}", t.kind),
                    t.span,
                ))
            }
            None => return Err(ParseError::new("expected a command name after attributes", name_span)),
        };

        let kind = match RegisterType::from_keyword(&name) {
            Some(reg_type) => StatementKind::Declaration(self.declaration(reg_type)?),
            None => StatementKind::Gate(self.gate(name, name_span)?),
        };

        if self.eat(&TokenKind::Semi).is_none() {
            let span = self.after(&self.tokens[self.pos - 1]);
            return Err(ParseError::new("missing `;` at end of statement", span));
        }
        Ok(Statement {
            attrs,
            kind,
            span: start.to(self.prev_span()),
        })
    }

    fn value(&mut self) -> Option<(String, SourceSpan)> {
        if let Some(TokenKind::Value { raw, content }) = self.peek().cloned() {
            self.next();
            Some((raw, content))
        } else {
            None
        }
    }

    fn declaration(&mut self, reg_type: RegisterType) -> Result<Declaration, ParseError> {
        let label = self.value().map(|(raw, _)| ValueText::new(raw));
        let Some(TokenKind::Ident(name)) = self.peek().cloned() else {
            return Err(self.unexpected("a register name"));
        };
        self.next();
        let length = if self.eat(&TokenKind::LBrack).is_some() {
            let Some(n) = self.int() else {
                return Err(self.unexpected("a register length"));
            };
            if self.eat(&TokenKind::RBrack).is_none() {
                return Err(self.unexpected("`]`"));
            }
            Some(n)
        } else {
            None
        };
        Ok(Declaration {
            reg_type,
            name,
            length,
            label,
        })
    }

    fn gate(&mut self, name: String, name_span: SourceSpan) -> Result<GateStatement, ParseError> {
        let value = self.value();
        let mut sub_program = None;
        let value = if name == "subcircuit" {
            let Some((_, content)) = value else {
                return Err(ParseError::new("`subcircuit` requires a `{...}` body", name_span));
            };
            sub_program = Some(parse_nested(self.source, content)?);
            None
        } else {
            value.map(|(raw, _)| ValueText::new(raw))
        };

        if matches!(
            self.peek(),
            None | Some(TokenKind::Semi | TokenKind::Pipe | TokenKind::Tilde)
        ) {
            return Err(ParseError::new(
                format!("`{name}` requires at least one target register"),
                self.here(),
            ));
        }
        let targets = self.ref_list()?;
        let mut controls = None;
        let mut neg_controls = None;
        if self.eat(&TokenKind::Pipe).is_some() {
            controls = Some(self.ref_list()?);
        }
        if self.eat(&TokenKind::Tilde).is_some() {
            neg_controls = Some(self.ref_list()?);
            if self.peek_is(&TokenKind::Pipe) {
                return Err(ParseError::new(
                    "negative controls (`~`) must come after controls (`|`)",
                    self.here(),
                ));
            }
        }
        Ok(GateStatement {
            name,
            value,
            targets,
            controls,
            neg_controls,
            sub_program,
        })
    }

    fn ref_list(&mut self) -> Result<Vec<RegRefExpr>, ParseError> {
        let mut list = vec![self.ref_expr()?];
        while self.eat(&TokenKind::Comma).is_some() {
            list.push(self.ref_expr()?);
        }
        Ok(list)
    }

    fn ref_expr(&mut self) -> Result<RegRefExpr, ParseError> {
        let start = self.here();
        if self.eat(&TokenKind::LParen).is_some() {
            let mut items = vec![self.ref_item()?];
            while self.eat(&TokenKind::Comma).is_some() {
                items.push(self.ref_item()?);
            }
            if self.eat(&TokenKind::RParen).is_none() {
                return Err(self.unexpected("`)`"));
            }
            Ok(RegRefExpr {
                items,
                joint_outer: true,
                span: start.to(self.prev_span()),
            })
        } else {
            let item = self.ref_item()?;
            Ok(RegRefExpr {
                items: vec![item],
                joint_outer: false,
                span: start.to(self.prev_span()),
            })
        }
    }

    fn ref_item(&mut self) -> Result<RefItem, ParseError> {
        if self.eat(&TokenKind::Dash).is_some() {
            let (end_name, end_index) = self.optional_full_name()?;
            return Ok(RefItem {
                start_name: None,
                start_index: None,
                is_range_to: true,
                end_name,
                end_index,
            });
        }
        let (start_name, start_index) = self.optional_full_name()?;
        if start_name.is_none() {
            return Err(self.unexpected("a register reference"));
        }
        if self.eat(&TokenKind::Dash).is_some() {
            let (end_name, end_index) = self.optional_full_name()?;
            return Ok(RefItem {
                start_name,
                start_index,
                is_range_to: true,
                end_name,
                end_index,
            });
        }
        Ok(RefItem {
            start_name,
            start_index,
            is_range_to: false,
            end_name: None,
            end_index: None,
        })
    }

    fn optional_full_name(&mut self) -> Result<(Option<String>, Option<IndexSpec>), ParseError> {
        let Some(TokenKind::Ident(name)) = self.peek().cloned() else {
            return Ok((None, None));
        };
        self.next();
        let index = if self.peek_is(&TokenKind::LBrack) {
            Some(self.index_spec()?)
        } else {
            None
        };
        Ok((Some(name), index))
    }

    fn index_spec(&mut self) -> Result<IndexSpec, ParseError> {
        self.eat(&TokenKind::LBrack);
        let joint_inner = self.eat(&TokenKind::LParen).is_some();
        let mut entries = vec![self.index_entry()?];
        while self.eat(&TokenKind::Comma).is_some() {
            entries.push(self.index_entry()?);
        }
        if joint_inner && self.eat(&TokenKind::RParen).is_none() {
            return Err(self.unexpected("`)`"));
        }
        if self.eat(&TokenKind::RBrack).is_none() {
            return Err(self.unexpected("`]`"));
        }
        Ok(IndexSpec { entries, joint_inner })
    }

    fn int(&mut self) -> Option<u64> {
        if let Some(TokenKind::Int(n)) = self.peek().cloned() {
            self.next();
            Some(n)
        } else {
            None
        }
    }

    fn index_entry(&mut self) -> Result<IndexEntry, ParseError> {
        let start = self.here();
        let lo = self.int();
        if self.eat(&TokenKind::Dash).is_some() {
            let hi = self.int();
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if lo > hi {
                    return Err(ParseError::new(
                        format!("index range {lo}-{hi} is decreasing"),
                        start.to(self.prev_span()),
                    ));
                }
            }
            return Ok(IndexEntry::range(lo, hi));
        }
        match lo {
            Some(i) => Ok(IndexEntry::single(i)),
            None => Err(self.unexpected("an index")),
        }
    }
}

fn parse_directive(text: &str, span: SourceSpan) -> Result<GroupDirective, ParseError> {
    let text = text.trim();
    let (name, rest) = match text.find(char::is_whitespace) {
        Some(i) => (&text[..i], text[i..].trim()),
        None => (text, ""),
    };
    if name.is_empty() {
        return Err(ParseError::new("empty section line", span));
    }
    let value = if rest.is_empty() {
        None
    } else if let Some(inner) = rest.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        Some(ValueText::new(inner))
    } else {
        return Err(ParseError::new(
            format!("unexpected text `{rest}` in section line"),
            span,
        ));
    };
    Ok(GroupDirective {
        name: name.to_ascii_lowercase(),
        value,
    })
}

/// Split attribute list contents on top-level commas.
pub(crate) fn parse_attributes(raw: &str) -> Vec<Attribute> {
    split_top_level(raw, ',')
        .into_iter()
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(|entry| {
            if entry.len() >= 2 && entry.starts_with('"') && entry.ends_with('"') {
                return Attribute::quoted(&entry[1..entry.len() - 1]);
            }
            match split_top_level(entry, '=').as_slice() {
                [key, rest @ ..] if !rest.is_empty() => {
                    let value = &entry[key.len() + 1..];
                    Attribute::key_value(normalize_key(key), value.trim())
                }
                _ => Attribute::flag(normalize_key(entry)),
            }
        })
        .collect()
}

fn normalize_key(key: &str) -> String {
    key.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Split on `sep` outside braces, brackets, and quotes.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut in_quote = false;
    let mut start = 0;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match c {
            '\\' => escaped = true,
            '"' => in_quote = !in_quote,
            '{' | '[' if !in_quote => depth += 1,
            '}' | ']' if !in_quote => depth -= 1,
            _ if c == sep && depth == 0 && !in_quote => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}
