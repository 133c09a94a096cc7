// SPDX-License-Identifier: Apache-2.0

//! Syntax tree shared by both frontends.

use serde::Serialize;

use crate::registers::RegisterType;
use crate::span::SourceSpan;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Program {
    pub statements: Vec<Statement>,
}

impl Program {
    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    /// Copy with every span reset, for structural comparison.
    pub fn without_spans(&self) -> Program {
        Program {
            statements: self.statements.iter().map(Statement::without_spans).collect(),
        }
    }

    pub fn declarations(&self) -> impl Iterator<Item = &Declaration> {
        self.statements.iter().filter_map(|s| match &s.kind {
            StatementKind::Declaration(d) => Some(d),
            _ => None,
        })
    }

    pub fn gates(&self) -> impl Iterator<Item = &GateStatement> {
        self.statements.iter().filter_map(|s| match &s.kind {
            StatementKind::Gate(g) => Some(g),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Statement {
    pub attrs: Vec<Attribute>,
    pub kind: StatementKind,
    pub span: SourceSpan,
}

impl Statement {
    pub fn without_spans(&self) -> Statement {
        let kind = match &self.kind {
            StatementKind::Gate(g) => StatementKind::Gate(GateStatement {
                targets: g.targets.iter().map(RegRefExpr::without_span).collect(),
                controls: g
                    .controls
                    .as_ref()
                    .map(|c| c.iter().map(RegRefExpr::without_span).collect()),
                neg_controls: g
                    .neg_controls
                    .as_ref()
                    .map(|c| c.iter().map(RegRefExpr::without_span).collect()),
                sub_program: g.sub_program.as_ref().map(Program::without_spans),
                ..g.clone()
            }),
            other => other.clone(),
        };
        Statement {
            attrs: self.attrs.clone(),
            kind,
            span: SourceSpan::default(),
        }
    }

    /// Name of the `name=` attribute, if given.
    pub fn element_name(&self) -> Option<&str> {
        self.attrs
            .iter()
            .find(|a| a.form == AttrForm::KeyValue && a.key == "name")
            .map(|a| a.value.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StatementKind {
    Declaration(Declaration),
    Gate(GateStatement),
    GroupDirective(GroupDirective),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Declaration {
    pub reg_type: RegisterType,
    pub name: String,
    /// `None` when the brackets were omitted (scalar register).
    pub length: Option<u64>,
    pub label: Option<ValueText>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateStatement {
    /// Lowercased command name.
    pub name: String,
    pub value: Option<ValueText>,
    pub targets: Vec<RegRefExpr>,
    pub controls: Option<Vec<RegRefExpr>>,
    pub neg_controls: Option<Vec<RegRefExpr>>,
    /// Parsed body of a `subcircuit`; its value is stored here instead of in `value`.
    pub sub_program: Option<Program>,
}

/// `=== name ===` section line used for circuit equations and star mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupDirective {
    pub name: String,
    pub value: Option<ValueText>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttrForm {
    KeyValue,
    Flag,
    QuotedLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attribute {
    /// Empty for quoted labels. For flags, the flag itself.
    pub key: String,
    pub value: String,
    pub form: AttrForm,
}

impl Attribute {
    pub fn key_value(key: impl Into<String>, value: impl Into<String>) -> Self {
        Attribute {
            key: key.into(),
            value: value.into(),
            form: AttrForm::KeyValue,
        }
    }

    pub fn flag(key: impl Into<String>) -> Self {
        Attribute {
            key: key.into(),
            value: String::new(),
            form: AttrForm::Flag,
        }
    }

    pub fn quoted(label: impl Into<String>) -> Self {
        Attribute {
            key: String::new(),
            value: label.into(),
            form: AttrForm::QuotedLabel,
        }
    }
}

/// Brace-delimited value, kept verbatim. Lines are split on `\\`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueText {
    pub raw: String,
    pub lines: Vec<String>,
}

impl ValueText {
    pub fn new(raw: impl Into<String>) -> Self {
        let raw = raw.into();
        let lines = split_value_lines(&raw);
        ValueText { raw, lines }
    }

    pub fn is_empty(&self) -> bool {
        self.raw.trim().is_empty()
    }
}

/// Split on the two-character sequence `\\`, skipping other escape pairs so
/// that `\\\\` is read as two breaks rather than misaligned.
fn split_value_lines(raw: &str) -> Vec<String> {
    let bytes = raw.as_bytes();
    let mut lines = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'\\' && i + 1 < bytes.len() {
            if bytes[i + 1] == b'\\' {
                lines.push(raw[start..i].to_string());
                start = i + 2;
            }
            i += 2;
        } else {
            i += 1;
        }
    }
    lines.push(raw[start..].to_string());
    lines
}

/// One comma-separated element of a target or control list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegRefExpr {
    pub items: Vec<RefItem>,
    /// Parenthesised: all items form a single multi-wire group.
    pub joint_outer: bool,
    #[serde(skip)]
    pub span: SourceSpan,
}

impl RegRefExpr {
    pub fn without_span(&self) -> RegRefExpr {
        RegRefExpr {
            span: SourceSpan::default(),
            ..self.clone()
        }
    }

    /// Whether any part of the expression requests a joint group.
    pub fn is_joint(&self) -> bool {
        self.joint_outer
            || self.items.iter().any(|i| {
                i.start_index.as_ref().is_some_and(|s| s.joint_inner)
                    || i.end_index.as_ref().is_some_and(|s| s.joint_inner)
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefItem {
    pub start_name: Option<String>,
    pub start_index: Option<IndexSpec>,
    pub is_range_to: bool,
    pub end_name: Option<String>,
    pub end_index: Option<IndexSpec>,
}

impl RefItem {
    pub fn name(name: impl Into<String>, index: Option<IndexSpec>) -> Self {
        RefItem {
            start_name: Some(name.into()),
            start_index: index,
            is_range_to: false,
            end_name: None,
            end_index: None,
        }
    }

    /// The bare `-`: every wire from the first to the last.
    pub fn open_range() -> Self {
        RefItem {
            start_name: None,
            start_index: None,
            is_range_to: true,
            end_name: None,
            end_index: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSpec {
    pub entries: Vec<IndexEntry>,
    pub joint_inner: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexEntry {
    pub lo: Option<u64>,
    pub hi: Option<u64>,
    pub is_range: bool,
}

impl IndexEntry {
    pub fn single(i: u64) -> Self {
        IndexEntry {
            lo: Some(i),
            hi: None,
            is_range: false,
        }
    }

    pub fn range(lo: Option<u64>, hi: Option<u64>) -> Self {
        IndexEntry { lo, hi, is_range: true }
    }
}
