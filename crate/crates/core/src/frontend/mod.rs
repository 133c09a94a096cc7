// SPDX-License-Identifier: Apache-2.0

//! Source frontends. Both produce the same [`Program`] tree.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod qasm;

use std::fmt;

use crate::span::SourceSpan;

pub use ast::*;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_program, parse_subcircuit_value};
pub use pretty::pretty_print;
pub use qasm::{parse_qasm, parse_qasm_lines, parse_qasm_with, QasmLine, QasmOptions};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError {
            message: message.into(),
            span,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}
