// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::Serialize;

/// Byte range plus 1-based line/column of the range start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub byte_start: usize,
    pub byte_end: usize,
    pub line: u32,
    pub column: u32,
}

impl SourceSpan {
    pub fn new(byte_start: usize, byte_end: usize, line: u32, column: u32) -> Self {
        debug_assert!(byte_start <= byte_end && line >= 1 && column >= 1);
        SourceSpan {
            byte_start,
            byte_end,
            line,
            column,
        }
    }

    /// Smallest span covering both; the start position is taken from `self`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        SourceSpan {
            byte_start: self.byte_start,
            byte_end: other.byte_end.max(self.byte_end),
            line: self.line,
            column: self.column,
        }
    }

    pub fn len(&self) -> usize {
        self.byte_end - self.byte_start
    }

    pub fn is_empty(&self) -> bool {
        self.byte_start == self.byte_end
    }
}

impl Default for SourceSpan {
    fn default() -> Self {
        SourceSpan::new(0, 0, 1, 1)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Non-fatal finding reported alongside a successful compilation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Warning {
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl Warning {
    pub fn new(message: impl Into<String>, span: Option<SourceSpan>) -> Self {
        Warning {
            message: message.into(),
            span,
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(span) => write!(f, "{}: warning: {}", span, self.message),
            None => write!(f, "warning: {}", self.message),
        }
    }
}
