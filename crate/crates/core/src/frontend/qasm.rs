// SPDX-License-Identifier: Apache-2.0

//! Line-oriented qasm dialect: `opcode arg[,arg]  # comment`.
//!
//! | opcode              | lowered to                  |
//! |---------------------|-----------------------------|
//! | `qubit n`, `cbit n` | declaration                 |
//! | `h/x/y/z n`         | the same gate               |
//! | `s n`, `t n`        | `box {$S$}` / `box {$T$}`   |
//! | `cnot a,b`          | `not b \| a`                |
//! | `c-x a,b`, `c-z a,b`| `x b \| a`, `z b \| a`      |
//! | `measure n`         | `measure n`                 |
//! | `nop n`             | `hspace {<nop width>} n`    |
//!
//! Registers are declared on first mention with the label `$\ket{name}$`.

use std::collections::HashSet;

use crate::frontend::ast::*;
use crate::frontend::ParseError;
use crate::layout::LayoutConfig;
use crate::registers::RegisterType;
use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq)]
pub struct QasmOptions {
    /// Width in millimetres of the space left by `nop`.
    pub nop_width: f64,
}

impl QasmOptions {
    /// Options whose `nop` width follows the default operator width of `config`.
    pub fn for_layout(config: &LayoutConfig) -> Self {
        QasmOptions {
            nop_width: config.min_op_width,
        }
    }

    pub fn qasm_nop_width(&self) -> f64 {
        self.nop_width
    }
}

impl Default for QasmOptions {
    fn default() -> Self {
        QasmOptions::for_layout(&LayoutConfig::default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmLine {
    pub opcode: String,
    pub args: Vec<String>,
    pub comment: Option<String>,
    pub span: SourceSpan,
}

fn arity(opcode: &str) -> Option<usize> {
    match opcode {
        "qubit" | "cbit" | "h" | "x" | "y" | "z" | "s" | "t" | "measure" | "nop" => Some(1),
        "cnot" | "c-x" | "c-z" => Some(2),
        _ => None,
    }
}

fn is_register_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Split the source into validated lines. Blank and comment-only lines are skipped.
pub fn parse_qasm_lines(source: &str) -> Result<Vec<QasmLine>, ParseError> {
    let mut lines = Vec::new();
    let mut offset = 0;
    for (lineno, raw_line) in source.split('\n').enumerate() {
        let line_start = offset;
        offset += raw_line.len() + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let (code, comment) = match line.find('#') {
            Some(i) => (&line[..i], Some(line[i + 1..].trim().to_string())),
            None => (line, None),
        };
        let trimmed = code.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = code.len() - trimmed.len();
        let column = code[..lead].chars().count() as u32 + 1;
        let span = SourceSpan::new(
            line_start + lead,
            line_start + code.trim_end().len(),
            lineno as u32 + 1,
            column,
        );

        let trimmed = trimmed.trim_end();
        let (opcode, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], trimmed[i..].trim()),
            None => (trimmed, ""),
        };
        let opcode = opcode.to_ascii_lowercase();
        let Some(expected) = arity(&opcode) else {
            return Err(ParseError::new(format!("unsupported qasm opcode `{opcode}`"), span));
        };
        let args: Vec<String> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(|a| a.trim().to_string()).collect()
        };
        if args.len() != expected {
            return Err(ParseError::new(
                format!(
                    "`{opcode}` expects {expected} argument{}, found {}",
                    if expected == 1 { "" } else { "s" },
                    args.len()
                ),
                span,
            ));
        }
        if let Some(bad) = args.iter().find(|a| !is_register_name(a)) {
            return Err(ParseError::new(format!("invalid register name `{bad}`"), span));
        }
        lines.push(QasmLine {
            opcode,
            args,
            comment,
            span,
        });
    }
    Ok(lines)
}

/// Parse with the default `nop` width.
pub fn parse_qasm(source: &str) -> Result<Program, ParseError> {
    parse_qasm_with(source, &QasmOptions::default())
}

pub fn parse_qasm_with(source: &str, options: &QasmOptions) -> Result<Program, ParseError> {
    let mut lowering = Lowering::default();
    for line in parse_qasm_lines(source)? {
        lowering.line(&line, options)?;
    }
    Ok(Program {
        statements: lowering.statements,
    })
}

#[derive(Default)]
struct Lowering {
    declared: HashSet<String>,
    statements: Vec<Statement>,
}

fn wire(name: &str) -> RegRefExpr {
    RegRefExpr {
        items: vec![RefItem::name(name, None)],
        joint_outer: false,
        span: SourceSpan::default(),
    }
}

impl Lowering {
    fn declare(&mut self, reg_type: RegisterType, name: &str, span: SourceSpan) {
        self.declared.insert(name.to_string());
        self.statements.push(Statement {
            attrs: Vec::new(),
            kind: StatementKind::Declaration(Declaration {
                reg_type,
                name: name.to_string(),
                length: None,
                label: Some(ValueText::new(format!("$\\ket{{{name}}}$"))),
            }),
            span,
        });
    }

    fn mention(&mut self, name: &str, span: SourceSpan) {
        if !self.declared.contains(name) {
            self.declare(RegisterType::Qubit, name, span);
        }
    }

    fn gate(&mut self, name: &str, value: Option<String>, target: &str, control: Option<&str>, span: SourceSpan) {
        let with_span = |mut r: RegRefExpr| {
            r.span = span;
            r
        };
        self.statements.push(Statement {
            attrs: Vec::new(),
            kind: StatementKind::Gate(GateStatement {
                name: name.to_string(),
                value: value.map(ValueText::new),
                targets: vec![with_span(wire(target))],
                controls: control.map(|c| vec![with_span(wire(c))]),
                neg_controls: None,
                sub_program: None,
            }),
            span,
        });
    }

    fn line(&mut self, line: &QasmLine, options: &QasmOptions) -> Result<(), ParseError> {
        let span = line.span;
        let args = &line.args;
        match line.opcode.as_str() {
            op @ ("qubit" | "cbit") => {
                if self.declared.contains(&args[0]) {
                    return Err(ParseError::new(format!("duplicate declaration of `{}`", args[0]), span));
                }
                let ty = if op == "qubit" {
                    RegisterType::Qubit
                } else {
                    RegisterType::Cbit
                };
                self.declare(ty, &args[0], span);
            }
            op @ ("h" | "x" | "y" | "z" | "measure") => {
                self.mention(&args[0], span);
                self.gate(op, None, &args[0], None, span);
            }
            op @ ("s" | "t") => {
                self.mention(&args[0], span);
                let value = format!("${}$", op.to_ascii_uppercase());
                self.gate("box", Some(value), &args[0], None, span);
            }
            "nop" => {
                self.mention(&args[0], span);
                // shortest round-trip form, so the width survives reparsing exactly
                let width = format!("{}mm", options.nop_width);
                self.gate("hspace", Some(width), &args[0], None, span);
            }
            op @ ("cnot" | "c-x" | "c-z") => {
                self.mention(&args[0], span);
                self.mention(&args[1], span);
                let gate = match op {
                    "cnot" => "not",
                    "c-x" => "x",
                    _ => "z",
                };
                self.gate(gate, None, &args[1], Some(&args[0]), span);
            }
            other => unreachable!("arity table admitted `{other}`"),
        }
        Ok(())
    }
}
