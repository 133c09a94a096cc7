// SPDX-License-Identifier: Apache-2.0

//! Source text to output bytes: parse, elaborate, lay out, render.

use thiserror::Error;

use crate::frontend::{parse_program, parse_qasm_with, ParseError, Program, QasmOptions, StatementKind, ValueText};
use crate::gates::{elaborate, ElabError, ElabErrorKind, Elaborated, GateInstance};
use crate::layout::{place, LayoutConfig, LayoutResult};
use crate::registers::RegisterTable;
use crate::render::{
    build_scene, compose_group, elaborate_group, emit_svg, emit_tikz, render_value_text, RenderConfig, Scene,
};
use crate::span::{SourceSpan, Warning};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Yquant,
    Qasm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Svg,
    Tikz,
    IrJson,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub layout: LayoutConfig,
    pub render: RenderConfig,
    /// Overrides the `nop` width of the qasm frontend.
    pub nop_width: Option<f64>,
    pub strict: bool,
}

impl Options {
    pub fn qasm_options(&self) -> QasmOptions {
        QasmOptions {
            nop_width: self.nop_width.unwrap_or(self.layout.min_op_width),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Elab(#[from] ElabError),
    #[error("{}", .0.message)]
    Strict(Warning),
}

impl Error {
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            Error::Parse(e) => Some(e.span),
            Error::Elab(e) => e.span,
            Error::Strict(w) => w.span,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Error::Parse(e) => e.message.clone(),
            Error::Elab(e) => e.kind.to_string(),
            Error::Strict(w) => format!("{} (warnings are errors in strict mode)", w.message),
        }
    }
}

/// A single circuit or a circuit equation.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Single {
        program: Program,
        star: bool,
    },
    Group {
        registers: Program,
        circuits: Vec<Program>,
        separators: Vec<String>,
        star: bool,
    },
}

fn group_err(message: impl Into<String>, span: SourceSpan) -> ElabError {
    ElabError::new(ElabErrorKind::Group(message.into()), span)
}

/// Split a parsed yquant file on its section lines.
///
/// `=== yquant* ===` as the first statement enables auto-declaration. The
/// remaining section lines are `=== registers ===`, `=== circuit ===` and
/// `=== equals {sep} ===`; `equals` also opens the next circuit.
pub fn split_document(program: Program) -> Result<Document, ElabError> {
    let mut statements = program.statements;
    let mut star = false;
    if let Some(first) = statements.first() {
        if let StatementKind::GroupDirective(d) = &first.kind {
            if d.name == "yquant*" || d.name == "yquant" {
                star = d.name == "yquant*";
                statements.remove(0);
            }
        }
    }
    let is_directive = |s: &crate::frontend::Statement| matches!(s.kind, StatementKind::GroupDirective(_));
    if !statements.iter().any(is_directive) {
        return Ok(Document::Single {
            program: Program { statements },
            star,
        });
    }

    let mut registers: Option<Program> = None;
    let mut circuits: Vec<Program> = Vec::new();
    let mut separators: Vec<String> = Vec::new();
    let mut in_registers = false;
    let mut opened_by_equals = false;
    let mut last_span = SourceSpan::default();
    for stmt in statements {
        last_span = stmt.span;
        let StatementKind::GroupDirective(d) = &stmt.kind else {
            opened_by_equals = false;
            if in_registers {
                registers.as_mut().unwrap().statements.push(stmt);
            } else if let Some(c) = circuits.last_mut() {
                c.statements.push(stmt);
            } else {
                return Err(group_err(
                    "statements must follow a `=== registers ===` or `=== circuit ===` line",
                    stmt.span,
                ));
            }
            continue;
        };
        match d.name.as_str() {
            "registers" => {
                if registers.is_some() || !circuits.is_empty() {
                    return Err(group_err(
                        "`=== registers ===` must come first and only once",
                        stmt.span,
                    ));
                }
                registers = Some(Program::default());
                in_registers = true;
            }
            "circuit" => {
                in_registers = false;
                if opened_by_equals {
                    opened_by_equals = false;
                } else {
                    if !circuits.is_empty() {
                        return Err(group_err("circuits must be separated by `=== equals ===`", stmt.span));
                    }
                    circuits.push(Program::default());
                }
            }
            "equals" => {
                if circuits.is_empty() || opened_by_equals {
                    return Err(group_err("`=== equals ===` must follow a circuit", stmt.span));
                }
                in_registers = false;
                separators.push(
                    d.value
                        .as_ref()
                        .map_or_else(|| "=".to_string(), |v: &ValueText| v.raw.clone()),
                );
                circuits.push(Program::default());
                opened_by_equals = true;
            }
            other => {
                return Err(group_err(format!("unknown section `=== {other} ===`"), stmt.span));
            }
        }
    }
    if opened_by_equals {
        return Err(group_err("`=== equals ===` must be followed by a circuit", last_span));
    }
    if circuits.is_empty() {
        return Err(group_err(
            "the file declares registers but no `=== circuit ===`",
            last_span,
        ));
    }
    Ok(Document::Group {
        registers: registers.unwrap_or_default(),
        circuits,
        separators,
        star,
    })
}

pub fn parse_document(source: &str, input: InputFormat, options: &Options) -> Result<Document, Error> {
    match input {
        InputFormat::Qasm => Ok(Document::Single {
            program: parse_qasm_with(source, &options.qasm_options())?,
            star: false,
        }),
        InputFormat::Yquant => Ok(split_document(parse_program(source)?)?),
    }
}

fn table(star: bool) -> RegisterTable {
    if star {
        RegisterTable::with_auto_declare()
    } else {
        RegisterTable::new()
    }
}

/// Every stage's result for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    pub circuits: Vec<(Elaborated, LayoutResult)>,
    pub separators: Vec<String>,
    pub is_group: bool,
    pub scene: Scene,
    pub warnings: Vec<Warning>,
}

fn text_warnings(instances: &[GateInstance], out: &mut Vec<Warning>) {
    for inst in instances {
        if let Some(v) = &inst.value {
            for w in render_value_text(&v.raw).warnings {
                out.push(Warning::new(w, Some(inst.span)));
            }
        }
        if let Some(sub) = &inst.subcircuit {
            text_warnings(&sub.instances, out);
        }
    }
}

fn finish(elab: Elaborated, options: &Options, warnings: &mut Vec<Warning>) -> (Elaborated, LayoutResult) {
    warnings.extend(elab.warnings.iter().cloned());
    text_warnings(&elab.instances, warnings);
    let layout = place(&elab, &options.layout);
    (elab, layout)
}

pub fn compile_document(doc: Document, options: &Options) -> Result<Compiled, Error> {
    let mut warnings = Vec::new();
    let compiled = match doc {
        Document::Single { program, star } => {
            let elab = elaborate(&program, table(star))?;
            let (elab, layout) = finish(elab, options, &mut warnings);
            let scene = build_scene(&layout, &options.layout, &options.render);
            Compiled {
                circuits: vec![(elab, layout)],
                separators: Vec::new(),
                is_group: false,
                scene,
                warnings,
            }
        }
        Document::Group {
            registers,
            circuits,
            separators,
            star,
        } => {
            let members = elaborate_group(&registers, &circuits, table(star))?;
            let circuits: Vec<(Elaborated, LayoutResult)> =
                members.into_iter().map(|m| finish(m, options, &mut warnings)).collect();
            let layouts: Vec<LayoutResult> = circuits.iter().map(|(_, l)| l.clone()).collect();
            let scene = compose_group(&layouts, &separators, &options.layout, &options.render);
            Compiled {
                circuits,
                separators,
                is_group: true,
                scene,
                warnings,
            }
        }
    };
    if options.strict {
        if let Some(w) = compiled.warnings.first() {
            return Err(Error::Strict(w.clone()));
        }
    }
    Ok(compiled)
}

/// Parse, elaborate and lay out `source`.
pub fn compile(source: &str, input: InputFormat, options: &Options) -> Result<Compiled, Error> {
    compile_document(parse_document(source, input, options)?, options)
}

impl Compiled {
    pub fn emit(&self, format: OutputFormat) -> Vec<u8> {
        match format {
            OutputFormat::Svg => emit_svg(&self.scene),
            OutputFormat::Tikz => emit_tikz(&self.scene).into_bytes(),
            OutputFormat::IrJson => {
                let value = if self.is_group {
                    crate::cli::dump_group_ir(&self.circuits, &self.separators)
                } else {
                    let (e, l) = &self.circuits[0];
                    crate::cli::dump_ir(e, l)
                };
                let mut text = serde_json::to_string_pretty(&value).expect("IR is plain JSON");
                text.push('\n');
                text.into_bytes()
            }
        }
    }
}

/// One-call convenience: source text to output bytes.
pub fn render(source: &str, input: InputFormat, format: OutputFormat, options: &Options) -> Result<Vec<u8>, Error> {
    Ok(compile(source, input, options)?.emit(format))
}
