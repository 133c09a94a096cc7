// SPDX-License-Identifier: Apache-2.0

//! Gate catalog and elaboration of statements into placement units.

use std::collections::HashSet;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::frontend::ast::{Attribute, Program, StatementKind, ValueText};
use crate::layout::parse_length;
use crate::registers::{RegisterTable, RegisterType, ResolveError, Role, WireGroup, WireId};
use crate::span::{SourceSpan, Warning};
use crate::style::{GlyphStyle, WireStyle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Barrier,
    Box,
    Correlate,
    Not,
    Dmeter,
    H,
    Inspect,
    Measure,
    Phase,
    Slash,
    Subcircuit,
    Swap,
    X,
    Xx,
    Y,
    Z,
    Zz,
    Addstyle,
    Align,
    Discard,
    Hspace,
    Setstyle,
    Settype,
    Qubit,
    Cbit,
    Qubits,
    Nobit,
    Init,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateClass {
    BoxedText,
    Symbol,
    Pseudo,
    InitFinal,
    Subcircuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeEffect {
    None,
    ToClassical,
    ToNobit,
    SetType,
    Reinitialize,
}

#[derive(Debug, PartialEq, Eq, Serialize)]
pub struct GateKind {
    pub gate: Gate,
    pub name: &'static str,
    pub class: GateClass,
    pub allows_joint_targets: bool,
    pub allows_controls: bool,
    pub requires_value: bool,
    pub type_effect: TypeEffect,
}

impl GateKind {
    /// Two-wire interaction glyphs that need multi-wire groups.
    pub fn is_pair_glyph(&self) -> bool {
        matches!(self.gate, Gate::Swap | Gate::Xx | Gate::Zz | Gate::Correlate)
    }
}

macro_rules! kind {
    ($gate:ident, $name:literal, $class:ident, joint: $j:literal, controls: $c:literal, value: $v:literal, $effect:ident) => {
        GateKind {
            gate: Gate::$gate,
            name: $name,
            class: GateClass::$class,
            allows_joint_targets: $j,
            allows_controls: $c,
            requires_value: $v,
            type_effect: TypeEffect::$effect,
        }
    };
}

static CATALOG: &[GateKind] = &[
    kind!(Barrier, "barrier", Symbol, joint: true, controls: false, value: false, None),
    kind!(Box, "box", BoxedText, joint: true, controls: true, value: true, None),
    kind!(Correlate, "correlate", Symbol, joint: true, controls: false, value: false, None),
    kind!(Not, "not", Symbol, joint: false, controls: true, value: false, None),
    kind!(Dmeter, "dmeter", Symbol, joint: false, controls: false, value: false, ToClassical),
    kind!(H, "h", BoxedText, joint: false, controls: true, value: false, None),
    kind!(Inspect, "inspect", BoxedText, joint: true, controls: false, value: true, None),
    kind!(Measure, "measure", Symbol, joint: true, controls: false, value: false, ToClassical),
    kind!(Phase, "phase", Symbol, joint: false, controls: true, value: false, None),
    kind!(Slash, "slash", Symbol, joint: false, controls: false, value: false, None),
    kind!(Subcircuit, "subcircuit", Subcircuit, joint: true, controls: true, value: false, None),
    kind!(Swap, "swap", Symbol, joint: true, controls: true, value: false, None),
    kind!(X, "x", BoxedText, joint: false, controls: true, value: false, None),
    kind!(Xx, "xx", Symbol, joint: true, controls: true, value: false, None),
    kind!(Y, "y", BoxedText, joint: false, controls: true, value: false, None),
    kind!(Z, "z", BoxedText, joint: false, controls: true, value: false, None),
    kind!(Zz, "zz", Symbol, joint: true, controls: true, value: false, None),
    kind!(Addstyle, "addstyle", Pseudo, joint: false, controls: false, value: true, None),
    kind!(Align, "align", Pseudo, joint: false, controls: false, value: false, None),
    kind!(Discard, "discard", Pseudo, joint: false, controls: false, value: false, ToNobit),
    kind!(Hspace, "hspace", Pseudo, joint: false, controls: false, value: true, None),
    kind!(Setstyle, "setstyle", Pseudo, joint: false, controls: false, value: true, None),
    kind!(Settype, "settype", Pseudo, joint: false, controls: false, value: true, SetType),
    kind!(Qubit, "qubit", InitFinal, joint: false, controls: false, value: false, None),
    kind!(Cbit, "cbit", InitFinal, joint: false, controls: false, value: false, None),
    kind!(Qubits, "qubits", InitFinal, joint: false, controls: false, value: false, None),
    kind!(Nobit, "nobit", InitFinal, joint: false, controls: false, value: false, None),
    kind!(Init, "init", InitFinal, joint: true, controls: false, value: true, Reinitialize),
    kind!(Output, "output", InitFinal, joint: true, controls: false, value: true, None),
];

/// Every entry of the catalog.
pub fn catalog() -> &'static [GateKind] {
    CATALOG
}

/// Look up a (case-insensitive) gate name. `cnot` is an alias of `not`.
pub fn catalog_lookup(name: &str) -> Result<&'static GateKind, ElabErrorKind> {
    let lower = name.to_ascii_lowercase();
    let canonical = if lower == "cnot" { "not" } else { lower.as_str() };
    CATALOG
        .iter()
        .find(|k| k.name == canonical)
        .ok_or(ElabErrorKind::UnknownGate(lower))
}

/// Replace the control words `\idx` and `\reg` with the element index and the
/// register name. Longer control words such as `\register` are left alone.
pub fn substitute_label(template: &str, reg_name: &str, idx: usize) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(pos) = rest.find('\\') {
        out.push_str(&rest[..pos]);
        let after = &rest[pos + 1..];
        let word_len = after.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(after.len());
        let word = &after[..word_len];
        match word {
            "idx" => out.push_str(&idx.to_string()),
            "reg" => out.push_str(reg_name),
            _ if word.is_empty() => {
                // escape pair such as `\\` or `\{`
                let next = after.chars().next().map_or(0, char::len_utf8);
                out.push('\\');
                out.push_str(&after[..next]);
                rest = &after[next..];
                continue;
            }
            _ => {
                out.push('\\');
                out.push_str(word);
            }
        }
        rest = &after[word_len..];
    }
    out.push_str(rest);
    out
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElabErrorKind {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error("`{0}` does not accept multi-wire groups")]
    JointNotAllowed(&'static str),
    #[error("`{0}` does not accept controls")]
    ControlsNotAllowed(&'static str),
    #[error("`{0}` requires a value in braces")]
    MissingValue(&'static str),
    #[error("`{gate}` {detail}")]
    BadGroupShape { gate: &'static str, detail: String },
    #[error("control on wire {0}, which has no line at this point")]
    ControlOnNobit(String),
    #[error("subcircuit declares {inner} wires but is applied to {outer}")]
    SubcircuitArity { inner: usize, outer: usize },
    #[error("invalid value `{value}` for `{gate}`: {reason}")]
    InvalidValue {
        gate: &'static str,
        value: String,
        reason: String,
    },
    #[error("element name `{0}` is used more than once")]
    DuplicateElementName(String),
    #[error("section line `=== {0} ===` is not allowed here")]
    MisplacedDirective(String),
    #[error("{0}")]
    Group(String),
    #[error("{0} (warnings are errors in strict mode)")]
    Strict(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind}")]
pub struct ElabError {
    pub kind: ElabErrorKind,
    pub span: Option<SourceSpan>,
}

impl ElabError {
    pub fn new(kind: ElabErrorKind, span: SourceSpan) -> Self {
        ElabError { kind, span: Some(span) }
    }
}

/// Gate-specific parsed value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Param {
    None,
    /// Millimetres.
    Length(f64),
    Type(RegisterType),
    Style(WireStyle),
}

/// Elaborated inner circuit of a `subcircuit` instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subcircuit {
    pub table: RegisterTable,
    pub instances: Vec<GateInstance>,
    /// Type of every inner wire at the end of the inner circuit.
    pub final_types: Vec<RegisterType>,
}

fn kind_name<S: Serializer>(kind: &&'static GateKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(kind.name)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateInstance {
    #[serde(serialize_with = "kind_name")]
    pub kind: &'static GateKind,
    pub value: Option<ValueText>,
    pub targets: Vec<WireGroup>,
    pub controls: Vec<WireId>,
    pub neg_controls: Vec<WireId>,
    #[serde(skip)]
    pub attrs: Vec<Attribute>,
    #[serde(skip)]
    pub style: GlyphStyle,
    #[serde(skip)]
    pub span: SourceSpan,
    pub element_id: Option<String>,
    /// Index of the source statement; instances of one statement are adjacent.
    pub statement: usize,
    pub param: Param,
    pub subcircuit: Option<Box<Subcircuit>>,
}

impl GateInstance {
    pub fn target_wires(&self) -> impl Iterator<Item = WireId> + '_ {
        self.targets.iter().flat_map(|g| g.wires.iter().copied())
    }

    /// Targets, controls and negative controls.
    pub fn all_wires(&self) -> impl Iterator<Item = WireId> + '_ {
        self.target_wires()
            .chain(self.controls.iter().copied())
            .chain(self.neg_controls.iter().copied())
    }

    pub fn wire_span(&self) -> Option<(WireId, WireId)> {
        let min = self.all_wires().min()?;
        let max = self.all_wires().max()?;
        Some((min, max))
    }

    pub fn has_controls(&self) -> bool {
        !self.controls.is_empty() || !self.neg_controls.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Elaborated {
    pub table: RegisterTable,
    pub instances: Vec<GateInstance>,
    #[serde(skip)]
    pub warnings: Vec<Warning>,
    /// Type of every wire after the last instance.
    #[serde(skip)]
    pub final_types: Vec<RegisterType>,
}

/// Apply a type effect to one wire's current type.
pub fn apply_type_effect(
    effect: TypeEffect,
    current: RegisterType,
    declared: RegisterType,
    param: &Param,
) -> RegisterType {
    match effect {
        TypeEffect::None => current,
        TypeEffect::ToClassical => RegisterType::Cbit,
        TypeEffect::ToNobit => RegisterType::Nobit,
        TypeEffect::SetType => match param {
            Param::Type(t) => *t,
            _ => current,
        },
        TypeEffect::Reinitialize => declared,
    }
}

/// Resolve every statement of `program` against `table`.
pub fn elaborate(program: &Program, table: RegisterTable) -> Result<Elaborated, ElabError> {
    let mut cx = Elaborator {
        table,
        instances: Vec::new(),
        warnings: Vec::new(),
        types: Vec::new(),
        names: HashSet::new(),
    };
    cx.types = cx
        .table
        .registers
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.reg_type, r.length))
        .collect();
    for (idx, stmt) in program.statements.iter().enumerate() {
        cx.statement(idx, stmt)?;
    }
    cx.sync_types();
    Ok(Elaborated {
        table: cx.table,
        instances: cx.instances,
        warnings: cx.warnings,
        final_types: cx.types,
    })
}

struct Elaborator {
    table: RegisterTable,
    instances: Vec<GateInstance>,
    warnings: Vec<Warning>,
    types: Vec<RegisterType>,
    names: HashSet<String>,
}

impl Elaborator {
    /// Extend the type vector for wires declared since the last call.
    fn sync_types(&mut self) {
        let count = self.table.wire_count();
        while self.types.len() < count {
            let w = WireId(self.types.len());
            let ty = self.table.owner(w).map(|(r, _)| r.reg_type).unwrap();
            self.types.push(ty);
        }
    }

    fn declared_type(&self, w: WireId) -> RegisterType {
        self.table.owner(w).map(|(r, _)| r.reg_type).unwrap()
    }

    fn style(&mut self, attrs: &[Attribute], span: SourceSpan) -> GlyphStyle {
        let (style, unknown) = GlyphStyle::from_attrs(attrs);
        for u in unknown {
            self.warnings
                .push(Warning::new(format!("unsupported attribute `{u}` ignored"), Some(span)));
        }
        style
    }

    fn statement(&mut self, idx: usize, stmt: &crate::frontend::Statement) -> Result<(), ElabError> {
        let span = stmt.span;
        let err = |kind: ElabErrorKind| ElabError::new(kind, span);
        match &stmt.kind {
            StatementKind::GroupDirective(d) => Err(err(ElabErrorKind::MisplacedDirective(d.name.clone()))),
            StatementKind::Declaration(d) => {
                let style = self.style(&stmt.attrs, span);
                self.table
                    .declare(&d.name, d.reg_type, d.length, d.label.as_ref().map(|l| l.raw.clone()))
                    .map_err(|e| err(e.into()))?;
                if style.out {
                    self.table.mark_out(&d.name);
                }
                self.sync_types();
                Ok(())
            }
            StatementKind::Gate(g) => {
                let kind = catalog_lookup(&g.name).map_err(err)?;
                if kind.class == GateClass::InitFinal
                    && kind.type_effect == TypeEffect::None
                    && kind.gate != Gate::Output
                {
                    return Err(err(ElabErrorKind::UnknownGate(g.name.clone())));
                }
                let style = self.style(&stmt.attrs, span);

                let mut targets = Vec::new();
                for t in &g.targets {
                    targets.extend(self.resolve(t, Role::Target)?);
                }
                let mut controls = Vec::new();
                for c in g.controls.iter().flatten() {
                    controls.extend(self.resolve(c, Role::Control)?);
                }
                let mut neg_controls = Vec::new();
                for c in g.neg_controls.iter().flatten() {
                    neg_controls.extend(self.resolve(c, Role::NegControl)?);
                }
                self.sync_types();
                let controls: Vec<WireId> = controls.into_iter().flat_map(|g| g.wires).collect();
                let neg_controls: Vec<WireId> = neg_controls.into_iter().flat_map(|g| g.wires).collect();

                let mut seen = HashSet::new();
                for w in targets
                    .iter()
                    .flat_map(|g| g.wires.iter())
                    .chain(&controls)
                    .chain(&neg_controls)
                {
                    if !seen.insert(*w) {
                        return Err(err(ResolveError::DuplicateWire(self.table.wire_name(*w)).into()));
                    }
                }

                if kind.requires_value && g.value.is_none() {
                    return Err(err(ElabErrorKind::MissingValue(kind.name)));
                }
                let has_controls = !controls.is_empty() || !neg_controls.is_empty();
                if has_controls && !kind.allows_controls {
                    return Err(err(ElabErrorKind::ControlsNotAllowed(kind.name)));
                }
                if !kind.allows_joint_targets && targets.iter().any(|t| t.joint) {
                    return Err(err(ElabErrorKind::JointNotAllowed(kind.name)));
                }
                if kind.is_pair_glyph() {
                    for t in &targets {
                        let n = t.wires.len();
                        let ok = t.joint && if kind.gate == Gate::Swap { n == 2 } else { n >= 2 };
                        if !ok {
                            let detail = if kind.gate == Gate::Swap {
                                "needs parenthesised pairs of exactly 2 wires, e.g. `swap (a, b)`"
                            } else {
                                "needs parenthesised groups of at least 2 wires"
                            };
                            return Err(err(ElabErrorKind::BadGroupShape {
                                gate: kind.name,
                                detail: detail.to_string(),
                            }));
                        }
                    }
                }
                for &c in controls.iter().chain(&neg_controls) {
                    if self.types[c.0] == RegisterType::Nobit {
                        return Err(err(ElabErrorKind::ControlOnNobit(self.table.wire_name(c))));
                    }
                }

                let param = self.param(kind, g.value.as_ref(), span)?;
                let sub = match &g.sub_program {
                    Some(p) => {
                        let outer: usize = targets.iter().map(|t| t.wires.len()).sum();
                        let inner = elaborate(p, RegisterTable::new())?;
                        if inner.table.wire_count() != outer {
                            return Err(err(ElabErrorKind::SubcircuitArity {
                                inner: inner.table.wire_count(),
                                outer,
                            }));
                        }
                        self.warnings.extend(inner.warnings.iter().cloned());
                        Some(Box::new(Subcircuit {
                            table: inner.table,
                            instances: inner.instances,
                            final_types: inner.final_types,
                        }))
                    }
                    None => None,
                };

                if let Some(name) = &style.name {
                    if !self.names.insert(name.clone()) {
                        return Err(err(ElabErrorKind::DuplicateElementName(name.clone())));
                    }
                }

                let together = has_controls || matches!(kind.gate, Gate::Barrier | Gate::Align | Gate::Subcircuit);
                let groups: Vec<Vec<WireGroup>> = if together {
                    vec![targets]
                } else {
                    targets.into_iter().map(|t| vec![t]).collect()
                };
                for group in groups {
                    let value = g.value.as_ref().map(|v| self.instance_value(v, &group));
                    let inst = GateInstance {
                        kind,
                        value,
                        targets: group,
                        controls: controls.clone(),
                        neg_controls: neg_controls.clone(),
                        attrs: stmt.attrs.clone(),
                        style: style.clone(),
                        span,
                        element_id: style.name.clone(),
                        statement: idx,
                        param: param.clone(),
                        subcircuit: sub.clone(),
                    };
                    self.apply_effects(&inst);
                    self.instances.push(inst);
                }
                Ok(())
            }
        }
    }

    fn resolve(&mut self, expr: &crate::frontend::RegRefExpr, role: Role) -> Result<Vec<WireGroup>, ElabError> {
        self.table
            .resolve(expr, role)
            .map_err(|e| ElabError::new(e.into(), expr.span))
    }

    /// Values of single-wire instances get `\idx`/`\reg` substituted.
    fn instance_value(&self, value: &ValueText, group: &[WireGroup]) -> ValueText {
        match group {
            [WireGroup { wires, .. }] if wires.len() == 1 => {
                let (reg, i) = self.table.owner(wires[0]).unwrap();
                let raw = substitute_label(&value.raw, &reg.name, i);
                if raw == value.raw {
                    value.clone()
                } else {
                    ValueText::new(raw)
                }
            }
            _ => value.clone(),
        }
    }

    fn param(&mut self, kind: &GateKind, value: Option<&ValueText>, span: SourceSpan) -> Result<Param, ElabError> {
        let Some(value) = value else {
            return Ok(Param::None);
        };
        let invalid = |reason: String| {
            ElabError::new(
                ElabErrorKind::InvalidValue {
                    gate: kind.name,
                    value: value.raw.clone(),
                    reason,
                },
                span,
            )
        };
        Ok(match kind.gate {
            Gate::Hspace => {
                let amount = parse_length(&value.raw).map_err(invalid)?;
                if amount < 0.0 {
                    return Err(invalid("negative amount".into()));
                }
                Param::Length(amount)
            }
            Gate::Settype => match RegisterType::from_keyword(value.raw.trim()) {
                Some(t) => Param::Type(t),
                None => return Err(invalid("expected qubit, cbit, qubits or nobit".into())),
            },
            Gate::Setstyle | Gate::Addstyle => {
                let (style, unknown) = WireStyle::parse(&value.raw);
                for u in unknown {
                    self.warnings
                        .push(Warning::new(format!("unsupported style key `{u}` ignored"), Some(span)));
                }
                Param::Style(style)
            }
            _ => Param::None,
        })
    }

    fn apply_effects(&mut self, inst: &GateInstance) {
        if let Some(sub) = &inst.subcircuit {
            for (w, ty) in inst.target_wires().zip(&sub.final_types) {
                self.types[w.0] = *ty;
            }
            return;
        }
        for w in inst.target_wires().collect::<Vec<_>>() {
            let declared = self.declared_type(w);
            self.types[w.0] = apply_type_effect(inst.kind.type_effect, self.types[w.0], declared, &inst.param);
        }
    }
}
