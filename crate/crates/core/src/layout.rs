// SPDX-License-Identifier: Apache-2.0

//! Horizontal placement. Every wire keeps its own cursor; an instance starts
//! one column gap after the largest cursor among the wires it blocks and moves
//! all of them to its right edge.
//!
//! An instance blocks the contiguous wire interval between its lowest and
//! highest involved wire, so connectors never cross other glyphs. Uncontrolled
//! single-wire instances block only their own wire and float independently.

use serde::Serialize;
use thiserror::Error;

use crate::gates::{apply_type_effect, Elaborated, Gate, GateInstance, Param, TypeEffect};
use crate::registers::{RegisterTable, RegisterType, WireId};
use crate::render::text::render_value_text;
use crate::style::WireStyle;

/// Millimetres per TeX point.
pub const PT: f64 = 25.4 / 72.27;
/// Width reserved for the curly brace of joint `init`/`output` groups.
pub const BRACE_WIDTH: f64 = 1.5;
/// Width of the `slash` glyph.
pub const SLASH_WIDTH: f64 = 2.0;

/// Layout constants in millimetres, except `char_width_factor` (a ratio of the
/// font size).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutConfig {
    pub column_gap: f64,
    pub wire_gap: f64,
    pub min_op_width: f64,
    pub measure_width: f64,
    pub dot_radius: f64,
    pub oplus_radius: f64,
    pub text_padding: f64,
    pub char_width_factor: f64,
    pub font_size: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            column_gap: 1.5,
            wire_gap: 6.0,
            min_op_width: 4.0,
            measure_width: 7.0,
            dot_radius: 0.9,
            oplus_radius: 1.6,
            text_padding: 1.0,
            char_width_factor: 0.6,
            font_size: 10.0 * PT,
        }
    }
}

impl LayoutConfig {
    pub const KEYS: &'static [&'static str] = &[
        "column_gap",
        "wire_gap",
        "min_op_width",
        "measure_width",
        "dot_radius",
        "oplus_radius",
        "text_padding",
        "char_width_factor",
        "font_size",
    ];

    /// Set one field from its textual value. Lengths accept units.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let parsed = if key == "char_width_factor" {
            value
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("`{value}` is not a number"))?
        } else {
            parse_length(value)?
        };
        if !(parsed.is_finite() && parsed > 0.0) {
            return Err(format!("`{key}` must be positive"));
        }
        let slot = match key {
            "column_gap" => &mut self.column_gap,
            "wire_gap" => &mut self.wire_gap,
            "min_op_width" => &mut self.min_op_width,
            "measure_width" => &mut self.measure_width,
            "dot_radius" => &mut self.dot_radius,
            "oplus_radius" => &mut self.oplus_radius,
            "text_padding" => &mut self.text_padding,
            "char_width_factor" => &mut self.char_width_factor,
            "font_size" => &mut self.font_size,
            _ => return Err(format!("unknown layout key `{key}`")),
        };
        *slot = parsed;
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            self.column_gap,
            self.wire_gap,
            self.min_op_width,
            self.measure_width,
            self.dot_radius,
            self.oplus_radius,
            self.text_padding,
            self.char_width_factor,
            self.font_size,
        ];
        for (key, v) in Self::KEYS.iter().zip(fields) {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("`{key}` must be positive"));
            }
        }
        Ok(())
    }

    /// Width of one character of text.
    pub fn char_width(&self) -> f64 {
        self.char_width_factor * self.font_size
    }

    /// Estimated width of a value after macro substitution.
    pub fn text_width(&self, raw: &str) -> f64 {
        render_value_text(raw).max_chars() as f64 * self.char_width()
    }
}

/// Parse `5mm`, `0.8pt`, `1cm`, `0.5in`, `2bp`; a bare number is millimetres.
pub fn parse_length(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let split = t.find(|c: char| c.is_ascii_alphabetic()).unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let n: f64 = num.trim().parse().map_err(|_| format!("`{text}` is not a length"))?;
    let factor = match unit.trim() {
        "" | "mm" => 1.0,
        "cm" => 10.0,
        "pt" => PT,
        "bp" => 25.4 / 72.0,
        "in" => 25.4,
        other => return Err(format!("unknown unit `{other}`")),
    };
    let v = n * factor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{text}` is not a length"))
    }
}

/// Millimetres with at most three decimals and no trailing zeros.
pub fn format_mm(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("negative horizontal space {0} mm")]
    NegativeSpace(f64),
    #[error("subcircuit declares {inner} wires but is applied to {outer}")]
    SubcircuitArity { inner: usize, outer: usize },
    #[error("instance is not a subcircuit")]
    NotSubcircuit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub x_start: f64,
    pub x_end: f64,
    pub wire_type: RegisterType,
    pub style: WireStyle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WireTimeline {
    pub wire: WireId,
    pub segments: Vec<Segment>,
}

impl WireTimeline {
    /// Type at `x`; segment ends belong to the following segment.
    pub fn type_at(&self, x: f64) -> Option<RegisterType> {
        self.segments
            .iter()
            .rev()
            .find(|s| s.x_start <= x)
            .filter(|s| x <= s.x_end)
            .map(|s| s.wire_type)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Placement {
    /// Index into `LayoutResult::instances`.
    pub instance: usize,
    pub x_center: f64,
    pub half_width: f64,
    /// Lowest and highest wire of the blocked interval.
    pub span: (WireId, WireId),
    pub nested: Option<Box<LayoutResult>>,
}

impl Placement {
    pub fn x_left(&self) -> f64 {
        self.x_center - self.half_width
    }

    pub fn x_right(&self) -> f64 {
        self.x_center + self.half_width
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WireInfo {
    pub wire: WireId,
    pub name: String,
    /// Label value with `\reg`/`\idx` substituted.
    pub label: String,
    pub label_width: f64,
    pub declared: RegisterType,
    /// Where the wire line begins.
    pub start_x: f64,
    pub out: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutResult {
    #[serde(skip)]
    pub instances: Vec<GateInstance>,
    /// One per instance, in instance order.
    pub placements: Vec<Placement>,
    pub wires: Vec<WireInfo>,
    pub timelines: Vec<WireTimeline>,
    /// Cursor of every wire after the last non-deferred instance.
    pub cursors: Vec<f64>,
    /// Common right end of all wires; outputs start here.
    pub end_x: f64,
    /// `end_x` plus the widest output.
    pub width: f64,
}

impl LayoutResult {
    pub fn placement_of(&self, instance: usize) -> &Placement {
        &self.placements[instance]
    }
}

/// Set every listed cursor to their common maximum.
pub fn apply_align(cursors: &mut [f64], wires: &[WireId]) {
    let max = wires.iter().map(|w| cursors[w.0]).fold(f64::NEG_INFINITY, f64::max);
    for w in wires {
        cursors[w.0] = max;
    }
}

pub fn apply_hspace(cursor: f64, amount: f64) -> Result<f64, LayoutError> {
    if amount < 0.0 {
        return Err(LayoutError::NegativeSpace(amount));
    }
    Ok(cursor + amount)
}

/// Lay out an elaborated circuit.
pub fn place(elab: &Elaborated, config: &LayoutConfig) -> LayoutResult {
    place_instances(&elab.instances, &elab.table, config)
}

/// Lay out `instances` against `table`. Wires with the `out` flag start at
/// their label; others start at 0 when `nested`.
pub fn place_instances(instances: &[GateInstance], table: &RegisterTable, config: &LayoutConfig) -> LayoutResult {
    Engine::new(instances, table, config, false).run()
}

/// Lay out the inner circuit of a subcircuit instance in a local frame whose
/// origin is the left edge of the box.
pub fn place_subcircuit(
    index: usize,
    instance: &GateInstance,
    config: &LayoutConfig,
) -> Result<Placement, LayoutError> {
    let sub = instance.subcircuit.as_ref().ok_or(LayoutError::NotSubcircuit)?;
    let outer = instance.target_wires().count();
    if sub.table.wire_count() != outer {
        return Err(LayoutError::SubcircuitArity {
            inner: sub.table.wire_count(),
            outer,
        });
    }
    let mut inner = Engine::new(&sub.instances, &sub.table, config, true).run();
    let width = (inner.end_x + 2.0 * config.text_padding).max(config.min_op_width);
    inner.shift(config.text_padding);
    let (lo, hi) = instance.wire_span().unwrap();
    Ok(Placement {
        instance: index,
        x_center: width / 2.0,
        half_width: width / 2.0,
        span: (lo, hi),
        nested: Some(Box::new(inner)),
    })
}

impl LayoutResult {
    /// Translate every x coordinate by `dx`.
    pub fn shift(&mut self, dx: f64) {
        for p in &mut self.placements {
            p.x_center += dx;
            if let Some(n) = &mut p.nested {
                n.shift(dx);
            }
        }
        for w in &mut self.wires {
            w.start_x += dx;
        }
        for t in &mut self.timelines {
            for s in &mut t.segments {
                s.x_start += dx;
                s.x_end += dx;
            }
        }
        for c in &mut self.cursors {
            *c += dx;
        }
        self.end_x += dx;
        self.width += dx;
    }
}

/// Width of a drawn instance.
pub fn instance_width(inst: &GateInstance, config: &LayoutConfig) -> f64 {
    let text = || inst.value.as_ref().map_or(0.0, |v| config.text_width(&v.raw));
    let padded = || text() + 2.0 * config.text_padding;
    let braced = || {
        if inst.targets.iter().any(|g| g.joint && g.wires.len() > 1) {
            BRACE_WIDTH
        } else {
            0.0
        }
    };
    match inst.kind.gate {
        Gate::Box | Gate::Dmeter => padded().max(config.min_op_width),
        Gate::H | Gate::X | Gate::Y | Gate::Z => config.min_op_width,
        Gate::Not | Gate::Swap | Gate::Xx | Gate::Correlate => 2.0 * config.oplus_radius,
        Gate::Zz => 2.0 * config.dot_radius,
        Gate::Phase => match &inst.value {
            Some(_) => 2.0 * config.dot_radius + config.text_padding + text(),
            None => 2.0 * config.dot_radius,
        },
        Gate::Measure => config.measure_width,
        Gate::Inspect => text(),
        Gate::Slash => SLASH_WIDTH,
        Gate::Barrier => config.column_gap,
        Gate::Init | Gate::Output => padded() + braced(),
        Gate::Subcircuit => config.min_op_width,
        Gate::Addstyle
        | Gate::Align
        | Gate::Discard
        | Gate::Hspace
        | Gate::Setstyle
        | Gate::Settype
        | Gate::Qubit
        | Gate::Cbit
        | Gate::Qubits
        | Gate::Nobit => 0.0,
    }
}

#[derive(Debug, Clone)]
enum Event {
    Type(RegisterType),
    SetStyle(WireStyle),
    AddStyle(WireStyle),
}

struct Engine<'a> {
    instances: &'a [GateInstance],
    table: &'a RegisterTable,
    config: &'a LayoutConfig,
    nested: bool,
    cursors: Vec<f64>,
    types: Vec<RegisterType>,
    events: Vec<Vec<(f64, Event)>>,
    placements: Vec<Option<Placement>>,
}

impl<'a> Engine<'a> {
    fn new(instances: &'a [GateInstance], table: &'a RegisterTable, config: &'a LayoutConfig, nested: bool) -> Self {
        let n = table.wire_count();
        Engine {
            instances,
            table,
            config,
            nested,
            cursors: vec![0.0; n],
            types: (0..n).map(|w| table.owner(WireId(w)).unwrap().0.reg_type).collect(),
            events: vec![Vec::new(); n],
            placements: vec![None; instances.len()],
        }
    }

    fn wire_infos(&self) -> Vec<WireInfo> {
        (0..self.table.wire_count())
            .map(|w| {
                let wire = WireId(w);
                let (reg, idx) = self.table.owner(wire).unwrap();
                let label = reg.label_for(idx);
                let text = self.config.text_width(&label);
                let label_width = if text > 0.0 {
                    text + self.config.text_padding
                } else {
                    0.0
                };
                let start_x = if self.nested && !reg.out { 0.0 } else { label_width };
                WireInfo {
                    wire,
                    name: self.table.wire_name(wire),
                    label,
                    label_width,
                    declared: reg.reg_type,
                    start_x,
                    out: reg.out,
                }
            })
            .collect()
    }

    fn run(mut self) -> LayoutResult {
        let wires = self.wire_infos();
        for (w, info) in wires.iter().enumerate() {
            self.cursors[w] = info.label_width;
        }
        let mut deferred = Vec::new();
        for (i, inst) in self.instances.iter().enumerate() {
            if inst.kind.gate == Gate::Output {
                deferred.push(i);
            } else {
                self.instance(i, inst);
            }
        }

        let max_cursor = self.cursors.iter().copied().fold(0.0, f64::max);
        let end_x = if self.instances.is_empty() {
            max_cursor
        } else {
            max_cursor + self.config.column_gap
        };
        let mut width = end_x;
        for i in deferred {
            let inst = &self.instances[i];
            let w = instance_width(inst, self.config);
            let (lo, hi) = inst.wire_span().unwrap();
            self.placements[i] = Some(Placement {
                instance: i,
                x_center: end_x + w / 2.0,
                half_width: w / 2.0,
                span: (lo, hi),
                nested: None,
            });
            width = width.max(end_x + w);
        }

        let timelines = self.timelines(&wires, end_x);
        LayoutResult {
            instances: self.instances.to_vec(),
            placements: self.placements.into_iter().map(Option::unwrap).collect(),
            wires,
            timelines,
            cursors: self.cursors,
            end_x,
            width,
        }
    }

    fn point(&mut self, i: usize, x: f64, half_width: f64, span: (WireId, WireId)) {
        self.placements[i] = Some(Placement {
            instance: i,
            x_center: x,
            half_width,
            span,
            nested: None,
        });
    }

    fn instance(&mut self, i: usize, inst: &GateInstance) {
        let targets: Vec<WireId> = inst.target_wires().collect();
        let (lo, hi) = inst.wire_span().unwrap();
        match inst.kind.gate {
            Gate::Align => {
                apply_align(&mut self.cursors, &targets);
                let x = self.cursors[targets[0].0];
                self.point(i, x, 0.0, (lo, hi));
            }
            Gate::Hspace => {
                let amount = match inst.param {
                    Param::Length(a) => a,
                    _ => 0.0,
                };
                let w = targets[0];
                let before = self.cursors[w.0];
                self.cursors[w.0] = apply_hspace(before, amount).unwrap_or(before);
                self.point(i, before + amount / 2.0, amount / 2.0, (lo, hi));
            }
            Gate::Discard | Gate::Settype | Gate::Setstyle | Gate::Addstyle => {
                let w = targets[0];
                let x = self.cursors[w.0];
                let event = match (&inst.param, inst.kind.gate) {
                    (Param::Style(s), Gate::Setstyle) => Event::SetStyle(s.clone()),
                    (Param::Style(s), _) => Event::AddStyle(s.clone()),
                    _ => {
                        let declared = self.declared(w);
                        let ty = apply_type_effect(inst.kind.type_effect, self.types[w.0], declared, &inst.param);
                        self.types[w.0] = ty;
                        Event::Type(ty)
                    }
                };
                self.events[w.0].push((x, event));
                self.point(i, x, 0.0, (lo, hi));
            }
            _ => self.column(i, inst, &targets, (lo, hi)),
        }
    }

    fn declared(&self, w: WireId) -> RegisterType {
        self.table.owner(w).unwrap().0.reg_type
    }

    fn column(&mut self, i: usize, inst: &GateInstance, targets: &[WireId], span: (WireId, WireId)) {
        let blocked = span.0 .0..=span.1 .0;
        let x_left = self.cursors[blocked.clone()]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
            + self.config.column_gap;

        let mut placement = if inst.kind.gate == Gate::Subcircuit {
            place_subcircuit(i, inst, self.config).unwrap_or_else(|_| Placement {
                instance: i,
                x_center: self.config.min_op_width / 2.0,
                half_width: self.config.min_op_width / 2.0,
                span,
                nested: None,
            })
        } else {
            let w = instance_width(inst, self.config);
            Placement {
                instance: i,
                x_center: w / 2.0,
                half_width: w / 2.0,
                span,
                nested: None,
            }
        };
        placement.x_center += x_left;
        if let Some(n) = &mut placement.nested {
            n.shift(x_left);
        }
        let x_right = placement.x_right();
        for c in &mut self.cursors[blocked] {
            *c = x_right;
        }

        match inst.kind.type_effect {
            TypeEffect::ToClassical => {
                for &w in targets {
                    self.types[w.0] = RegisterType::Cbit;
                    self.events[w.0].push((x_right, Event::Type(RegisterType::Cbit)));
                }
            }
            TypeEffect::Reinitialize => {
                for &w in targets {
                    let declared = self.declared(w);
                    self.types[w.0] = declared;
                    self.events[w.0].push((x_left, Event::Type(RegisterType::Nobit)));
                    self.events[w.0].push((x_right, Event::Type(declared)));
                }
            }
            _ => {}
        }
        if let Some(sub) = &inst.subcircuit {
            for (&w, &ty) in targets.iter().zip(&sub.final_types) {
                self.types[w.0] = ty;
                self.events[w.0].push((x_left, Event::Type(RegisterType::Nobit)));
                self.events[w.0].push((x_right, Event::Type(ty)));
            }
        }
        self.placements[i] = Some(placement);
    }

    fn timelines(&self, wires: &[WireInfo], end_x: f64) -> Vec<WireTimeline> {
        wires
            .iter()
            .map(|info| {
                let mut events = self.events[info.wire.0].clone();
                events.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut segments: Vec<Segment> = Vec::new();
                let mut x = info.start_x;
                let mut ty = info.declared;
                let mut style = WireStyle::default();
                let push = |segments: &mut Vec<Segment>, from: f64, to: f64, ty, style: &WireStyle| {
                    if to <= from {
                        return;
                    }
                    match segments.last_mut() {
                        Some(last) if last.wire_type == ty && last.style == *style && last.x_end == from => {
                            last.x_end = to;
                        }
                        _ => segments.push(Segment {
                            x_start: from,
                            x_end: to,
                            wire_type: ty,
                            style: style.clone(),
                        }),
                    }
                };
                for (at, event) in events {
                    push(&mut segments, x, at, ty, &style);
                    x = x.max(at);
                    match event {
                        Event::Type(t) => ty = t,
                        Event::SetStyle(s) => style = s,
                        Event::AddStyle(s) => style = style.merged(&s),
                    }
                }
                push(&mut segments, x, end_x, ty, &style);
                WireTimeline {
                    wire: info.wire,
                    segments,
                }
            })
            .collect()
    }
}
