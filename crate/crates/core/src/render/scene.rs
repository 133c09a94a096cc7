// SPDX-License-Identifier: Apache-2.0

//! Renderer-neutral geometry. Coordinates are millimetres with y pointing down.

use serde::Serialize;

use crate::gates::{Gate, GateInstance};
use crate::layout::{LayoutConfig, LayoutResult, Placement, BRACE_WIDTH};
use crate::registers::WireId;
use crate::render::text::{render_value_text, TextRun};
use crate::style::{Dash, GlyphStyle, WireStyle};

/// Default stroke width.
pub const STROKE_WIDTH: f64 = 0.15;
/// Offsets of the parallel strokes of cbit and qubits wires.
pub const CBIT_OFFSETS: [f64; 2] = [-0.25, 0.25];
pub const QUBITS_OFFSETS: [f64; 3] = [-0.5, 0.0, 0.5];
/// Measure dial: arc radius as a fraction of the glyph width, arc centre
/// offset below the wire, and needle angle in degrees.
pub const MEASURE_ARC_RATIO: f64 = 0.3;
pub const MEASURE_ARC_DROP: f64 = 0.9;
pub const MEASURE_NEEDLE_DEG: f64 = 55.0;
/// Cubic control distance for quarter circles (D-shaped `dmeter`).
pub const KAPPA: f64 = 0.552_284_75;
/// Correlate zigzag: vertical pitch and horizontal amplitude.
pub const ZIGZAG_PITCH: f64 = 1.0;
pub const ZIGZAG_AMPLITUDE: f64 = 0.6;
/// Half size of the `×` glyph of swap and xx.
pub const CROSS_HALF: f64 = 1.1;
/// Half height of the `slash` stroke.
pub const SLASH_HALF: f64 = 1.2;
/// Distance between a quoted label and the top of its glyph.
pub const LABEL_RAISE: f64 = 1.5;
/// Line height as a multiple of the font size.
pub const LINE_HEIGHT: f64 = 1.2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stroke {
    pub color: String,
    pub width: f64,
    pub dash: Dash,
}

impl Default for Stroke {
    fn default() -> Self {
        Stroke {
            color: "black".into(),
            width: STROKE_WIDTH,
            dash: Dash::Solid,
        }
    }
}

impl Stroke {
    pub fn from_style(style: &WireStyle) -> Stroke {
        Stroke {
            color: style.color.clone().unwrap_or_else(|| "black".into()),
            width: style.line_width.unwrap_or(STROKE_WIDTH),
            dash: style.dash.unwrap_or(Dash::Solid),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Start,
    Middle,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PathCmd {
    MoveTo(f64, f64),
    LineTo(f64, f64),
    CubicTo(f64, f64, f64, f64, f64, f64),
    Close,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Primitive {
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        stroke: Stroke,
    },
    Polyline {
        points: Vec<(f64, f64)>,
        stroke: Stroke,
    },
    Rect {
        x: f64,
        y: f64,
        w: f64,
        h: f64,
        stroke: Stroke,
        fill: Option<String>,
    },
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
        stroke: Option<Stroke>,
        fill: Option<String>,
    },
    /// Angles in degrees, counter-clockwise as seen on the page.
    Arc {
        cx: f64,
        cy: f64,
        r: f64,
        start: f64,
        end: f64,
        stroke: Stroke,
    },
    Path {
        cmds: Vec<PathCmd>,
        stroke: Stroke,
        fill: Option<String>,
    },
    /// One line of text; `y` is the vertical centre.
    Text {
        x: f64,
        y: f64,
        anchor: Anchor,
        size: f64,
        runs: Vec<TextRun>,
        /// Estimated advance, for bounding boxes.
        width: f64,
    },
}

impl Primitive {
    fn translate(&mut self, dx: f64, dy: f64) {
        match self {
            Primitive::Line { x1, y1, x2, y2, .. } => {
                *x1 += dx;
                *x2 += dx;
                *y1 += dy;
                *y2 += dy;
            }
            Primitive::Polyline { points, .. } => {
                for p in points {
                    p.0 += dx;
                    p.1 += dy;
                }
            }
            Primitive::Rect { x, y, .. } | Primitive::Text { x, y, .. } => {
                *x += dx;
                *y += dy;
            }
            Primitive::Circle { cx, cy, .. } | Primitive::Arc { cx, cy, .. } => {
                *cx += dx;
                *cy += dy;
            }
            Primitive::Path { cmds, .. } => {
                for c in cmds {
                    match c {
                        PathCmd::MoveTo(x, y) | PathCmd::LineTo(x, y) => {
                            *x += dx;
                            *y += dy;
                        }
                        PathCmd::CubicTo(a, b, c, d, e, f) => {
                            *a += dx;
                            *c += dx;
                            *e += dx;
                            *b += dy;
                            *d += dy;
                            *f += dy;
                        }
                        PathCmd::Close => {}
                    }
                }
            }
        }
    }

    /// Conservative bounding box `(min_x, min_y, max_x, max_y)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = Bounds::default();
        match self {
            Primitive::Line { x1, y1, x2, y2, .. } => {
                b.add(*x1, *y1);
                b.add(*x2, *y2);
            }
            Primitive::Polyline { points, .. } => {
                for &(x, y) in points {
                    b.add(x, y);
                }
            }
            Primitive::Rect { x, y, w, h, .. } => {
                b.add(*x, *y);
                b.add(x + w, y + h);
            }
            Primitive::Circle { cx, cy, r, .. } | Primitive::Arc { cx, cy, r, .. } => {
                b.add(cx - r, cy - r);
                b.add(cx + r, cy + r);
            }
            Primitive::Path { cmds, .. } => {
                for c in cmds {
                    match *c {
                        PathCmd::MoveTo(x, y) | PathCmd::LineTo(x, y) => b.add(x, y),
                        PathCmd::CubicTo(a, bb, c, d, e, f) => {
                            b.add(a, bb);
                            b.add(c, d);
                            b.add(e, f);
                        }
                        PathCmd::Close => {}
                    }
                }
            }
            Primitive::Text {
                x,
                y,
                anchor,
                size,
                width,
                ..
            } => {
                let left = match anchor {
                    Anchor::Start => *x,
                    Anchor::Middle => x - width / 2.0,
                    Anchor::End => x - width,
                };
                b.add(left, y - size / 2.0);
                b.add(left + width, y + size / 2.0);
            }
        }
        (b.min_x, b.min_y, b.max_x, b.max_y)
    }
}

#[derive(Debug, Clone, Copy)]
struct Bounds {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }
}

impl Bounds {
    fn add(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }

    fn union(&mut self, (a, b, c, d): (f64, f64, f64, f64)) {
        self.add(a, b);
        self.add(c, d);
    }

    fn is_empty(&self) -> bool {
        self.min_x > self.max_x
    }
}

/// A group of primitives; becomes `<g>` in SVG.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Element {
    pub id: Option<String>,
    /// `wire`, `label`, `separator`, or the gate name.
    pub class: String,
    /// Wire drawn by a `wire` element.
    pub wire: Option<WireId>,
    pub primitives: Vec<Primitive>,
    pub children: Vec<Element>,
}

impl Element {
    pub fn new(class: impl Into<String>) -> Self {
        Element {
            class: class.into(),
            ..Element::default()
        }
    }

    /// Depth-first visit of this element and its descendants.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Element)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn primitive_count(&self) -> usize {
        self.primitives.len() + self.children.iter().map(Element::primitive_count).sum::<usize>()
    }

    fn translate(&mut self, dx: f64, dy: f64) {
        for p in &mut self.primitives {
            p.translate(dx, dy);
        }
        for c in &mut self.children {
            c.translate(dx, dy);
        }
    }

    fn bounds_into(&self, b: &mut Bounds) {
        for p in &self.primitives {
            b.union(p.bounds());
        }
        for c in &self.children {
            c.bounds_into(b);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenderConfig {
    pub font_family: String,
    /// Blank border around the drawing.
    pub margin: f64,
    /// Output size multiplier.
    pub scale: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            font_family: "serif".into(),
            margin: 2.0,
            scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene {
    pub width: f64,
    pub height: f64,
    pub scale: f64,
    pub font_family: String,
    /// Translation applied to layout coordinates.
    pub origin: (f64, f64),
    pub elements: Vec<Element>,
}

impl Scene {
    /// Translate `elements` so the drawing starts at the margin.
    pub fn from_elements(mut elements: Vec<Element>, config: &RenderConfig) -> Scene {
        let b = elements_bounds_raw(&elements);
        let (width, height, origin) = if b.is_empty() {
            (0.0, 0.0, (0.0, 0.0))
        } else {
            let (dx, dy) = (config.margin - b.min_x, config.margin - b.min_y);
            for e in &mut elements {
                e.translate(dx, dy);
            }
            (
                b.max_x - b.min_x + 2.0 * config.margin,
                b.max_y - b.min_y + 2.0 * config.margin,
                (dx, dy),
            )
        };
        Scene {
            width,
            height,
            scale: config.scale,
            font_family: config.font_family.clone(),
            origin,
            elements,
        }
    }

    pub fn primitive_count(&self) -> usize {
        self.elements.iter().map(Element::primitive_count).sum()
    }

    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Element)) {
        for e in &self.elements {
            e.walk(f);
        }
    }

    /// All elements with class `class`, depth-first.
    pub fn elements_with_class(&self, class: &str) -> Vec<&Element> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if e.class == class {
                out.push(e);
            }
        });
        out
    }

    pub fn ids(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Some(id) = &e.id {
                out.push(id.as_str());
            }
        });
        out
    }
}

pub(crate) fn elements_bounds(elements: &[Element]) -> (f64, f64, f64, f64) {
    let b = elements_bounds_raw(elements);
    (b.min_x, b.min_y, b.max_x, b.max_y)
}

fn elements_bounds_raw(elements: &[Element]) -> Bounds {
    let mut b = Bounds::default();
    for e in elements {
        e.bounds_into(&mut b);
    }
    b
}

pub(crate) fn translate_elements(elements: &mut [Element], dx: f64, dy: f64) {
    for e in elements {
        e.translate(dx, dy);
    }
}

/// Lay the circuit's primitives out in layout coordinates.
pub fn build_scene(layout: &LayoutResult, config: &LayoutConfig, render: &RenderConfig) -> Scene {
    Scene::from_elements(circuit_elements(layout, config), render)
}

/// Elements of one circuit before normalisation; wire `w` sits at
/// `y = w * wire_gap`.
pub fn circuit_elements(layout: &LayoutResult, config: &LayoutConfig) -> Vec<Element> {
    let ys: Vec<f64> = (0..layout.wires.len()).map(|w| w as f64 * config.wire_gap).collect();
    let b = Builder { config };
    let mut out = b.wires(layout, &ys);
    out.extend(b.labels(layout, &ys, false));
    out.extend(b.gates(layout, &ys));
    out
}

struct Builder<'a> {
    config: &'a LayoutConfig,
}

fn text_primitive(x: f64, y: f64, anchor: Anchor, size: f64, runs: Vec<TextRun>, char_width: f64) -> Primitive {
    let chars: usize = runs.iter().map(|r| r.text.chars().count()).sum();
    Primitive::Text {
        x,
        y,
        anchor,
        size,
        runs,
        width: chars as f64 * char_width,
    }
}

impl Builder<'_> {
    fn wires(&self, layout: &LayoutResult, ys: &[f64]) -> Vec<Element> {
        layout
            .timelines
            .iter()
            .map(|t| {
                let mut e = Element::new("wire");
                e.wire = Some(t.wire);
                let y = ys[t.wire.0];
                for s in &t.segments {
                    let offsets: &[f64] = match s.wire_type.stroke_count() {
                        0 => &[],
                        1 => &[0.0],
                        2 => &CBIT_OFFSETS,
                        _ => &QUBITS_OFFSETS,
                    };
                    for off in offsets {
                        e.primitives.push(Primitive::Line {
                            x1: s.x_start,
                            y1: y + off,
                            x2: s.x_end,
                            y2: y + off,
                            stroke: Stroke::from_style(&s.style),
                        });
                    }
                }
                e
            })
            .collect()
    }

    /// Lines of `raw` centred vertically on `y`.
    fn text_block(&self, raw: &str, x: f64, y: f64, anchor: Anchor) -> Vec<Primitive> {
        let styled = render_value_text(raw);
        let size = self.config.font_size;
        let step = size * LINE_HEIGHT;
        let n = styled.lines.len() as f64;
        styled
            .lines
            .into_iter()
            .enumerate()
            .filter(|(_, runs)| !runs.is_empty())
            .map(|(i, runs)| {
                let ly = y + (i as f64 - (n - 1.0) / 2.0) * step;
                text_primitive(x, ly, anchor, size, runs, self.config.char_width())
            })
            .collect()
    }

    fn labels(&self, layout: &LayoutResult, ys: &[f64], only_out: bool) -> Vec<Element> {
        layout
            .wires
            .iter()
            .filter(|w| w.label_width > 0.0 && (!only_out || w.out))
            .map(|w| {
                let mut e = Element::new("label");
                let x_end = w.start_x - self.config.text_padding;
                e.primitives = self.text_block(&w.label, x_end, ys[w.wire.0], Anchor::End);
                e
            })
            .collect()
    }

    fn gates(&self, layout: &LayoutResult, ys: &[f64]) -> Vec<Element> {
        let mut out: Vec<Element> = Vec::new();
        let mut i = 0;
        while i < layout.instances.len() {
            let stmt = layout.instances[i].statement;
            let mut j = i;
            let mut members = Vec::new();
            while j < layout.instances.len() && layout.instances[j].statement == stmt {
                if let Some(e) = self.instance(&layout.instances[j], &layout.placements[j], ys) {
                    members.push(e);
                }
                j += 1;
            }
            let id = layout.instances[i].element_id.clone();
            match (id, members.len()) {
                (_, 0) => {}
                (Some(id), 1) => {
                    let mut e = members.pop().unwrap();
                    e.id = Some(id);
                    out.push(e);
                }
                (Some(id), _) => {
                    let mut wrapper = Element::new(layout.instances[i].kind.name);
                    wrapper.id = Some(id);
                    wrapper.children = members;
                    out.push(wrapper);
                }
                (None, _) => out.extend(members),
            }
            i = j;
        }
        out
    }

    fn gate_half_height(&self, inst: &GateInstance) -> f64 {
        let lines = inst
            .value
            .as_ref()
            .map_or(1, |v| render_value_text(&v.raw).lines.len().max(1)) as f64;
        let text = lines * self.config.font_size * LINE_HEIGHT + self.config.text_padding;
        text.max(self.config.min_op_width) / 2.0
    }

    fn instance(&self, inst: &GateInstance, p: &Placement, ys: &[f64]) -> Option<Element> {
        use Gate::*;
        if matches!(
            inst.kind.gate,
            Align | Hspace | Discard | Settype | Setstyle | Addstyle | Qubit | Cbit | Qubits | Nobit
        ) {
            return None;
        }
        let c = self.config;
        let style: &GlyphStyle = &inst.style;
        let stroke = Stroke::from_style(&style.stroke);
        let fill = Some(style.fill.clone().unwrap_or_else(|| "white".into()));
        let hh = self.gate_half_height(inst);
        let (xc, xl, xr) = (p.x_center, p.x_left(), p.x_right());
        let y = |w: WireId| ys[w.0];
        let mut e = Element::new(inst.kind.name);
        let group_extent = |g: &crate::registers::WireGroup| {
            let lo = g.wires.iter().map(|&w| y(w)).fold(f64::INFINITY, f64::min);
            let hi = g.wires.iter().map(|&w| y(w)).fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        };
        let mut top = f64::INFINITY;

        let all: Vec<f64> = inst.all_wires().map(y).collect();
        let (ymin, ymax) = (
            all.iter().copied().fold(f64::INFINITY, f64::min),
            all.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        );
        let connector = (inst.has_controls() || inst.kind.is_pair_glyph() || inst.targets.len() > 1)
            && !matches!(inst.kind.gate, Barrier | Correlate)
            && ymax > ymin;
        if connector {
            e.primitives.push(Primitive::Line {
                x1: xc,
                y1: ymin,
                x2: xc,
                y2: ymax,
                stroke: stroke.clone(),
            });
        }

        for g in &inst.targets {
            let (lo, hi) = group_extent(g);
            match inst.kind.gate {
                Box | H | X | Y | Z => {
                    let label = match (&inst.value, inst.kind.gate) {
                        (Some(v), _) => v.raw.clone(),
                        (None, gate) => format!("{gate:?}").to_uppercase(),
                    };
                    e.primitives.push(Primitive::Rect {
                        x: xl,
                        y: lo - hh,
                        w: xr - xl,
                        h: hi - lo + 2.0 * hh,
                        stroke: stroke.clone(),
                        fill: fill.clone(),
                    });
                    e.primitives
                        .extend(self.text_block(&label, xc, (lo + hi) / 2.0, Anchor::Middle));
                    top = top.min(lo - hh);
                }
                Inspect => {
                    let raw = inst.value.as_ref().map_or("", |v| v.raw.as_str());
                    e.primitives
                        .extend(self.text_block(raw, xc, (lo + hi) / 2.0, Anchor::Middle));
                    top = top.min(lo - c.font_size / 2.0);
                }
                Not => {
                    for &w in &g.wires {
                        let (cy, r) = (y(w), c.oplus_radius);
                        e.primitives.push(Primitive::Circle {
                            cx: xc,
                            cy,
                            r,
                            stroke: Some(stroke.clone()),
                            fill: fill.clone(),
                        });
                        e.primitives.push(Primitive::Line {
                            x1: xc - r,
                            y1: cy,
                            x2: xc + r,
                            y2: cy,
                            stroke: stroke.clone(),
                        });
                        e.primitives.push(Primitive::Line {
                            x1: xc,
                            y1: cy - r,
                            x2: xc,
                            y2: cy + r,
                            stroke: stroke.clone(),
                        });
                        top = top.min(cy - r);
                    }
                }
                Measure => {
                    e.primitives.push(Primitive::Rect {
                        x: xl,
                        y: lo - hh,
                        w: xr - xl,
                        h: hi - lo + 2.0 * hh,
                        stroke: stroke.clone(),
                        fill: fill.clone(),
                    });
                    let cy = (lo + hi) / 2.0 + MEASURE_ARC_DROP;
                    let r = (xr - xl) * MEASURE_ARC_RATIO;
                    e.primitives.push(Primitive::Arc {
                        cx: xc,
                        cy,
                        r,
                        start: 180.0,
                        end: 0.0,
                        stroke: stroke.clone(),
                    });
                    let a = MEASURE_NEEDLE_DEG.to_radians();
                    let len = r * 1.25;
                    e.primitives.push(Primitive::Line {
                        x1: xc,
                        y1: cy,
                        x2: xc + len * a.cos(),
                        y2: cy - len * a.sin(),
                        stroke: stroke.clone(),
                    });
                    top = top.min(lo - hh);
                }
                Dmeter => {
                    let (yt, yb) = (lo - hh, hi + hh);
                    let r = (yb - yt) / 2.0;
                    let ym = (yt + yb) / 2.0;
                    let xs = (xr - r).max(xl);
                    let k = KAPPA * r;
                    e.primitives.push(Primitive::Path {
                        cmds: vec![
                            PathCmd::MoveTo(xl, yt),
                            PathCmd::LineTo(xs, yt),
                            PathCmd::CubicTo(xs + k, yt, xr, ym - k, xr, ym),
                            PathCmd::CubicTo(xr, ym + k, xs + k, yb, xs, yb),
                            PathCmd::LineTo(xl, yb),
                            PathCmd::Close,
                        ],
                        stroke: stroke.clone(),
                        fill: fill.clone(),
                    });
                    if let Some(v) = &inst.value {
                        e.primitives.extend(self.text_block(&v.raw, xc, ym, Anchor::Middle));
                    }
                    top = top.min(yt);
                }
                Phase => {
                    for &w in &g.wires {
                        e.primitives
                            .push(dot(xl + c.dot_radius, y(w), c.dot_radius, &stroke, true));
                        if let Some(v) = &inst.value {
                            let x = xl + 2.0 * c.dot_radius + c.text_padding;
                            e.primitives
                                .extend(self.text_block(&v.raw, x, y(w) - c.font_size / 2.0, Anchor::Start));
                        }
                        top = top.min(y(w) - c.dot_radius);
                    }
                }
                Slash => {
                    for &w in &g.wires {
                        e.primitives.push(Primitive::Line {
                            x1: xc - SLASH_HALF * 0.8,
                            y1: y(w) + SLASH_HALF,
                            x2: xc + SLASH_HALF * 0.8,
                            y2: y(w) - SLASH_HALF,
                            stroke: stroke.clone(),
                        });
                        top = top.min(y(w) - SLASH_HALF);
                    }
                }
                Swap | Xx => {
                    for &w in &g.wires {
                        let (cy, h) = (y(w), CROSS_HALF);
                        e.primitives.push(Primitive::Line {
                            x1: xc - h,
                            y1: cy - h,
                            x2: xc + h,
                            y2: cy + h,
                            stroke: stroke.clone(),
                        });
                        e.primitives.push(Primitive::Line {
                            x1: xc - h,
                            y1: cy + h,
                            x2: xc + h,
                            y2: cy - h,
                            stroke: stroke.clone(),
                        });
                        top = top.min(cy - h);
                    }
                }
                Zz => {
                    for &w in &g.wires {
                        e.primitives.push(dot(xc, y(w), c.dot_radius, &stroke, true));
                        top = top.min(y(w) - c.dot_radius);
                    }
                }
                Correlate => {
                    let r = c.dot_radius;
                    let mut points = vec![(xc, lo + r)];
                    let steps = (((hi - lo - 2.0 * r) / ZIGZAG_PITCH).floor() as usize).max(1);
                    let pitch = (hi - lo - 2.0 * r) / steps as f64;
                    for s in 1..steps {
                        let dx = if s % 2 == 1 {
                            ZIGZAG_AMPLITUDE
                        } else {
                            -ZIGZAG_AMPLITUDE
                        };
                        points.push((xc + dx, lo + r + s as f64 * pitch));
                    }
                    points.push((xc, hi - r));
                    e.primitives.push(Primitive::Polyline {
                        points,
                        stroke: stroke.clone(),
                    });
                    for &w in &g.wires {
                        e.primitives.push(dot(xc, y(w), r, &stroke, false));
                    }
                    top = top.min(lo - r);
                }
                Barrier => {}
                Init | Output => {
                    let joint = g.joint && g.wires.len() > 1;
                    let brace = if joint { BRACE_WIDTH } else { 0.0 };
                    let (text_l, text_r) = if inst.kind.gate == Init {
                        (xl, xr - brace)
                    } else {
                        (xl + brace, xr)
                    };
                    let raw = inst.value.as_ref().map_or("", |v| v.raw.as_str());
                    e.primitives
                        .extend(self.text_block(raw, (text_l + text_r) / 2.0, (lo + hi) / 2.0, Anchor::Middle));
                    if joint {
                        let (bt, bb) = (lo - hh / 2.0, hi + hh / 2.0);
                        let (x0, x1) = if inst.kind.gate == Init {
                            (xr - brace, xr)
                        } else {
                            (xl + brace, xl)
                        };
                        e.primitives.push(brace_path(x0, x1, bt, bb, &stroke));
                    }
                    top = top.min(lo - c.font_size / 2.0);
                }
                Subcircuit => {
                    e.primitives.push(Primitive::Rect {
                        x: xl,
                        y: lo - hh,
                        w: xr - xl,
                        h: hi - lo + 2.0 * hh,
                        stroke: stroke.clone(),
                        fill: fill.clone(),
                    });
                    top = top.min(lo - hh);
                    if let Some(nested) = &p.nested {
                        let inner_ys: Vec<f64> = inst.target_wires().map(y).collect();
                        e.children.extend(self.wires(nested, &inner_ys));
                        e.children.extend(self.labels(nested, &inner_ys, true));
                        e.children.extend(self.gates(nested, &inner_ys));
                    }
                }
                _ => {}
            }
        }

        if inst.kind.gate == Barrier {
            let mut s = stroke.clone();
            s.dash = style.stroke.dash.unwrap_or(Dash::Dashed);
            let half = c.wire_gap / 2.0;
            e.primitives.push(Primitive::Line {
                x1: xc,
                y1: ymin - half,
                x2: xc,
                y2: ymax + half,
                stroke: s,
            });
            top = top.min(ymin - half);
        }

        for &w in &inst.controls {
            e.primitives.push(dot(xc, y(w), c.dot_radius, &stroke, true));
            top = top.min(y(w) - c.dot_radius);
        }
        for &w in &inst.neg_controls {
            e.primitives.push(dot(xc, y(w), c.dot_radius, &stroke, false));
            top = top.min(y(w) - c.dot_radius);
        }

        if let Some(label) = &style.label {
            let mut l = Element::new("label");
            let ly = top - LABEL_RAISE - c.font_size / 2.0;
            l.primitives = self.text_block(label, xc, ly, Anchor::Middle);
            e.children.push(l);
        }
        Some(e)
    }
}

fn dot(cx: f64, cy: f64, r: f64, stroke: &Stroke, filled: bool) -> Primitive {
    Primitive::Circle {
        cx,
        cy,
        r,
        stroke: Some(stroke.clone()),
        fill: Some(if filled { stroke.color.clone() } else { "white".into() }),
    }
}

/// Curly brace from `top` to `bottom` whose tip points from `x_back` towards
/// `x_tip`.
fn brace_path(x_back: f64, x_tip: f64, top: f64, bottom: f64, stroke: &Stroke) -> Primitive {
    let mid = (top + bottom) / 2.0;
    let xm = (x_back + x_tip) / 2.0;
    Primitive::Path {
        cmds: vec![
            PathCmd::MoveTo(x_back, top),
            PathCmd::CubicTo(xm, top, xm, top, xm, top + (mid - top) * 0.3),
            PathCmd::LineTo(xm, mid - (mid - top) * 0.3),
            PathCmd::CubicTo(xm, mid, xm, mid, x_tip, mid),
            PathCmd::CubicTo(xm, mid, xm, mid, xm, mid + (bottom - mid) * 0.3),
            PathCmd::LineTo(xm, bottom - (bottom - mid) * 0.3),
            PathCmd::CubicTo(xm, bottom, xm, bottom, x_back, bottom),
        ],
        stroke: stroke.clone(),
        fill: None,
    }
}
