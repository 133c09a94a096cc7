// SPDX-License-Identifier: Apache-2.0

//! SVG 1.1 serialisation. User units are millimetres.

use std::fmt::Write;

use crate::layout::format_mm as num;
use crate::render::scene::{Anchor, Element, PathCmd, Primitive, Scene, Stroke};
use crate::render::text::{RunStyle, TextRun};
use crate::style::Dash;

pub fn emit_svg(scene: &Scene) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}mm\" height=\"{}mm\" viewBox=\"0 0 {} {}\" font-family=\"{}\"",
        num(scene.width * scene.scale),
        num(scene.height * scene.scale),
        num(scene.width),
        num(scene.height),
        escape(&scene.font_family),
    );
    if scene.elements.is_empty() {
        out.push_str("/>\n");
        return out.into_bytes();
    }
    out.push_str(">\n");
    for e in &scene.elements {
        element(&mut out, e, 1);
    }
    out.push_str("</svg>\n");
    out.into_bytes()
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn element(out: &mut String, e: &Element, depth: usize) {
    indent(out, depth);
    let _ = write!(out, "<g class=\"{}\"", escape(&e.class));
    if let Some(id) = &e.id {
        let _ = write!(out, " id=\"{}\"", escape(id));
    }
    if e.primitives.is_empty() && e.children.is_empty() {
        out.push_str("/>\n");
        return;
    }
    out.push_str(">\n");
    for p in &e.primitives {
        indent(out, depth + 1);
        primitive(out, p);
        out.push('\n');
    }
    for c in &e.children {
        element(out, c, depth + 1);
    }
    indent(out, depth);
    out.push_str("</g>\n");
}

fn stroke_attrs(out: &mut String, s: &Stroke) {
    let _ = write!(
        out,
        " stroke=\"{}\" stroke-width=\"{}\"",
        escape(&s.color),
        num(s.width)
    );
    match s.dash {
        Dash::Solid => {}
        Dash::Dashed => out.push_str(" stroke-dasharray=\"1 0.6\""),
        Dash::Dotted => out.push_str(" stroke-dasharray=\"0.2 0.5\" stroke-linecap=\"round\""),
    }
}

fn fill_attr(out: &mut String, fill: &Option<String>) {
    let _ = write!(out, " fill=\"{}\"", escape(fill.as_deref().unwrap_or("none")));
}

/// Point on a circle for an angle measured counter-clockwise on the page.
pub(crate) fn arc_point(cx: f64, cy: f64, r: f64, deg: f64) -> (f64, f64) {
    let a = deg.to_radians();
    (cx + r * a.cos(), cy - r * a.sin())
}

fn primitive(out: &mut String, p: &Primitive) {
    match p {
        Primitive::Line { x1, y1, x2, y2, stroke } => {
            let _ = write!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"",
                num(*x1),
                num(*y1),
                num(*x2),
                num(*y2)
            );
            stroke_attrs(out, stroke);
            out.push_str("/>");
        }
        Primitive::Polyline { points, stroke } => {
            let pts: Vec<String> = points.iter().map(|(x, y)| format!("{},{}", num(*x), num(*y))).collect();
            let _ = write!(out, "<polyline points=\"{}\" fill=\"none\"", pts.join(" "));
            stroke_attrs(out, stroke);
            out.push_str("/>");
        }
        Primitive::Rect {
            x,
            y,
            w,
            h,
            stroke,
            fill,
        } => {
            let _ = write!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"",
                num(*x),
                num(*y),
                num(*w),
                num(*h)
            );
            fill_attr(out, fill);
            stroke_attrs(out, stroke);
            out.push_str("/>");
        }
        Primitive::Circle {
            cx,
            cy,
            r,
            stroke,
            fill,
        } => {
            let _ = write!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"", num(*cx), num(*cy), num(*r));
            fill_attr(out, fill);
            if let Some(s) = stroke {
                stroke_attrs(out, s);
            }
            out.push_str("/>");
        }
        Primitive::Arc {
            cx,
            cy,
            r,
            start,
            end,
            stroke,
        } => {
            let (sx, sy) = arc_point(*cx, *cy, *r, *start);
            let (ex, ey) = arc_point(*cx, *cy, *r, *end);
            let large = u8::from((end - start).abs() > 180.0);
            // decreasing page angle runs clockwise, which is SVG's positive sweep
            let sweep = u8::from(end < start);
            let _ = write!(
                out,
                "<path d=\"M {} {} A {} {} 0 {} {} {} {}\" fill=\"none\"",
                num(sx),
                num(sy),
                num(*r),
                num(*r),
                large,
                sweep,
                num(ex),
                num(ey)
            );
            stroke_attrs(out, stroke);
            out.push_str("/>");
        }
        Primitive::Path { cmds, stroke, fill } => {
            let d: Vec<String> = cmds
                .iter()
                .map(|c| match *c {
                    PathCmd::MoveTo(x, y) => format!("M {} {}", num(x), num(y)),
                    PathCmd::LineTo(x, y) => format!("L {} {}", num(x), num(y)),
                    PathCmd::CubicTo(a, b, c, d, e, f) => {
                        format!("C {} {} {} {} {} {}", num(a), num(b), num(c), num(d), num(e), num(f))
                    }
                    PathCmd::Close => "Z".to_string(),
                })
                .collect();
            let _ = write!(out, "<path d=\"{}\"", d.join(" "));
            fill_attr(out, fill);
            stroke_attrs(out, stroke);
            out.push_str("/>");
        }
        Primitive::Text {
            x,
            y,
            anchor,
            size,
            runs,
            ..
        } => {
            let anchor = match anchor {
                Anchor::Start => "start",
                Anchor::Middle => "middle",
                Anchor::End => "end",
            };
            let _ = write!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"{}\" dominant-baseline=\"central\" font-size=\"{}\">",
                num(*x),
                num(*y),
                anchor,
                num(*size)
            );
            for r in runs {
                run(out, r);
            }
            out.push_str("</text>");
        }
    }
}

fn run(out: &mut String, r: &TextRun) {
    let text = escape(&r.text);
    match r.style {
        RunStyle::Normal => out.push_str(&text),
        RunStyle::Subscript => {
            let _ = write!(out, "<tspan baseline-shift=\"sub\" font-size=\"70%\">{text}</tspan>");
        }
        RunStyle::Superscript => {
            let _ = write!(out, "<tspan baseline-shift=\"super\" font-size=\"70%\">{text}</tspan>");
        }
        RunStyle::Script => {
            let _ = write!(out, "<tspan font-style=\"italic\">{text}</tspan>");
        }
    }
}
