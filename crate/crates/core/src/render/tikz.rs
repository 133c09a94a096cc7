// SPDX-License-Identifier: Apache-2.0

//! TikZ serialisation: one command per primitive, millimetre coordinates.

use std::fmt::Write;

use crate::layout::format_mm as num;
use crate::render::scene::{Anchor, Element, PathCmd, Primitive, Scene, Stroke};
use crate::render::svg::arc_point;
use crate::render::text::{RunStyle, TextRun};
use crate::style::Dash;

pub fn emit_tikz(scene: &Scene) -> String {
    let mut out = String::new();
    let scale = if scene.scale == 1.0 {
        String::new()
    } else {
        format!(",scale={}", num(scene.scale))
    };
    let _ = writeln!(out, "\\begin{{tikzpicture}}[x=1mm,y=-1mm{scale}]");
    for e in &scene.elements {
        element(&mut out, e);
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

fn element(out: &mut String, e: &Element) {
    for p in &e.primitives {
        primitive(out, p);
        out.push('\n');
    }
    for c in &e.children {
        element(out, c);
    }
}

fn color(c: &str) -> String {
    match c.strip_prefix('#') {
        Some(hex) if hex.len() == 6 => {
            let ch = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).unwrap_or(0);
            format!("{{rgb,255:red,{};green,{};blue,{}}}", ch(0), ch(2), ch(4))
        }
        _ => c.to_string(),
    }
}

fn stroke_opts(s: &Stroke) -> String {
    let mut o = format!("draw={}, line width={}mm", color(&s.color), num(s.width));
    match s.dash {
        Dash::Solid => {}
        Dash::Dashed => o.push_str(", dashed"),
        Dash::Dotted => o.push_str(", dotted"),
    }
    o
}

fn fill_opt(fill: &Option<String>) -> String {
    fill.as_ref()
        .map(|f| format!(", fill={}", color(f)))
        .unwrap_or_default()
}

fn pt(x: f64, y: f64) -> String {
    format!("({},{})", num(x), num(y))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '{' | '}' | '$' | '&' | '#' | '%' | '_' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            c => out.push(c),
        }
    }
    out
}

fn run(r: &TextRun) -> String {
    let t = escape(&r.text);
    match r.style {
        RunStyle::Normal => t,
        RunStyle::Subscript => format!("\\textsubscript{{{t}}}"),
        RunStyle::Superscript => format!("\\textsuperscript{{{t}}}"),
        RunStyle::Script => format!("\\textit{{{t}}}"),
    }
}

fn primitive(out: &mut String, p: &Primitive) {
    match p {
        Primitive::Line { x1, y1, x2, y2, stroke } => {
            let _ = write!(
                out,
                "\\draw[{}] {} -- {};",
                stroke_opts(stroke),
                pt(*x1, *y1),
                pt(*x2, *y2)
            );
        }
        Primitive::Polyline { points, stroke } => {
            let pts: Vec<String> = points.iter().map(|&(x, y)| pt(x, y)).collect();
            let _ = write!(out, "\\draw[{}] {};", stroke_opts(stroke), pts.join(" -- "));
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
                "\\draw[{}{}] {} rectangle {};",
                stroke_opts(stroke),
                fill_opt(fill),
                pt(*x, *y),
                pt(x + w, y + h)
            );
        }
        Primitive::Circle {
            cx,
            cy,
            r,
            stroke,
            fill,
        } => {
            let opts = match stroke {
                Some(s) => format!("{}{}", stroke_opts(s), fill_opt(fill)),
                None => fill_opt(fill).trim_start_matches(", ").to_string(),
            };
            let cmd = if stroke.is_some() { "\\draw" } else { "\\fill" };
            let _ = write!(out, "{cmd}[{opts}] {} circle[radius={}];", pt(*cx, *cy), num(*r));
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
            // the y axis points down, so page angles change sign
            let _ = write!(
                out,
                "\\draw[{}] {} arc[start angle={}, end angle={}, radius={}];",
                stroke_opts(stroke),
                pt(sx, sy),
                num(-start),
                num(-end),
                num(*r)
            );
        }
        Primitive::Path { cmds, stroke, fill } => {
            let parts: Vec<String> = cmds
                .iter()
                .map(|c| match *c {
                    PathCmd::MoveTo(x, y) => pt(x, y),
                    PathCmd::LineTo(x, y) => format!("-- {}", pt(x, y)),
                    PathCmd::CubicTo(a, b, c, d, e, f) => {
                        format!(".. controls {} and {} .. {}", pt(a, b), pt(c, d), pt(e, f))
                    }
                    PathCmd::Close => "-- cycle".to_string(),
                })
                .collect();
            let _ = write!(
                out,
                "\\draw[{}{}] {};",
                stroke_opts(stroke),
                fill_opt(fill),
                parts.join(" ")
            );
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
                Anchor::Start => "west",
                Anchor::Middle => "center",
                Anchor::End => "east",
            };
            let text: String = runs.iter().map(run).collect();
            let _ = write!(
                out,
                "\\node[anchor={anchor}, inner sep=0, font=\\fontsize{{{}mm}}{{{}mm}}\\selectfont] at {} {{{}}};",
                num(*size),
                num(size * 1.2),
                pt(*x, *y),
                text
            );
        }
    }
}
