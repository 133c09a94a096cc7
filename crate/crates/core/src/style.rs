// SPDX-License-Identifier: Apache-2.0

//! The small styling surface: attribute whitelist for gates and the wire style
//! keys understood by `setstyle`/`addstyle`.

use serde::Serialize;

use crate::frontend::ast::{AttrForm, Attribute};
use crate::frontend::parser::parse_attributes;
use crate::layout::parse_length;

const COLORS: &[&str] = &[
    "black",
    "white",
    "red",
    "green",
    "blue",
    "cyan",
    "magenta",
    "yellow",
    "gray",
    "grey",
    "darkgray",
    "lightgray",
    "brown",
    "lime",
    "olive",
    "orange",
    "pink",
    "purple",
    "teal",
    "violet",
];

fn is_color(s: &str) -> bool {
    COLORS.contains(&s) || (s.len() == 7 && s.starts_with('#') && s[1..].chars().all(|c| c.is_ascii_hexdigit()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dash {
    Solid,
    Dashed,
    Dotted,
}

/// Stroke properties of a wire segment.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct WireStyle {
    pub color: Option<String>,
    pub dash: Option<Dash>,
    /// Millimetres.
    pub line_width: Option<f64>,
}

impl WireStyle {
    pub fn is_default(&self) -> bool {
        *self == WireStyle::default()
    }

    /// Fields set in `other` override those in `self`.
    pub fn merged(&self, other: &WireStyle) -> WireStyle {
        WireStyle {
            color: other.color.clone().or_else(|| self.color.clone()),
            dash: other.dash.or(self.dash),
            line_width: other.line_width.or(self.line_width),
        }
    }

    /// Parse a `setstyle` value such as `red, dashed, line width=0.8pt`.
    /// Unrecognised entries are returned for reporting.
    pub fn parse(value: &str) -> (WireStyle, Vec<String>) {
        let mut style = WireStyle::default();
        let mut unknown = Vec::new();
        for attr in parse_attributes(value) {
            if !apply_stroke_key(&mut style, &attr) {
                unknown.push(describe(&attr));
            }
        }
        (style, unknown)
    }
}

fn describe(attr: &Attribute) -> String {
    match attr.form {
        AttrForm::KeyValue => format!("{}={}", attr.key, attr.value),
        AttrForm::Flag => attr.key.clone(),
        AttrForm::QuotedLabel => format!("\"{}\"", attr.value),
    }
}

fn apply_stroke_key(style: &mut WireStyle, attr: &Attribute) -> bool {
    match (attr.form, attr.key.as_str()) {
        (AttrForm::Flag, "solid") => style.dash = Some(Dash::Solid),
        (AttrForm::Flag, "dashed") => style.dash = Some(Dash::Dashed),
        (AttrForm::Flag, "dotted") => style.dash = Some(Dash::Dotted),
        (AttrForm::Flag, "thin") => style.line_width = Some(0.4 * PT_MM),
        (AttrForm::Flag, "thick") => style.line_width = Some(0.8 * PT_MM),
        (AttrForm::Flag, "very thick") => style.line_width = Some(1.2 * PT_MM),
        (AttrForm::Flag, c) if is_color(c) => style.color = Some(c.to_string()),
        (AttrForm::KeyValue, "color" | "draw") if is_color(&attr.value) => style.color = Some(attr.value.clone()),
        (AttrForm::KeyValue, "line width") => match parse_length(&attr.value) {
            Ok(w) if w > 0.0 => style.line_width = Some(w),
            _ => return false,
        },
        _ => return false,
    }
    true
}

const PT_MM: f64 = 25.4 / 72.27;

/// Interpreted gate attributes.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GlyphStyle {
    pub stroke: WireStyle,
    pub fill: Option<String>,
    /// Quoted label drawn above the glyph.
    pub label: Option<String>,
    pub name: Option<String>,
    pub out: bool,
}

impl GlyphStyle {
    /// Interpret an attribute list; returns descriptions of entries outside the
    /// whitelist.
    pub fn from_attrs(attrs: &[Attribute]) -> (GlyphStyle, Vec<String>) {
        let mut style = GlyphStyle::default();
        let mut unknown = Vec::new();
        for attr in attrs {
            style.apply(attr, &mut unknown);
        }
        (style, unknown)
    }

    fn apply(&mut self, attr: &Attribute, unknown: &mut Vec<String>) {
        match (attr.form, attr.key.as_str()) {
            (AttrForm::QuotedLabel, _) => self.label = Some(attr.value.clone()),
            (AttrForm::KeyValue, "name") => self.name = Some(attr.value.clone()),
            (AttrForm::Flag, "out") => self.out = true,
            (AttrForm::KeyValue, "fill") if is_color(&attr.value) => self.fill = Some(attr.value.clone()),
            (AttrForm::KeyValue, "this subcircuit box style") => {
                let inner = attr.value.trim();
                let inner = inner
                    .strip_prefix('{')
                    .and_then(|s| s.strip_suffix('}'))
                    .unwrap_or(inner);
                for a in parse_attributes(inner) {
                    self.apply(&a, unknown);
                }
            }
            _ => {
                if !apply_stroke_key(&mut self.stroke, attr) {
                    unknown.push(describe(attr));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_style_keys() {
        let (s, unknown) = WireStyle::parse("red, dashed, line width=1mm, glow");
        assert_eq!(s.color.as_deref(), Some("red"));
        assert_eq!(s.dash, Some(Dash::Dashed));
        assert_eq!(s.line_width, Some(1.0));
        assert_eq!(unknown, vec!["glow"]);
    }

    #[test]
    fn merge_overrides() {
        let base = WireStyle::parse("red, dotted").0;
        let merged = base.merged(&WireStyle::parse("blue").0);
        assert_eq!(merged.color.as_deref(), Some("blue"));
        assert_eq!(merged.dash, Some(Dash::Dotted));
    }

    #[test]
    fn subcircuit_box_style() {
        let attrs = parse_attributes(r#"this subcircuit box style={dashed, "Syndrome Measurement"}"#);
        let (g, unknown) = GlyphStyle::from_attrs(&attrs);
        assert!(unknown.is_empty());
        assert_eq!(g.stroke.dash, Some(Dash::Dashed));
        assert_eq!(g.label.as_deref(), Some("Syndrome Measurement"));
    }

    #[test]
    fn unknown_attributes_are_reported() {
        let attrs = parse_attributes("fill=yellow, name=g, shape=circle, out");
        let (g, unknown) = GlyphStyle::from_attrs(&attrs);
        assert_eq!(g.fill.as_deref(), Some("yellow"));
        assert_eq!(g.name.as_deref(), Some("g"));
        assert!(g.out);
        assert_eq!(unknown, vec!["shape=circle"]);
    }
}
