// SPDX-License-Identifier: Apache-2.0

//! Scene construction and the SVG and TikZ back ends.

pub mod scene;
pub mod svg;
pub mod text;
pub mod tikz;

pub use scene::{build_scene, circuit_elements, Anchor, Element, PathCmd, Primitive, RenderConfig, Scene, Stroke};
pub use svg::emit_svg;
pub use text::{render_value_text, RunStyle, StyledText, TextRun};
pub use tikz::emit_tikz;

use crate::frontend::{Program, StatementKind};
use crate::gates::{elaborate, ElabError, ElabErrorKind, Elaborated};
use crate::layout::{place, LayoutConfig, LayoutResult};
use crate::registers::RegisterTable;
use crate::span::SourceSpan;

/// Horizontal space on each side of a separator symbol.
pub const SEPARATOR_PAD: f64 = 3.0;

/// Elaborate each member circuit against its own copy of the shared prelude.
pub fn elaborate_group(
    shared_registers: &Program,
    circuits: &[Program],
    table: RegisterTable,
) -> Result<Vec<Elaborated>, ElabError> {
    if let Some(stmt) = shared_registers
        .statements
        .iter()
        .find(|s| !matches!(s.kind, StatementKind::Declaration(_)))
    {
        return Err(ElabError::new(
            ElabErrorKind::Group("the register section may only declare registers".into()),
            stmt.span,
        ));
    }
    let prelude = elaborate(shared_registers, table)?;
    circuits.iter().map(|c| elaborate(c, prelude.table.clone())).collect()
}

/// Compose laid-out circuits left to right with separator texts between them.
pub fn compose_group(
    layouts: &[LayoutResult],
    separators: &[String],
    config: &LayoutConfig,
    render: &RenderConfig,
) -> Scene {
    let wires = layouts.iter().map(|l| l.wires.len()).max().unwrap_or(0);
    let mid = wires.saturating_sub(1) as f64 * config.wire_gap / 2.0;
    let mut all = Vec::new();
    let mut cursor = 0.0;
    for (i, layout) in layouts.iter().enumerate() {
        let mut elements = circuit_elements(layout, config);
        let (min_x, _, max_x, _) = scene::elements_bounds(&elements);
        let (min_x, max_x) = if min_x <= max_x { (min_x, max_x) } else { (0.0, 0.0) };
        if i > 0 {
            let sep = &separators[i - 1];
            let styled = render_value_text(sep);
            let tw = styled.max_chars() as f64 * config.char_width();
            let mut e = Element::new("separator");
            if let Some(runs) = styled.lines.into_iter().next() {
                e.primitives.push(Primitive::Text {
                    x: cursor + SEPARATOR_PAD + tw / 2.0,
                    y: mid,
                    anchor: Anchor::Middle,
                    size: config.font_size,
                    runs,
                    width: tw,
                });
            }
            all.push(e);
            cursor += 2.0 * SEPARATOR_PAD + tw;
            scene::translate_elements(&mut elements, cursor - min_x, 0.0);
            cursor += max_x - min_x;
        } else {
            cursor = max_x;
        }
        all.extend(elements);
    }
    Scene::from_elements(all, render)
}

/// Elaborate, lay out and compose a circuit equation.
pub fn render_group(
    shared_registers: &Program,
    circuits: &[Program],
    separators: &[String],
    config: &LayoutConfig,
    render: &RenderConfig,
) -> Result<Scene, ElabError> {
    if circuits.is_empty() || separators.len() + 1 != circuits.len() {
        return Err(ElabError {
            kind: ElabErrorKind::Group(format!(
                "{} circuits need {} separators, found {}",
                circuits.len(),
                circuits.len().saturating_sub(1),
                separators.len()
            )),
            span: None::<SourceSpan>,
        });
    }
    let members = elaborate_group(shared_registers, circuits, RegisterTable::new())?;
    let layouts: Vec<LayoutResult> = members.iter().map(|m| place(m, config)).collect();
    Ok(compose_group(&layouts, separators, config, render))
}
