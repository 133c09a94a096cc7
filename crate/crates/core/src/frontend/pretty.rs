// SPDX-License-Identifier: Apache-2.0

//! Canonical yquant text for a [`Program`]. Reparsing the output yields the
//! same tree up to spans; comments and layout whitespace are not kept.

use std::fmt::Write;

use crate::frontend::ast::*;

pub fn pretty_print(program: &Program) -> String {
    let mut out = String::new();
    write_program(&mut out, program, 0);
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_program(out: &mut String, program: &Program, depth: usize) {
    for stmt in &program.statements {
        indent(out, depth);
        write_statement(out, stmt, depth);
        out.push('\n');
    }
}

fn write_statement(out: &mut String, stmt: &Statement, depth: usize) {
    if let StatementKind::GroupDirective(d) = &stmt.kind {
        out.push_str("=== ");
        out.push_str(&d.name);
        if let Some(v) = &d.value {
            let _ = write!(out, " {{{}}}", v.raw);
        }
        out.push_str(" ===");
        return;
    }

    if !stmt.attrs.is_empty() {
        out.push('[');
        for (i, a) in stmt.attrs.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            match a.form {
                AttrForm::KeyValue => {
                    let _ = write!(out, "{}={}", a.key, a.value);
                }
                AttrForm::Flag => out.push_str(&a.key),
                AttrForm::QuotedLabel => {
                    let _ = write!(out, "\"{}\"", a.value);
                }
            }
        }
        out.push_str("] ");
    }

    match &stmt.kind {
        StatementKind::Declaration(d) => {
            out.push_str(d.reg_type.keyword());
            if let Some(label) = &d.label {
                let _ = write!(out, " {{{}}}", label.raw);
            }
            out.push(' ');
            out.push_str(&d.name);
            if let Some(len) = d.length {
                let _ = write!(out, "[{len}]");
            }
        }
        StatementKind::Gate(g) => {
            out.push_str(&g.name);
            if let Some(sub) = &g.sub_program {
                out.push_str(" {\n");
                write_program(out, sub, depth + 1);
                indent(out, depth);
                out.push('}');
            } else if let Some(v) = &g.value {
                let _ = write!(out, " {{{}}}", v.raw);
            }
            out.push(' ');
            write_ref_list(out, &g.targets);
            if let Some(c) = &g.controls {
                out.push_str(" | ");
                write_ref_list(out, c);
            }
            if let Some(n) = &g.neg_controls {
                out.push_str(" ~ ");
                write_ref_list(out, n);
            }
        }
        StatementKind::GroupDirective(_) => unreachable!(),
    }
    out.push(';');
}

fn write_ref_list(out: &mut String, refs: &[RegRefExpr]) {
    for (i, r) in refs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        if r.joint_outer {
            out.push('(');
        }
        for (j, item) in r.items.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            write_item(out, item);
        }
        if r.joint_outer {
            out.push(')');
        }
    }
}

fn write_full_name(out: &mut String, name: &Option<String>, index: &Option<IndexSpec>) {
    if let Some(name) = name {
        out.push_str(name);
        if let Some(index) = index {
            write_index(out, index);
        }
    }
}

fn write_item(out: &mut String, item: &RefItem) {
    write_full_name(out, &item.start_name, &item.start_index);
    if item.is_range_to {
        out.push('-');
        write_full_name(out, &item.end_name, &item.end_index);
    }
}

fn write_index(out: &mut String, index: &IndexSpec) {
    out.push('[');
    if index.joint_inner {
        out.push('(');
    }
    for (i, e) in index.entries.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        if let Some(lo) = e.lo {
            let _ = write!(out, "{lo}");
        }
        if e.is_range {
            out.push('-');
            if let Some(hi) = e.hi {
                let _ = write!(out, "{hi}");
            }
        }
    }
    if index.joint_inner {
        out.push(')');
    }
    out.push(']');
}
