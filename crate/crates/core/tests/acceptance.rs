// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Runs every criterion in order and prints one PASS/FAIL
//! line per criterion. Uses its own harness so the report is always printed.
//!
//! Exit status: non-zero if any criterion outside [`KNOWN_UNATTAINABLE`]
//! fails, or if a listed one starts passing (the list must then shrink).
//! Listed criteria still print FAIL; the README explains each entry.

mod common;

use std::process::{Command, ExitCode};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{corpus, corpus_path, random_layout_case, random_ref_case, simulate, CORPUS};
use yqc::frontend::{parse_program, parse_qasm, pretty_print, StatementKind};
use yqc::gates::GateInstance;
use yqc::layout::{LayoutConfig, LayoutResult};
use yqc::registers::{RegisterTable, RegisterType, Role, WireId};
use yqc::render::{Element, Primitive, Scene};
use yqc::{compile, render, Compiled, InputFormat, Options, OutputFormat};

/// Criterion 3: number of random reference expressions.
const RESOLUTION_CASES: usize = 1000;
/// Criterion 4: number of random programs.
const LAYOUT_CASES: usize = 200;
/// Criterion 5: coincidence tolerance in millimetres.
const ALIGN_TOLERANCE_MM: f64 = 1e-6;
/// Criterion 5: smallest gap that counts as "not aligned", in millimetres.
const MISALIGN_MIN_MM: f64 = 1e-6;
/// Criterion 7: in-process repetitions and binary invocations.
const IN_PROCESS_RUNS: usize = 3;
const PROCESS_RUNS: usize = 2;
const SEED: u64 = 0x5eed_0001;
/// Criteria the placement rule cannot meet as stated. Checked faithfully and
/// reported as FAIL, but they do not fail the run.
const KNOWN_UNATTAINABLE: &[&str] = &["5b"];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 corpus parse", corpus_parse),
        ("2 register-resolution table", resolution_table),
        ("3 resolution oracle", resolution_oracle),
        ("4 layout oracle", layout_oracle),
        ("5a per-wire independence, default nop", independence_default_nop),
        (
            "5b per-wire independence, nop = measure width",
            independence_measure_nop,
        ),
        ("6 type-effect fidelity", type_effect_fidelity),
        ("7 determinism", determinism),
        ("8 round-trip", round_trip),
    ];
    let (mut failed, mut expected, mut stale) = (0, 0, Vec::new());
    for (name, check) in criteria {
        let id = name.split(' ').next().unwrap();
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => {
                println!("PASS criterion {name}: {detail}");
                if known {
                    stale.push(id);
                }
            }
            Err(detail) if known => {
                expected += 1;
                println!("FAIL criterion {name}: {detail} [known unattainable]");
            }
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if !stale.is_empty() {
        println!("acceptance: {stale:?} listed as unattainable but passed; update KNOWN_UNATTAINABLE");
        return ExitCode::FAILURE;
    }
    if failed == 0 {
        println!("acceptance: all attainable criteria passed ({expected} known unattainable)");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} failed ({expected} known unattainable)");
        ExitCode::FAILURE
    }
}

fn compile_file(name: &str, options: &Options) -> Compiled {
    let f = corpus(name);
    compile(f.source, f.input, options).unwrap_or_else(|e| panic!("{name}: {}", e.message()))
}

fn corpus_parse() -> Outcome {
    let mut counts = Vec::new();
    for f in CORPUS {
        let compiled =
            compile(f.source, f.input, &Options::default()).map_err(|e| format!("{}: {}", f.name, e.message()))?;
        for format in [OutputFormat::Svg, OutputFormat::Tikz, OutputFormat::IrJson] {
            if compiled.emit(format).is_empty() {
                return Err(format!("{}: empty {format:?} output", f.name));
            }
        }
        let got: Vec<usize> = compiled.circuits.iter().map(|(e, _)| e.instances.len()).collect();
        if got != f.instances {
            return Err(format!("{}: {got:?} instances, expected {:?}", f.name, f.instances));
        }
        counts.push(format!("{}={got:?}", f.name));
    }
    Ok(counts.join(" "))
}

/// `a` of length 7, then scalar `b`.
fn demo_table() -> RegisterTable {
    let mut t = RegisterTable::new();
    t.declare("a", RegisterType::Qubit, Some(7), None).unwrap();
    t.declare("b", RegisterType::Qubit, None, None).unwrap();
    t
}

/// Groups of a whole target list, in textual order.
fn resolve_list(list: &str, role: Role) -> Result<Vec<Vec<usize>>, String> {
    let program = parse_program(&format!("box {{}} {list};")).map_err(|e| e.message)?;
    let StatementKind::Gate(g) = &program.statements[0].kind else {
        unreachable!()
    };
    let mut table = demo_table();
    let mut out = Vec::new();
    for expr in &g.targets {
        for group in table.resolve(expr, role).map_err(|e| e.to_string())? {
            out.push(group.wires.iter().map(|w| w.0).collect());
        }
    }
    Ok(out)
}

fn resolution_table() -> Outcome {
    // b is wire 7
    let singles = |ws: &[usize]| ws.iter().map(|&w| vec![w]).collect::<Vec<_>>();
    let joint = |ws: &[usize]| vec![ws.to_vec()];
    let all_a: Vec<usize> = (0..7).collect();
    let all: Vec<usize> = (0..8).collect();
    // (reference, equivalent spellings, expected groups)
    type Row = (&'static str, Vec<&'static str>, Vec<Vec<usize>>);
    let cases: Vec<Row> = vec![
        ("a[3]-a[6]", vec!["a[3], a[4], a[5], a[6]"], singles(&[3, 4, 5, 6])),
        ("-a[2]", vec!["a[0], a[1], a[2]"], singles(&[0, 1, 2])),
        ("a[5]-", vec!["a[5], a[6], b"], singles(&[5, 6, 7])),
        (
            "a[1, 3-6]",
            vec!["a[1], a[3], a[4], a[5], a[6]"],
            singles(&[1, 3, 4, 5, 6]),
        ),
        ("a[-2]", vec!["a[0, 1, 2]"], singles(&[0, 1, 2])),
        ("a[5-]", vec!["a[5, 6]"], singles(&[5, 6])),
        ("a", vec!["a[-]", "a[0-6]"], singles(&all_a)),
        ("b", vec!["b[0]", "b[-]"], singles(&[7])),
        (
            "(a[0], a[1])",
            vec!["(a[0]-a[1])", "a[(0, 1)]", "a[(0-1)]"],
            joint(&[0, 1]),
        ),
        ("(a)", vec!["a[(-)]", "a[(0-6)]"], joint(&all_a)),
        ("(-)", vec!["(a-b)", "(a[0]-b)"], joint(&all)),
    ];
    for (lhs, rhs, expected) in &cases {
        for text in std::iter::once(lhs).chain(rhs) {
            let got = resolve_list(text, Role::Target)?;
            if &got != expected {
                return Err(format!("`{text}` gave {got:?}, expected {expected:?}"));
            }
        }
    }
    if resolve_list("a[5]-", Role::Target)? == resolve_list("a[5-]", Role::Target)? {
        return Err("`a[5]-` and `a[5-]` must differ".into());
    }
    for text in ["(a[0], a[1])", "a[(0-1)]", "(-)"] {
        for role in [Role::Control, Role::NegControl] {
            if resolve_list(text, role).is_ok() {
                return Err(format!("joint `{text}` accepted as {role}"));
            }
        }
    }
    Ok(format!(
        "{} equivalences and joint-as-control rejection",
        cases.len() + 1
    ))
}

fn resolution_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = Vec::new();
    let (mut resolved, mut errors) = (0, 0);
    for _ in 0..RESOLUTION_CASES {
        let case = random_ref_case(&mut rng);
        let role = if rand::Rng::gen_bool(&mut rng, 0.2) {
            Role::Control
        } else {
            Role::Target
        };
        let src = format!("{}box {{}} {};", case.declarations(), case.target_text());
        let program = match parse_program(&src) {
            Ok(p) => p,
            Err(_) if case.has_decreasing_literal() => {
                errors += 1;
                continue;
            }
            Err(e) => return Err(format!("`{src}` does not parse: {}", e.message)),
        };
        if case.has_decreasing_literal() {
            mismatches.push(format!("`{src}`: decreasing index range accepted"));
            continue;
        }
        let mut table = RegisterTable::new();
        let mut gate = None;
        for stmt in &program.statements {
            match &stmt.kind {
                StatementKind::Declaration(d) => {
                    table
                        .declare(&d.name, d.reg_type, d.length, None)
                        .map_err(|e| e.to_string())?;
                }
                StatementKind::Gate(g) => gate = Some(g),
                _ => {}
            }
        }
        let gate = gate.expect("one gate statement");
        if gate.targets.len() != case.elements.len() {
            mismatches.push(format!("`{src}`: {} elements parsed", gate.targets.len()));
            continue;
        }
        for (expr, element) in gate.targets.iter().zip(&case.elements) {
            let expected = case.expect(element, role == Role::Control);
            let got = table.resolve(expr, role).ok().map(|gs| {
                gs.into_iter()
                    .map(|g| g.wires.iter().map(|w| w.0).collect())
                    .collect::<Vec<Vec<usize>>>()
            });
            if expected.is_none() {
                errors += 1;
            } else {
                resolved += 1;
            }
            if got != expected {
                mismatches.push(format!(
                    "`{}` in `{src}` as {role}: got {got:?}, expected {expected:?}",
                    case.element_text(element)
                ));
            }
        }
    }
    if mismatches.is_empty() {
        Ok(format!(
            "{RESOLUTION_CASES} statements, 0 mismatches ({resolved} elements resolved, {errors} rejections)"
        ))
    } else {
        Err(format!("{} mismatches, first: {}", mismatches.len(), mismatches[0]))
    }
}

fn layout_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cfg = LayoutConfig::default();
    let mut compared = 0;
    for n in 0..LAYOUT_CASES {
        let case = random_layout_case(&mut rng);
        let src = case.source();
        let (_, layout) = common::lay_out(&src);
        let (centres, cursors) = simulate(&case, &cfg);
        if layout.placements.len() != case.ops.len() {
            return Err(format!(
                "case {n}: {} placements for {} ops",
                layout.placements.len(),
                case.ops.len()
            ));
        }
        for (i, expected) in centres.iter().enumerate() {
            if let Some(x) = expected {
                let got = layout.placements[i].x_center;
                if got.to_bits() != x.to_bits() {
                    return Err(format!(
                        "case {n}, op {i} `{}`: x {got} vs oracle {x}\n{src}",
                        case.ops[i].source()
                    ));
                }
                compared += 1;
            }
        }
        if layout.cursors != cursors {
            return Err(format!(
                "case {n}: cursors {:?} vs oracle {cursors:?}\n{src}",
                layout.cursors
            ));
        }
    }
    Ok(format!(
        "{LAYOUT_CASES} programs, {compared} x-positions identical (zero tolerance)"
    ))
}

/// x-centres of the glyphs drawn by the two `measure` lines.
fn measure_centres(options: &Options) -> (f64, f64) {
    let c = compile_file("teleport.qasm", options);
    let (elab, layout) = &c.circuits[0];
    let xs: Vec<f64> = elab
        .instances
        .iter()
        .enumerate()
        .filter(|(_, i)| i.kind.name == "measure")
        .map(|(k, _)| layout.placement_of(k).x_center)
        .collect();
    assert_eq!(xs.len(), 2, "two measure glyphs");
    (xs[0], xs[1])
}

fn independence_default_nop() -> Outcome {
    let (a, b) = measure_centres(&Options::default());
    if (a - b).abs() > MISALIGN_MIN_MM {
        Ok(format!("measure q0 at {a:.3} mm, measure q1 at {b:.3} mm"))
    } else {
        Err(format!("both measures at {a} mm"))
    }
}

/// `h q0` advances q0 by column gap + box width, `nop q1` advances q1 by the
/// nop width alone, so the measures line up only when the nop width is
/// column gap + minimum operator width; the measure width plays no part.
fn independence_measure_nop() -> Outcome {
    let cfg = LayoutConfig::default();
    let opts = Options {
        nop_width: Some(cfg.measure_width),
        ..Options::default()
    };
    let (a, b) = measure_centres(&opts);
    let aligning = cfg.column_gap + cfg.min_op_width;
    let (c, d) = measure_centres(&Options {
        nop_width: Some(aligning),
        ..Options::default()
    });
    let note = format!(
        "nop {} mm: centres {a:.3} and {b:.3} mm (gap {:.3} mm); they coincide at nop {aligning} mm (gap {:.1e})",
        cfg.measure_width,
        (a - b).abs(),
        (c - d).abs()
    );
    if (a - b).abs() <= ALIGN_TOLERANCE_MM {
        Ok(note)
    } else {
        Err(note)
    }
}

/// Horizontal line primitives of `e` that cross `x`.
fn strokes_at(e: &Element, x: f64) -> usize {
    e.primitives
        .iter()
        .filter(
            |p| matches!(p, Primitive::Line { x1, x2, y1, y2, .. } if y1 == y2 && x1.min(*x2) < x && x < x1.max(*x2)),
        )
        .count()
}

fn wire_element(elements: &[Element], wire: WireId) -> &Element {
    elements
        .iter()
        .find(|e| e.class == "wire" && e.wire == Some(wire))
        .unwrap_or_else(|| panic!("no wire element for {wire:?}"))
}

/// Instance indices of gate `name` acting on `wire`, in order.
fn on_wire(instances: &[GateInstance], name: &str, wire: WireId) -> Vec<usize> {
    instances
        .iter()
        .enumerate()
        .filter(|(_, i)| i.kind.name == name && i.target_wires().any(|w| w == wire))
        .map(|(k, _)| k)
        .collect()
}

/// Left edge of the first drawn instance on `wire` that starts after `x`, or
/// the end of the circuit.
fn next_left(layout: &LayoutResult, wire: WireId, x: f64) -> f64 {
    layout
        .placements
        .iter()
        .filter(|p| p.half_width > 0.0 && p.span.0 <= wire && wire <= p.span.1 && p.x_left() > x)
        .map(|p| p.x_left())
        .fold(layout.end_x, f64::min)
}

struct StrokeCheck<'a> {
    scene: &'a Scene,
    elements: &'a [Element],
    failures: Vec<String>,
    checked: usize,
}

impl StrokeCheck<'_> {
    fn expect(&mut self, what: &str, wire: WireId, from: f64, to: f64, count: usize) {
        let x = (from + to) / 2.0 + self.scene.origin.0;
        let got = strokes_at(wire_element(self.elements, wire), x);
        self.checked += 1;
        if got != count {
            self.failures
                .push(format!("{what} on wire {}: {got} strokes, expected {count}", wire.0));
        }
    }
}

fn type_effect_fidelity() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;

    let ft = compile_file("ft_error_correction.yq", &Options::default());
    let (elab, layout) = &ft.circuits[0];
    let mut check = StrokeCheck {
        scene: &ft.scene,
        elements: &ft.scene.elements,
        failures: Vec::new(),
        checked: 0,
    };
    for s in [WireId(3), WireId(4)] {
        let measures = on_wire(&elab.instances, "measure", s);
        let discard = on_wire(&elab.instances, "discard", s)[0];
        let init = on_wire(&elab.instances, "init", s)[0];
        let m1 = layout.placement_of(measures[0]).x_right();
        let d = layout.placement_of(discard).x_center;
        let (i_left, i_right) = (layout.placement_of(init).x_left(), layout.placement_of(init).x_right());
        let m2 = layout.placement_of(measures[1]).x_right();
        check.expect("after measure", s, m1, d, 2);
        check.expect("after discard", s, d, i_left, 0);
        check.expect("after init", s, i_right, next_left(layout, s, i_right), 1);
        check.expect("after second measure", s, m2, next_left(layout, s, m2), 2);
    }
    for c in [WireId(5), WireId(6)] {
        check.expect("declared cbit", c, layout.wires[c.0].start_x, layout.end_x, 2);
    }
    failures.append(&mut check.failures);
    checked += check.checked;

    let sub = compile_file("subcircuit.yq", &Options::default());
    let (elab, layout) = &sub.circuits[0];
    let mut check = StrokeCheck {
        scene: &sub.scene,
        elements: &sub.scene.elements,
        failures: Vec::new(),
        checked: 0,
    };
    let boxed = elab
        .instances
        .iter()
        .position(|i| i.kind.name == "subcircuit")
        .expect("subcircuit instance");
    let placement = layout.placement_of(boxed);
    for w in 3..6 {
        let wire = WireId(w);
        let discard = layout
            .placement_of(on_wire(&elab.instances, "discard", wire)[0])
            .x_center;
        check.expect("declared nobit", wire, layout.wires[w].start_x, placement.x_left(), 0);
        check.expect(
            "after subcircuit ending in dmeter",
            wire,
            placement.x_right(),
            discard,
            2,
        );
        check.expect("after discard", wire, discard, layout.end_x, 0);
    }
    failures.append(&mut check.failures);
    checked += check.checked;

    // the inner wires are children of the subcircuit element
    let inner = placement.nested.as_ref().expect("nested layout");
    let boxes = sub.scene.elements_with_class("subcircuit");
    let mut check = StrokeCheck {
        scene: &sub.scene,
        elements: &boxes[0].children,
        failures: Vec::new(),
        checked: 0,
    };
    for w in 3..6 {
        let wire = WireId(w);
        let dmeter = on_wire(&inner.instances, "dmeter", wire)[0];
        let right = inner.placement_of(dmeter).x_right();
        check.expect("after dmeter", wire, right, inner.end_x, 2);
        let first = inner.placements.iter().map(|p| p.x_left()).fold(f64::MAX, f64::min);
        check.expect("inner qubit before gates", wire, inner.wires[w].start_x, first, 1);
    }
    failures.append(&mut check.failures);
    checked += check.checked;

    if failures.is_empty() {
        Ok(format!(
            "{checked} stroke counts on the error-correction and subcircuit listings"
        ))
    } else {
        Err(failures.join("; "))
    }
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_yqc");
    for f in CORPUS {
        let runs: Vec<Vec<u8>> = (0..IN_PROCESS_RUNS)
            .map(|_| render(f.source, f.input, OutputFormat::Svg, &Options::default()).unwrap())
            .collect();
        if runs.iter().any(|r| r != &runs[0]) {
            return Err(format!("{}: in-process runs differ", f.name));
        }
        for n in 0..PROCESS_RUNS {
            let out = Command::new(exe)
                .arg(corpus_path(f.name))
                .args(["--format", "svg"])
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("{}: yqc exited {:?}", f.name, out.status.code()));
            }
            if out.stdout != runs[0] {
                return Err(format!("{}: process run {n} differs from the library output", f.name));
            }
        }
    }
    Ok(format!(
        "{} files, {IN_PROCESS_RUNS} in-process runs and {PROCESS_RUNS} process runs byte-identical",
        CORPUS.len()
    ))
}

fn round_trip() -> Outcome {
    for f in CORPUS {
        let program = match f.input {
            InputFormat::Yquant => parse_program(f.source),
            InputFormat::Qasm => parse_qasm(f.source),
        }
        .map_err(|e| format!("{}: {}", f.name, e.message))?;
        let once = pretty_print(&program);
        let reparsed =
            parse_program(&once).map_err(|e| format!("{}: printed text does not parse: {}", f.name, e.message))?;
        if reparsed.without_spans() != program.without_spans() {
            return Err(format!("{}: reparsed tree differs", f.name));
        }
        let twice = pretty_print(&reparsed);
        if twice != once {
            return Err(format!("{}: second print differs", f.name));
        }
    }
    Ok(format!("{} files are fixed points", CORPUS.len()))
}
