// SPDX-License-Identifier: Apache-2.0

//! Property tests over generated programs. The generators live in `common`
//! and take a seeded RNG, so proptest drives them through the seed.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{lay_out, random_layout_case, random_ref_case, simulate, LayoutCase, Op};
use yqc::frontend::{parse_program, pretty_print, StatementKind};
use yqc::layout::LayoutConfig;
use yqc::registers::{RegisterTable, Role};

fn layout_case(seed: u64) -> LayoutCase {
    random_layout_case(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Closed wire interval an op blocks.
fn interval(op: &Op) -> (usize, usize) {
    let ws = op.wires();
    (*ws.iter().min().unwrap(), *ws.iter().max().unwrap())
}

/// Source with every statement keyword's letters recased by `mask`.
fn recase(source: &str, mask: u64) -> String {
    let mut bit = 0;
    source
        .lines()
        .map(|line| {
            let end = line.find(' ').unwrap_or(line.len());
            let word: String = line[..end]
                .chars()
                .map(|c| {
                    bit = (bit + 1) % 64;
                    if mask >> bit & 1 == 1 {
                        c.to_ascii_uppercase()
                    } else {
                        c
                    }
                })
                .collect();
            format!("{word}{}\n", &line[end..])
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pretty_print_is_a_fixed_point(seed in any::<u64>(), named in any::<u32>()) {
        let case = layout_case(seed);
        let mut src = case.source();
        // name a few statements so attributes are exercised too
        let lines: Vec<String> = src
            .lines()
            .enumerate()
            .map(|(i, l)| if i > 0 && named >> (i % 32) & 1 == 1 { format!("[name=n{i}] {l}") } else { l.to_string() })
            .collect();
        src = lines.join("\n");
        let program = parse_program(&src).unwrap();
        let once = pretty_print(&program);
        let reparsed = parse_program(&once).unwrap();
        prop_assert_eq!(reparsed.without_spans(), program.without_spans());
        prop_assert_eq!(pretty_print(&reparsed), once);
    }

    #[test]
    fn keywords_are_case_insensitive(seed in any::<u64>(), mask in any::<u64>()) {
        let src = layout_case(seed).source();
        let shouted = recase(&src, mask);
        let a = parse_program(&src).unwrap().without_spans();
        let b = parse_program(&shouted).unwrap().without_spans();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn comments_are_transparent(seed in any::<u64>(), text in "[ a-z0-9;{}()\\[\\]|~-]{0,20}") {
        let src = layout_case(seed).source();
        let commented: String = src
            .lines()
            .map(|l| format!("% {text}\n{l} %{text}\n"))
            .collect();
        let a = parse_program(&src).unwrap().without_spans();
        let b = parse_program(&commented).unwrap().without_spans();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn resolution_matches_the_naive_expansion(seed in any::<u64>(), control in any::<bool>()) {
        let case = random_ref_case(&mut ChaCha8Rng::seed_from_u64(seed));
        let role = if control { Role::Control } else { Role::Target };
        let src = format!("{}box {{}} {};", case.declarations(), case.target_text());
        let parsed = parse_program(&src);
        prop_assert_eq!(parsed.is_err(), case.has_decreasing_literal(), "{}", src);
        let Ok(program) = parsed else { return Ok(()) };
        let mut table = RegisterTable::new();
        let mut targets = None;
        for stmt in &program.statements {
            match &stmt.kind {
                StatementKind::Declaration(d) => {
                    table.declare(&d.name, d.reg_type, d.length, None).unwrap();
                }
                StatementKind::Gate(g) => targets = Some(&g.targets),
                _ => {}
            }
        }
        let targets = targets.unwrap();
        prop_assert_eq!(targets.len(), case.elements.len());
        for (expr, element) in targets.iter().zip(&case.elements) {
            let got = table
                .resolve(expr, role)
                .ok()
                .map(|gs| gs.into_iter().map(|g| g.wires.iter().map(|w| w.0).collect()).collect::<Vec<Vec<usize>>>());
            prop_assert_eq!(got, case.expect(element, control), "{}", src);
        }
    }

    #[test]
    fn layout_matches_the_cursor_model(seed in any::<u64>()) {
        let case = layout_case(seed);
        let (_, layout) = lay_out(&case.source());
        let (centres, cursors) = simulate(&case, &LayoutConfig::default());
        for (p, c) in layout.placements.iter().zip(&centres) {
            if let Some(x) = c {
                prop_assert_eq!(p.x_center.to_bits(), x.to_bits());
            }
        }
        prop_assert_eq!(layout.cursors, cursors);
    }

    #[test]
    fn disjoint_neighbours_commute(seed in any::<u64>(), pick in any::<usize>()) {
        let case = layout_case(seed);
        let swappable: Vec<usize> = (1..case.ops.len())
            .filter(|&i| {
                let ((a0, a1), (b0, b1)) = (interval(&case.ops[i - 1]), interval(&case.ops[i]));
                let pseudo = !case.ops[i - 1].is_drawn() || !case.ops[i].is_drawn();
                !pseudo && (a1 < b0 || b1 < a0)
            })
            .collect();
        prop_assume!(!swappable.is_empty());
        let i = swappable[pick % swappable.len()];
        let mut swapped = case.clone();
        swapped.ops.swap(i - 1, i);
        let (_, before) = lay_out(&case.source());
        let (_, after) = lay_out(&swapped.source());
        prop_assert_eq!(before.placements[i - 1].x_center, after.placements[i].x_center);
        prop_assert_eq!(before.placements[i].x_center, after.placements[i - 1].x_center);
        prop_assert_eq!(before.cursors, after.cursors);
    }

    #[test]
    fn align_is_idempotent(seed in any::<u64>(), mask in 1u8..64) {
        let mut case = layout_case(seed);
        let ws: Vec<usize> = (0..case.wires).filter(|w| mask >> w & 1 == 1).collect();
        prop_assume!(!ws.is_empty());
        case.ops.push(Op::Align(ws.clone()));
        let (_, once) = lay_out(&case.source());
        let aligned = ws.iter().map(|&w| once.cursors[w]);
        let top = aligned.clone().fold(f64::MIN, f64::max);
        prop_assert!(aligned.into_iter().all(|c| c == top));
        case.ops.push(Op::Align(ws));
        let (_, twice) = lay_out(&case.source());
        prop_assert_eq!(once.cursors, twice.cursors);
    }

    #[test]
    fn cursors_never_move_left(seed in any::<u64>()) {
        let case = layout_case(seed);
        let mut prefix = LayoutCase { ops: Vec::new(), ..case.clone() };
        let (_, start) = lay_out(&prefix.source());
        let mut last = start.cursors;
        for op in &case.ops {
            prefix.ops.push(op.clone());
            let (_, now) = lay_out(&prefix.source());
            for (w, (a, b)) in last.iter().zip(&now.cursors).enumerate() {
                prop_assert!(b >= a, "wire {} moved back after `{}`", w, op.source());
            }
            last = now.cursors;
        }
    }
}
