// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures for the integration tests: the listing corpus and two
//! independent reference models (register resolution and column placement).

#![allow(dead_code)]

use rand::Rng;
use yqc::layout::LayoutConfig;
use yqc::InputFormat;

pub struct CorpusFile {
    pub name: &'static str,
    pub source: &'static str,
    pub input: InputFormat,
    /// Elaborated instances per circuit, counted by hand from the listing.
    pub instances: &'static [usize],
}

macro_rules! corpus_file {
    ($name:literal, $input:expr, $counts:expr) => {
        CorpusFile {
            name: $name,
            source: include_str!(concat!("../corpus/", $name)),
            input: $input,
            instances: $counts,
        }
    };
}

/// Hand counts:
/// - teleport: h, cnot, cnot, h, measure on two wires (2), z, x.
/// - phase estimation: h j (3), three controlled U boxes, h, S, h, T, S, h, measure j (3).
/// - error correction: h, 4 cnot, h, measure s (2), 2 cnot, discard s (2),
///   init s (2), h, 4 cnot, h, measure s (2), two joint boxes.
/// - subcircuit: the box, the recovery box, discard syndrome (3).
/// - group: h - (2), cnot, h - (2); then the single cnot.
/// - register usage: 1 + 2 + 4 + 3 + 3 + 5 + 3 + 2 + 7 + 1 + 3 joint boxes.
/// - qasm teleport: nine gate lines; declarations are not instances.
pub const CORPUS: &[CorpusFile] = &[
    corpus_file!("teleport.yq", InputFormat::Yquant, &[8]),
    corpus_file!("phase_estimation.yq", InputFormat::Yquant, &[15]),
    corpus_file!("ft_error_correction.yq", InputFormat::Yquant, &[24]),
    corpus_file!("subcircuit.yq", InputFormat::Yquant, &[5]),
    corpus_file!("group.yq", InputFormat::Yquant, &[5, 1]),
    corpus_file!("register_usage.yq", InputFormat::Yquant, &[34]),
    corpus_file!("teleport.qasm", InputFormat::Qasm, &[9]),
];

pub fn corpus(name: &str) -> &'static CorpusFile {
    CORPUS
        .iter()
        .find(|f| f.name == name)
        .unwrap_or_else(|| panic!("no corpus file {name}"))
}

pub fn corpus_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/corpus")
        .join(name)
}

// ---------------------------------------------------------------------------
// Register resolution reference model

/// A register of the generated table: name and length.
#[derive(Debug, Clone)]
pub struct RegSpec {
    pub name: &'static str,
    pub length: u64,
    /// Declared as `qubit a;` rather than `qubit a[1];`.
    pub bare: bool,
}

#[derive(Debug, Clone)]
pub enum Entry {
    One(u64),
    Span(Option<u64>, Option<u64>),
}

/// `(register, optional single index)` naming one end of a wire range.
pub type Endpoint = (usize, Option<u64>);

#[derive(Debug, Clone)]
pub enum Item {
    Whole(usize),
    Indexed {
        reg: usize,
        entries: Vec<Entry>,
        joint: bool,
    },
    Range(Option<Endpoint>, Option<Endpoint>),
}

/// One comma-separated element of a target list.
#[derive(Debug, Clone)]
pub enum Element {
    Plain(Item),
    Joint(Vec<Item>),
}

#[derive(Debug, Clone)]
pub struct RefCase {
    pub regs: Vec<RegSpec>,
    pub elements: Vec<Element>,
}

const NAMES: [&str; 3] = ["a", "b", "c"];

fn entry_text(e: &Entry) -> String {
    let n = |v: &Option<u64>| v.map(|i| i.to_string()).unwrap_or_default();
    match e {
        Entry::One(i) => i.to_string(),
        Entry::Span(lo, hi) => format!("{}-{}", n(lo), n(hi)),
    }
}

impl RefCase {
    pub fn declarations(&self) -> String {
        self.regs
            .iter()
            .map(|r| {
                if r.bare {
                    format!("qubit {};\n", r.name)
                } else {
                    format!("qubit {}[{}];\n", r.name, r.length)
                }
            })
            .collect()
    }

    fn item_text(&self, item: &Item) -> String {
        let endpoint = |e: &Option<Endpoint>| match e {
            None => String::new(),
            Some((r, None)) => self.regs[*r].name.to_string(),
            Some((r, Some(i))) => format!("{}[{i}]", self.regs[*r].name),
        };
        match item {
            Item::Whole(r) => self.regs[*r].name.to_string(),
            Item::Indexed { reg, entries, joint } => {
                let list: Vec<String> = entries.iter().map(entry_text).collect();
                let list = list.join(", ");
                if *joint {
                    format!("{}[({list})]", self.regs[*reg].name)
                } else {
                    format!("{}[{list}]", self.regs[*reg].name)
                }
            }
            Item::Range(a, b) => format!("{}-{}", endpoint(a), endpoint(b)),
        }
    }

    pub fn element_text(&self, e: &Element) -> String {
        match e {
            Element::Plain(i) => self.item_text(i),
            Element::Joint(items) => {
                let parts: Vec<String> = items.iter().map(|i| self.item_text(i)).collect();
                format!("({})", parts.join(", "))
            }
        }
    }

    pub fn target_text(&self) -> String {
        let parts: Vec<String> = self.elements.iter().map(|e| self.element_text(e)).collect();
        parts.join(", ")
    }

    /// Whether some index spells out a decreasing range such as `5-4`, which
    /// the parser rejects before resolution.
    pub fn has_decreasing_literal(&self) -> bool {
        let items = self.elements.iter().flat_map(|e| match e {
            Element::Plain(i) => std::slice::from_ref(i),
            Element::Joint(items) => items.as_slice(),
        });
        items.into_iter().any(|i| match i {
            Item::Indexed { entries, .. } => entries
                .iter()
                .any(|e| matches!(e, Entry::Span(Some(lo), Some(hi)) if lo > hi)),
            _ => false,
        })
    }

    fn first_wire(&self, r: usize) -> u64 {
        self.regs[..r].iter().map(|r| r.length).sum()
    }

    fn total(&self) -> u64 {
        self.regs.iter().map(|r| r.length).sum()
    }

    fn item_wires(&self, item: &Item) -> Option<Vec<u64>> {
        match item {
            Item::Whole(r) => {
                let base = self.first_wire(*r);
                Some((0..self.regs[*r].length).map(|i| base + i).collect())
            }
            Item::Indexed { reg, entries, .. } => {
                let len = self.regs[*reg].length;
                let base = self.first_wire(*reg);
                let mut out = Vec::new();
                for e in entries {
                    let (lo, hi) = match e {
                        Entry::One(i) => (*i, *i),
                        Entry::Span(lo, hi) => (lo.unwrap_or(0), hi.unwrap_or(len - 1)),
                    };
                    if lo >= len || hi >= len || lo > hi {
                        return None;
                    }
                    let mut i = lo;
                    while i <= hi {
                        out.push(base + i);
                        i += 1;
                    }
                }
                Some(out)
            }
            Item::Range(a, b) => {
                let at = |e: &Option<Endpoint>, first: bool| -> Option<u64> {
                    match e {
                        None if first => Some(0),
                        None => Some(self.total() - 1),
                        Some((r, None)) if first => Some(self.first_wire(*r)),
                        Some((r, None)) => Some(self.first_wire(*r) + self.regs[*r].length - 1),
                        Some((r, Some(i))) => (*i < self.regs[*r].length).then(|| self.first_wire(*r) + i),
                    }
                };
                let (lo, hi) = (at(a, true)?, at(b, false)?);
                if lo > hi {
                    return None;
                }
                Some((lo..=hi).collect())
            }
        }
    }

    /// Expected groups of one element, or `None` when resolution must fail.
    pub fn expect(&self, e: &Element, as_control: bool) -> Option<Vec<Vec<usize>>> {
        let (items, joint) = match e {
            Element::Plain(i) => (std::slice::from_ref(i), matches!(i, Item::Indexed { joint: true, .. })),
            Element::Joint(items) => (items.as_slice(), true),
        };
        if joint && as_control {
            return None;
        }
        let mut wires = Vec::new();
        for item in items {
            wires.extend(self.item_wires(item)?);
        }
        if wires.is_empty() {
            return None;
        }
        let mut sorted = wires.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != wires.len() {
            return None;
        }
        let wires: Vec<usize> = wires.into_iter().map(|w| w as usize).collect();
        Some(if joint {
            vec![wires]
        } else {
            wires.into_iter().map(|w| vec![w]).collect()
        })
    }
}

/// An index of a register of length `len`; occasionally out of range.
fn random_index(rng: &mut dyn rand::RngCore, len: u64) -> u64 {
    if rng.gen_bool(0.1) {
        rng.gen_range(0..=5)
    } else {
        rng.gen_range(0..len)
    }
}

fn random_entry(rng: &mut dyn rand::RngCore, len: u64) -> Entry {
    if rng.gen_bool(0.5) {
        return Entry::One(random_index(rng, len));
    }
    let (mut lo, mut hi) = (random_index(rng, len), random_index(rng, len));
    if rng.gen_bool(0.9) && lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let lo = rng.gen_bool(0.75).then_some(lo);
    let hi = rng.gen_bool(0.75).then_some(hi);
    Entry::Span(lo, hi)
}

fn random_item(rng: &mut dyn rand::RngCore, regs: &[RegSpec]) -> Item {
    let n = regs.len();
    match rng.gen_range(0..3) {
        0 => Item::Whole(rng.gen_range(0..n)),
        1 => {
            let reg = rng.gen_range(0..n);
            let count = rng.gen_range(1..=3);
            Item::Indexed {
                reg,
                entries: (0..count).map(|_| random_entry(rng, regs[reg].length)).collect(),
                joint: rng.gen_bool(0.15),
            }
        }
        _ => {
            let endpoint = |rng: &mut dyn rand::RngCore| -> Option<Endpoint> {
                if rng.gen_bool(0.25) {
                    return None;
                }
                let r = rng.gen_range(0..n);
                Some((r, rng.gen_bool(0.6).then(|| random_index(rng, regs[r].length))))
            };
            let (mut a, mut b) = (endpoint(rng), endpoint(rng));
            // mostly forward ranges, so most cases resolve
            if rng.gen_bool(0.7) {
                if let (Some((ra, _)), Some((rb, _))) = (a, b) {
                    if ra > rb {
                        std::mem::swap(&mut a, &mut b);
                    }
                }
            }
            Item::Range(a, b)
        }
    }
}

pub fn random_ref_case(rng: &mut impl Rng) -> RefCase {
    let nregs = rng.gen_range(1..=3);
    let regs: Vec<RegSpec> = (0..nregs)
        .map(|i| {
            let length = rng.gen_range(1..=5);
            RegSpec {
                name: NAMES[i],
                length,
                bare: length == 1 && rng.gen_bool(0.5),
            }
        })
        .collect();
    let nelem = rng.gen_range(1..=3);
    let elements = (0..nelem)
        .map(|_| {
            if rng.gen_bool(0.2) {
                let n = rng.gen_range(1..=3);
                Element::Joint((0..n).map(|_| random_item(rng, &regs)).collect())
            } else {
                Element::Plain(random_item(rng, &regs))
            }
        })
        .collect();
    RefCase { regs, elements }
}

// ---------------------------------------------------------------------------
// Column placement reference model

#[derive(Debug, Clone)]
pub enum Op {
    /// `h`, `x`, `y`, `z` on one wire.
    Fixed {
        gate: &'static str,
        wire: usize,
    },
    Measure(usize),
    /// Box with `chars` letters of text, optional positive and negative controls.
    Box {
        chars: usize,
        target: usize,
        controls: Vec<usize>,
        negs: Vec<usize>,
    },
    /// Joint box over the contiguous wires `lo..=hi`.
    JointBox {
        chars: usize,
        lo: usize,
        hi: usize,
    },
    Cnot {
        target: usize,
        controls: Vec<usize>,
    },
    Swap(usize, usize),
    Barrier(Vec<usize>),
    Align(Vec<usize>),
    /// `quarters` quarter millimetres.
    Hspace {
        wire: usize,
        quarters: u32,
    },
}

#[derive(Debug, Clone)]
pub struct LayoutCase {
    pub wires: usize,
    /// Label length in characters for every wire; 0 means an empty label.
    pub label_chars: usize,
    pub ops: Vec<Op>,
}

fn letters(n: usize) -> String {
    "ABCDEFGHIJ".chars().take(n).collect()
}

fn wire_list(ws: &[usize]) -> String {
    let parts: Vec<String> = ws.iter().map(|w| format!("q[{w}]")).collect();
    parts.join(", ")
}

impl Op {
    pub fn source(&self) -> String {
        match self {
            Op::Fixed { gate, wire } => format!("{gate} q[{wire}];"),
            Op::Measure(w) => format!("measure q[{w}];"),
            Op::Box {
                chars,
                target,
                controls,
                negs,
            } => {
                let mut s = format!("box {{{}}} q[{target}]", letters(*chars));
                if !controls.is_empty() {
                    s.push_str(&format!(" | {}", wire_list(controls)));
                }
                if !negs.is_empty() {
                    s.push_str(&format!(" ~ {}", wire_list(negs)));
                }
                s.push(';');
                s
            }
            Op::JointBox { chars, lo, hi } => format!("box {{{}}} (q[{lo}-{hi}]);", letters(*chars)),
            Op::Cnot { target, controls } => format!("cnot q[{target}] | {};", wire_list(controls)),
            Op::Swap(a, b) => format!("swap (q[{a}], q[{b}]);"),
            Op::Barrier(ws) => format!("barrier {};", wire_list(ws)),
            Op::Align(ws) => format!("align {};", wire_list(ws)),
            Op::Hspace { wire, quarters } => format!("hspace {{{}mm}} q[{wire}];", f64::from(*quarters) / 4.0),
        }
    }

    /// Every wire the statement names.
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Op::Fixed { wire, .. } | Op::Measure(wire) | Op::Hspace { wire, .. } => vec![*wire],
            Op::Box {
                target, controls, negs, ..
            } => {
                let mut v = vec![*target];
                v.extend(controls);
                v.extend(negs);
                v
            }
            Op::JointBox { lo, hi, .. } => (*lo..=*hi).collect(),
            Op::Cnot { target, controls } => {
                let mut v = vec![*target];
                v.extend(controls);
                v
            }
            Op::Swap(a, b) => vec![*a, *b],
            Op::Barrier(ws) | Op::Align(ws) => ws.clone(),
        }
    }

    pub fn is_drawn(&self) -> bool {
        !matches!(self, Op::Align(_) | Op::Hspace { .. })
    }
}

impl LayoutCase {
    pub fn source(&self) -> String {
        let label = letters(self.label_chars);
        let mut s = format!("qubit {{{label}}} q[{}];\n", self.wires);
        for op in &self.ops {
            s.push_str(&op.source());
            s.push('\n');
        }
        s
    }
}

/// Centres of the drawn ops (`None` for pseudo-gates) and final cursors,
/// computed straight from the placement rule: an op occupies the closed wire
/// interval it touches, starts one column gap after the furthest cursor in
/// that interval, and advances every cursor of the interval to its right edge.
pub fn simulate(case: &LayoutCase, cfg: &LayoutConfig) -> (Vec<Option<f64>>, Vec<f64>) {
    let char_w = cfg.char_width_factor * cfg.font_size;
    let start = if case.label_chars == 0 {
        0.0
    } else {
        case.label_chars as f64 * char_w + cfg.text_padding
    };
    let mut cursor = vec![start; case.wires];
    let mut centres = Vec::new();
    for op in &case.ops {
        let width = match op {
            Op::Fixed { .. } => cfg.min_op_width,
            Op::Measure(_) => cfg.measure_width,
            Op::Box { chars, .. } | Op::JointBox { chars, .. } => {
                (*chars as f64 * char_w + 2.0 * cfg.text_padding).max(cfg.min_op_width)
            }
            Op::Cnot { .. } | Op::Swap(..) => 2.0 * cfg.oplus_radius,
            Op::Barrier(_) => cfg.column_gap,
            Op::Align(ws) => {
                let m = ws.iter().map(|&w| cursor[w]).fold(f64::MIN, f64::max);
                for &w in ws {
                    cursor[w] = m;
                }
                centres.push(None);
                continue;
            }
            Op::Hspace { wire, quarters } => {
                cursor[*wire] += f64::from(*quarters) / 4.0;
                centres.push(None);
                continue;
            }
        };
        let ws = op.wires();
        let lo = *ws.iter().min().unwrap();
        let hi = *ws.iter().max().unwrap();
        let mut left = f64::MIN;
        for c in &cursor[lo..=hi] {
            left = left.max(*c);
        }
        let left = left + cfg.column_gap;
        let centre = left + width / 2.0;
        let right = centre + width / 2.0;
        for c in &mut cursor[lo..=hi] {
            *c = right;
        }
        centres.push(Some(centre));
    }
    (centres, cursor)
}

fn distinct_wires(rng: &mut impl Rng, n: usize, count: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = rng.gen_range(i..n);
        all.swap(i, j);
    }
    all.truncate(count);
    all
}

pub fn random_op(rng: &mut impl Rng, n: usize) -> Op {
    let one = |rng: &mut dyn rand::RngCore| rng.gen_range(0..n);
    match rng.gen_range(0..9) {
        0 => Op::Fixed {
            gate: ["h", "x", "y", "z"][rng.gen_range(0..4)],
            wire: one(rng),
        },
        1 => Op::Measure(one(rng)),
        2 if n >= 2 => {
            let k = rng.gen_range(2..=n.min(3));
            let ws = distinct_wires(rng, n, k);
            let split = rng.gen_range(1..k);
            let (c, ng) = ws[1..].split_at(split - 1);
            Op::Box {
                chars: rng.gen_range(0..6),
                target: ws[0],
                controls: c.to_vec(),
                negs: ng.to_vec(),
            }
        }
        3 => {
            let lo = one(rng);
            Op::JointBox {
                chars: rng.gen_range(0..6),
                lo,
                hi: rng.gen_range(lo..n),
            }
        }
        4 if n >= 2 => {
            let k = rng.gen_range(2..=n.min(3));
            let ws = distinct_wires(rng, n, k);
            Op::Cnot {
                target: ws[0],
                controls: ws[1..].to_vec(),
            }
        }
        5 if n >= 2 => {
            let ws = distinct_wires(rng, n, 2);
            Op::Swap(ws[0], ws[1])
        }
        6 => {
            let k = rng.gen_range(1..=n);
            let mut ws = distinct_wires(rng, n, k);
            ws.sort_unstable();
            Op::Barrier(ws)
        }
        7 => {
            let k = rng.gen_range(1..=n);
            Op::Align(distinct_wires(rng, n, k))
        }
        8 => Op::Hspace {
            wire: one(rng),
            quarters: rng.gen_range(0..16),
        },
        _ => Op::Box {
            chars: rng.gen_range(0..6),
            target: one(rng),
            controls: Vec::new(),
            negs: Vec::new(),
        },
    }
}

pub fn random_layout_case(rng: &mut impl Rng) -> LayoutCase {
    let wires = rng.gen_range(1..=6);
    let count = rng.gen_range(0..=20);
    LayoutCase {
        wires,
        label_chars: if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..4) },
        ops: (0..count).map(|_| random_op(rng, wires)).collect(),
    }
}

/// Elaborate and lay out `source` with default settings.
pub fn lay_out(source: &str) -> (yqc::gates::Elaborated, yqc::layout::LayoutResult) {
    let program = yqc::frontend::parse_program(source).unwrap_or_else(|e| panic!("{e:?}\n{source}"));
    let elab = yqc::gates::elaborate(&program, yqc::registers::RegisterTable::new())
        .unwrap_or_else(|e| panic!("{e:?}\n{source}"));
    let layout = yqc::layout::place(&elab, &LayoutConfig::default());
    (elab, layout)
}
