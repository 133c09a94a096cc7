// SPDX-License-Identifier: Apache-2.0

//! Register table and resolution of register references to wire groups.
//!
//! Wires are numbered densely from the top in declaration order. Open ranges
//! resolve against the table as it stands when the reference is resolved, so
//! `a[5]-` can reach registers declared after `a`, while `a[5-]` stays inside `a`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::frontend::ast::{IndexEntry, IndexSpec, RefItem, RegRefExpr};
use crate::gates::substitute_label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterType {
    Qubit,
    Cbit,
    Qubits,
    Nobit,
}

impl RegisterType {
    pub fn from_keyword(word: &str) -> Option<Self> {
        match word.to_ascii_lowercase().as_str() {
            "qubit" => Some(RegisterType::Qubit),
            "cbit" => Some(RegisterType::Cbit),
            "qubits" => Some(RegisterType::Qubits),
            "nobit" => Some(RegisterType::Nobit),
            _ => None,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            RegisterType::Qubit => "qubit",
            RegisterType::Cbit => "cbit",
            RegisterType::Qubits => "qubits",
            RegisterType::Nobit => "nobit",
        }
    }

    /// Number of parallel strokes drawn for a wire of this type.
    pub fn stroke_count(self) -> usize {
        match self {
            RegisterType::Qubit => 1,
            RegisterType::Cbit => 2,
            RegisterType::Qubits => 3,
            RegisterType::Nobit => 0,
        }
    }
}

impl fmt::Display for RegisterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Global, 0-based wire index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct WireId(pub usize);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Register {
    pub name: String,
    pub reg_type: RegisterType,
    pub length: usize,
    pub label_template: Option<String>,
    pub first_wire: WireId,
    /// Inner subcircuit register that starts inside the box.
    pub out: bool,
}

impl Register {
    pub fn wires(&self) -> impl Iterator<Item = WireId> + '_ {
        (0..self.length).map(move |i| WireId(self.first_wire.0 + i))
    }

    pub fn last_wire(&self) -> WireId {
        WireId(self.first_wire.0 + self.length - 1)
    }

    /// Label text for element `idx`, with `\reg` and `\idx` substituted.
    /// Registers declared without a value get `$\reg_{\idx}$` (vectors) or
    /// `$\reg$` (scalars).
    pub fn label_for(&self, idx: usize) -> String {
        let template = match &self.label_template {
            Some(t) => t.as_str(),
            None if self.length > 1 => r"$\reg_{\idx}$",
            None => r"$\reg$",
        };
        substitute_label(template, &self.name, idx)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WireGroup {
    pub wires: Vec<WireId>,
    pub joint: bool,
}

impl WireGroup {
    pub fn single(w: WireId) -> Self {
        WireGroup {
            wires: vec![w],
            joint: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Target,
    Control,
    NegControl,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Target => "target",
            Role::Control => "control",
            Role::NegControl => "negative control",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("register `{0}` is already declared")]
    DuplicateName(String),
    #[error("register `{0}` must have a length of at least 1")]
    ZeroLength(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("index {index} is out of range for register `{name}` of length {length}")]
    IndexOutOfRange { name: String, index: u64, length: usize },
    #[error("multi-wire groups can only be used as targets, not as {0}s")]
    JointNotAllowed(Role),
    #[error("a range endpoint must name a single wire")]
    BadEndpoint,
    #[error("range from wire {from} to wire {to} runs backwards")]
    BackwardRange { from: String, to: String },
    #[error("reference resolves to no wires")]
    Empty,
    #[error("wire {0} is used more than once in the same statement")]
    DuplicateWire(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RegisterTable {
    pub registers: Vec<Register>,
    #[serde(skip)]
    by_name: HashMap<String, usize>,
    pub auto_declare: bool,
}

impl RegisterTable {
    pub fn new() -> Self {
        RegisterTable::default()
    }

    /// Table for star mode: unknown names become scalar qubits on first use.
    pub fn with_auto_declare() -> Self {
        RegisterTable {
            auto_declare: true,
            ..RegisterTable::default()
        }
    }

    pub fn wire_count(&self) -> usize {
        self.registers.last().map_or(0, |r| r.first_wire.0 + r.length)
    }

    pub fn get(&self, name: &str) -> Option<&Register> {
        self.by_name.get(name).map(|&i| &self.registers[i])
    }

    pub fn declare(
        &mut self,
        name: &str,
        reg_type: RegisterType,
        length: Option<u64>,
        label: Option<String>,
    ) -> Result<&Register, ResolveError> {
        if self.by_name.contains_key(name) {
            return Err(ResolveError::DuplicateName(name.to_string()));
        }
        let length = length.unwrap_or(1);
        if length == 0 {
            return Err(ResolveError::ZeroLength(name.to_string()));
        }
        let register = Register {
            name: name.to_string(),
            reg_type,
            length: length as usize,
            label_template: label,
            first_wire: WireId(self.wire_count()),
            out: false,
        };
        self.by_name.insert(name.to_string(), self.registers.len());
        self.registers.push(register);
        Ok(self.registers.last().unwrap())
    }

    pub(crate) fn mark_out(&mut self, name: &str) {
        if let Some(&i) = self.by_name.get(name) {
            self.registers[i].out = true;
        }
    }

    /// Declare `name` as a scalar qubit with an empty label if it is unknown and
    /// the table is in star mode. Returns whether a register was created.
    pub fn auto_declare_if_needed(&mut self, name: &str) -> bool {
        if !self.auto_declare || self.by_name.contains_key(name) {
            return false;
        }
        self.declare(name, RegisterType::Qubit, None, Some(String::new()))
            .is_ok()
    }

    fn lookup(&mut self, name: &str) -> Result<Register, ResolveError> {
        self.auto_declare_if_needed(name);
        self.get(name)
            .cloned()
            .ok_or_else(|| ResolveError::UnknownRegister(name.to_string()))
    }

    /// Register and element index of a wire.
    pub fn owner(&self, wire: WireId) -> Option<(&Register, usize)> {
        let i = self.registers.partition_point(|r| r.first_wire.0 + r.length <= wire.0);
        let r = self.registers.get(i)?;
        (wire.0 >= r.first_wire.0).then(|| (r, wire.0 - r.first_wire.0))
    }

    /// Human-readable name of a wire, e.g. `a[3]` or `b`.
    pub fn wire_name(&self, wire: WireId) -> String {
        match self.owner(wire) {
            Some((r, _)) if r.length == 1 => r.name.clone(),
            Some((r, i)) => format!("{}[{}]", r.name, i),
            None => format!("#{}", wire.0),
        }
    }

    fn index_wires(reg: &Register, spec: &IndexSpec) -> Result<Vec<WireId>, ResolveError> {
        let out_of_range = |index: u64| ResolveError::IndexOutOfRange {
            name: reg.name.clone(),
            index,
            length: reg.length,
        };
        let len = reg.length as u64;
        let mut wires = Vec::new();
        for entry in &spec.entries {
            let (lo, hi) = match *entry {
                IndexEntry {
                    lo: Some(i),
                    is_range: false,
                    ..
                } => (i, i),
                IndexEntry { is_range: true, lo, hi } => (lo.unwrap_or(0), hi.unwrap_or(len - 1)),
                IndexEntry { lo: None, .. } => return Err(ResolveError::Empty),
            };
            if lo >= len {
                return Err(out_of_range(lo));
            }
            if hi >= len {
                return Err(out_of_range(hi));
            }
            if lo > hi {
                let name = |i: u64| format!("{}[{}]", reg.name, i);
                return Err(ResolveError::BackwardRange {
                    from: name(lo),
                    to: name(hi),
                });
            }
            wires.extend((lo..=hi).map(|i| WireId(reg.first_wire.0 + i as usize)));
        }
        Ok(wires)
    }

    fn endpoint(
        &mut self,
        name: &Option<String>,
        index: &Option<IndexSpec>,
        is_start: bool,
    ) -> Result<Option<WireId>, ResolveError> {
        let Some(name) = name else {
            return Ok(None);
        };
        let reg = self.lookup(name)?;
        match index {
            None => Ok(Some(if is_start { reg.first_wire } else { reg.last_wire() })),
            Some(spec) => match spec.entries.as_slice() {
                [e @ IndexEntry { is_range: false, .. }] if !spec.joint_inner => Ok(Self::index_wires(
                    &reg,
                    &IndexSpec {
                        entries: vec![*e],
                        joint_inner: false,
                    },
                )?
                .first()
                .copied()),
                _ => Err(ResolveError::BadEndpoint),
            },
        }
    }

    fn item_wires(&mut self, item: &RefItem) -> Result<Vec<WireId>, ResolveError> {
        if !item.is_range_to {
            let name = item.start_name.as_ref().ok_or(ResolveError::Empty)?;
            let reg = self.lookup(name)?;
            return match &item.start_index {
                None => Ok(reg.wires().collect()),
                Some(spec) => Self::index_wires(&reg, spec),
            };
        }
        let start = self.endpoint(&item.start_name, &item.start_index, true)?;
        let end = self.endpoint(&item.end_name, &item.end_index, false)?;
        let count = self.wire_count();
        if count == 0 {
            return Err(ResolveError::Empty);
        }
        let start = start.unwrap_or(WireId(0));
        let end = end.unwrap_or(WireId(count - 1));
        if start > end {
            return Err(ResolveError::BackwardRange {
                from: self.wire_name(start),
                to: self.wire_name(end),
            });
        }
        Ok((start.0..=end.0).map(WireId).collect())
    }

    /// Resolve one reference expression in textual order.
    pub fn resolve(&mut self, expr: &RegRefExpr, role: Role) -> Result<Vec<WireGroup>, ResolveError> {
        let joint = expr.is_joint();
        if joint && role != Role::Target {
            return Err(ResolveError::JointNotAllowed(role));
        }
        let mut wires = Vec::new();
        for item in &expr.items {
            wires.extend(self.item_wires(item)?);
        }
        if wires.is_empty() {
            return Err(ResolveError::Empty);
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = wires.iter().find(|w| !seen.insert(**w)) {
            return Err(ResolveError::DuplicateWire(self.wire_name(*dup)));
        }
        Ok(if joint {
            vec![WireGroup { wires, joint: true }]
        } else {
            wires.into_iter().map(WireGroup::single).collect()
        })
    }
}
