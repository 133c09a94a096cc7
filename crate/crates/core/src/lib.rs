// SPDX-License-Identifier: Apache-2.0

//! Compiler for yquant-style quantum circuit descriptions.
//!
//! The stages are independent modules: [`frontend`] parses yquant or qasm
//! text into a [`frontend::Program`], [`gates::elaborate`] resolves register
//! references into gate instances, [`layout::place`] assigns x positions, and
//! [`render`] turns the result into a scene serialised as SVG or TikZ.
//! [`pipeline::compile`] chains them.

pub mod cli;
pub mod frontend;
pub mod gates;
pub mod layout;
pub mod pipeline;
pub mod registers;
pub mod render;
pub mod span;
pub mod style;

pub use pipeline::{compile, render, Compiled, Document, Error, InputFormat, Options, OutputFormat};
