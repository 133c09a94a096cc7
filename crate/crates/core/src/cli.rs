// SPDX-License-Identifier: Apache-2.0

//! The `yqc` command line and the `ir_json` dump.
//!
//! Exit codes: 0 success, 1 input or output error, 2 usage error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::gates::{Elaborated, GateInstance, Param};
use crate::layout::{parse_length, LayoutConfig, LayoutResult, Placement};
use crate::pipeline::{compile, InputFormat, Options, OutputFormat};
use crate::registers::RegisterTable;
use crate::span::SourceSpan;

pub const IR_SCHEMA_VERSION: u64 = 1;
pub const CONFIG_ENV: &str = "YQC_CONFIG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Frontend {
    Auto,
    Yquant,
    Qasm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Tikz,
    #[value(name = "ir_json")]
    IrJson,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Svg => OutputFormat::Svg,
            Format::Tikz => OutputFormat::Tikz,
            Format::IrJson => OutputFormat::IrJson,
        }
    }
}

/// Render yquant or qasm circuit descriptions to SVG, TikZ or JSON.
#[derive(Debug, Clone, Parser)]
#[command(name = "yqc", version, about)]
struct Args {
    /// Input file, or `-` for standard input.
    input: String,
    /// Output file, or `-` for standard output.
    #[arg(short = 'o', long = "output", default_value = "-")]
    output: String,
    #[arg(long, value_enum, default_value = "auto")]
    frontend: Frontend,
    #[arg(long, value_enum, default_value = "svg")]
    format: Format,
    /// Width left by qasm `nop`, e.g. `6mm` or `17pt`.
    #[arg(long = "nop-width")]
    nop_width: Option<String>,
    /// Output size multiplier.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Treat warnings as errors.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliOptions {
    pub input_path: String,
    pub output_path: String,
    pub frontend: Frontend,
    pub format: Format,
    /// Millimetres.
    pub nop_width: Option<f64>,
    pub scale: f64,
    pub strict: bool,
    /// Layout overrides file, from the environment.
    pub config_path: Option<PathBuf>,
}

/// Parse arguments, run, and return the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let nop_width = match args.nop_width.as_deref().map(parse_length) {
        None => None,
        Some(Ok(w)) if w > 0.0 => Some(w),
        Some(Ok(_)) => return usage(stderr, "--nop-width must be positive"),
        Some(Err(e)) => return usage(stderr, &format!("--nop-width: {e}")),
    };
    if !(args.scale.is_finite() && args.scale > 0.0) {
        return usage(stderr, "--scale must be positive");
    }
    let options = CliOptions {
        input_path: args.input,
        output_path: args.output,
        frontend: args.frontend,
        format: args.format,
        nop_width,
        scale: args.scale,
        strict: args.strict,
        config_path: std::env::var_os(CONFIG_ENV).map(PathBuf::from),
    };
    run(&options, stdout, stderr)
}

fn usage(stderr: &mut dyn Write, msg: &str) -> i32 {
    let _ = writeln!(stderr, "yqc: error: {msg}");
    EXIT_USAGE
}

fn input_error(stderr: &mut dyn Write, msg: &str) -> i32 {
    let _ = writeln!(stderr, "yqc: error: {msg}");
    EXIT_INPUT
}

/// Frontend for a path by extension.
pub fn detect_frontend(path: &str) -> Option<InputFormat> {
    match Path::new(path).extension()?.to_str()? {
        "yq" => Some(InputFormat::Yquant),
        "qasm" => Some(InputFormat::Qasm),
        _ => None,
    }
}

/// Read `key = value` lines into a layout configuration. Lengths take
/// `mm` or `pt`; `#` starts a comment.
pub fn parse_config(text: &str, base: LayoutConfig) -> Result<LayoutConfig, String> {
    let mut config = base;
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected `key = value`", n + 1));
        };
        config
            .set(key.trim(), value.trim())
            .map_err(|e| format!("line {}: {e}", n + 1))?;
    }
    Ok(config)
}

fn location(file: &str, span: Option<SourceSpan>) -> String {
    match span {
        Some(s) => format!("{file}:{}:{}", s.line, s.column),
        None => file.to_string(),
    }
}

pub fn run(options: &CliOptions, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let input = match options.frontend {
        Frontend::Yquant => InputFormat::Yquant,
        Frontend::Qasm => InputFormat::Qasm,
        Frontend::Auto => match detect_frontend(&options.input_path) {
            Some(f) => f,
            None => {
                return usage(
                    stderr,
                    &format!(
                        "cannot infer the input language of `{}`; use --frontend yquant or --frontend qasm",
                        options.input_path
                    ),
                )
            }
        },
    };

    let mut layout = LayoutConfig::default();
    if let Some(path) = &options.config_path {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return input_error(stderr, &format!("cannot read config `{}`: {e}", path.display())),
        };
        layout = match parse_config(&text, layout) {
            Ok(c) => c,
            Err(e) => return input_error(stderr, &format!("{}: {e}", path.display())),
        };
    }

    let (name, source) = if options.input_path == "-" {
        let mut buf = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut buf) {
            return input_error(stderr, &format!("cannot read standard input: {e}"));
        }
        ("<stdin>".to_string(), buf)
    } else {
        match std::fs::read_to_string(&options.input_path) {
            Ok(s) => (options.input_path.clone(), s),
            Err(e) => return input_error(stderr, &format!("cannot read `{}`: {e}", options.input_path)),
        }
    };

    let mut opts = Options {
        layout,
        nop_width: options.nop_width,
        strict: options.strict,
        ..Options::default()
    };
    opts.render.scale = options.scale;

    let compiled = match compile(&source, input, &opts) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "{}: error: {}", location(&name, e.span()), e.message());
            return EXIT_INPUT;
        }
    };
    for w in &compiled.warnings {
        let _ = writeln!(stderr, "{}: warning: {}", location(&name, w.span), w.message);
    }
    let bytes = compiled.emit(options.format.into());

    if options.output_path == "-" {
        if let Err(e) = stdout.write_all(&bytes).and_then(|_| stdout.flush()) {
            return input_error(stderr, &format!("cannot write standard output: {e}"));
        }
    } else if let Err(e) = write_atomically(Path::new(&options.output_path), &bytes) {
        return input_error(stderr, &format!("cannot write `{}`: {e}", options.output_path));
    }
    EXIT_OK
}

/// Write to a temporary file next to `path`, then rename it into place.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn registers_ir(table: &RegisterTable) -> Value {
    Value::Array(
        table
            .registers
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "type": r.reg_type.keyword(),
                    "length": r.length,
                    "first_wire": r.first_wire.0,
                    "label": r.label_template,
                    "out": r.out,
                })
            })
            .collect(),
    )
}

fn param_ir(p: &Param) -> Value {
    match p {
        Param::None => Value::Null,
        Param::Length(l) => json!({ "length_mm": l }),
        Param::Type(t) => json!({ "type": t.keyword() }),
        Param::Style(s) => json!({
            "color": s.color,
            "dash": s.dash.map(|d| format!("{d:?}").to_lowercase()),
            "line_width_mm": s.line_width,
        }),
    }
}

fn instances_ir(instances: &[GateInstance]) -> Value {
    Value::Array(
        instances
            .iter()
            .map(|i| {
                json!({
                    "gate": i.kind.name,
                    "value": i.value.as_ref().map(|v| v.raw.clone()),
                    "targets": i.targets.iter().map(|g| json!({
                        "wires": g.wires.iter().map(|w| w.0).collect::<Vec<_>>(),
                        "joint": g.joint,
                    })).collect::<Vec<_>>(),
                    "controls": i.controls.iter().map(|w| w.0).collect::<Vec<_>>(),
                    "neg_controls": i.neg_controls.iter().map(|w| w.0).collect::<Vec<_>>(),
                    "element_id": i.element_id,
                    "statement": i.statement,
                    "param": param_ir(&i.param),
                    "subcircuit": i.subcircuit.as_ref().map(|s| json!({
                        "registers": registers_ir(&s.table),
                        "instances": instances_ir(&s.instances),
                    })),
                })
            })
            .collect(),
    )
}

fn placements_ir(placements: &[Placement]) -> Value {
    Value::Array(
        placements
            .iter()
            .map(|p| {
                json!({
                    "instance": p.instance,
                    "x_center": p.x_center,
                    "half_width": p.half_width,
                    "span": [p.span.0 .0, p.span.1 .0],
                    "nested": p.nested.as_ref().map(|n| placements_ir(&n.placements)),
                })
            })
            .collect(),
    )
}

fn wires_ir(layout: &LayoutResult) -> Value {
    Value::Array(
        layout
            .wires
            .iter()
            .zip(&layout.timelines)
            .map(|(w, t)| {
                json!({
                    "wire": w.wire.0,
                    "name": w.name,
                    "label": w.label,
                    "segments": t.segments.iter().map(|s| json!({
                        "x_start": s.x_start,
                        "x_end": s.x_end,
                        "type": s.wire_type.keyword(),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn circuit_ir(elab: &Elaborated, layout: &LayoutResult) -> Value {
    json!({
        "registers": registers_ir(&elab.table),
        "instances": instances_ir(&elab.instances),
        "placements": placements_ir(&layout.placements),
        "wires": wires_ir(layout),
        "end_x": layout.end_x,
        "width": layout.width,
    })
}

/// Registers, instances and placements of one circuit, with sorted keys.
pub fn dump_ir(elab: &Elaborated, layout: &LayoutResult) -> Value {
    let mut v = circuit_ir(elab, layout);
    v["schema_version"] = json!(IR_SCHEMA_VERSION);
    v
}

pub fn dump_group_ir(circuits: &[(Elaborated, LayoutResult)], separators: &[String]) -> Value {
    json!({
        "schema_version": IR_SCHEMA_VERSION,
        "circuits": circuits.iter().map(|(e, l)| circuit_ir(e, l)).collect::<Vec<_>>(),
        "separators": separators,
    })
}
