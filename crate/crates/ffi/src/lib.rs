// SPDX-License-Identifier: Apache-2.0

//! C ABI over the `yqc` pipeline.
//!
//! Handles are opaque and owned by the caller: every `*_new` or successful
//! `yqc_compile` must be paired with the matching `*_free`. Functions never
//! unwind across the boundary; a caught panic reports `YQC_STATUS_PANIC`.
//! The last error is stored per thread and stays valid until the next call
//! that fails on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use yqc::{compile, Compiled, Error, InputFormat, Options, OutputFormat};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YqcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ParseError = 4,
    ElaborationError = 5,
    StrictWarning = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YqcInput {
    Yquant = 0,
    Qasm = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YqcFormat {
    Svg = 0,
    Tikz = 1,
    IrJson = 2,
}

/// Compilation settings. Created by `yqc_options_new`.
pub struct YqcOptions {
    inner: Options,
}

/// Rendered bytes plus diagnostics. Created by `yqc_compile`.
pub struct YqcOutput {
    bytes: Vec<u8>,
    warnings: Vec<CString>,
}

struct LastError {
    message: CString,
    line: u32,
    column: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>, line: u32, column: u32) {
    // interior NULs cannot cross the ABI; they become spaces
    let text = message.into().replace('\0', " ");
    let message = CString::new(text).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(LastError { message, line, column }));
}

fn fail(status: YqcStatus, message: impl Into<String>) -> YqcStatus {
    set_error(message, 0, 0);
    status
}

fn guard(f: impl FnOnce() -> YqcStatus) -> YqcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(YqcStatus::Panic, "internal error: panic caught at the C boundary"),
    }
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for reads.
unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, YqcStatus> {
    if p.is_null() {
        return Err(fail(YqcStatus::NullArgument, format!("`{what}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(YqcStatus::InvalidUtf8, format!("`{what}` is not valid UTF-8")))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn yqc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default options. Never returns null.
#[no_mangle]
pub extern "C" fn yqc_options_new() -> *mut YqcOptions {
    Box::into_raw(Box::new(YqcOptions {
        inner: Options::default(),
    }))
}

/// # Safety
/// `options` is null or a pointer from `yqc_options_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn yqc_options_free(options: *mut YqcOptions) {
    if !options.is_null() {
        drop(Box::from_raw(options));
    }
}

/// Set one option by name.
///
/// Layout keys take lengths (`mm`, `cm`, `pt`, `bp`, `in`; bare numbers are
/// mm). Also accepted: `nop_width` (length), `scale` (positive number),
/// `margin` (length), `font_family` and `strict` (`true`/`false`).
///
/// # Safety
/// `options` is a live handle; `key` and `value` are NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn yqc_options_set(
    options: *mut YqcOptions,
    key: *const c_char,
    value: *const c_char,
) -> YqcStatus {
    guard(|| {
        if options.is_null() {
            return fail(YqcStatus::NullArgument, "`options` is null");
        }
        let key = match c_str(key, "key") {
            Ok(k) => k,
            Err(s) => return s,
        };
        let value = match c_str(value, "value") {
            Ok(v) => v,
            Err(s) => return s,
        };
        let options = &mut *options;
        match apply_option(&mut options.inner, key, value) {
            Ok(()) => YqcStatus::Ok,
            Err(msg) => fail(YqcStatus::InvalidArgument, msg),
        }
    })
}

fn apply_option(opts: &mut Options, key: &str, value: &str) -> Result<(), String> {
    match key {
        "nop_width" => {
            let w = yqc::layout::parse_length(value)?;
            if w < 0.0 {
                return Err("`nop_width` must not be negative".into());
            }
            opts.nop_width = Some(w);
        }
        "scale" => {
            let s: f64 = value.trim().parse().map_err(|_| format!("`{value}` is not a number"))?;
            if !(s.is_finite() && s > 0.0) {
                return Err("`scale` must be positive".into());
            }
            opts.render.scale = s;
        }
        "margin" => {
            let m = yqc::layout::parse_length(value)?;
            if m < 0.0 {
                return Err("`margin` must not be negative".into());
            }
            opts.render.margin = m;
        }
        "font_family" => opts.render.font_family = value.to_string(),
        "strict" => {
            opts.strict = match value.trim() {
                "true" | "1" => true,
                "false" | "0" => false,
                _ => return Err(format!("`{value}` is not a boolean")),
            }
        }
        _ => {
            let mut layout = opts.layout.clone();
            layout.set(key, value)?;
            layout.validate()?;
            opts.layout = layout;
        }
    }
    Ok(())
}

/// Compile `source` (UTF-8, `source_len` bytes, no terminator needed).
///
/// `input` is a `YqcInput` value and `format` a `YqcFormat` value; anything
/// else yields `YQC_STATUS_INVALID_ARGUMENT`.
/// On success `*out` receives a new handle. On failure `*out` is set to null
/// and the message and position are available from `yqc_last_error_*`.
/// A null `options` means defaults.
///
/// # Safety
/// `source` is valid for `source_len` bytes; `options` is null or live;
/// `out` is a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn yqc_compile(
    source: *const u8,
    source_len: usize,
    input: u32,
    format: u32,
    options: *const YqcOptions,
    out: *mut *mut YqcOutput,
) -> YqcStatus {
    guard(|| {
        if out.is_null() {
            return fail(YqcStatus::NullArgument, "`out` is null");
        }
        *out = ptr::null_mut();
        if source.is_null() && source_len > 0 {
            return fail(YqcStatus::NullArgument, "`source` is null");
        }
        let bytes = if source_len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(source, source_len)
        };
        let Ok(text) = std::str::from_utf8(bytes) else {
            return fail(YqcStatus::InvalidUtf8, "source is not valid UTF-8");
        };
        let defaults = Options::default();
        let opts = if options.is_null() {
            &defaults
        } else {
            &(*options).inner
        };
        let input = match input {
            x if x == YqcInput::Yquant as u32 => InputFormat::Yquant,
            x if x == YqcInput::Qasm as u32 => InputFormat::Qasm,
            _ => return fail(YqcStatus::InvalidArgument, format!("unknown input kind {input}")),
        };
        let format = match format {
            x if x == YqcFormat::Svg as u32 => OutputFormat::Svg,
            x if x == YqcFormat::Tikz as u32 => OutputFormat::Tikz,
            x if x == YqcFormat::IrJson as u32 => OutputFormat::IrJson,
            _ => return fail(YqcStatus::InvalidArgument, format!("unknown output format {format}")),
        };
        match compile(text, input, opts) {
            Ok(compiled) => {
                *out = Box::into_raw(Box::new(output(&compiled, format)));
                YqcStatus::Ok
            }
            Err(e) => {
                let (line, column) = e.span().map_or((0, 0), |s| (s.line, s.column));
                set_error(e.message(), line, column);
                match e {
                    Error::Parse(_) => YqcStatus::ParseError,
                    Error::Elab(_) => YqcStatus::ElaborationError,
                    Error::Strict(_) => YqcStatus::StrictWarning,
                }
            }
        }
    })
}

fn output(compiled: &Compiled, format: OutputFormat) -> YqcOutput {
    let warnings = compiled
        .warnings
        .iter()
        .map(|w| {
            let text = match w.span {
                Some(s) => format!("{}:{}: {}", s.line, s.column, w.message),
                None => w.message.clone(),
            };
            CString::new(text.replace('\0', " ")).expect("NULs removed")
        })
        .collect();
    YqcOutput {
        bytes: compiled.emit(format),
        warnings,
    }
}

/// Pointer to the rendered bytes; `*len` receives their count.
/// The bytes are not NUL-terminated and live as long as the handle.
///
/// # Safety
/// `output` is null or live; `len` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn yqc_output_data(output: *const YqcOutput, len: *mut usize) -> *const u8 {
    if output.is_null() {
        if !len.is_null() {
            *len = 0;
        }
        return ptr::null();
    }
    let output = &*output;
    let bytes = &output.bytes;
    if !len.is_null() {
        *len = bytes.len();
    }
    bytes.as_ptr()
}

/// # Safety
/// `output` is null or live.
#[no_mangle]
pub unsafe extern "C" fn yqc_output_warning_count(output: *const YqcOutput) -> usize {
    if output.is_null() {
        0
    } else {
        let output = &*output;
        output.warnings.len()
    }
}

/// Warning `index` formatted as `line:column: message`, or null when out of
/// range. The string lives as long as the handle.
///
/// # Safety
/// `output` is null or live.
#[no_mangle]
pub unsafe extern "C" fn yqc_output_warning(output: *const YqcOutput, index: usize) -> *const c_char {
    if output.is_null() {
        return ptr::null();
    }
    let output = &*output;
    output.warnings.get(index).map_or(ptr::null(), |w| w.as_ptr())
}

/// # Safety
/// `output` is null or a handle from `yqc_compile` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn yqc_output_free(output: *mut YqcOutput) {
    if !output.is_null() {
        drop(Box::from_raw(output));
    }
}

/// Message of the last failure on this thread, or null if none.
#[no_mangle]
pub extern "C" fn yqc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

/// 1-based line of the last failure; 0 when it has no source position.
#[no_mangle]
pub extern "C" fn yqc_last_error_line() -> u32 {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |e| e.line))
}

/// 1-based column of the last failure; 0 when it has no source position.
#[no_mangle]
pub extern "C" fn yqc_last_error_column() -> u32 {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |e| e.column))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str, opts: *const YqcOptions) -> (YqcStatus, *mut YqcOutput) {
        let mut out = ptr::null_mut();
        let status = unsafe {
            yqc_compile(
                src.as_ptr(),
                src.len(),
                YqcInput::Yquant as u32,
                YqcFormat::Svg as u32,
                opts,
                &mut out,
            )
        };
        (status, out)
    }

    #[test]
    fn compiles_with_default_options() {
        let (status, out) = run("qubit a; h a;", ptr::null());
        assert_eq!(status, YqcStatus::Ok);
        let mut len = 0;
        let data = unsafe { yqc_output_data(out, &mut len) };
        let bytes = unsafe { std::slice::from_raw_parts(data, len) };
        assert!(bytes.starts_with(b"<?xml"));
        unsafe { yqc_output_free(out) };
    }

    #[test]
    fn parse_error_sets_position() {
        let (status, out) = run("qubit a;\nh a", ptr::null());
        assert_eq!(status, YqcStatus::ParseError);
        assert!(out.is_null());
        assert_eq!(yqc_last_error_line(), 2);
        assert!(yqc_last_error_column() > 0);
    }

    #[test]
    fn option_keys() {
        let mut o = Options::default();
        apply_option(&mut o, "column_gap", "2pt").unwrap();
        assert!((o.layout.column_gap - 2.0 * 25.4 / 72.27).abs() < 1e-12);
        apply_option(&mut o, "strict", "true").unwrap();
        assert!(o.strict);
        assert!(apply_option(&mut o, "scale", "0").is_err());
        assert!(apply_option(&mut o, "wire_gap", "-1").is_err());
        assert!(apply_option(&mut o, "bogus", "1").is_err());
    }
}
