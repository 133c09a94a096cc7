// SPDX-License-Identifier: Apache-2.0

//! Plain-text approximation of the TeX snippets used in gate values and labels.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStyle {
    Normal,
    Subscript,
    Superscript,
    Script,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TextRun {
    pub text: String,
    pub style: RunStyle,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StyledText {
    pub lines: Vec<Vec<TextRun>>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl StyledText {
    /// Each line flattened to a string.
    pub fn plain_lines(&self) -> Vec<String> {
        self.lines
            .iter()
            .map(|runs| runs.iter().map(|r| r.text.as_str()).collect())
            .collect()
    }

    /// Character count of the widest line.
    pub fn max_chars(&self) -> usize {
        self.plain_lines().iter().map(|l| l.chars().count()).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.max_chars() == 0
    }
}

/// Convert a value such as `$\ket{q_{\idx}}$` into styled runs.
pub fn render_value_text(raw: &str) -> StyledText {
    let mut p = TextParser {
        chars: raw.chars().collect(),
        pos: 0,
        out: StyledText {
            lines: vec![Vec::new()],
            warnings: Vec::new(),
        },
    };
    p.sequence(RunStyle::Normal, false);
    for line in &mut p.out.lines {
        merge_runs(line);
    }
    p.out
}

fn merge_runs(line: &mut Vec<TextRun>) {
    let mut merged: Vec<TextRun> = Vec::with_capacity(line.len());
    for run in line.drain(..) {
        if run.text.is_empty() {
            continue;
        }
        match merged.last_mut() {
            Some(last) if last.style == run.style => last.text.push_str(&run.text),
            _ => merged.push(run),
        }
    }
    *line = merged;
}

struct TextParser {
    chars: Vec<char>,
    pos: usize,
    out: StyledText,
}

impl TextParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn emit(&mut self, text: &str, style: RunStyle) {
        self.out.lines.last_mut().unwrap().push(TextRun {
            text: text.to_string(),
            style,
        });
    }

    /// Parse until end of input, or until the matching `}` when `group`.
    fn sequence(&mut self, style: RunStyle, group: bool) {
        while let Some(c) = self.peek() {
            if group && c == '}' {
                self.pos += 1;
                return;
            }
            self.token(style);
        }
    }

    fn token(&mut self, style: RunStyle) {
        let Some(c) = self.peek() else { return };
        self.pos += 1;
        match c {
            '$' => {}
            '{' => self.sequence(style, true),
            '}' => {}
            '_' => self.argument(script_of(style, RunStyle::Subscript)),
            '^' => self.argument(script_of(style, RunStyle::Superscript)),
            '~' => self.emit(" ", style),
            '\\' => self.control(style),
            c => self.emit(&c.to_string(), style),
        }
    }

    /// A braced group or a single token.
    fn argument(&mut self, style: RunStyle) {
        while self.peek() == Some(' ') {
            self.pos += 1;
        }
        self.token(style);
    }

    fn control(&mut self, style: RunStyle) {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        if word.is_empty() {
            match self.peek() {
                Some('\\') => {
                    self.pos += 1;
                    self.out.lines.push(Vec::new());
                }
                Some(c) => {
                    self.pos += 1;
                    let text = if c == ',' || c == ';' {
                        " ".to_string()
                    } else {
                        c.to_string()
                    };
                    self.emit(&text, style);
                }
                None => self.emit("\\", style),
            }
            return;
        }
        match word.as_str() {
            "ket" => {
                self.emit("|", style);
                self.argument(style);
                self.emit("\u{27e9}", style);
            }
            "bra" => {
                self.emit("\u{27e8}", style);
                self.argument(style);
                self.emit("|", style);
            }
            "mathcal" => self.argument(RunStyle::Script),
            "symbol" => {
                let arg_start = self.pos;
                self.skip_argument();
                let rest: String = self.chars[arg_start..self.pos].iter().collect();
                let text = format!("\\symbol{rest}");
                self.out
                    .warnings
                    .push(format!("`{text}` is not evaluated and is shown verbatim"));
                self.emit(&text, style);
            }
            _ => self.emit(&word, style),
        }
    }

    fn skip_argument(&mut self) {
        while self.peek() == Some(' ') {
            self.pos += 1;
        }
        if self.peek() != Some('{') {
            if self.peek().is_some() {
                self.pos += 1;
            }
            return;
        }
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            self.pos += 1;
            match c {
                '\\' => self.pos += 1,
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        return;
                    }
                }
                _ => {}
            }
        }
        self.pos = self.pos.min(self.chars.len());
    }
}

/// Scripts inside scripts keep the outer position.
fn script_of(outer: RunStyle, inner: RunStyle) -> RunStyle {
    match outer {
        RunStyle::Subscript | RunStyle::Superscript => outer,
        _ => inner,
    }
}
