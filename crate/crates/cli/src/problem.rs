//! Problem files: a small line-oriented format describing a frame, its
//! model, the sources and everything a rule may need.
//!
//! ```text
//! # incompleteness example
//! frame: A B C
//! model: shafer
//! source m1: A=0.2, B=0.4, C=0.3, A|B=0.1
//! source m2: A=0.1, B=0.3, C=0.4, A|B=0.2
//! event: constrain C=0
//! ```

use std::fmt;

use belief_fusion::special::{Interval, IntervalMass};
use belief_fusion::{Element, Frame, FusionError, MassFunction};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelDecl {
    Free,
    Shafer,
    /// Expressions declared empty, on top of the free model.
    Constrain(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceDecl {
    pub name: String,
    /// Focal text and mass, in file order.
    pub masses: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDecl {
    pub case: String,
    pub recipients: Vec<String>,
    pub right: Option<String>,
}

/// Parsed problem file. Expressions are kept as written so that printing
/// gives the file back; `frame`, `sources` and friends resolve them.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub labels: Vec<String>,
    /// Set by `frame-intervals:`; focals are then `[lo,hi]` intervals.
    pub intervals: bool,
    pub model: ModelDecl,
    pub events: Vec<String>,
    pub sources: Vec<SourceDecl>,
    pub scenario: Option<ScenarioDecl>,
    pub params: Vec<(String, String)>,
    pub discounts: Vec<(String, f64)>,
}

fn decimal(text: &str, line: usize) -> Result<f64, ParseError> {
    let t = text.trim();
    let valid = !t.is_empty()
        && t.chars().all(|c| c.is_ascii_digit() || c == '.')
        && t.matches('.').count() <= 1
        && t != ".";
    match t.parse::<f64>() {
        Ok(v) if valid => Ok(v),
        _ => fail(line, format!("bad decimal `{t}`")),
    }
}

/// Splits `<lhs>=<rhs>` at the last `=`.
fn assignment(text: &str, line: usize) -> Result<(&str, &str), ParseError> {
    match text.rsplit_once('=') {
        Some((l, r)) if !l.trim().is_empty() => Ok((l.trim(), r.trim())),
        _ => fail(line, format!("expected `<expr>=<value>`, got `{}`", text.trim())),
    }
}

/// Parses `<expr>=0`, returning the expression.
fn empty_declaration(text: &str, line: usize) -> Result<String, ParseError> {
    let (lhs, rhs) = assignment(text, line)?;
    if decimal(rhs, line)? != 0.0 {
        return fail(line, format!("constraints must read `<expr>=0`, got `{}`", text.trim()));
    }
    Ok(lhs.to_string())
}

pub fn parse_interval(text: &str) -> Option<Interval> {
    let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?;
    let (lo, hi) = inner.split_once(',')?;
    Interval::new(lo.trim().parse().ok()?, hi.trim().parse().ok()?).ok()
}

/// Splits a source body on the commas that are outside brackets.
fn split_focals(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in body.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&body[start..]);
    out
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem, ParseError> {
        let mut labels = None;
        let mut intervals = false;
        let mut model = None;
        let mut problem = Problem {
            labels: Vec::new(),
            intervals: false,
            model: ModelDecl::Shafer,
            events: Vec::new(),
            sources: Vec::new(),
            scenario: None,
            params: Vec::new(),
            discounts: Vec::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((head, body)) = content.split_once(':') else {
                return fail(line, format!("expected `<keyword>: ...`, got `{content}`"));
            };
            let body = body.trim();
            match head.trim() {
                "frame" | "frame-intervals" if labels.is_some() => return fail(line, "frame declared twice"),
                "frame" => {
                    let names: Vec<String> = body.split_whitespace().map(str::to_string).collect();
                    if names.is_empty() {
                        return fail(line, "frame needs at least one label");
                    }
                    labels = Some(names);
                }
                "frame-intervals" => {
                    if !body.is_empty() {
                        return fail(line, "frame-intervals takes no labels");
                    }
                    intervals = true;
                    labels = Some(Vec::new());
                }
                "model" if model.is_some() => return fail(line, "model declared twice"),
                "model" => {
                    model = Some(match body {
                        "free" => ModelDecl::Free,
                        "shafer" => ModelDecl::Shafer,
                        _ => match body.strip_prefix("constrain") {
                            Some(rest) if rest.starts_with(char::is_whitespace) => ModelDecl::Constrain(
                                rest.split(',')
                                    .map(|c| empty_declaration(c, line))
                                    .collect::<Result<_, _>>()?,
                            ),
                            _ => return fail(line, format!("unknown model `{body}`")),
                        },
                    })
                }
                "event" => match body.strip_prefix("constrain") {
                    Some(rest) if rest.starts_with(char::is_whitespace) => {
                        problem.events.push(empty_declaration(rest, line)?)
                    }
                    _ => return fail(line, format!("unknown event `{body}`")),
                },
                // Shorthand for an event, with an optional time stamp.
                "constrain" => {
                    let expr = match body.split_once(" at ") {
                        Some((e, t)) if t.trim().starts_with("t=") => e,
                        _ => body,
                    };
                    problem.events.push(empty_declaration(expr, line)?);
                }
                "scenario" => {
                    if problem.scenario.is_some() {
                        return fail(line, "scenario declared twice");
                    }
                    problem.scenario = Some(parse_scenario(body, line)?);
                }
                "param" => {
                    let Some((k, v)) = body.split_once('=') else {
                        return fail(line, "expected `param: <key>=<value>`");
                    };
                    problem.params.push((k.trim().to_string(), v.trim().to_string()));
                }
                "discount" => {
                    let (name, v) = assignment(body, line)?;
                    problem.discounts.push((name.to_string(), decimal(v, line)?));
                }
                head => match head.strip_prefix("source") {
                    Some(name) if name.starts_with(char::is_whitespace) && !name.trim().is_empty() => {
                        let name = name.trim().to_string();
                        if problem.sources.iter().any(|s| s.name == name) {
                            return fail(line, format!("source `{name}` declared twice"));
                        }
                        let masses = split_focals(body)
                            .into_iter()
                            .map(|f| {
                                let (e, v) = assignment(f, line)?;
                                Ok((e.to_string(), decimal(v, line)?))
                            })
                            .collect::<Result<_, ParseError>>()?;
                        problem.sources.push(SourceDecl { name, masses });
                    }
                    _ => return fail(line, format!("unknown keyword `{head}`")),
                },
            }
        }
        let Some(labels) = labels else {
            return fail(0, "missing `frame:` line");
        };
        problem.labels = labels;
        problem.intervals = intervals;
        problem.model = match model {
            Some(m) => m,
            None if intervals => ModelDecl::Shafer,
            None => return fail(0, "missing `model:` line"),
        };
        if problem.sources.is_empty() {
            return fail(0, "no sources");
        }
        problem.validate()?;
        Ok(problem)
    }

    /// Resolves every expression once so that errors surface at parse time.
    fn validate(&self) -> Result<(), ParseError> {
        let lift = |e: FusionError| ParseError {
            line: 0,
            message: e.to_string(),
        };
        if self.intervals {
            self.interval_sources().map_err(lift)?;
            return Ok(());
        }
        let frame = self.frame().map_err(lift)?;
        for e in &self.events {
            resolve(&frame, e).map_err(lift)?;
        }
        self.sources().map_err(lift)?;
        if let Some(s) = &self.scenario {
            for r in s.recipients.iter().chain(&s.right) {
                resolve(&frame, r).map_err(lift)?;
            }
        }
        for (name, _) in &self.discounts {
            if !self.sources.iter().any(|s| &s.name == name) {
                return fail(0, format!("discount for unknown source `{name}`"));
            }
        }
        Ok(())
    }

    pub fn source_names(&self) -> Vec<&str> {
        self.sources.iter().map(|s| s.name.as_str()).collect()
    }

    /// The frame under the declared model, before any event.
    pub fn frame(&self) -> Result<Frame, FusionError> {
        match &self.model {
            ModelDecl::Free => Frame::free(&self.labels),
            ModelDecl::Shafer => Frame::shafer(&self.labels),
            ModelDecl::Constrain(exprs) => {
                let mut frame = Frame::free(&self.labels)?;
                for e in exprs {
                    let el = frame.parse(e)?;
                    frame = frame.constrain(&el)?;
                }
                Ok(frame)
            }
        }
    }

    pub fn events(&self, frame: &Frame) -> Result<Vec<Element>, FusionError> {
        self.events.iter().map(|e| resolve(frame, e)).collect()
    }

    /// Sources on the declared model, with discounts applied.
    pub fn sources(&self) -> Result<Vec<MassFunction>, FusionError> {
        let frame = self.frame()?;
        self.sources
            .iter()
            .map(|s| {
                let mut m = MassFunction::new(&frame);
                for (e, v) in &s.masses {
                    m.insert(&resolve(&frame, e)?, *v)?;
                }
                match self.discounts.iter().find(|(n, _)| *n == s.name) {
                    Some((_, r)) => m.discount(*r),
                    None => Ok(m),
                }
            })
            .collect()
    }

    pub fn interval_sources(&self) -> Result<Vec<IntervalMass>, FusionError> {
        self.sources
            .iter()
            .map(|s| {
                let mut m = IntervalMass::new();
                for (e, v) in &s.masses {
                    let i = parse_interval(e).ok_or(FusionError::NonIntervalFocal)?;
                    m.insert(i, *v)?;
                }
                Ok(m)
            })
            .collect()
    }
}

/// Parses an element, also accepting `∅` and, unless it is a label, `I`.
pub fn resolve(frame: &Frame, text: &str) -> Result<Element, FusionError> {
    match text.trim() {
        "∅" => Ok(frame.empty_element()),
        "I" if frame.label_index("I").is_none() => Ok(frame.total_ignorance()),
        t => frame.parse(t),
    }
}

fn parse_scenario(body: &str, line: usize) -> Result<ScenarioDecl, ParseError> {
    let mut words = body.split_whitespace();
    if words.next() != Some("case") {
        return fail(line, "expected `scenario: case <id> ...`");
    }
    let Some(case) = words.next() else {
        return fail(line, "missing case id");
    };
    let mut out = ScenarioDecl {
        case: case.to_string(),
        recipients: Vec::new(),
        right: None,
    };
    let mut mode = None;
    for w in words {
        match (w, mode) {
            ("recipients", _) => mode = Some("recipients"),
            ("right", _) => mode = Some("right"),
            (e, Some("recipients")) => out.recipients.push(e.to_string()),
            (e, Some("right")) if out.right.is_none() => out.right = Some(e.to_string()),
            (e, _) => return fail(line, format!("unexpected `{e}` in scenario")),
        }
    }
    if mode == Some("right") && out.right.is_none() {
        return fail(line, "`right` needs an expression");
    }
    Ok(out)
}

fn join_decimal(v: f64) -> String {
    // Shortest form that reads back to the same value.
    let s = format!("{v}");
    if s.contains('e') {
        format!("{v:.17}").trim_end_matches('0').to_string()
    } else {
        s
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals {
            writeln!(f, "frame-intervals:")?;
        } else {
            writeln!(f, "frame: {}", self.labels.join(" "))?;
            match &self.model {
                ModelDecl::Free => writeln!(f, "model: free")?,
                ModelDecl::Shafer => writeln!(f, "model: shafer")?,
                ModelDecl::Constrain(exprs) => {
                    let parts: Vec<String> = exprs.iter().map(|e| format!("{e}=0")).collect();
                    writeln!(f, "model: constrain {}", parts.join(", "))?
                }
            }
        }
        for s in &self.sources {
            let parts: Vec<String> = s.masses.iter().map(|(e, v)| format!("{e}={}", join_decimal(*v))).collect();
            writeln!(f, "source {}: {}", s.name, parts.join(", "))?;
        }
        for e in &self.events {
            writeln!(f, "event: constrain {e}=0")?;
        }
        if let Some(s) = &self.scenario {
            write!(f, "scenario: case {}", s.case)?;
            if !s.recipients.is_empty() {
                write!(f, " recipients {}", s.recipients.join(" "))?;
            }
            if let Some(r) = &s.right {
                write!(f, " right {r}")?;
            }
            writeln!(f)?;
        }
        for (k, v) in &self.params {
            writeln!(f, "param: {k}={v}")?;
        }
        for (n, v) in &self.discounts {
            writeln!(f, "discount: {n}={}", join_decimal(*v))?;
        }
        Ok(())
    }
}
