//! Line-oriented algebra definition files.
//!
//! ```text
//! # comment
//! space: x0 x1 x2 ; u
//! metric: + - -
//! operator J01 { x0: -x1 ; x1: -x0 }
//! family Pu over k=0..3 { u: u^k }
//! ```
//!
//! Declarations may appear in any order. A `{` block may span several
//! lines; inside it, entries are separated by `;` or line breaks. Omitted
//! coefficients are zero. The metric defaults to all `+`.

use std::collections::BTreeSet;

use jetinv_core::exprcore::{parse_expr_with_params, Expr, ExprError};
use jetinv_core::jetspace::{JetCoord, Metric, SpaceError, SpaceSpec};
use jetinv_core::liealg::{LieError, VectorField};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}, column {col}: unknown variable `{name}`")]
    UnknownVariable { line: usize, col: usize, name: String },
    #[error("line {line}: metric has {got} signs for {expected} independent variables")]
    MetricLength { line: usize, expected: usize, got: usize },
    #[error("line {line}: {source}")]
    Space { line: usize, source: SpaceError },
    #[error("line {line}: {source}")]
    Field { line: usize, source: LieError },
    #[error("no operators")]
    NoOperators,
}

/// 1-based line and column of a character.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

/// A slice of source text that remembers where each character came from.
#[derive(Clone, Copy)]
struct Span<'a> {
    chars: &'a [(char, Pos)],
    /// Position reported for an empty span.
    end: Pos,
}

impl<'a> Span<'a> {
    fn text(&self) -> String {
        self.chars.iter().map(|(c, _)| c).collect()
    }

    fn pos(&self, i: usize) -> Pos {
        self.chars.get(i).map_or(self.end, |(_, p)| *p)
    }

    fn start(&self) -> Pos {
        self.pos(0)
    }

    fn sub(&self, from: usize, to: usize) -> Span<'a> {
        Span { chars: &self.chars[from..to], end: self.pos(to) }
    }

    fn trim(&self) -> Span<'a> {
        let a = self.chars.iter().position(|(c, _)| !c.is_whitespace()).unwrap_or(self.chars.len());
        let b = self.chars.iter().rposition(|(c, _)| !c.is_whitespace()).map_or(a, |i| i + 1);
        self.sub(a, b)
    }

    fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    fn find(&self, c: char) -> Option<usize> {
        self.chars.iter().position(|(x, _)| *x == c)
    }

    fn split_once(&self, c: char) -> Option<(Span<'a>, Span<'a>)> {
        self.find(c).map(|i| (self.sub(0, i), self.sub(i + 1, self.chars.len())))
    }

    fn split_any(&self, seps: &[char]) -> Vec<Span<'a>> {
        let mut out = Vec::new();
        let mut from = 0;
        for (i, (c, _)) in self.chars.iter().enumerate() {
            if seps.contains(c) {
                out.push(self.sub(from, i));
                from = i + 1;
            }
        }
        out.push(self.sub(from, self.chars.len()));
        out
    }

    /// Whitespace-separated words.
    fn words(&self) -> Vec<Span<'a>> {
        self.split_any(&[' ', '\t', '\n', '\r']).into_iter().filter(|w| !w.is_empty()).collect()
    }

    /// Leading identifier and the rest.
    fn ident(&self) -> (Span<'a>, Span<'a>) {
        let n = self.chars.iter().take_while(|(c, _)| c.is_ascii_alphanumeric() || *c == '_').count();
        (self.sub(0, n), self.sub(n, self.chars.len()))
    }

    fn error(&self, i: usize, message: impl Into<String>) -> AlgebraError {
        let p = self.pos(i);
        AlgebraError::Syntax { line: p.line, col: p.col, message: message.into() }
    }
}

/// A declared coefficient: target coordinate and its expression text.
#[derive(Clone, Debug)]
struct Entry {
    target: JetCoord,
    chars: Vec<(char, Pos)>,
    end: Pos,
}

#[derive(Clone, Debug)]
enum Decl {
    Operator { field: VectorField },
    Family { name: String, param: String, lo: i64, hi: i64, entries: Vec<Entry>, line: usize },
}

/// A parsed algebra file.
#[derive(Clone, Debug)]
pub struct AlgebraFile {
    space: SpaceSpec,
    decls: Vec<Decl>,
}

impl AlgebraFile {
    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    /// Operators in file order, families expanded with `k` ascending. With
    /// `truncation`, every family's upper bound is replaced by it. Each
    /// operator is tagged with its family parameter (0 for plain
    /// operators).
    pub fn members(&self, truncation: Option<i64>) -> Result<Vec<(i64, VectorField)>, AlgebraError> {
        let mut out = Vec::new();
        for d in &self.decls {
            match d {
                Decl::Operator { field } => out.push((0, field.clone())),
                Decl::Family { name, param, lo, hi, entries, line } => {
                    for k in *lo..=truncation.unwrap_or(*hi) {
                        let label = format!("{name}[{param}={k}]");
                        let f = build_field(&label, entries, &self.space, &[(param, k)], *line)?;
                        out.push((k, f));
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(AlgebraError::NoOperators);
        }
        Ok(out)
    }

    pub fn operators(&self, truncation: Option<i64>) -> Result<Vec<VectorField>, AlgebraError> {
        Ok(self.members(truncation)?.into_iter().map(|(_, f)| f).collect())
    }
}

/// Parses a file and checks that it declares at least one operator.
pub fn parse_algebra_file(text: &str) -> Result<(SpaceSpec, Vec<VectorField>), AlgebraError> {
    let file = parse_algebra(text)?;
    let ops = file.operators(None)?;
    Ok((file.space, ops))
}

/// Parses a file without instantiating families.
pub fn parse_algebra(text: &str) -> Result<AlgebraFile, AlgebraError> {
    let statements = split_statements(text)?;
    let mut space_decl: Option<(Span, Vec<String>, Vec<String>)> = None;
    let mut metric_decl: Option<(usize, Vec<i8>)> = None;
    let mut rest = Vec::new();
    for st in &statements {
        let span = Span { chars: st, end: st.last().map_or(Pos { line: 1, col: 1 }, |(_, p)| *p) }.trim();
        let (kw, after) = span.ident();
        match kw.text().as_str() {
            "space" => {
                if space_decl.is_some() {
                    return Err(span.error(0, "duplicate `space:` declaration"));
                }
                let body = expect_colon(after)?;
                let Some((indep, dep)) = body.split_once(';') else {
                    return Err(body.error(body.chars.len(), "expected `;` between independent and dependent names"));
                };
                let names = |s: Span| s.words().iter().map(Span::text).collect::<Vec<_>>();
                space_decl = Some((span, names(indep), names(dep)));
            }
            "metric" => {
                if metric_decl.is_some() {
                    return Err(span.error(0, "duplicate `metric:` declaration"));
                }
                let body = expect_colon(after)?;
                let mut signs = Vec::new();
                for w in body.words() {
                    signs.push(match w.text().as_str() {
                        "+" | "+1" => 1,
                        "-" | "-1" | "−" => -1,
                        other => return Err(w.error(0, format!("metric sign must be + or -, found `{other}`"))),
                    });
                }
                metric_decl = Some((span.start().line, signs));
            }
            "operator" | "family" => rest.push(span),
            "" => return Err(span.error(0, "expected a declaration")),
            other => return Err(span.error(0, format!("unknown declaration `{other}`"))),
        }
    }
    let Some((space_span, indep, dep)) = space_decl else {
        return Err(AlgebraError::Syntax { line: 1, col: 1, message: "missing `space:` declaration".into() });
    };
    let line = space_span.start().line;
    let metric = match metric_decl {
        Some((mline, signs)) => {
            if signs.len() != indep.len() {
                return Err(AlgebraError::MetricLength { line: mline, expected: indep.len(), got: signs.len() });
            }
            Metric::new(signs)
        }
        None => Metric::euclidean(indep.len()),
    };
    let space = SpaceSpec::new(indep, dep, metric).map_err(|source| AlgebraError::Space { line, source })?;

    let mut names = BTreeSet::new();
    let mut decls = Vec::new();
    for span in rest {
        let (kw, after) = span.ident();
        let after = after.trim();
        let (name, after) = after.ident();
        if name.is_empty() {
            return Err(after.error(0, format!("expected a name after `{}`", kw.text())));
        }
        if !names.insert(name.text()) {
            return Err(name.error(0, format!("duplicate operator name `{}`", name.text())));
        }
        let after = after.trim();
        let line = span.start().line;
        if kw.text() == "operator" {
            let entries = parse_block(after, &space)?;
            let field = build_field(&name.text(), &entries, &space, &[], line)?;
            decls.push(Decl::Operator { field });
        } else {
            let (param, lo, hi, block) = parse_range(after)?;
            let entries = parse_block(block, &space)?;
            for k in lo..=hi {
                build_field(&name.text(), &entries, &space, &[(&param, k)], line)?;
            }
            decls.push(Decl::Family { name: name.text(), param, lo, hi, entries, line });
        }
    }
    Ok(AlgebraFile { space, decls })
}

/// Groups characters into statements: one per line, except that an open
/// `{` continues the statement until its `}`. Comments are dropped.
fn split_statements(text: &str) -> Result<Vec<Vec<(char, Pos)>>, AlgebraError> {
    let mut out = Vec::new();
    let mut cur: Vec<(char, Pos)> = Vec::new();
    let mut open: Option<Pos> = None;
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for (ci, c) in line.chars().enumerate() {
            let p = Pos { line: li + 1, col: ci + 1 };
            match c {
                '{' if open.is_some() => {
                    return Err(AlgebraError::Syntax { line: p.line, col: p.col, message: "nested `{`".into() })
                }
                '{' => open = Some(p),
                '}' if open.is_none() => {
                    return Err(AlgebraError::Syntax { line: p.line, col: p.col, message: "unmatched `}`".into() })
                }
                '}' => open = None,
                _ => {}
            }
            cur.push((c, p));
        }
        if open.is_some() {
            cur.push(('\n', Pos { line: li + 1, col: line.chars().count() + 1 }));
        } else if !cur.iter().all(|(c, _)| c.is_whitespace()) {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.clear();
        }
    }
    if let Some(p) = open {
        return Err(AlgebraError::Syntax { line: p.line, col: p.col, message: "unclosed `{`".into() });
    }
    Ok(out)
}

fn expect_colon(s: Span) -> Result<Span, AlgebraError> {
    let s = s.trim();
    match s.chars.first() {
        Some((':', _)) => Ok(s.sub(1, s.chars.len())),
        _ => Err(s.error(0, "expected `:`")),
    }
}

/// `k=a..b { ... }` → `(k, a, b, block)`.
fn parse_range(s: Span) -> Result<(String, i64, i64, Span), AlgebraError> {
    let (over, rest) = s.ident();
    if over.text() != "over" {
        return Err(s.error(0, "expected `over <name>=<a>..<b>`"));
    }
    let rest = rest.trim();
    let (param, rest) = rest.ident();
    if param.is_empty() || !param.text().starts_with(|c: char| c.is_ascii_alphabetic()) {
        return Err(rest.error(0, "expected a parameter name"));
    }
    let rest = rest.trim();
    let Some(brace) = rest.find('{') else {
        return Err(rest.error(rest.chars.len(), "expected `{`"));
    };
    let range = rest.sub(0, brace).trim();
    let block = rest.sub(brace, rest.chars.len());
    let text = range.text();
    let parsed = text
        .strip_prefix('=')
        .and_then(|r| r.split_once(".."))
        .and_then(|(a, b)| Some((a.trim().parse::<i64>().ok()?, b.trim().parse::<i64>().ok()?)));
    match parsed {
        Some((lo, hi)) if lo <= hi => Ok((param.text(), lo, hi, block)),
        Some(_) => Err(range.error(0, "empty parameter range")),
        None => Err(range.error(0, "expected `=<a>..<b>` with integer bounds")),
    }
}

/// `{ target: expr ; ... }`.
fn parse_block(s: Span, space: &SpaceSpec) -> Result<Vec<Entry>, AlgebraError> {
    let s = s.trim();
    if s.chars.first().map(|(c, _)| *c) != Some('{') {
        return Err(s.error(0, "expected `{`"));
    }
    let Some(close) = s.find('}') else {
        return Err(s.error(s.chars.len(), "expected `}`"));
    };
    let trailing = s.sub(close + 1, s.chars.len()).trim();
    if !trailing.is_empty() {
        return Err(trailing.error(0, "unexpected text after `}`"));
    }
    let mut entries: Vec<Entry> = Vec::new();
    for item in s.sub(1, close).split_any(&[';', '\n']) {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let Some((key, value)) = item.split_once(':') else {
            return Err(item.error(0, "expected `<variable>: <expression>`"));
        };
        let key = key.trim();
        let name = key.text();
        let target = space
            .resolve(&name)
            .filter(|c| c.is_point_coord())
            .ok_or_else(|| AlgebraError::UnknownVariable { line: key.start().line, col: key.start().col, name: name.clone() })?;
        if entries.iter().any(|e| e.target == target) {
            return Err(key.error(0, format!("duplicate coefficient for `{name}`")));
        }
        let value = value.trim();
        if value.is_empty() {
            return Err(value.error(0, "missing expression"));
        }
        entries.push(Entry { target, chars: value.chars.to_vec(), end: value.end });
    }
    Ok(entries)
}

fn build_field(
    label: &str,
    entries: &[Entry],
    space: &SpaceSpec,
    params: &[(&str, i64)],
    line: usize,
) -> Result<VectorField, AlgebraError> {
    let mut xi = vec![Expr::zero(); space.p()];
    let mut eta = vec![Expr::zero(); space.q()];
    for e in entries {
        let span = Span { chars: &e.chars, end: e.end };
        let value = parse_expr_with_params(&span.text(), space, params).map_err(|err| expr_error(&span, err))?;
        match e.target.kind() {
            jetinv_core::jetspace::CoordKind::Indep(i) => xi[i] = value,
            jetinv_core::jetspace::CoordKind::Dep(a) => eta[a] = value,
            jetinv_core::jetspace::CoordKind::Deriv(..) => unreachable!("targets are point coordinates"),
        }
    }
    VectorField::new(label, xi, eta, space).map_err(|source| AlgebraError::Field { line, source })
}

fn expr_error(span: &Span, err: ExprError) -> AlgebraError {
    let at = |pos: usize| span.pos(pos);
    match err {
        ExprError::Syntax { pos, message } => {
            let p = at(pos);
            AlgebraError::Syntax { line: p.line, col: p.col, message }
        }
        ExprError::UnknownVariable { name, pos } => {
            let p = at(pos);
            AlgebraError::UnknownVariable { line: p.line, col: p.col, name }
        }
        ExprError::ZeroDenominator { pos } => {
            let p = at(pos);
            AlgebraError::Syntax { line: p.line, col: p.col, message: "zero denominator".into() }
        }
        other => {
            let p = span.start();
            AlgebraError::Syntax { line: p.line, col: p.col, message: other.to_string() }
        }
    }
}
