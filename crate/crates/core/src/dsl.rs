//! The schema description language.
//!
//! ```text
//! schema-file   := schema-decl relation-decl+ fd-decl*
//! schema-decl   := "schema" IDENT
//! relation-decl := "relation" IDENT "(" attr-list ")" "key" "(" ident-list ")"
//! attr-list     := attr ("," attr)*      attr := IDENT ["*"]
//! fd-decl       := "fd" LABEL ":" ident-list "->" ident-list
//! IDENT         := [A-Za-z_][A-Za-z0-9_]*
//! LABEL         := IDENT ("." IDENT)*
//! ```
//!
//! One declaration per line, `#` starts a comment. `*` marks a non-atomic
//! attribute. The parser recovers at line boundaries and reports every
//! syntax error it finds.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::model::{
    is_identifier, is_label, AttributeSet, AttributeSpec, FunctionalDependency, RelationSchema, Schema, Severity,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDocument {
    pub text: String,
    /// A file path or `<stdin>`.
    pub provenance: String,
}

impl SourceDocument {
    pub fn new(text: impl Into<String>, provenance: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            provenance: provenance.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            severity: Severity::Error,
            message: message.into(),
        }
    }

    pub fn warning(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            severity: Severity::Warning,
            message: message.into(),
        }
    }

    /// `path:line:col: severity: message`
    pub fn render(&self, provenance: &str) -> String {
        format!("{provenance}:{}:{}: {}: {}", self.line, self.column, self.severity, self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.column, self.severity, self.message)
    }
}

/// Declaration line for each named element, used to place validation
/// findings. Keys look like `relation R`, `fd FD6`, `schema s`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    lines: BTreeMap<String, usize>,
}

impl SourceMap {
    fn record(&mut self, subject: String, line: usize) {
        self.lines.entry(subject).or_insert(line);
    }

    /// Resolves a validation subject. Attribute subjects (`attribute R.a`)
    /// fall back to their relation; split FD labels (`fd FD2.a`) to the
    /// label as written.
    pub fn line_of(&self, subject: &str) -> Option<usize> {
        if let Some(line) = self.lines.get(subject) {
            return Some(*line);
        }
        if let Some(rest) = subject.strip_prefix("attribute ") {
            let relation = rest.split('.').next()?;
            return self.lines.get(&format!("relation {relation}")).copied();
        }
        if let Some(label) = subject.strip_prefix("fd ") {
            let (base, _) = label.rsplit_once('.')?;
            return self.line_of(&format!("fd {base}"));
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    LParen,
    RParen,
    Comma,
    Star,
    Colon,
    Arrow,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Star => "`*`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let simple = match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '*' => Some(Tok::Star),
            ':' => Some(Tok::Colon),
            '-' if chars.get(i + 1) == Some(&'>') => {
                tokens.push(Token { tok: Tok::Arrow, column });
                i += 2;
                continue;
            }
            _ => None,
        };
        if let Some(tok) = simple {
            tokens.push(Token { tok, column });
            i += 1;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                i += 1;
            }
            tokens.push(Token {
                tok: Tok::Word(chars[start..i].iter().collect()),
                column,
            });
            continue;
        }
        return Err(Diagnostic::error(line_no, column, format!("unexpected character `{c}`")));
    }
    Ok(tokens)
}

struct LineParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
    /// Column of the last character on the line, for end-of-line errors.
    eol: usize,
}

type Step<T> = Result<T, Diagnostic>;

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.eol, |t| t.column)
    }

    fn err<T>(&self, message: impl Into<String>) -> Step<T> {
        Err(Diagnostic::error(self.line, self.column(), message))
    }

    fn found(&self) -> String {
        self.peek().map_or("end of line".into(), Tok::describe)
    }

    fn expect(&mut self, want: Tok) -> Step<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {}, found {}", want.describe(), self.found()))
        }
    }

    fn word(&mut self, what: &str) -> Step<(String, usize)> {
        match self.tokens.get(self.pos) {
            Some(Token { tok: Tok::Word(w), column }) => {
                self.pos += 1;
                Ok((w.clone(), *column))
            }
            _ => self.err(format!("expected {what}, found {}", self.found())),
        }
    }

    fn ident(&mut self, what: &str) -> Step<String> {
        let (w, column) = self.word(what)?;
        if is_identifier(&w) {
            Ok(w)
        } else {
            Err(Diagnostic::error(self.line, column, format!("invalid {what} `{w}`")))
        }
    }

    fn keyword(&mut self, kw: &str) -> Step<()> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`, found {}", self.found())),
        }
    }

    /// Comma-separated identifiers, each optionally followed by `*` when
    /// `allow_star` is set. Stops before `stop` (or end of line).
    fn list(&mut self, what: &str, empty_message: &str, allow_star: bool, stop: Option<Tok>) -> Step<Vec<(String, bool)>> {
        let at_stop = |p: &Self| p.peek().is_none() || (stop.is_some() && p.peek() == stop.as_ref());
        if at_stop(self) {
            return self.err(empty_message);
        }
        let mut items = Vec::new();
        loop {
            let name = self.ident(what)?;
            let mut atomic = true;
            if self.peek() == Some(&Tok::Star) {
                if !allow_star {
                    return self.err("`*` is only allowed on relation attributes");
                }
                self.pos += 1;
                atomic = false;
            }
            items.push((name, atomic));
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                continue;
            }
            return Ok(items);
        }
    }

    fn end(&self) -> Step<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.err(format!("unexpected {} after declaration", t.describe())),
        }
    }
}

fn names(items: Vec<(String, bool)>) -> AttributeSet {
    items.into_iter().map(|(n, _)| crate::model::AttributeName::new(n)).collect()
}

fn parse_relation(p: &mut LineParser<'_>) -> Step<RelationSchema> {
    p.keyword("relation")?;
    let name = p.ident("relation name")?;
    p.expect(Tok::LParen)?;
    let attrs = p.list("attribute name", "empty attribute list", true, Some(Tok::RParen))?;
    p.expect(Tok::RParen)?;
    p.keyword("key")?;
    p.expect(Tok::LParen)?;
    let key = p.list("key attribute", "empty key list", false, Some(Tok::RParen))?;
    p.expect(Tok::RParen)?;
    p.end()?;
    let attributes = attrs
        .into_iter()
        .map(|(n, atomic)| AttributeSpec {
            name: crate::model::AttributeName::new(n),
            atomic,
        })
        .collect();
    Ok(RelationSchema::new(name, attributes, names(key)))
}

fn parse_fd(p: &mut LineParser<'_>) -> Step<FunctionalDependency> {
    p.keyword("fd")?;
    let (label, column) = p.word("dependency label")?;
    if !is_label(&label) {
        return Err(Diagnostic::error(p.line, column, format!("invalid dependency label `{label}`")));
    }
    p.expect(Tok::Colon)?;
    let lhs = p.list("determinant attribute", "empty determinant list", false, Some(Tok::Arrow))?;
    p.expect(Tok::Arrow)?;
    let rhs = p.list("dependent attribute", "empty dependent list", false, None)?;
    p.end()?;
    Ok(FunctionalDependency::new(label, names(lhs), names(rhs)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Relations,
    Fds,
}

/// A parsed schema together with where each element was declared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDocument {
    pub schema: Schema,
    pub source_map: SourceMap,
}

/// Syntax-only parse. Structural rules (duplicates, trivial FDs, unknown
/// attributes) are left to [`crate::model::validate_schema`].
pub fn parse_schema(doc: &SourceDocument) -> Result<Schema, Vec<Diagnostic>> {
    parse_document(doc).map(|parsed| parsed.schema)
}

pub fn parse_document(doc: &SourceDocument) -> Result<ParsedDocument, Vec<Diagnostic>> {
    let mut diagnostics = Vec::new();
    let mut source_map = SourceMap::default();
    let mut schema_name: Option<String> = None;
    let mut relations = Vec::new();
    let mut fds = Vec::new();
    let mut section = Section::Start;
    let mut last_line = (1, 1);

    for (idx, raw) in doc.text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = match lex_line(raw, line_no) {
            Ok(tokens) => tokens,
            Err(d) => {
                diagnostics.push(d);
                continue;
            }
        };
        let Some(first) = tokens.first() else { continue };
        let eol = raw.trim_end().chars().count().max(1);
        last_line = (line_no, eol);
        let mut p = LineParser {
            tokens: &tokens,
            pos: 0,
            line: line_no,
            eol,
        };
        let head = match &first.tok {
            Tok::Word(w) => w.as_str(),
            other => {
                diagnostics.push(Diagnostic::error(
                    line_no,
                    first.column,
                    format!("expected `schema`, `relation` or `fd`, found {}", other.describe()),
                ));
                continue;
            }
        };

        let order_error = |expected: &str| Diagnostic::error(line_no, first.column, expected.to_string());
        match head {
            "schema" => {
                if section != Section::Start || schema_name.is_some() {
                    diagnostics.push(order_error("`schema` must be the first declaration and appear once"));
                    section = section.max(Section::Relations);
                    continue;
                }
                let parsed = p.keyword("schema").and_then(|_| p.ident("schema name")).and_then(|n| p.end().map(|_| n));
                match parsed {
                    Ok(name) => {
                        source_map.record(format!("schema {name}"), line_no);
                        schema_name = Some(name);
                    }
                    Err(d) => diagnostics.push(d),
                }
                section = Section::Relations;
            }
            "relation" => {
                if section == Section::Start {
                    diagnostics.push(order_error("expected `schema` declaration before relations"));
                }
                if section == Section::Fds {
                    diagnostics.push(order_error("relations must be declared before any `fd`"));
                }
                section = section.max(Section::Relations);
                match parse_relation(&mut p) {
                    Ok(rel) => {
                        source_map.record(format!("relation {}", rel.name()), line_no);
                        relations.push(rel);
                    }
                    Err(d) => diagnostics.push(d),
                }
            }
            "fd" => {
                if section == Section::Start {
                    diagnostics.push(order_error("expected `schema` declaration before dependencies"));
                }
                section = Section::Fds;
                match parse_fd(&mut p) {
                    Ok(fd) => {
                        source_map.record(format!("fd {}", fd.label()), line_no);
                        fds.push(fd);
                    }
                    Err(d) => diagnostics.push(d),
                }
            }
            other => diagnostics.push(Diagnostic::error(
                line_no,
                first.column,
                format!("expected `schema`, `relation` or `fd`, found `{other}`"),
            )),
        }
    }

    if schema_name.is_none() && diagnostics.is_empty() {
        diagnostics.push(Diagnostic::error(last_line.0, 1, "missing `schema` declaration"));
    }
    if relations.is_empty() && diagnostics.is_empty() {
        diagnostics.push(Diagnostic::error(last_line.0, last_line.1, "expected at least one `relation`"));
    }
    if !diagnostics.is_empty() {
        diagnostics.sort();
        return Err(diagnostics);
    }
    Ok(ParsedDocument {
        schema: Schema::new(schema_name.expect("checked above"), relations, fds),
        source_map,
    })
}

/// Renders a schema back into the description language.
pub fn emit_schema(schema: &Schema) -> String {
    let mut out = format!("schema {}\n", schema.name());
    for rel in schema.relations() {
        let attrs: Vec<String> = rel
            .attributes()
            .iter()
            .map(|a| if a.atomic { a.name.to_string() } else { format!("{}*", a.name) })
            .collect();
        out.push_str(&format!(
            "relation {}({}) key({})\n",
            rel.name(),
            attrs.join(", "),
            rel.primary_key().join(", ")
        ));
    }
    for fd in schema.fds() {
        out.push_str(&format!("fd {fd}\n"));
    }
    out
}
