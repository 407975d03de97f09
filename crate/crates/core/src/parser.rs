//! Textual AZee syntax: parsing and canonical printing.
//!
//! ```text
//! expr   := rule | native
//! rule   := NAME "(" [expr ("," expr)*] ")"
//! native := NUMBER | "@" POINT | "#left" | "#right"
//! NAME   := [a-z][a-z0-9-]*
//! POINT  := [A-Za-z][A-Za-z0-9-]*
//! NUMBER := ["-"] digits ["." digits]
//! ```
//!
//! Whitespace between tokens is ignored. The pattern language in
//! [`crate::pattern`] reuses this parser with two extra leaf forms.

use std::fmt::{self, Write as _};

use crate::decimal::Decimal;
use crate::expr::{Expression, NativeValue, Path, PointName, RuleName, Side};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at offset {}: expected {}, found {}",
            self.offset, self.expected, self.found
        )
    }
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str, pos: usize) -> Self {
        Cursor { src, pos }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let rest = self.rest();
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Snippet of what sits at the cursor, for error messages.
    pub(crate) fn found(&self) -> String {
        let rest = self.rest();
        if rest.is_empty() {
            return "end of input".to_string();
        }
        let end = rest
            .char_indices()
            .find(|&(i, c)| i > 0 && (c.is_whitespace() || "(),".contains(c)))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let snippet: String = rest[..end].chars().take(16).collect();
        format!("`{snippet}`")
    }

    pub(crate) fn error(&self, expected: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            expected: expected.into(),
            found: self.found(),
        }
    }

    /// Takes `[A-Za-z0-9-]*` after the current position.
    fn take_ident(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'-')
            .count();
        self.pos += len;
        &rest[..len]
    }

    pub(crate) fn rule_name(&mut self) -> Result<RuleName, ParseError> {
        let start = self.pos;
        let word = self.take_ident();
        RuleName::new(word).map_err(|_| {
            self.pos = start;
            self.error("rule name")
        })
    }

    pub(crate) fn point_name(&mut self) -> Result<PointName, ParseError> {
        let start = self.pos;
        let word = self.take_ident();
        PointName::new(word).map_err(|_| {
            self.pos = start;
            self.error("point name")
        })
    }

    pub(crate) fn number(&mut self) -> Result<Decimal, ParseError> {
        let start = self.pos;
        let rest = self.rest();
        let mut len = 0;
        let bytes = rest.as_bytes();
        if bytes.first() == Some(&b'-') {
            len += 1;
        }
        let int_digits = bytes[len..].iter().take_while(|b| b.is_ascii_digit()).count();
        if int_digits == 0 {
            return Err(self.error("number"));
        }
        len += int_digits;
        if bytes.get(len) == Some(&b'.') {
            let frac = bytes[len + 1..].iter().take_while(|b| b.is_ascii_digit()).count();
            if frac == 0 {
                self.pos = start + len + 1;
                return Err(self.error("fractional digits"));
            }
            len += 1 + frac;
        }
        let text = &rest[..len];
        match text.parse() {
            Ok(d) => {
                self.pos += len;
                Ok(d)
            }
            Err(_) => Err(self.error("number within decimal range")),
        }
    }
}

/// Hooks that let the pattern language reuse the expression grammar.
pub(crate) trait TreeSyntax {
    type Node;
    fn rule(name: RuleName, children: Vec<Self::Node>) -> Self::Node;
    fn native(value: NativeValue) -> Self::Node;
    /// Called before the standard leaf forms; `None` means "not mine".
    fn extension(_cur: &mut Cursor<'_>) -> Option<Result<Self::Node, ParseError>> {
        None
    }
    const LEAF_DESCRIPTION: &'static str = "expression";
}

struct Plain;

impl TreeSyntax for Plain {
    type Node = Expression;
    fn rule(name: RuleName, children: Vec<Expression>) -> Expression {
        Expression::Rule { name, children }
    }
    fn native(value: NativeValue) -> Expression {
        Expression::Native(value)
    }
}

pub(crate) fn parse_node<S: TreeSyntax>(cur: &mut Cursor<'_>) -> Result<S::Node, ParseError> {
    cur.skip_ws();
    if let Some(r) = S::extension(cur) {
        return r;
    }
    match cur.peek() {
        Some('@') => {
            cur.bump();
            Ok(S::native(NativeValue::Point(cur.point_name()?)))
        }
        Some('#') => {
            cur.bump();
            let start = cur.pos();
            match cur.take_ident() {
                "left" => Ok(S::native(NativeValue::Side(Side::Left))),
                "right" => Ok(S::native(NativeValue::Side(Side::Right))),
                _ => {
                    cur.pos = start;
                    Err(cur.error("`left` or `right`"))
                }
            }
        }
        Some(c) if c == '-' || c.is_ascii_digit() => Ok(S::native(NativeValue::Number(cur.number()?))),
        Some(c) if c.is_ascii_lowercase() => {
            let name = cur.rule_name()?;
            cur.skip_ws();
            if !cur.eat('(') {
                return Err(cur.error("`(`"));
            }
            let mut children = Vec::new();
            cur.skip_ws();
            if !cur.eat(')') {
                loop {
                    children.push(parse_node::<S>(cur)?);
                    cur.skip_ws();
                    if cur.eat(')') {
                        break;
                    }
                    if !cur.eat(',') {
                        return Err(cur.error("`,` or `)`"));
                    }
                }
            }
            Ok(S::rule(name, children))
        }
        _ => Err(cur.error(S::LEAF_DESCRIPTION)),
    }
}

/// Parses a whole string; trailing non-whitespace is an error.
pub(crate) fn parse_complete<S: TreeSyntax>(text: &str) -> Result<S::Node, ParseError> {
    let mut cur = Cursor::new(text, 0);
    let node = parse_node::<S>(&mut cur)?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.error("end of input"));
    }
    Ok(node)
}

pub fn parse(text: &str) -> Result<Expression, ParseError> {
    parse_complete::<Plain>(text)
}

/// Parses one expression starting at byte `start`, returning it with the
/// offset just past it. Used by the registry reader for embedded expressions.
pub fn parse_prefix(text: &str, start: usize) -> Result<(Expression, usize), ParseError> {
    let mut cur = Cursor::new(text, start);
    let e = parse_node::<Plain>(&mut cur)?;
    Ok((e, cur.pos()))
}

/// Byte offset where the node at `path` starts in `text`, which must hold
/// one well-formed expression.
pub fn offset_of(text: &str, path: &Path) -> Option<usize> {
    let mut cur = Cursor::new(text, 0);
    cur.skip_ws();
    for &i in path.indices() {
        cur.take_ident();
        cur.skip_ws();
        if !cur.eat('(') {
            return None;
        }
        for _ in 0..i {
            parse_node::<Plain>(&mut cur).ok()?;
            cur.skip_ws();
            if !cur.eat(',') {
                return None;
            }
        }
        cur.skip_ws();
    }
    cur.peek().map(|_| cur.pos())
}

pub fn print_canonical(expr: &Expression) -> String {
    let mut out = String::new();
    write_expr(expr, &mut out);
    out
}

pub(crate) fn write_native(value: &NativeValue, out: &mut String) {
    match value {
        NativeValue::Number(d) => {
            let _ = write!(out, "{d}");
        }
        NativeValue::Point(p) => {
            out.push('@');
            out.push_str(p);
        }
        NativeValue::Side(s) => {
            out.push('#');
            out.push_str(s.as_str());
        }
    }
}

fn write_expr(expr: &Expression, out: &mut String) {
    match expr {
        Expression::Native(v) => write_native(v, out),
        Expression::Rule { name, children } => {
            out.push_str(name);
            out.push('(');
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(c, out);
            }
            out.push(')');
        }
    }
}
