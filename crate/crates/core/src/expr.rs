//! The AZee expression tree and structural operations on it.
//!
//! Expressions are plain values. Every edit returns a fresh tree and leaves
//! the input untouched, which keeps undo and concurrent readers simple.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decimal::Decimal;

/// Kebab-case rule identifier matching `[a-z][a-z0-9-]*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RuleName(String);

/// Point identifier, e.g. `Lssp` or `abdomen-hi`: `[A-Za-z][A-Za-z0-9-]*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PointName(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid identifier `{0}`")]
pub struct InvalidName(pub String);

fn ident_tail(bytes: &[u8]) -> bool {
    bytes
        .iter()
        .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || *b == b'-')
}

impl RuleName {
    pub fn new(s: impl Into<String>) -> Result<Self, InvalidName> {
        let s = s.into();
        match s.as_bytes() {
            [first, rest @ ..] if first.is_ascii_lowercase() && ident_tail(rest) => Ok(RuleName(s)),
            _ => Err(InvalidName(s)),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PointName {
    pub fn new(s: impl Into<String>) -> Result<Self, InvalidName> {
        let s = s.into();
        let ok = match s.as_bytes() {
            [first, rest @ ..] => {
                first.is_ascii_alphabetic()
                    && rest.iter().all(|b| b.is_ascii_alphanumeric() || *b == b'-')
            }
            [] => false,
        };
        if ok {
            Ok(PointName(s))
        } else {
            Err(InvalidName(s))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

macro_rules! name_impls {
    ($t:ty) => {
        impl Deref for $t {
            type Target = str;
            fn deref(&self) -> &str {
                &self.0
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(&self.0, f)
            }
        }
        impl TryFrom<String> for $t {
            type Error = InvalidName;
            fn try_from(s: String) -> Result<Self, InvalidName> {
                <$t>::new(s)
            }
        }
        impl From<$t> for String {
            fn from(n: $t) -> String {
                n.0
            }
        }
        impl PartialEq<str> for $t {
            fn eq(&self, other: &str) -> bool {
                self.0 == other
            }
        }
        impl PartialEq<&str> for $t {
            fn eq(&self, other: &&str) -> bool {
                self.0 == *other
            }
        }
    };
}
name_impls!(RuleName);
name_impls!(PointName);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// A basic value held by a native node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NativeValue {
    Number(Decimal),
    Point(PointName),
    Side(Side),
}

impl NativeValue {
    /// Bare display text: the number, the point name, or `left`/`right`.
    pub fn display_text(&self) -> String {
        match self {
            NativeValue::Number(d) => d.to_string(),
            NativeValue::Point(p) => p.to_string(),
            NativeValue::Side(s) => s.as_str().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expression {
    Rule {
        name: RuleName,
        children: Vec<Expression>,
    },
    Native(NativeValue),
}

impl Expression {
    /// Rule application. Panics on an invalid name; use [`RuleName::new`]
    /// for untrusted input.
    pub fn app(name: &str, children: Vec<Expression>) -> Expression {
        Expression::Rule {
            name: RuleName::new(name).expect("invalid rule name"),
            children,
        }
    }

    /// Point native. Panics on an invalid name.
    pub fn point(name: &str) -> Expression {
        Expression::Native(NativeValue::Point(
            PointName::new(name).expect("invalid point name"),
        ))
    }

    pub fn number(value: Decimal) -> Expression {
        Expression::Native(NativeValue::Number(value))
    }

    pub fn side(side: Side) -> Expression {
        Expression::Native(NativeValue::Side(side))
    }

    pub fn children(&self) -> &[Expression] {
        match self {
            Expression::Rule { children, .. } => children,
            Expression::Native(_) => &[],
        }
    }

    pub fn rule_name(&self) -> Option<&RuleName> {
        match self {
            Expression::Rule { name, .. } => Some(name),
            Expression::Native(_) => None,
        }
    }

    pub fn arity(&self) -> usize {
        self.children().len()
    }

    /// Total node count, rule and native nodes alike.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Expression::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(Expression::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn node_at(&self, path: &Path) -> Result<&Expression, InvalidPath> {
        let mut node = self;
        for (depth, &i) in path.0.iter().enumerate() {
            node = node.children().get(i).ok_or_else(|| InvalidPath {
                path: path.clone(),
                depth,
            })?;
        }
        Ok(node)
    }

    /// Returns a copy of `self` with the subtree at `path` swapped for `sub`.
    pub fn replace_at(&self, path: &Path, sub: Expression) -> Result<Expression, InvalidPath> {
        self.node_at(path)?;
        Ok(self.replace_unchecked(&path.0, sub))
    }

    fn replace_unchecked(&self, indices: &[usize], sub: Expression) -> Expression {
        match (indices, self) {
            ([], _) => sub,
            ([i, rest @ ..], Expression::Rule { name, children }) => {
                let mut children = children.clone();
                children[*i] = children[*i].replace_unchecked(rest, sub);
                Expression::Rule {
                    name: name.clone(),
                    children,
                }
            }
            (_, Expression::Native(_)) => unreachable!("path validated before replacement"),
        }
    }

    /// All nodes in pre-order (root first, children left to right).
    pub fn preorder(&self) -> Vec<(Path, &Expression)> {
        fn walk<'a>(e: &'a Expression, path: &mut Vec<usize>, out: &mut Vec<(Path, &'a Expression)>) {
            out.push((Path(path.clone()), e));
            for (i, c) in e.children().iter().enumerate() {
                path.push(i);
                walk(c, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_canonical(self))
    }
}

/// Position of a node as zero-based child indices from the root.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Path(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid path `{path}`: no child at step {depth}")]
pub struct InvalidPath {
    pub path: Path,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed path `{0}`")]
pub struct MalformedPath(pub String);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    pub fn join(&self, rest: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend_from_slice(&rest.0);
        Path(v)
    }

    /// True for `self == other` as well.
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Path {
    fn from(v: Vec<usize>) -> Path {
        Path(v)
    }
}

/// Dot-joined indices; the root is the empty string.
impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl FromStr for Path {
    type Err = MalformedPath;
    fn from_str(s: &str) -> Result<Path, MalformedPath> {
        if s.is_empty() {
            return Ok(Path::root());
        }
        s.split('.')
            .map(|part| {
                if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(MalformedPath(s.to_string()));
                }
                part.parse::<usize>().map_err(|_| MalformedPath(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Path)
    }
}

impl From<Path> for String {
    fn from(p: Path) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Path {
    type Error = MalformedPath;
    fn try_from(s: String) -> Result<Path, MalformedPath> {
        s.parse()
    }
}
