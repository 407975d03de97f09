//! Structural patterns over expressions: the expression grammar plus `_`
//! (matches any subtree) and `?name` (binds a subtree; repeated names must
//! bind structurally equal subtrees).

use std::collections::BTreeMap;
use std::fmt;

use crate::expr::{Expression, NativeValue, Path, RuleName};
use crate::parser::{self, Cursor, ParseError, TreeSyntax};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Rule {
        name: RuleName,
        children: Vec<Pattern>,
    },
    Native(NativeValue),
    Wildcard,
    Var(String),
}

/// A bound subtree and where it was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub path: Path,
    pub value: Expression,
}

pub type Bindings = BTreeMap<String, Binding>;

struct PatternSyntax;

impl TreeSyntax for PatternSyntax {
    type Node = Pattern;
    const LEAF_DESCRIPTION: &'static str = "pattern";

    fn rule(name: RuleName, children: Vec<Pattern>) -> Pattern {
        Pattern::Rule { name, children }
    }

    fn native(value: NativeValue) -> Pattern {
        Pattern::Native(value)
    }

    fn extension(cur: &mut Cursor<'_>) -> Option<Result<Pattern, ParseError>> {
        match cur.peek()? {
            '_' => {
                cur.bump();
                Some(Ok(Pattern::Wildcard))
            }
            '?' => {
                cur.bump();
                Some(
                    cur.rule_name()
                        .map(|n| Pattern::Var(n.as_str().to_string()))
                        .map_err(|mut e| {
                            e.expected = "variable name".into();
                            e
                        }),
                )
            }
            _ => None,
        }
    }
}

/// Parses pattern text. Variables stand for whole subtrees only, so forms
/// like `?x(?y)` are rejected.
pub fn compile_pattern(text: &str) -> Result<Pattern, ParseError> {
    parser::parse_complete::<PatternSyntax>(text)
}

pub(crate) fn parse_pattern_prefix(text: &str, start: usize) -> Result<(Pattern, usize), ParseError> {
    let mut cur = Cursor::new(text, start);
    let p = parser::parse_node::<PatternSyntax>(&mut cur)?;
    Ok((p, cur.pos()))
}

impl Pattern {
    /// Variable names in order of first appearance (pre-order).
    pub fn variables(&self) -> Vec<&str> {
        fn walk<'a>(p: &'a Pattern, out: &mut Vec<&'a str>) {
            match p {
                Pattern::Var(v) if !out.contains(&v.as_str()) => out.push(v),
                Pattern::Rule { children, .. } => children.iter().for_each(|c| walk(c, out)),
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Rule names mentioned anywhere in the pattern.
    pub fn rule_names(&self) -> Vec<&RuleName> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            if let Pattern::Rule { name, children } = p {
                out.push(name);
                stack.extend(children);
            }
        }
        out
    }

    /// Matches against `expr`, which sits at `at` in its enclosing tree.
    pub fn matches(&self, expr: &Expression, at: &Path) -> Option<Bindings> {
        let mut bindings = Bindings::new();
        self.match_into(expr, at, &mut bindings).then_some(bindings)
    }

    fn match_into(&self, expr: &Expression, at: &Path, bindings: &mut Bindings) -> bool {
        match (self, expr) {
            (Pattern::Wildcard, _) => true,
            (Pattern::Var(v), _) => match bindings.get(v) {
                Some(b) => &b.value == expr,
                None => {
                    bindings.insert(
                        v.clone(),
                        Binding {
                            path: at.clone(),
                            value: expr.clone(),
                        },
                    );
                    true
                }
            },
            (Pattern::Native(p), Expression::Native(e)) => p == e,
            (
                Pattern::Rule { name, children },
                Expression::Rule {
                    name: ename,
                    children: echildren,
                },
            ) => {
                name == ename
                    && children.len() == echildren.len()
                    && children
                        .iter()
                        .zip(echildren)
                        .enumerate()
                        .all(|(i, (p, e))| p.match_into(e, &at.child(i), bindings))
            }
            _ => false,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Wildcard => f.write_str("_"),
            Pattern::Var(v) => write!(f, "?{v}"),
            Pattern::Native(v) => {
                let mut s = String::new();
                parser::write_native(v, &mut s);
                f.write_str(&s)
            }
            Pattern::Rule { name, children } => {
                write!(f, "{name}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}
