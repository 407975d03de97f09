//! Production-rule registry: typed signatures, score-template bodies, glyph
//! assignments, the point catalog and multi-node layout templates.
//!
//! Registries are read from a small declarative format (see [`load_registry`])
//! and are immutable once loaded.

mod dsl;
mod print;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::decimal::Decimal;
use crate::expr::{Expression, NativeValue, Path, PointName, RuleName};
use crate::pattern::Pattern;
use crate::score::Track;

pub use dsl::load_registry;
pub use print::print_registry;

/// Source text of the registry shipped with the toolkit.
pub const DEFAULT_REGISTRY: &str = include_str!("../../data/default.azr");

/// The built-in registry.
pub fn default_registry() -> Registry {
    load_registry(DEFAULT_REGISTRY).expect("shipped registry is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamType {
    Score,
    Point,
    Number,
    Side,
}

impl ParamType {
    pub fn as_str(self) -> &'static str {
        match self {
            ParamType::Score => "score",
            ParamType::Point => "point",
            ParamType::Number => "number",
            ParamType::Side => "side",
        }
    }

    pub fn parse(s: &str) -> Option<ParamType> {
        Some(match s {
            "score" => ParamType::Score,
            "point" => ParamType::Point,
            "number" => ParamType::Number,
            "side" => ParamType::Side,
            _ => return None,
        })
    }
}

impl fmt::Display for ParamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: ParamType,
    /// Placeholder used to fill this slot when a subtree is wrapped.
    pub default: Option<Expression>,
}

/// Trailing rest parameter, e.g. `items: score... min 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variadic {
    pub name: String,
    pub ty: ParamType,
    pub min: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DurationExpr {
    Literal(Decimal),
    /// Duration of a score parameter.
    Dur(String),
    /// A number parameter.
    Param(String),
    Add(Box<DurationExpr>, Box<DurationExpr>),
    Sub(Box<DurationExpr>, Box<DurationExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelPart {
    Text(String),
    /// `{p}`: spliced point or side name.
    Param(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelTemplate(pub Vec<LabelPart>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoreTemplate {
    Block {
        tracks: Vec<Track>,
        label: LabelTemplate,
        duration: DurationExpr,
    },
    Seq(Vec<ScoreTemplate>),
    Sync {
        base: Box<ScoreTemplate>,
        overlay: Box<ScoreTemplate>,
        offset: DurationExpr,
    },
    Hold(DurationExpr),
    Param(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlyphSpec {
    Atom(String),
    Infix(String),
    Overmark(String),
    ContextBar,
    BulletList(String),
    NameFrame,
}

impl GlyphSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GlyphSpec::Atom(_) => "atom",
            GlyphSpec::Infix(_) => "infix",
            GlyphSpec::Overmark(_) => "overmark",
            GlyphSpec::ContextBar => "contextbar",
            GlyphSpec::BulletList(_) => "bulletlist",
            GlyphSpec::NameFrame => "nameframe",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDef {
    pub name: RuleName,
    pub params: Vec<Param>,
    pub variadic: Option<Variadic>,
    pub body: ScoreTemplate,
    pub glyph: Option<GlyphSpec>,
}

impl RuleDef {
    /// Declared type of argument `index`, if the rule accepts that many.
    pub fn slot_type(&self, index: usize) -> Option<ParamType> {
        match self.params.get(index) {
            Some(p) => Some(p.ty),
            None => self.variadic.as_ref().map(|v| v.ty),
        }
    }

    pub fn accepts_arity(&self, n: usize) -> bool {
        match &self.variadic {
            None => n == self.params.len(),
            Some(v) => n >= self.params.len() + v.min,
        }
    }

    /// Human-readable arity: `2` or `≥ 3`.
    pub fn arity_text(&self) -> String {
        match &self.variadic {
            None => self.params.len().to_string(),
            Some(v) => format!("at least {}", self.params.len() + v.min),
        }
    }

    /// Effective glyph: the declared one or the name-frame fallback.
    pub fn glyph_or_default(&self) -> &GlyphSpec {
        self.glyph.as_ref().unwrap_or(&GlyphSpec::NameFrame)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompoundGlyph {
    SideBySide {
        separator: String,
        left: String,
        right: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub name: RuleName,
    pub pattern: Pattern,
    pub glyph: CompoundGlyph,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    pub rules: BTreeMap<RuleName, RuleDef>,
    /// Declared point names, in declaration order.
    pub points: Vec<PointName>,
    /// Tried in order during layout.
    pub templates: Vec<Template>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unknown rule `{name}` at `{path}`")]
    UnknownRule { path: Path, name: RuleName },
    #[error("unknown point `@{name}` at `{path}`")]
    UnknownPoint { path: Path, name: PointName },
    #[error("`{rule}` expects {expected} argument(s), found {found} at `{path}`")]
    ArityMismatch {
        path: Path,
        rule: RuleName,
        expected: String,
        found: usize,
    },
    #[error("expected {expected}, found {found} at `{path}`")]
    TypeMismatch {
        path: Path,
        expected: ParamType,
        found: ParamType,
    },
}

impl TypeError {
    pub fn path(&self) -> &Path {
        match self {
            TypeError::UnknownRule { path, .. }
            | TypeError::UnknownPoint { path, .. }
            | TypeError::ArityMismatch { path, .. }
            | TypeError::TypeMismatch { path, .. } => path,
        }
    }
}

impl Registry {
    pub fn rule(&self, name: &str) -> Option<&RuleDef> {
        RuleName::new(name).ok().and_then(|n| self.rules.get(&n))
    }

    pub fn has_point(&self, name: &str) -> bool {
        self.points.iter().any(|p| p == name)
    }

    /// Checks `expr` and returns its result type: `score` for any rule
    /// application, the native type for leaves.
    pub fn type_check(&self, expr: &Expression) -> Result<ParamType, TypeError> {
        self.check_at(expr, &mut Vec::new())
    }

    fn check_at(&self, expr: &Expression, path: &mut Vec<usize>) -> Result<ParamType, TypeError> {
        match expr {
            Expression::Native(NativeValue::Number(_)) => Ok(ParamType::Number),
            Expression::Native(NativeValue::Side(_)) => Ok(ParamType::Side),
            Expression::Native(NativeValue::Point(p)) => {
                if self.has_point(p) {
                    Ok(ParamType::Point)
                } else {
                    Err(TypeError::UnknownPoint {
                        path: Path(path.clone()),
                        name: p.clone(),
                    })
                }
            }
            Expression::Rule { name, children } => {
                let def = self.rules.get(name).ok_or_else(|| TypeError::UnknownRule {
                    path: Path(path.clone()),
                    name: name.clone(),
                })?;
                if !def.accepts_arity(children.len()) {
                    return Err(TypeError::ArityMismatch {
                        path: Path(path.clone()),
                        rule: name.clone(),
                        expected: def.arity_text(),
                        found: children.len(),
                    });
                }
                for (i, child) in children.iter().enumerate() {
                    path.push(i);
                    let found = self.check_at(child, path)?;
                    let expected = def.slot_type(i).expect("arity checked");
                    if found != expected {
                        return Err(TypeError::TypeMismatch {
                            path: Path(path.clone()),
                            expected,
                            found,
                        });
                    }
                    path.pop();
                }
                Ok(ParamType::Score)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct RegistryError {
    /// 1-based line number.
    pub line: usize,
    pub kind: RegistryErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryErrorKind {
    #[error("syntax error: expected {expected}, found {found}")]
    Syntax { expected: String, found: String },
    #[error("duplicate rule `{0}`")]
    DuplicateRule(String),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("duplicate template `{0}`")]
    DuplicateTemplate(String),
    #[error("duplicate parameter `{0}`")]
    DuplicateParam(String),
    #[error("undeclared point `{0}`")]
    UndeclaredPoint(String),
    #[error("unbound parameter `{0}` in rule body")]
    UnboundParam(String),
    #[error("parameter `{param}` of type {ty} cannot be used as {usage}")]
    ParamMisuse {
        param: String,
        ty: String,
        usage: &'static str,
    },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("glyph `{glyph}` needs {needs}")]
    GlyphArity { glyph: &'static str, needs: &'static str },
    #[error("invalid codepoint list: {0}")]
    Codepoints(String),
    #[error("template variable `?{0}` does not appear in the pattern")]
    UnboundTemplateVariable(String),
    #[error("default for `{param}` is ill-typed: {message}")]
    BadDefault { param: String, message: String },
}
