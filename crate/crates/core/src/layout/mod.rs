//! Planar glyph script: each expression is typeset as nested boxes, much
//! like a written arithmetic formula.
//!
//! Layout runs in two passes. [`apply_templates`] turns the expression into
//! a [`LayoutNode`] tree, rewriting multi-node templates into compound
//! operators; [`layout`] then places that tree into a [`SceneGraph`].

mod scene;
mod svg;

use serde::Serialize;

use crate::expr::{Expression, Path};
use crate::registry::{CompoundGlyph, GlyphSpec, Registry};

pub use scene::{hit_test, layout, layout_document, layout_node, Element, SceneGraph, Shape};
pub use svg::to_svg;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutNode {
    /// Path of the expression node this box stands for.
    pub source: Path,
    pub kind: LayoutKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LayoutKind {
    Atom {
        codepoints: String,
    },
    Infix {
        left: Box<LayoutNode>,
        separator: String,
        right: Box<LayoutNode>,
    },
    Overmark {
        mark: String,
        child: Box<LayoutNode>,
    },
    ContextBar {
        top: Box<LayoutNode>,
        bottom: Box<LayoutNode>,
    },
    BulletList {
        bullet: String,
        items: Vec<LayoutNode>,
    },
    SideBySide {
        left: Box<LayoutNode>,
        separator: String,
        right: Box<LayoutNode>,
    },
    NameFrame {
        name: String,
        children: Vec<LayoutNode>,
    },
    Native {
        text: String,
    },
}

impl LayoutNode {
    pub fn children(&self) -> Vec<&LayoutNode> {
        match &self.kind {
            LayoutKind::Atom { .. } | LayoutKind::Native { .. } => vec![],
            LayoutKind::Infix { left, right, .. } | LayoutKind::SideBySide { left, right, .. } => {
                vec![left, right]
            }
            LayoutKind::Overmark { child, .. } => vec![child],
            LayoutKind::ContextBar { top, bottom } => vec![top, bottom],
            LayoutKind::BulletList { items, .. } => items.iter().collect(),
            LayoutKind::NameFrame { children, .. } => children.iter().collect(),
        }
    }

    /// Source paths of every compound (template) box, in pre-order.
    pub fn compound_sources(&self) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            if matches!(n.kind, LayoutKind::SideBySide { .. }) {
                out.push(n.source.clone());
            }
            stack.extend(n.children().into_iter().rev());
        }
        out
    }
}

/// Builds the box tree for `expr`. Templates are tried at each node in
/// registry order, top-down; the first match wins and the nodes it consumes
/// are not scanned again, though its bound subtrees are. Nodes without a
/// template use their rule's glyph, falling back to a named frame.
pub fn apply_templates(reg: &Registry, expr: &Expression) -> LayoutNode {
    build(reg, expr, Path::root())
}

fn build(reg: &Registry, expr: &Expression, path: Path) -> LayoutNode {
    let (name, children) = match expr {
        Expression::Native(v) => {
            return LayoutNode {
                source: path,
                kind: LayoutKind::Native {
                    text: v.display_text(),
                },
            }
        }
        Expression::Rule { name, children } => (name, children),
    };

    for template in &reg.templates {
        if let Some(bindings) = template.pattern.matches(expr, &path) {
            let CompoundGlyph::SideBySide { separator, left, right } = &template.glyph;
            let sub = |var: &String| {
                let b = &bindings[var];
                Box::new(build(reg, &b.value, b.path.clone()))
            };
            return LayoutNode {
                kind: LayoutKind::SideBySide {
                    left: sub(left),
                    separator: separator.clone(),
                    right: sub(right),
                },
                source: path,
            };
        }
    }

    let child = |i: usize| Box::new(build(reg, &children[i], path.child(i)));
    let all = || -> Vec<LayoutNode> {
        (0..children.len())
            .map(|i| build(reg, &children[i], path.child(i)))
            .collect()
    };
    let glyph = reg.rules.get(name).map(|d| d.glyph_or_default());
    let kind = match (glyph, children.len()) {
        (Some(GlyphSpec::Atom(cp)), 0) => LayoutKind::Atom {
            codepoints: cp.clone(),
        },
        (Some(GlyphSpec::Infix(sep)), 2) => LayoutKind::Infix {
            left: child(0),
            separator: sep.clone(),
            right: child(1),
        },
        (Some(GlyphSpec::Overmark(mark)), 1) => LayoutKind::Overmark {
            mark: mark.clone(),
            child: child(0),
        },
        (Some(GlyphSpec::ContextBar), 2) => LayoutKind::ContextBar {
            top: child(0),
            bottom: child(1),
        },
        (Some(GlyphSpec::BulletList(bullet)), _) => LayoutKind::BulletList {
            bullet: bullet.clone(),
            items: all(),
        },
        // name frames, unknown rules, and arity mismatches
        _ => LayoutKind::NameFrame {
            name: name.to_string(),
            children: all(),
        },
    };
    LayoutNode { source: path, kind }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::registry::default_registry;

    fn tree(text: &str) -> LayoutNode {
        apply_templates(&default_registry(), &parse(text).unwrap())
    }

    #[test]
    fn opposition_template_becomes_side_by_side() {
        let n = tree("each-of(localised-discourse(@Lssp, dog()), localised-discourse(@Rssp, nice-kind()))");
        let LayoutKind::SideBySide { left, separator, right } = &n.kind else {
            panic!("expected compound, got {n:?}");
        };
        assert_eq!(separator, "\u{2194}");
        assert_eq!(left.kind, LayoutKind::Atom { codepoints: "\u{1F415}".into() });
        assert_eq!(left.source, Path(vec![0, 1]));
        assert_eq!(right.kind, LayoutKind::Atom { codepoints: "\u{1F493}".into() });
        assert_eq!(right.source, Path(vec![1, 1]));
        assert_eq!(n.compound_sources(), [Path::root()]);
    }

    #[test]
    fn same_side_points_fall_back_to_bullets() {
        let n = tree("each-of(localised-discourse(@Rssp, dog()), localised-discourse(@Rssp, nice-kind()))");
        let LayoutKind::BulletList { items, bullet } = &n.kind else {
            panic!("expected bullet list, got {n:?}");
        };
        assert_eq!(bullet, "\u{2022}");
        assert_eq!(items.len(), 2);
        assert!(matches!(items[0].kind, LayoutKind::NameFrame { ref name, .. } if name == "localised-discourse"));
        assert!(n.compound_sources().is_empty());
    }

    #[test]
    fn atoms_and_operators() {
        assert_eq!(tree("dog()").kind, LayoutKind::Atom { codepoints: "\u{1F415}".into() });
        let n = tree("info-about(dog(), non-subjectivity(nice-kind()))");
        let LayoutKind::Infix { right, separator, .. } = &n.kind else { panic!() };
        assert_eq!(separator, "=");
        assert!(matches!(right.kind, LayoutKind::Overmark { ref mark, .. } if mark == "\u{2713}"));
    }

    #[test]
    fn unknown_rules_use_name_frames() {
        let n = tree("mystery(@Lssp, 2)");
        let LayoutKind::NameFrame { name, children } = &n.kind else { panic!() };
        assert_eq!(name, "mystery");
        assert_eq!(children[1].kind, LayoutKind::Native { text: "2".into() });
    }

    #[test]
    fn templates_apply_inside_bindings() {
        let inner = "each-of(localised-discourse(@Lssp, dog()), localised-discourse(@Rssp, dog()))";
        let text = format!(
            "each-of(localised-discourse(@Lssp, {inner}), localised-discourse(@Rssp, nice-kind()))"
        );
        assert_eq!(tree(&text).compound_sources(), [Path::root(), Path(vec![0, 1])]);
    }
}
