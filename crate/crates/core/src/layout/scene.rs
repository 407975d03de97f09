//! Box metrics and placement. All lengths are in em, y grows downwards.

use serde::Serialize;

use super::{apply_templates, LayoutKind, LayoutNode};
use crate::expr::{Expression, Path};
use crate::registry::Registry;

/// Width and height of one glyph codepoint.
const GLYPH: f64 = 1.0;
/// Advance of one character of plain text (rule names, natives).
const TEXT_CHAR: f64 = 0.6;
const GAP: f64 = 0.25;
const MARK: f64 = 0.5;
const MARK_GAP: f64 = 0.1;
const BAR_GAP: f64 = 0.15;
const ROW_GAP: f64 = 0.2;
const FRAME_PAD: f64 = 0.2;
const PIECE_GAP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    /// A run of characters drawn in a `width` × `height` box.
    Glyphs {
        x: f64,
        y: f64,
        width: f64,
        height: f64,
        text: String,
    },
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
    },
    /// `frame` rects are drawn; the others only mark a node's extent.
    Rect {
        x: f64,
        y: f64,
        width: f64,
        height: f64,
        frame: bool,
    },
}

impl Shape {
    /// `(x0, y0, x1, y1)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        match *self {
            Shape::Glyphs { x, y, width, height, .. } | Shape::Rect { x, y, width, height, .. } => {
                (x, y, x + width, y + height)
            }
            Shape::Line { x1, y1, x2, y2 } => (x1.min(x2), y1.min(y2), x1.max(x2), y1.max(y2)),
        }
    }

    fn translate(&mut self, dx: f64, dy: f64) {
        match self {
            Shape::Glyphs { x, y, .. } | Shape::Rect { x, y, .. } => {
                *x += dx;
                *y += dy;
            }
            Shape::Line { x1, y1, x2, y2 } => {
                *x1 += dx;
                *x2 += dx;
                *y1 += dy;
                *y2 += dy;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Element {
    #[serde(flatten)]
    pub shape: Shape,
    pub source: Path,
}

/// Positioned elements in painter's order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SceneGraph {
    pub width: f64,
    pub height: f64,
    pub elements: Vec<Element>,
}

impl SceneGraph {
    fn translate(mut self, dx: f64, dy: f64) -> SceneGraph {
        for e in &mut self.elements {
            e.shape.translate(dx, dy);
        }
        self
    }

    fn place(&mut self, child: SceneGraph, dx: f64, dy: f64) {
        self.elements.extend(child.translate(dx, dy).elements);
    }
}

fn glyphs(text: &str, advance: f64, height: f64, source: &Path) -> SceneGraph {
    let width = text.chars().count() as f64 * advance;
    SceneGraph {
        width,
        height,
        elements: vec![Element {
            shape: Shape::Glyphs {
                x: 0.0,
                y: 0.0,
                width,
                height,
                text: text.to_string(),
            },
            source: source.clone(),
        }],
    }
}

fn extent(width: f64, height: f64, source: &Path, frame: bool) -> Element {
    Element {
        shape: Shape::Rect {
            x: 0.0,
            y: 0.0,
            width,
            height,
            frame,
        },
        source: source.clone(),
    }
}

/// `left gap separator gap right`, vertically centred.
fn hjoin_with_separator(left: SceneGraph, sep: &str, right: SceneGraph, source: &Path) -> SceneGraph {
    let sep = glyphs(sep, GLYPH, GLYPH, source);
    let height = left.height.max(sep.height).max(right.height);
    let width = left.width + GAP + sep.width + GAP + right.width;
    let mut out = SceneGraph {
        width,
        height,
        elements: vec![extent(width, height, source, false)],
    };
    let (lw, sw) = (left.width, sep.width);
    let (lh, sh, rh) = (left.height, sep.height, right.height);
    out.place(left, 0.0, (height - lh) / 2.0);
    out.place(sep, lw + GAP, (height - sh) / 2.0);
    out.place(right, lw + GAP + sw + GAP, (height - rh) / 2.0);
    out
}

pub fn layout_node(node: &LayoutNode) -> SceneGraph {
    let src = &node.source;
    match &node.kind {
        LayoutKind::Atom { codepoints } => glyphs(codepoints, GLYPH, GLYPH, src),
        LayoutKind::Native { text } => glyphs(text, TEXT_CHAR, GLYPH, src),
        LayoutKind::Infix { left, separator, right } | LayoutKind::SideBySide { left, separator, right } => {
            hjoin_with_separator(layout_node(left), separator, layout_node(right), src)
        }
        LayoutKind::Overmark { mark, child } => {
            let mark = glyphs(mark, MARK, MARK, src);
            let child = layout_node(child);
            let width = mark.width.max(child.width);
            let height = MARK + MARK_GAP + child.height;
            let mut out = SceneGraph {
                width,
                height,
                elements: vec![extent(width, height, src, false)],
            };
            let (mw, cw) = (mark.width, child.width);
            out.place(mark, (width - mw) / 2.0, 0.0);
            out.place(child, (width - cw) / 2.0, MARK + MARK_GAP);
            out
        }
        LayoutKind::ContextBar { top, bottom } => {
            let (top, bottom) = (layout_node(top), layout_node(bottom));
            let width = top.width.max(bottom.width);
            let bar_y = top.height + BAR_GAP;
            let height = bar_y + BAR_GAP + bottom.height;
            let mut out = SceneGraph {
                width,
                height,
                elements: vec![extent(width, height, src, false)],
            };
            let (tw, bw) = (top.width, bottom.width);
            out.place(top, (width - tw) / 2.0, 0.0);
            out.elements.push(Element {
                shape: Shape::Line {
                    x1: 0.0,
                    y1: bar_y,
                    x2: width,
                    y2: bar_y,
                },
                source: src.clone(),
            });
            out.place(bottom, (width - bw) / 2.0, bar_y + BAR_GAP);
            out
        }
        LayoutKind::BulletList { bullet, items } => {
            let rows: Vec<SceneGraph> = items.iter().map(layout_node).collect();
            let bullet_w = bullet.chars().count() as f64 * GLYPH;
            let width = rows
                .iter()
                .map(|r| bullet_w + GAP + r.width)
                .fold(0.0, f64::max);
            let row_heights: Vec<f64> = rows.iter().map(|r| r.height.max(GLYPH)).collect();
            let height = row_heights.iter().sum::<f64>() + ROW_GAP * rows.len().saturating_sub(1) as f64;
            let mut out = SceneGraph {
                width,
                height,
                elements: vec![extent(width, height, src, false)],
            };
            let mut y = 0.0;
            for (row, rh) in rows.into_iter().zip(row_heights) {
                out.place(glyphs(bullet, GLYPH, GLYPH, src), 0.0, y + (rh - GLYPH) / 2.0);
                let h = row.height;
                out.place(row, bullet_w + GAP, y + (rh - h) / 2.0);
                y += rh + ROW_GAP;
            }
            out
        }
        LayoutKind::NameFrame { name, children } => {
            let label = glyphs(name, TEXT_CHAR, GLYPH, src);
            let kids: Vec<SceneGraph> = children.iter().map(layout_node).collect();
            let row_w = kids.iter().map(|k| k.width).sum::<f64>() + GAP * kids.len().saturating_sub(1) as f64;
            let row_h = kids.iter().map(|k| k.height).fold(0.0, f64::max);
            let inner_w = label.width.max(row_w);
            let width = inner_w + 2.0 * FRAME_PAD;
            let height = label.height + row_h + 2.0 * FRAME_PAD;
            let mut out = SceneGraph {
                width,
                height,
                elements: vec![extent(width, height, src, true)],
            };
            let lw = label.width;
            out.place(label, FRAME_PAD + (inner_w - lw) / 2.0, FRAME_PAD);
            let mut x = FRAME_PAD + (inner_w - row_w) / 2.0;
            let row_y = FRAME_PAD + GLYPH;
            for k in kids {
                let (w, h) = (k.width, k.height);
                out.place(k, x, row_y + (row_h - h) / 2.0);
                x += w + GAP;
            }
            out
        }
    }
}

/// Typesets one expression.
pub fn layout(reg: &Registry, expr: &Expression) -> SceneGraph {
    layout_node(&apply_templates(reg, expr))
}

/// Stacks the layouts of several pieces top to bottom, left-aligned. Element
/// sources are prefixed with the piece index.
pub fn layout_document(reg: &Registry, pieces: &[Expression]) -> SceneGraph {
    let mut out = SceneGraph::default();
    let mut y = 0.0;
    for (i, piece) in pieces.iter().enumerate() {
        if i > 0 {
            y += PIECE_GAP;
        }
        let mut scene = layout(reg, piece);
        for e in &mut scene.elements {
            e.source = Path(vec![i]).join(&e.source);
        }
        out.width = f64::max(out.width, scene.width);
        let h = scene.height;
        out.place(scene, 0.0, y);
        y += h;
    }
    out.height = y;
    out
}

/// Source path of the deepest element containing `(x, y)`; later elements
/// win ties. Coordinates are in em.
pub fn hit_test(scene: &SceneGraph, x: f64, y: f64) -> Option<Path> {
    let mut best: Option<&Element> = None;
    for e in &scene.elements {
        let (x0, y0, x1, y1) = e.shape.bounds();
        if x < x0 || x > x1 || y < y0 || y > y1 {
            continue;
        }
        if best.is_none_or(|b| e.source.len() >= b.source.len()) {
            best = Some(e);
        }
    }
    best.map(|e| e.source.clone())
}
