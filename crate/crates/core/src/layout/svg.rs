use std::fmt::Write as _;

use super::scene::{SceneGraph, Shape};

/// User units per em.
const EM: f64 = 16.0;
/// Baseline position within a glyph box, as a fraction of its height.
const BASELINE: f64 = 0.8;

/// Rounds to two decimals and drops trailing zeros.
fn num(v: f64) -> String {
    let s = format!("{:.2}", v * EM);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" || s.is_empty() {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

/// Serializes a scene as SVG 1.1. Output depends only on the scene, so equal
/// scenes give byte-identical documents. Each element carries its source
/// path in `data-source`.
pub fn to_svg(scene: &SceneGraph) -> String {
    let (w, h) = (num(scene.width), num(scene.height));
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-size=\"16\">\n"
    );
    for e in &scene.elements {
        let src = e.source.to_string();
        match &e.shape {
            Shape::Glyphs { x, y, width, height, text } => {
                let _ = writeln!(
                    out,
                    "  <text x=\"{}\" y=\"{}\" font-size=\"{}\" textLength=\"{}\" lengthAdjust=\"spacingAndGlyphs\" data-source=\"{src}\">{}</text>",
                    num(*x),
                    num(y + height * BASELINE),
                    num(*height),
                    num(*width),
                    escape(text)
                );
            }
            Shape::Line { x1, y1, x2, y2 } => {
                let _ = writeln!(
                    out,
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" data-source=\"{src}\"/>",
                    num(*x1),
                    num(*y1),
                    num(*x2),
                    num(*y2)
                );
            }
            Shape::Rect { x, y, width, height, frame } => {
                let stroke = if *frame { "black" } else { "none" };
                let _ = writeln!(
                    out,
                    "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{stroke}\" data-source=\"{src}\"/>",
                    num(*x),
                    num(*y),
                    num(*width),
                    num(*height)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::layout;
    use crate::parser::parse;
    use crate::registry::default_registry;

    #[test]
    fn dog_svg() {
        let svg = to_svg(&layout(&default_registry(), &parse("dog()").unwrap()));
        assert!(svg.contains("viewBox=\"0 0 16 16\""), "{svg}");
        assert_eq!(svg.matches("<text").count(), 1);
        assert!(svg.contains("\u{1F415}"));
        assert!(svg.contains("data-source=\"\""));
    }

    #[test]
    fn empty_scene() {
        let svg = to_svg(&SceneGraph::default());
        assert!(svg.contains("viewBox=\"0 0 0 0\""));
        assert_eq!(svg.lines().count(), 2);
    }

    #[test]
    fn deterministic_and_escaped() {
        let reg = default_registry();
        let e = parse("info-about(dog(), non-subjectivity(nice-kind()))").unwrap();
        assert_eq!(to_svg(&layout(&reg, &e)), to_svg(&layout(&reg, &e)));
        assert_eq!(escape("a<b&\"c\">"), "a&lt;b&amp;&quot;c&quot;&gt;");
        assert_eq!(num(0.30000000000000004), "4.8");
        assert_eq!(num(-0.0001), "0");
        assert_eq!(num(1.0), "16");
    }
}
