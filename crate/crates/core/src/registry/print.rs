use std::fmt::Write as _;

use super::{CompoundGlyph, DurationExpr, GlyphSpec, LabelPart, Registry, ScoreTemplate};
use crate::parser::print_canonical;

fn codepoints(s: &str) -> String {
    let items: Vec<String> = s.chars().map(|c| format!("U+{:04X}", c as u32)).collect();
    format!("\"{}\"", items.join(" "))
}

fn duration(d: &DurationExpr, out: &mut String) {
    match d {
        DurationExpr::Literal(v) => {
            let _ = write!(out, "{v}");
        }
        DurationExpr::Dur(p) => {
            let _ = write!(out, "dur({p})");
        }
        DurationExpr::Param(p) => out.push_str(p),
        DurationExpr::Add(a, b) | DurationExpr::Sub(a, b) => {
            duration(a, out);
            out.push_str(if matches!(d, DurationExpr::Add(..)) { " + " } else { " - " });
            let nested = matches!(**b, DurationExpr::Add(..) | DurationExpr::Sub(..));
            if nested {
                out.push('(');
            }
            duration(b, out);
            if nested {
                out.push(')');
            }
        }
    }
}

fn score(t: &ScoreTemplate, out: &mut String) {
    match t {
        ScoreTemplate::Param(p) => out.push_str(p),
        ScoreTemplate::Block { tracks, label, duration: d } => {
            let names: Vec<&str> = tracks.iter().map(|t| t.as_str()).collect();
            let _ = write!(out, "block({{{}}}, \"", names.join(","));
            for part in &label.0 {
                match part {
                    LabelPart::Text(s) => {
                        for c in s.chars() {
                            match c {
                                '"' => out.push_str("\\\""),
                                '\\' => out.push_str("\\\\"),
                                '{' => out.push_str("{{"),
                                '}' => out.push_str("}}"),
                                c => out.push(c),
                            }
                        }
                    }
                    LabelPart::Param(p) => {
                        let _ = write!(out, "{{{p}}}");
                    }
                }
            }
            out.push_str("\", ");
            duration(d, out);
            out.push(')');
        }
        ScoreTemplate::Seq(items) => {
            out.push_str("seq(");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                score(item, out);
            }
            out.push(')');
        }
        ScoreTemplate::Sync { base, overlay, offset } => {
            out.push_str("sync(");
            score(base, out);
            out.push_str(", ");
            score(overlay, out);
            out.push_str(", ");
            duration(offset, out);
            out.push(')');
        }
        ScoreTemplate::Hold(d) => {
            out.push_str("hold(");
            duration(d, out);
            out.push(')');
        }
    }
}

/// Serializes a registry back to declaration text that loads to an equal
/// registry.
pub fn print_registry(reg: &Registry) -> String {
    let mut out = String::new();
    for p in &reg.points {
        let _ = writeln!(out, "point {p}");
    }
    for def in reg.rules.values() {
        let mut params: Vec<String> = def
            .params
            .iter()
            .map(|p| match &p.default {
                Some(d) => format!("{}: {} default {}", p.name, p.ty, print_canonical(d)),
                None => format!("{}: {}", p.name, p.ty),
            })
            .collect();
        if let Some(v) = &def.variadic {
            params.push(format!("{}: {}... min {}", v.name, v.ty, v.min));
        }
        let _ = write!(out, "rule {}({}) = ", def.name, params.join(", "));
        score(&def.body, &mut out);
        match &def.glyph {
            None => {}
            Some(g @ (GlyphSpec::ContextBar | GlyphSpec::NameFrame)) => {
                let _ = write!(out, " glyph {}", g.kind());
            }
            Some(
                g @ (GlyphSpec::Atom(cp)
                | GlyphSpec::Infix(cp)
                | GlyphSpec::Overmark(cp)
                | GlyphSpec::BulletList(cp)),
            ) => {
                let _ = write!(out, " glyph {} {}", g.kind(), codepoints(cp));
            }
        }
        out.push('\n');
    }
    for t in &reg.templates {
        let CompoundGlyph::SideBySide { separator, left, right } = &t.glyph;
        let _ = writeln!(
            out,
            "template {} = {} glyph sidebyside {} (?{left}, ?{right})",
            t.name,
            t.pattern,
            codepoints(separator)
        );
    }
    out
}
