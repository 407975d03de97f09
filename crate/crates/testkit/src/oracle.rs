//! Slow reference implementations.

use std::collections::BTreeMap;

use azed_core::expr::{Expression, NativeValue, Path};
use azed_core::layout::{apply_templates, SceneGraph};
use azed_core::pattern::Pattern;
use azed_core::registry::{DurationExpr, LabelPart, Registry, ScoreTemplate};
use azed_core::score::{SigningScore, Track};
use azed_core::Decimal;

/// A score as a flat, sorted block list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatScore {
    pub duration: Decimal,
    pub blocks: Vec<(Track, Decimal, Decimal, String)>,
}

pub fn flatten(score: &SigningScore) -> FlatScore {
    let mut blocks: Vec<_> = score
        .tracks()
        .flat_map(|(t, bs)| bs.iter().map(move |b| (t, b.start, b.end, b.label.clone())))
        .collect();
    blocks.sort();
    FlatScore {
        duration: score.duration(),
        blocks,
    }
}

/// A score placed on an absolute time line: it occupies `[lo, hi]` and is
/// never shifted back to the origin until the very end.
#[derive(Debug, Clone)]
struct Frame {
    lo: Decimal,
    hi: Decimal,
    blocks: Vec<(Track, Decimal, Decimal, String)>,
}

impl Frame {
    fn silent(len: Decimal) -> Frame {
        Frame {
            lo: Decimal::ZERO,
            hi: len,
            blocks: vec![],
        }
    }

    fn len(&self) -> Decimal {
        self.hi - self.lo
    }

    fn moved(&self, by: Decimal) -> Frame {
        Frame {
            lo: self.lo + by,
            hi: self.hi + by,
            blocks: self
                .blocks
                .iter()
                .map(|(t, s, e, l)| (*t, *s + by, *e + by, l.clone()))
                .collect(),
        }
    }
}

enum Arg<'a> {
    One(Frame),
    Many(Vec<Frame>),
    Native(&'a NativeValue),
}

/// Evaluates `expr` without intermediate normalization and checks for
/// overlapping blocks only once, on the final block set. Errors are
/// reported as `Err(())`; the caller compares only success or failure.
pub fn reference_score(reg: &Registry, expr: &Expression) -> Result<FlatScore, ()> {
    let frame = node(reg, expr)?;
    let mut blocks: Vec<_> = frame.moved(-frame.lo).blocks;
    blocks.sort();
    for w in blocks.windows(2) {
        if w[0].0 == w[1].0 && w[1].1 < w[0].2 {
            return Err(());
        }
    }
    Ok(FlatScore {
        duration: frame.len(),
        blocks,
    })
}

fn node(reg: &Registry, expr: &Expression) -> Result<Frame, ()> {
    let Expression::Rule { name, children } = expr else {
        return Err(());
    };
    let def = reg.rule(name).ok_or(())?;
    let mut env: BTreeMap<&str, Arg> = BTreeMap::new();
    let mut rest = Vec::new();
    for (i, c) in children.iter().enumerate() {
        let arg = match c {
            Expression::Native(v) => Arg::Native(v),
            rule => Arg::One(node(reg, rule)?),
        };
        match def.params.get(i) {
            Some(p) => {
                env.insert(&p.name, arg);
            }
            None => match arg {
                Arg::One(f) => rest.push(f),
                _ => return Err(()),
            },
        }
    }
    if let Some(v) = &def.variadic {
        env.insert(&v.name, Arg::Many(rest));
    }
    template(&def.body, &env)
}

fn frame_of(env: &BTreeMap<&str, Arg>, name: &str) -> Frame {
    match env.get(name) {
        Some(Arg::One(f)) => f.clone(),
        _ => panic!("`{name}` is not a score argument"),
    }
}

fn seconds(d: &DurationExpr, env: &BTreeMap<&str, Arg>) -> Decimal {
    match d {
        DurationExpr::Literal(v) => *v,
        DurationExpr::Dur(p) => frame_of(env, p).len(),
        DurationExpr::Param(p) => match env.get(p.as_str()) {
            Some(Arg::Native(NativeValue::Number(n))) => *n,
            _ => panic!("`{p}` is not a number argument"),
        },
        DurationExpr::Add(a, b) => seconds(a, env) + seconds(b, env),
        DurationExpr::Sub(a, b) => seconds(a, env) - seconds(b, env),
    }
}

fn then(acc: Frame, next: Frame) -> Frame {
    if acc.blocks.is_empty() && !next.blocks.is_empty() {
        return next;
    }
    let next = next.moved(acc.hi - next.lo);
    let mut blocks = acc.blocks;
    blocks.extend(next.blocks);
    Frame {
        lo: acc.lo,
        hi: next.hi,
        blocks,
    }
}

fn template(t: &ScoreTemplate, env: &BTreeMap<&str, Arg>) -> Result<Frame, ()> {
    match t {
        ScoreTemplate::Block { tracks, label, duration } => {
            let len = seconds(duration, env);
            if len <= Decimal::ZERO || tracks.is_empty() {
                return Err(());
            }
            let mut text = String::new();
            for part in &label.0 {
                match part {
                    LabelPart::Text(s) => text.push_str(s),
                    LabelPart::Param(p) => match env.get(p.as_str()) {
                        Some(Arg::Native(v)) => text.push_str(&v.display_text()),
                        _ => panic!("`{p}` is not a native argument"),
                    },
                }
            }
            Ok(Frame {
                lo: Decimal::ZERO,
                hi: len,
                blocks: tracks.iter().map(|t| (*t, Decimal::ZERO, len, text.clone())).collect(),
            })
        }
        ScoreTemplate::Hold(d) => {
            let len = seconds(d, env);
            if len < Decimal::ZERO {
                return Err(());
            }
            Ok(Frame::silent(len))
        }
        ScoreTemplate::Param(p) => Ok(frame_of(env, p)),
        ScoreTemplate::Seq(items) => {
            let mut acc = Frame::silent(Decimal::ZERO);
            for item in items {
                match item {
                    ScoreTemplate::Param(p) if matches!(env.get(p.as_str()), Some(Arg::Many(_))) => {
                        let Some(Arg::Many(fs)) = env.get(p.as_str()) else { unreachable!() };
                        for f in fs {
                            acc = then(acc, f.clone());
                        }
                    }
                    other => acc = then(acc, template(other, env)?),
                }
            }
            Ok(acc)
        }
        ScoreTemplate::Sync { base, overlay, offset } => {
            let base = template(base, env)?;
            let overlay = template(overlay, env)?;
            let offset = seconds(offset, env);
            if overlay.blocks.is_empty() {
                return Ok(base);
            }
            if base.blocks.is_empty() {
                return Ok(overlay);
            }
            let overlay = overlay.moved(base.lo + offset - overlay.lo);
            let mut blocks = base.blocks;
            blocks.extend(overlay.blocks);
            Ok(Frame {
                lo: base.lo.min(overlay.lo),
                hi: base.hi.max(overlay.hi),
                blocks,
            })
        }
    }
}

pub type QueryHit = (usize, Path, BTreeMap<String, Expression>);

/// Tries the pattern at every path of every piece. A pattern is unrolled
/// into a list of `(relative path, node)` constraints that are checked one
/// by one against the expression.
pub fn reference_query(pieces: &[Expression], pattern: &Pattern) -> Vec<QueryHit> {
    let mut constraints = Vec::new();
    unroll(pattern, &mut Vec::new(), &mut constraints);
    let mut out = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        let mut paths = Vec::new();
        all_paths(piece, &mut Vec::new(), &mut paths);
        for p in paths {
            if let Some(b) = check(piece, &p, &constraints) {
                out.push((i, Path(p), b));
            }
        }
    }
    out
}

fn unroll<'p>(p: &'p Pattern, at: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'p Pattern)>) {
    out.push((at.clone(), p));
    if let Pattern::Rule { children, .. } = p {
        for (i, c) in children.iter().enumerate() {
            at.push(i);
            unroll(c, at, out);
            at.pop();
        }
    }
}

fn all_paths(e: &Expression, at: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(at.clone());
    for (i, c) in e.children().iter().enumerate() {
        at.push(i);
        all_paths(c, at, out);
        at.pop();
    }
}

fn check(piece: &Expression, base: &[usize], constraints: &[(Vec<usize>, &Pattern)]) -> Option<BTreeMap<String, Expression>> {
    let mut bindings: BTreeMap<String, Expression> = BTreeMap::new();
    for (rel, p) in constraints {
        let mut full = base.to_vec();
        full.extend(rel);
        let node = piece.node_at(&Path(full)).ok()?;
        match p {
            Pattern::Wildcard => {}
            Pattern::Native(v) => {
                if *node != Expression::Native(v.clone()) {
                    return None;
                }
            }
            Pattern::Rule { name, children } => {
                if node.rule_name() != Some(name) || node.arity() != children.len() {
                    return None;
                }
            }
            Pattern::Var(x) => {
                if let Some(prev) = bindings.get(x) {
                    if prev != node {
                        return None;
                    }
                }
                bindings.insert(x.clone(), node.clone());
            }
        }
    }
    Some(bindings)
}

pub type Bounds = (f64, f64, f64, f64);

/// Union of element bounds per source path.
pub fn node_boxes(scene: &SceneGraph) -> BTreeMap<Path, Bounds> {
    let mut out: BTreeMap<Path, Bounds> = BTreeMap::new();
    for e in &scene.elements {
        let (x0, y0, x1, y1) = e.shape.bounds();
        out.entry(e.source.clone())
            .and_modify(|b| *b = (b.0.min(x0), b.1.min(y0), b.2.max(x1), b.3.max(y1)))
            .or_insert((x0, y0, x1, y1));
    }
    out
}

/// Every ancestor box contains every descendant box, and every box lies in
/// the scene.
pub fn check_containment(scene: &SceneGraph, eps: f64) -> Result<(), String> {
    let boxes = node_boxes(scene);
    let inside = |outer: &Bounds, inner: &Bounds| {
        inner.0 >= outer.0 - eps && inner.1 >= outer.1 - eps && inner.2 <= outer.2 + eps && inner.3 <= outer.3 + eps
    };
    let whole = (0.0, 0.0, scene.width, scene.height);
    for (p, b) in &boxes {
        if !inside(&whole, b) {
            return Err(format!("`{p}` {b:?} leaves the scene {whole:?}"));
        }
        for (q, c) in &boxes {
            if p != q && p.is_prefix_of(q) && !inside(b, c) {
                return Err(format!("`{p}` {b:?} does not contain `{q}` {c:?}"));
            }
        }
    }
    Ok(())
}

/// Expression nodes that have no scene element although they should. Nodes
/// absorbed into a compound template operator, other than the bound
/// subtrees, are not expected to appear.
pub fn uncovered(reg: &Registry, expr: &Expression, scene: &SceneGraph) -> Vec<Path> {
    let boxes = node_boxes(scene);
    let mut absorbed = Vec::new();
    for c in apply_templates(reg, expr).compound_sources() {
        let node = expr.node_at(&c).expect("compound source is a valid path");
        let t = reg
            .templates
            .iter()
            .find(|t| t.pattern.matches(node, &c).is_some())
            .expect("some template matches a compound source");
        let mut constraints = Vec::new();
        unroll(&t.pattern, &mut Vec::new(), &mut constraints);
        for (rel, p) in constraints {
            if !rel.is_empty() && !matches!(p, Pattern::Var(_)) {
                absorbed.push((c.join(&Path(rel)), matches!(p, Pattern::Wildcard)));
            }
        }
    }
    let is_absorbed = |p: &Path| {
        absorbed
            .iter()
            .any(|(a, whole)| a == p || (*whole && a.is_prefix_of(p)))
    };
    let mut paths = Vec::new();
    all_paths(expr, &mut Vec::new(), &mut paths);
    paths
        .into_iter()
        .map(Path)
        .filter(|p| !boxes.contains_key(p) && !is_absorbed(p))
        .collect()
}
