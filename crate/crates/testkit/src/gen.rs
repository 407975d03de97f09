//! Seeded random generators.

use azed_core::expr::{Expression, NativeValue, PointName, RuleName, Side};
use azed_core::pattern::Pattern;
use azed_core::registry::{ParamType, Registry};
use azed_core::Decimal;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

const NAMES: &[&str] = &["a", "dog", "x-1", "info-about", "q9", "each-of"];
const POINTS: &[&str] = &["Lssp", "p", "A-1", "abdomen-hi"];

pub fn decimal(rng: &mut impl Rng) -> Decimal {
    Decimal::new(rng.random_range(-99_999..=99_999), rng.random_range(0..=4))
}

pub fn native(rng: &mut impl Rng) -> NativeValue {
    match rng.random_range(0..3) {
        0 => NativeValue::Number(decimal(rng)),
        1 => NativeValue::Point(PointName::new(POINTS[rng.random_range(0..POINTS.len())]).unwrap()),
        _ => NativeValue::Side(if rng.random() { Side::Left } else { Side::Right }),
    }
}

/// Any syntactically valid tree, ignoring rule signatures.
pub fn any_tree(rng: &mut impl Rng, depth: usize) -> Expression {
    if depth == 0 || rng.random_bool(0.25) {
        if rng.random_bool(0.4) {
            return Expression::Native(native(rng));
        }
        return Expression::app(NAMES[rng.random_range(0..NAMES.len())], vec![]);
    }
    let n = rng.random_range(0..=3);
    let children = (0..n).map(|_| any_tree(rng, depth - 1)).collect();
    Expression::app(NAMES[rng.random_range(0..NAMES.len())], children)
}

fn native_of(rng: &mut impl Rng, reg: &Registry, ty: ParamType) -> Expression {
    match ty {
        ParamType::Point => Expression::Native(NativeValue::Point(reg.points[rng.random_range(0..reg.points.len())].clone())),
        // mostly small positive durations, with the odd zero or negative
        ParamType::Number => {
            let tenths = if rng.random_bool(0.9) {
                rng.random_range(1..=30)
            } else {
                rng.random_range(-5..=0)
            };
            Expression::number(Decimal::new(tenths, 1))
        }
        ParamType::Side => Expression::side(if rng.random() { Side::Left } else { Side::Right }),
        ParamType::Score => unreachable!("scores are rule applications"),
    }
}

/// A score-typed tree over `reg` of depth at most `max_depth + 1`, with
/// roughly `budget` rule nodes at most.
pub fn well_typed(rng: &mut impl Rng, reg: &Registry, max_depth: usize, budget: usize) -> Expression {
    let mut budget = budget;
    well_typed_inner(rng, reg, max_depth, &mut budget)
}

fn well_typed_inner(rng: &mut impl Rng, reg: &Registry, depth: usize, budget: &mut usize) -> Expression {
    let leaf = depth == 0 || *budget == 0 || rng.random_bool(0.3);
    // leaves need no score arguments; inner nodes take at least one
    let fits = |name: &&RuleName| {
        let def = &reg.rules[*name];
        let fixed = def.params.iter().any(|p| p.ty == ParamType::Score);
        let variadic = def.variadic.as_ref().filter(|v| v.ty == ParamType::Score);
        if leaf {
            !fixed && variadic.is_none_or(|v| v.min == 0)
        } else {
            fixed || variadic.is_some()
        }
    };
    let candidates: Vec<&RuleName> = reg.rules.keys().filter(fits).collect();
    assert!(!candidates.is_empty(), "registry has no rule usable as a {} node", if leaf { "leaf" } else { "inner" });
    let def = &reg.rules[candidates[rng.random_range(0..candidates.len())]];
    *budget = budget.saturating_sub(1);
    let mut children: Vec<Expression> = Vec::new();
    for p in &def.params {
        children.push(argument(rng, reg, p.ty, depth, budget));
    }
    if let Some(v) = &def.variadic {
        let extra = if leaf { 0 } else { rng.random_range(0..=2) };
        for _ in 0..v.min + extra {
            children.push(argument(rng, reg, v.ty, depth, budget));
        }
    }
    Expression::Rule {
        name: def.name.clone(),
        children,
    }
}

fn argument(rng: &mut impl Rng, reg: &Registry, ty: ParamType, depth: usize, budget: &mut usize) -> Expression {
    if ty == ParamType::Score {
        well_typed_inner(rng, reg, depth.saturating_sub(1), budget)
    } else {
        native_of(rng, reg, ty)
    }
}

/// A pattern that has a fair chance of matching somewhere in `expr`: a
/// random subtree with parts abstracted into `_` and variables.
pub fn pattern_for(rng: &mut impl Rng, reg: &Registry, expr: &Expression) -> Pattern {
    if rng.random_bool(0.2) {
        return random_pattern(rng, reg, 2);
    }
    let nodes = expr.preorder();
    let (_, sub) = nodes[rng.random_range(0..nodes.len())];
    abstract_tree(rng, sub, true)
}

fn abstract_tree(rng: &mut impl Rng, e: &Expression, root: bool) -> Pattern {
    if !root {
        match rng.random_range(0..10) {
            0 => return Pattern::Wildcard,
            1 => return Pattern::Var("a".into()),
            2 => return Pattern::Var("b".into()),
            _ => {}
        }
    }
    match e {
        Expression::Native(v) => Pattern::Native(v.clone()),
        Expression::Rule { name, children } => Pattern::Rule {
            name: name.clone(),
            children: children.iter().map(|c| abstract_tree(rng, c, false)).collect(),
        },
    }
}

/// A pattern built from the registry's vocabulary without reference to any
/// document.
pub fn random_pattern(rng: &mut impl Rng, reg: &Registry, depth: usize) -> Pattern {
    match rng.random_range(0..if depth == 0 { 4 } else { 6 }) {
        0 => Pattern::Wildcard,
        1 => Pattern::Var(["a", "b", "c"][rng.random_range(0..3)].into()),
        2 => {
            let ty = [ParamType::Point, ParamType::Number, ParamType::Side][rng.random_range(0..3)];
            match native_of(rng, reg, ty) {
                Expression::Native(v) => Pattern::Native(v),
                _ => unreachable!(),
            }
        }
        _ => {
            let names: Vec<&RuleName> = reg.rules.keys().collect();
            let def = &reg.rules[names[rng.random_range(0..names.len())]];
            let n = def.params.len() + def.variadic.as_ref().map_or(0, |v| v.min + rng.random_range(0..=1));
            let children = (0..n)
                .map(|_| random_pattern(rng, reg, depth.saturating_sub(1)))
                .collect();
            Pattern::Rule {
                name: def.name.clone(),
                children,
            }
        }
    }
}

/// Up to four well-typed pieces.
pub fn document(rng: &mut impl Rng, reg: &Registry) -> Vec<Expression> {
    let n = rng.random_range(0..=4);
    (0..n).map(|_| well_typed(rng, reg, 4, 12)).collect()
}
