//! Test support for the azed crates: seeded generators of expressions,
//! patterns and documents, and slow reference implementations that the
//! real ones are checked against.

pub mod gen;
pub mod oracle;

/// A small registry that exercises holds, numeric offsets, negative
/// offsets, variadics and collisions more than the default one does.
pub const ALGEBRA_REGISTRY: &str = r#"
point P
point Q

rule a() = block({rhand}, "a", 1) glyph atom "U+0041"
rule b(n: number) = block({rhand,lhand}, "b", n)
rule face(n: number) = block({mouth,eyes}, "face", n)
rule tilt(s: side) = block({head}, "tilt:{s}", 0.5)
rule pause(n: number) = hold(n)
rule both(x: score, y: score, n: number) = sync(x, y, n)
rule lead(x: score, y: score) = sync(seq(hold(0.5), x), y, 0 - dur(y)) glyph infix "U+2227"
rule all(xs: score... min 0) = seq(xs) glyph bulletlist "U+2022"
rule pad(x: score, n: number) = seq(hold(n), x, hold(n))
rule slow(x: score) = seq(x, hold(0.25)) glyph overmark "U+005F"
rule mark(x: score, p: point) = sync(x, block({torso}, "t:{p}", dur(x)), 0)
rule under(x: score, y: score) = seq(x, y) glyph contextbar
"#;
