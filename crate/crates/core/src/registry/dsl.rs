//! Reader for the registry declaration format.
//!
//! A declaration starts on a line whose first word is `point`, `rule` or
//! `template`; any following non-blank line that does not start with one of
//! those keywords continues it. `#` starts a comment when it begins a line or
//! is followed by whitespace, so native literals like `#left` survive inside
//! default expressions.

use std::collections::{BTreeMap, HashSet};

use super::{
    CompoundGlyph, DurationExpr, GlyphSpec, LabelPart, LabelTemplate, Param, ParamType, Registry,
    RegistryError, RegistryErrorKind as Kind, RuleDef, ScoreTemplate, Template, TypeError, Variadic,
};
use crate::decimal::Decimal;
use crate::expr::{Expression, NativeValue, PointName, RuleName};
use crate::parser::{self, ParseError};
use crate::pattern::{self, Pattern};
use crate::score::Track;

const KEYWORDS: [&str; 3] = ["point", "rule", "template"];

struct Decl {
    text: String,
    /// (byte offset in `text`, 1-based source line) for each joined line.
    lines: Vec<(usize, usize)>,
}

impl Decl {
    fn line_of(&self, offset: usize) -> usize {
        self.lines
            .iter()
            .rev()
            .find(|(start, _)| *start <= offset)
            .map(|(_, line)| *line)
            .unwrap_or(self.lines[0].1)
    }

    fn first_line(&self) -> usize {
        self.lines[0].1
    }
}

fn strip_comment(line: &str) -> &str {
    if line.trim_start().starts_with('#') {
        return "";
    }
    let bytes = line.as_bytes();
    let mut in_string = false;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' if in_string => i += 1,
            b'"' => in_string = !in_string,
            b'#' if !in_string => {
                let next = bytes.get(i + 1);
                if next.is_none_or(|b| b.is_ascii_whitespace()) {
                    return &line[..i];
                }
            }
            _ => {}
        }
        i += 1;
    }
    line
}

fn split_declarations(text: &str) -> Result<Vec<Decl>, RegistryError> {
    let mut decls: Vec<Decl> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let first = trimmed.split_whitespace().next().unwrap_or("");
        if KEYWORDS.contains(&first) {
            decls.push(Decl {
                text: trimmed.to_string(),
                lines: vec![(0, line_no)],
            });
        } else if let Some(d) = decls.last_mut() {
            d.text.push('\n');
            d.lines.push((d.text.len(), line_no));
            d.text.push_str(trimmed);
        } else {
            return Err(RegistryError {
                line: line_no,
                kind: Kind::Syntax {
                    expected: "`point`, `rule` or `template`".into(),
                    found: format!("`{first}`"),
                },
            });
        }
    }
    Ok(decls)
}

struct SyntaxError {
    offset: usize,
    expected: String,
    found: String,
}

impl From<ParseError> for SyntaxError {
    fn from(e: ParseError) -> Self {
        SyntaxError {
            offset: e.offset,
            expected: e.expected,
            found: e.found,
        }
    }
}

type PResult<T> = Result<T, SyntaxError>;

struct Reader<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn fail<T>(&self, expected: impl Into<String>) -> PResult<T> {
        let rest = self.rest();
        let found = if rest.is_empty() {
            "end of declaration".to_string()
        } else {
            let tok: String = rest
                .chars()
                .take_while(|c| !c.is_whitespace())
                .take(16)
                .collect();
            format!("`{tok}`")
        };
        Err(SyntaxError {
            offset: self.pos,
            expected: expected.into(),
            found,
        })
    }

    fn peek_ident(&self) -> Option<&'a str> {
        let rest = self.rest();
        let first = rest.bytes().next()?;
        if !(first.is_ascii_alphabetic() || first == b'_') {
            return None;
        }
        let len = rest
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_' || *b == b'-')
            .count();
        Some(&rest[..len])
    }

    fn ident(&mut self, what: &str) -> PResult<&'a str> {
        self.ws();
        match self.peek_ident() {
            Some(id) => {
                self.pos += id.len();
                Ok(id)
            }
            None => self.fail(what),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        if self.peek_ident() == Some(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    /// Identifier `kw` immediately followed by `(`.
    fn call(&mut self, kw: &str) -> bool {
        self.ws();
        if self.peek_ident() == Some(kw) && self.rest()[kw.len()..].trim_start().starts_with('(') {
            self.pos += kw.len();
            self.ws();
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn punct(&mut self, p: &str) -> bool {
        self.ws();
        if self.rest().starts_with(p) {
            self.pos += p.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> PResult<()> {
        if self.punct(p) {
            Ok(())
        } else {
            self.fail(format!("`{p}`"))
        }
    }

    fn unsigned_number(&mut self) -> PResult<Decimal> {
        self.ws();
        let rest = self.rest();
        let int = rest.bytes().take_while(u8::is_ascii_digit).count();
        let mut len = int;
        if int > 0 && rest[int..].starts_with('.') {
            let frac = rest[int + 1..].bytes().take_while(u8::is_ascii_digit).count();
            if frac > 0 {
                len += 1 + frac;
            }
        }
        match rest[..len].parse() {
            Ok(d) if len > 0 => {
                self.pos += len;
                Ok(d)
            }
            _ => self.fail("number"),
        }
    }

    fn integer(&mut self) -> PResult<usize> {
        self.ws();
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        match rest[..len].parse() {
            Ok(n) => {
                self.pos += len;
                Ok(n)
            }
            Err(_) => self.fail("integer"),
        }
    }

    fn string(&mut self) -> PResult<String> {
        self.ws();
        if !self.rest().starts_with('"') {
            return self.fail("string literal");
        }
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, e @ ('"' | '\\'))) => out.push(e),
                    _ => {
                        self.pos += i;
                        return self.fail("`\\\"` or `\\\\`");
                    }
                },
                c => out.push(c),
            }
        }
        self.pos = start;
        self.fail("closing `\"`")
    }

    fn at_end(&mut self) -> bool {
        self.ws();
        self.rest().is_empty()
    }

    fn expression(&mut self) -> PResult<Expression> {
        self.ws();
        let (e, end) = parser::parse_prefix(self.text, self.pos)?;
        self.pos = end;
        Ok(e)
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        self.ws();
        let (p, end) = pattern::parse_pattern_prefix(self.text, self.pos)?;
        self.pos = end;
        Ok(p)
    }

    fn rule_name(&mut self) -> PResult<RuleName> {
        self.ws();
        let start = self.pos;
        let id = self.ident("rule name")?;
        RuleName::new(id).or_else(|_| {
            self.pos = start;
            self.fail("lowercase kebab-case name")
        })
    }

    fn duration(&mut self) -> PResult<DurationExpr> {
        let mut acc = self.duration_term()?;
        loop {
            if self.punct("+") {
                acc = DurationExpr::Add(Box::new(acc), Box::new(self.duration_term()?));
            } else if self.punct("-") {
                acc = DurationExpr::Sub(Box::new(acc), Box::new(self.duration_term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn duration_term(&mut self) -> PResult<DurationExpr> {
        if self.punct("(") {
            let e = self.duration()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.punct("-") {
            return Ok(DurationExpr::Literal(-self.unsigned_number()?));
        }
        if self.call("dur") {
            let name = self.ident("parameter name")?;
            self.expect(")")?;
            return Ok(DurationExpr::Dur(name.to_string()));
        }
        self.ws();
        if self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            return Ok(DurationExpr::Literal(self.unsigned_number()?));
        }
        if self.peek_ident().is_some() {
            return Ok(DurationExpr::Param(self.ident("parameter name")?.to_string()));
        }
        self.fail("duration")
    }

    fn label(&mut self) -> PResult<LabelTemplate> {
        self.ws();
        let at = self.pos;
        let raw = self.string()?;
        let mut parts = Vec::new();
        let mut text = String::new();
        let mut chars = raw.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '{' if chars.peek() == Some(&'{') => {
                    chars.next();
                    text.push('{');
                }
                '}' if chars.peek() == Some(&'}') => {
                    chars.next();
                    text.push('}');
                }
                '{' => {
                    let name: String = chars.by_ref().take_while(|&c| c != '}').collect();
                    if name.is_empty() || !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-') {
                        return Err(SyntaxError {
                            offset: at,
                            expected: "`{param}` splice".into(),
                            found: format!("`{{{name}`"),
                        });
                    }
                    if !text.is_empty() {
                        parts.push(LabelPart::Text(std::mem::take(&mut text)));
                    }
                    parts.push(LabelPart::Param(name));
                }
                '}' => {
                    return Err(SyntaxError {
                        offset: at,
                        expected: "`}}` escape".into(),
                        found: "`}`".into(),
                    })
                }
                c => text.push(c),
            }
        }
        if !text.is_empty() {
            parts.push(LabelPart::Text(text));
        }
        Ok(LabelTemplate(parts))
    }

    fn score(&mut self) -> PResult<ScoreTemplate> {
        if self.call("block") {
            self.expect("{")?;
            let mut tracks = Vec::new();
            loop {
                let at = self.pos;
                let id = self.ident("track name")?;
                let track: Track = id.parse().or_else(|_| {
                    self.pos = at;
                    self.ws();
                    self.fail("track name")
                })?;
                if tracks.contains(&track) {
                    self.pos = at;
                    self.ws();
                    return self.fail("distinct track");
                }
                tracks.push(track);
                if self.punct("}") {
                    break;
                }
                self.expect(",")?;
            }
            tracks.sort();
            self.expect(",")?;
            let label = self.label()?;
            self.expect(",")?;
            let duration = self.duration()?;
            self.expect(")")?;
            return Ok(ScoreTemplate::Block { tracks, label, duration });
        }
        if self.call("seq") {
            let mut items = vec![self.score()?];
            while self.punct(",") {
                items.push(self.score()?);
            }
            self.expect(")")?;
            return Ok(ScoreTemplate::Seq(items));
        }
        if self.call("sync") {
            let base = self.score()?;
            self.expect(",")?;
            let overlay = self.score()?;
            self.expect(",")?;
            let offset = self.duration()?;
            self.expect(")")?;
            return Ok(ScoreTemplate::Sync {
                base: Box::new(base),
                overlay: Box::new(overlay),
                offset,
            });
        }
        if self.call("hold") {
            let d = self.duration()?;
            self.expect(")")?;
            return Ok(ScoreTemplate::Hold(d));
        }
        Ok(ScoreTemplate::Param(self.ident("score template")?.to_string()))
    }

    fn codepoints(&mut self) -> PResult<Result<String, Kind>> {
        let raw = self.string()?;
        Ok(parse_codepoints(&raw))
    }
}

pub(super) fn parse_codepoints(raw: &str) -> Result<String, Kind> {
    let mut out = String::new();
    for item in raw.split_whitespace() {
        let hex = item
            .strip_prefix("U+")
            .filter(|h| (4..=6).contains(&h.len()) && h.bytes().all(|b| b.is_ascii_hexdigit()))
            .ok_or_else(|| Kind::Codepoints(format!("`{item}` is not of the form U+XXXX")))?;
        let c = u32::from_str_radix(hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| Kind::Codepoints(format!("`{item}` is not a scalar value")))?;
        out.push(c);
    }
    if out.is_empty() {
        return Err(Kind::Codepoints("empty".into()));
    }
    Ok(out)
}

enum Item {
    Point(PointName),
    Rule(RuleDef),
    Template {
        template: Template,
        /// Explicit slot variables, checked against the pattern later.
        slots: Option<(String, String)>,
    },
}

fn syntax(decl: &Decl, e: SyntaxError) -> RegistryError {
    RegistryError {
        line: decl.line_of(e.offset),
        kind: Kind::Syntax {
            expected: e.expected,
            found: e.found,
        },
    }
}

fn read_decl(decl: &Decl) -> Result<Item, RegistryError> {
    let at_decl = |kind| RegistryError {
        line: decl.first_line(),
        kind,
    };
    let mut r = Reader {
        text: &decl.text,
        pos: 0,
    };
    let item = (|| -> PResult<Result<Item, Kind>> {
        if r.keyword("point") {
            let at = r.pos;
            let id = r.ident("point name")?;
            let name = match PointName::new(id) {
                Ok(n) => n,
                Err(_) => {
                    r.pos = at;
                    r.ws();
                    return r.fail("point name");
                }
            };
            if !r.at_end() {
                return r.fail("end of declaration");
            }
            return Ok(Ok(Item::Point(name)));
        }
        if r.keyword("rule") {
            let name = r.rule_name()?;
            r.expect("(")?;
            let mut params: Vec<Param> = Vec::new();
            let mut variadic = None;
            if !r.punct(")") {
                loop {
                    let pname = r.ident("parameter name")?.to_string();
                    r.expect(":")?;
                    let at = r.pos;
                    let tyname = r.ident("parameter type")?;
                    let ty = match ParamType::parse(tyname) {
                        Some(t) => t,
                        None => {
                            r.pos = at;
                            r.ws();
                            return r.fail("`score`, `point`, `number` or `side`");
                        }
                    };
                    if r.punct("...") {
                        let min = if r.keyword("min") { r.integer()? } else { 1 };
                        variadic = Some(Variadic { name: pname, ty, min });
                        r.expect(")")?;
                        break;
                    }
                    let default = if r.keyword("default") {
                        Some(r.expression()?)
                    } else {
                        None
                    };
                    params.push(Param { name: pname, ty, default });
                    if r.punct(")") {
                        break;
                    }
                    r.expect(",")?;
                }
            }
            r.expect("=")?;
            let body = r.score()?;
            let glyph = if r.keyword("glyph") {
                let at = r.pos;
                let kind = r.ident("glyph kind")?;
                let spec = match kind {
                    "atom" => r.codepoints()?.map(GlyphSpec::Atom),
                    "infix" => r.codepoints()?.map(GlyphSpec::Infix),
                    "overmark" => r.codepoints()?.map(GlyphSpec::Overmark),
                    "bulletlist" => r.codepoints()?.map(GlyphSpec::BulletList),
                    "contextbar" => Ok(GlyphSpec::ContextBar),
                    "nameframe" => Ok(GlyphSpec::NameFrame),
                    _ => {
                        r.pos = at;
                        r.ws();
                        return r.fail("glyph kind");
                    }
                };
                match spec {
                    Ok(s) => Some(s),
                    Err(k) => return Ok(Err(k)),
                }
            } else {
                None
            };
            if !r.at_end() {
                return r.fail("end of declaration");
            }
            return Ok(Ok(Item::Rule(RuleDef {
                name,
                params,
                variadic,
                body,
                glyph,
            })));
        }
        if r.keyword("template") {
            let name = r.rule_name()?;
            r.expect("=")?;
            let pattern = r.pattern()?;
            if !r.keyword("glyph") {
                return r.fail("`glyph`");
            }
            if !r.keyword("sidebyside") {
                return r.fail("`sidebyside`");
            }
            let separator = match r.codepoints()? {
                Ok(s) => s,
                Err(k) => return Ok(Err(k)),
            };
            let slots = if r.punct("(") {
                r.expect("?")?;
                let a = r.ident("variable")?.to_string();
                r.expect(",")?;
                r.expect("?")?;
                let b = r.ident("variable")?.to_string();
                r.expect(")")?;
                Some((a, b))
            } else {
                None
            };
            if !r.at_end() {
                return r.fail("end of declaration");
            }
            return Ok(Ok(Item::Template {
                template: Template {
                    name,
                    pattern,
                    glyph: CompoundGlyph::SideBySide {
                        separator,
                        left: String::new(),
                        right: String::new(),
                    },
                },
                slots,
            }));
        }
        r.fail("declaration")
    })();
    match item {
        Ok(Ok(item)) => Ok(item),
        Ok(Err(kind)) => Err(at_decl(kind)),
        Err(e) => Err(syntax(decl, e)),
    }
}

/// Parses and validates registry text.
pub fn load_registry(text: &str) -> Result<Registry, RegistryError> {
    let decls = split_declarations(text)?;
    let mut reg = Registry::default();
    let mut rule_lines = BTreeMap::new();
    let mut pending_templates = Vec::new();
    let mut template_names = HashSet::new();

    for decl in &decls {
        let line = decl.first_line();
        let err = |kind| RegistryError { line, kind };
        match read_decl(decl)? {
            Item::Point(p) => {
                if reg.has_point(&p) {
                    return Err(err(Kind::DuplicatePoint(p.to_string())));
                }
                reg.points.push(p);
            }
            Item::Rule(def) => {
                if reg.rules.contains_key(&def.name) {
                    return Err(err(Kind::DuplicateRule(def.name.to_string())));
                }
                validate_rule(&def).map_err(err)?;
                rule_lines.insert(def.name.clone(), line);
                reg.rules.insert(def.name.clone(), def);
            }
            Item::Template { template, slots } => {
                if !template_names.insert(template.name.clone()) {
                    return Err(err(Kind::DuplicateTemplate(template.name.to_string())));
                }
                pending_templates.push((line, template, slots));
            }
        }
    }

    // Cross-references are checked once every declaration is known.
    let mut checks: Vec<(usize, Result<(), Kind>)> = Vec::new();
    for (name, def) in &reg.rules {
        let line = rule_lines[name];
        for p in &def.params {
            if let Some(d) = &p.default {
                checks.push((line, check_default(&reg, &p.name, p.ty, d)));
            }
        }
    }
    for (line, template, slots) in pending_templates {
        match finish_template(&reg, template, slots) {
            Ok(t) => reg.templates.push(t),
            Err(kind) => checks.push((line, Err(kind))),
        }
    }
    checks.sort_by_key(|(line, _)| *line);
    if let Some((line, Err(kind))) = checks.into_iter().find(|(_, r)| r.is_err()) {
        return Err(RegistryError { line, kind });
    }
    Ok(reg)
}

fn check_default(reg: &Registry, param: &str, ty: ParamType, value: &Expression) -> Result<(), Kind> {
    match reg.type_check(value) {
        Ok(found) if found == ty => Ok(()),
        Ok(found) => Err(Kind::BadDefault {
            param: param.to_string(),
            message: format!("expected {ty}, found {found}"),
        }),
        Err(TypeError::UnknownPoint { name, .. }) => Err(Kind::UndeclaredPoint(name.to_string())),
        Err(e) => Err(Kind::BadDefault {
            param: param.to_string(),
            message: e.to_string(),
        }),
    }
}

fn finish_template(
    reg: &Registry,
    mut template: Template,
    slots: Option<(String, String)>,
) -> Result<Template, Kind> {
    fn walk(reg: &Registry, p: &Pattern) -> Result<(), Kind> {
        match p {
            Pattern::Rule { name, children } => {
                if !reg.rules.contains_key(name) {
                    return Err(Kind::UnknownRule(name.to_string()));
                }
                children.iter().try_for_each(|c| walk(reg, c))
            }
            Pattern::Native(NativeValue::Point(pt)) if !reg.has_point(pt) => {
                Err(Kind::UndeclaredPoint(pt.to_string()))
            }
            _ => Ok(()),
        }
    }
    walk(reg, &template.pattern)?;
    let vars = template.pattern.variables();
    let (left, right) = match slots {
        Some((a, b)) => {
            for v in [&a, &b] {
                if !vars.contains(&v.as_str()) {
                    return Err(Kind::UnboundTemplateVariable(v.clone()));
                }
            }
            (a, b)
        }
        None if vars.len() == 2 => (vars[0].to_string(), vars[1].to_string()),
        None => {
            return Err(Kind::GlyphArity {
                glyph: "sidebyside",
                needs: "exactly two pattern variables or an explicit slot list",
            })
        }
    };
    let CompoundGlyph::SideBySide { separator, .. } = template.glyph;
    template.glyph = CompoundGlyph::SideBySide { separator, left, right };
    Ok(template)
}

/// Where a parameter reference occurs inside a body.
#[derive(Clone, Copy, PartialEq)]
enum Usage {
    Score,
    SeqItem,
    Duration,
    DurOf,
    Label,
}

impl Usage {
    fn describe(self) -> &'static str {
        match self {
            Usage::Score | Usage::SeqItem => "a score",
            Usage::Duration => "a duration",
            Usage::DurOf => "the argument of dur()",
            Usage::Label => "a label splice",
        }
    }
}

fn validate_rule(def: &RuleDef) -> Result<(), Kind> {
    let mut seen = HashSet::new();
    let all_names = def
        .params
        .iter()
        .map(|p| &p.name)
        .chain(def.variadic.as_ref().map(|v| &v.name));
    for name in all_names {
        if !seen.insert(name.as_str()) {
            return Err(Kind::DuplicateParam(name.clone()));
        }
    }

    let lookup = |name: &str, usage: Usage| -> Result<(), Kind> {
        let (ty, variadic) = if let Some(p) = def.params.iter().find(|p| p.name == name) {
            (p.ty, false)
        } else if let Some(v) = def.variadic.as_ref().filter(|v| v.name == name) {
            (v.ty, true)
        } else {
            return Err(Kind::UnboundParam(name.to_string()));
        };
        let ok = match usage {
            Usage::Score | Usage::DurOf => ty == ParamType::Score && !variadic,
            Usage::SeqItem => ty == ParamType::Score,
            Usage::Duration => ty == ParamType::Number && !variadic,
            Usage::Label => matches!(ty, ParamType::Point | ParamType::Side) && !variadic,
        };
        if ok {
            Ok(())
        } else {
            Err(Kind::ParamMisuse {
                param: name.to_string(),
                ty: if variadic { format!("{ty}...") } else { ty.to_string() },
                usage: usage.describe(),
            })
        }
    };

    fn check_duration(
        d: &DurationExpr,
        lookup: &dyn Fn(&str, Usage) -> Result<(), Kind>,
    ) -> Result<(), Kind> {
        match d {
            DurationExpr::Literal(_) => Ok(()),
            DurationExpr::Dur(p) => lookup(p, Usage::DurOf),
            DurationExpr::Param(p) => lookup(p, Usage::Duration),
            DurationExpr::Add(a, b) | DurationExpr::Sub(a, b) => {
                check_duration(a, lookup)?;
                check_duration(b, lookup)
            }
        }
    }

    fn check_body(
        t: &ScoreTemplate,
        usage: Usage,
        lookup: &dyn Fn(&str, Usage) -> Result<(), Kind>,
    ) -> Result<(), Kind> {
        match t {
            ScoreTemplate::Param(p) => lookup(p, usage),
            ScoreTemplate::Block { label, duration, .. } => {
                for part in &label.0 {
                    if let LabelPart::Param(p) = part {
                        lookup(p, Usage::Label)?;
                    }
                }
                check_duration(duration, lookup)
            }
            ScoreTemplate::Seq(items) => items
                .iter()
                .try_for_each(|i| check_body(i, Usage::SeqItem, lookup)),
            ScoreTemplate::Sync { base, overlay, offset } => {
                check_body(base, Usage::Score, lookup)?;
                check_body(overlay, Usage::Score, lookup)?;
                check_duration(offset, lookup)
            }
            ScoreTemplate::Hold(d) => check_duration(d, lookup),
        }
    }

    check_body(&def.body, Usage::Score, &lookup)?;

    let fixed = def.params.len();
    let variadic = def.variadic.is_some();
    let needs = match def.glyph {
        Some(GlyphSpec::Atom(_)) if fixed != 0 || variadic => Some("no parameters"),
        Some(GlyphSpec::Overmark(_)) if fixed != 1 || variadic => Some("exactly one parameter"),
        Some(GlyphSpec::Infix(_) | GlyphSpec::ContextBar) if fixed != 2 || variadic => {
            Some("exactly two parameters")
        }
        _ => None,
    };
    if let (Some(needs), Some(g)) = (needs, &def.glyph) {
        return Err(Kind::GlyphArity { glyph: g.kind(), needs });
    }
    Ok(())
}
