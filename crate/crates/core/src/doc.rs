//! Documents: ordered pieces of expressions, structural search over them, and
//! type-preserving edits with undo.

use std::collections::BTreeMap;

use crate::expr::{Expression, InvalidPath, Path};
use crate::parser::{offset_of, parse, print_canonical};
use crate::pattern::Pattern;
use crate::registry::{ParamType, Registry, TypeError};

/// Maximum number of undo entries kept per document.
pub const HISTORY_LIMIT: usize = 1000;

/// Inverse of an applied edit: put `previous` back at `path` in `piece`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryEntry {
    pub piece: usize,
    pub path: Path,
    pub previous: Expression,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pieces: Vec<Expression>,
    history: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub piece: usize,
    pub path: Path,
    pub bindings: BTreeMap<String, Expression>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EditError {
    #[error("piece {piece} does not exist (document has {count})")]
    NoSuchPiece { piece: usize, count: usize },
    #[error(transparent)]
    InvalidPath(#[from] InvalidPath),
    #[error("piece {piece}: {error}")]
    Type { piece: usize, error: TypeError },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("`{rule}` has no argument slot {slot}")]
    NoSuchSlot { rule: String, slot: usize },
    #[error("cannot wrap with `{rule}`: slot {slot} has no placeholder default")]
    SlotUnfillable { rule: String, slot: usize },
    #[error("nothing to undo")]
    NothingToUndo,
}

fn check_piece(reg: &Registry, piece: usize, expr: &Expression) -> Result<(), EditError> {
    match reg.type_check(expr) {
        Ok(ParamType::Score) => Ok(()),
        Ok(found) => Err(EditError::Type {
            piece,
            error: TypeError::TypeMismatch {
                path: Path::root(),
                expected: ParamType::Score,
                found,
            },
        }),
        Err(error) => Err(EditError::Type { piece, error }),
    }
}

/// A problem with one line of document text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    /// 1-based.
    pub line: usize,
    /// Byte offset within the line.
    pub offset: usize,
    pub message: String,
}

/// Parses and type-checks one piece. Errors carry the byte offset of the
/// problem within `text`.
pub fn parse_piece(reg: &Registry, text: &str) -> Result<Expression, (usize, String)> {
    let expr = parse(text).map_err(|e| (e.offset, format!("expected {}, found {}", e.expected, e.found)))?;
    match reg.type_check(&expr) {
        Ok(ParamType::Score) => Ok(expr),
        Ok(found) => Err((offset_of(text, &Path::root()).unwrap_or(0), format!("expected score, found {found}"))),
        Err(e) => Err((offset_of(text, e.path()).unwrap_or(0), e.to_string())),
    }
}

/// The lines of document text that hold pieces, with 1-based line numbers.
/// Blank lines and lines starting with `#` are skipped.
pub fn piece_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim_start();
        (!trimmed.is_empty() && !trimmed.starts_with('#')).then_some((i + 1, line))
    })
}

/// Reads document text, one piece per line (see [`piece_lines`]). All bad
/// lines are reported, not just the first.
pub fn parse_document(reg: &Registry, text: &str) -> Result<Vec<Expression>, Vec<LineError>> {
    let mut pieces = Vec::new();
    let mut errors = Vec::new();
    for (line, src) in piece_lines(text) {
        match parse_piece(reg, src) {
            Ok(e) => pieces.push(e),
            Err((offset, message)) => errors.push(LineError { line, offset, message }),
        }
    }
    if errors.is_empty() {
        Ok(pieces)
    } else {
        Err(errors)
    }
}

/// Canonical document text, one piece per line.
pub fn print_document(pieces: &[Expression]) -> String {
    pieces.iter().map(|p| print_canonical(p) + "\n").collect()
}

impl Document {
    /// A fresh document with empty history. Every piece must be a well-typed
    /// score expression.
    pub fn new(reg: &Registry, id: impl Into<String>, pieces: Vec<Expression>) -> Result<Document, EditError> {
        Document::restore(reg, id, pieces, Vec::new())
    }

    /// Rebuilds a document with an existing history, e.g. after a reload.
    pub fn restore(
        reg: &Registry,
        id: impl Into<String>,
        pieces: Vec<Expression>,
        history: Vec<HistoryEntry>,
    ) -> Result<Document, EditError> {
        for (i, p) in pieces.iter().enumerate() {
            check_piece(reg, i, p)?;
        }
        Ok(Document {
            id: id.into(),
            pieces,
            history,
        })
    }

    pub fn pieces(&self) -> &[Expression] {
        &self.pieces
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn piece(&self, index: usize) -> Result<&Expression, EditError> {
        self.pieces.get(index).ok_or(EditError::NoSuchPiece {
            piece: index,
            count: self.pieces.len(),
        })
    }

    /// Every match of `pattern`, pieces in order and pre-order within a piece.
    pub fn query(&self, pattern: &Pattern) -> Vec<Match> {
        let mut out = Vec::new();
        for (piece, expr) in self.pieces.iter().enumerate() {
            for (path, node) in expr.preorder() {
                if let Some(b) = pattern.matches(node, &path) {
                    out.push(Match {
                        piece,
                        bindings: b.into_iter().map(|(k, v)| (k, v.value)).collect(),
                        path,
                    });
                }
            }
        }
        out
    }

    fn commit(&self, reg: &Registry, piece: usize, path: &Path, new_piece: Expression) -> Result<Document, EditError> {
        check_piece(reg, piece, &new_piece)?;
        let previous = self.pieces[piece].node_at(path)?.clone();
        let mut doc = self.clone();
        doc.pieces[piece] = new_piece;
        doc.history.push(HistoryEntry {
            piece,
            path: path.clone(),
            previous,
        });
        if doc.history.len() > HISTORY_LIMIT {
            doc.history.remove(0);
        }
        Ok(doc)
    }

    /// Replaces the subtree at `path`. The edit is rejected as a whole if the
    /// resulting piece does not type-check.
    pub fn edit_replace(
        &self,
        reg: &Registry,
        piece: usize,
        path: &Path,
        replacement: Expression,
    ) -> Result<Document, EditError> {
        let new_piece = self.piece(piece)?.replace_at(path, replacement)?;
        self.commit(reg, piece, path, new_piece)
    }

    /// Wraps the subtree at `path` in an application of `rule`, placing it
    /// in argument `slot`. Other arguments take the rule's declared
    /// placeholder defaults.
    pub fn edit_wrap(
        &self,
        reg: &Registry,
        piece: usize,
        path: &Path,
        rule: &str,
        slot: usize,
    ) -> Result<Document, EditError> {
        let target = self.piece(piece)?.node_at(path)?;
        let def = reg.rule(rule).ok_or_else(|| EditError::UnknownRule(rule.to_string()))?;
        let arity = match &def.variadic {
            None => def.params.len(),
            Some(v) => (def.params.len() + v.min).max(slot + 1),
        };
        if slot >= arity {
            return Err(EditError::NoSuchSlot {
                rule: rule.to_string(),
                slot,
            });
        }
        let expected = def.slot_type(slot).expect("slot < arity");
        let found = reg
            .type_check(target)
            .map_err(|error| EditError::Type { piece, error })?;
        if found != expected {
            return Err(EditError::Type {
                piece,
                error: TypeError::TypeMismatch {
                    path: path.clone(),
                    expected,
                    found,
                },
            });
        }
        let children = (0..arity)
            .map(|i| {
                if i == slot {
                    return Ok(target.clone());
                }
                def.params
                    .get(i)
                    .and_then(|p| p.default.clone())
                    .ok_or_else(|| EditError::SlotUnfillable {
                        rule: rule.to_string(),
                        slot: i,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let wrapped = Expression::Rule {
            name: def.name.clone(),
            children,
        };
        let new_piece = self.pieces[piece].replace_at(path, wrapped)?;
        self.commit(reg, piece, path, new_piece)
    }

    /// Reverts the most recent edit.
    pub fn undo(&self) -> Result<Document, EditError> {
        let mut doc = self.clone();
        let entry = doc.history.pop().ok_or(EditError::NothingToUndo)?;
        let restored = doc.pieces[entry.piece].replace_at(&entry.path, entry.previous)?;
        doc.pieces[entry.piece] = restored;
        Ok(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::pattern::compile_pattern;
    use crate::registry::{default_registry, load_registry};

    const E1: &str = "info-about(dog(), non-subjectivity(nice-kind()))";

    fn e1_doc(reg: &Registry) -> Document {
        Document::new(reg, "d", vec![parse(E1).unwrap()]).unwrap()
    }

    #[test]
    fn query_examples() {
        let reg = default_registry();
        let doc = e1_doc(&reg);
        let m = doc.query(&compile_pattern("nice-kind()").unwrap());
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].piece, m[0].path.clone()), (0, Path(vec![1, 0])));

        let all = doc.query(&compile_pattern("_").unwrap());
        let paths: Vec<String> = all.iter().map(|m| m.path.to_string()).collect();
        assert_eq!(paths, ["", "0", "1", "1.0"]);

        let empty = Document::new(&reg, "e", vec![]).unwrap();
        assert!(empty.query(&compile_pattern("_").unwrap()).is_empty());

        let m = doc.query(&compile_pattern("info-about(?a, non-subjectivity(?b))").unwrap());
        assert_eq!(m[0].bindings["a"], parse("dog()").unwrap());
        assert_eq!(m[0].bindings["b"], parse("nice-kind()").unwrap());
    }

    #[test]
    fn replace_examples() {
        let reg = default_registry();
        let doc = e1_doc(&reg);
        let d2 = doc
            .edit_replace(&reg, 0, &Path(vec![0]), parse("nice-kind()").unwrap())
            .unwrap();
        assert_eq!(
            d2.pieces()[0],
            parse("info-about(nice-kind(), non-subjectivity(nice-kind()))").unwrap()
        );
        assert_eq!(d2.history().len(), 1);

        let err = doc
            .edit_replace(&reg, 0, &Path(vec![0]), parse("@Lssp").unwrap())
            .unwrap_err();
        assert!(matches!(
            err,
            EditError::Type {
                error: TypeError::TypeMismatch {
                    expected: ParamType::Score,
                    found: ParamType::Point,
                    ..
                },
                ..
            }
        ));
        assert_eq!(doc, e1_doc(&reg));

        let d3 = doc.edit_replace(&reg, 0, &Path::root(), parse("dog()").unwrap()).unwrap();
        assert_eq!(d3.pieces()[0], parse("dog()").unwrap());

        assert!(matches!(
            doc.edit_replace(&reg, 0, &Path(vec![9]), parse("dog()").unwrap()),
            Err(EditError::InvalidPath(_))
        ));
        assert!(matches!(
            doc.edit_replace(&reg, 3, &Path::root(), parse("dog()").unwrap()),
            Err(EditError::NoSuchPiece { piece: 3, count: 1 })
        ));
        // a piece must stay a score
        assert!(doc.edit_replace(&reg, 0, &Path::root(), parse("@Lssp").unwrap()).is_err());
    }

    #[test]
    fn wrap_examples() {
        let reg = default_registry();
        let doc = e1_doc(&reg);
        let d2 = doc
            .edit_wrap(&reg, 0, &Path(vec![1, 0]), "non-subjectivity", 0)
            .unwrap();
        assert_eq!(
            d2.pieces()[0],
            parse("info-about(dog(), non-subjectivity(non-subjectivity(nice-kind())))").unwrap()
        );
        assert_eq!(
            doc.edit_wrap(&reg, 0, &Path(vec![0]), "info-about", 0),
            Err(EditError::SlotUnfillable {
                rule: "info-about".into(),
                slot: 1
            })
        );
        assert!(matches!(
            doc.edit_wrap(&reg, 0, &Path(vec![5, 1]), "non-subjectivity", 0),
            Err(EditError::InvalidPath(_))
        ));
        assert_eq!(
            doc.edit_wrap(&reg, 0, &Path(vec![0]), "nope", 0),
            Err(EditError::UnknownRule("nope".into()))
        );
        assert!(matches!(
            doc.edit_wrap(&reg, 0, &Path(vec![0]), "non-subjectivity", 1),
            Err(EditError::NoSuchSlot { .. })
        ));
        assert!(matches!(
            doc.edit_wrap(&reg, 0, &Path(vec![0]), "localised-discourse", 0),
            Err(EditError::Type { .. })
        ));
    }

    #[test]
    fn wrap_uses_placeholder_defaults() {
        let mut text = crate::registry::DEFAULT_REGISTRY.to_string();
        text.push_str("rule about(a: score, b: score default nice-kind()) = seq(a, b)\n");
        text.push_str("rule placed(p: point default @Lssp, d: score) = localised-discourse(p, d)\n");
        let reg = load_registry(&text.replace("localised-discourse(p, d)", "d")).unwrap();
        let doc = Document::new(&reg, "d", vec![parse("dog()").unwrap()]).unwrap();
        let d2 = doc.edit_wrap(&reg, 0, &Path::root(), "about", 0).unwrap();
        assert_eq!(d2.pieces()[0], parse("about(dog(), nice-kind())").unwrap());
        let d3 = doc.edit_wrap(&reg, 0, &Path::root(), "placed", 1).unwrap();
        assert_eq!(d3.pieces()[0], parse("placed(@Lssp, dog())").unwrap());
    }

    #[test]
    fn undo_examples() {
        let reg = default_registry();
        let doc = e1_doc(&reg);
        let once = doc.edit_replace(&reg, 0, &Path(vec![0]), parse("nice-kind()").unwrap()).unwrap();
        assert_eq!(once.undo().unwrap().pieces(), doc.pieces());

        let twice = once.edit_wrap(&reg, 0, &Path(vec![1]), "non-subjectivity", 0).unwrap();
        let back = twice.undo().unwrap().undo().unwrap();
        assert_eq!(back.pieces(), doc.pieces());
        assert_eq!(back, doc);

        assert_eq!(doc.undo(), Err(EditError::NothingToUndo));
    }

    #[test]
    fn history_is_capped() {
        let reg = default_registry();
        let mut doc = Document::new(&reg, "d", vec![parse("dog()").unwrap()]).unwrap();
        for i in 0..HISTORY_LIMIT + 5 {
            let next = if i % 2 == 0 { "nice-kind()" } else { "dog()" };
            doc = doc.edit_replace(&reg, 0, &Path::root(), parse(next).unwrap()).unwrap();
        }
        assert_eq!(doc.history().len(), HISTORY_LIMIT);
    }

    #[test]
    fn new_rejects_ill_typed_pieces() {
        let reg = default_registry();
        let err = Document::new(&reg, "d", vec![parse("dog()").unwrap(), parse("info-about(dog())").unwrap()])
            .unwrap_err();
        assert!(matches!(err, EditError::Type { piece: 1, .. }));
    }

    #[test]
    fn document_text() {
        let reg = default_registry();
        let text = "# story\ndog()\n\n  info-about(dog(), nice-kind())\n";
        let pieces = parse_document(&reg, text).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(print_document(&pieces), "dog()\ninfo-about(dog(), nice-kind())\n");

        let errs = parse_document(&reg, "dog(\ndog()\ninfo-about(dog(), @Lssp)\n@Lssp").unwrap_err();
        let found: Vec<(usize, usize)> = errs.iter().map(|e| (e.line, e.offset)).collect();
        assert_eq!(found, [(1, 4), (3, 18), (4, 0)]);
        assert!(errs[1].message.contains("expected score"), "{}", errs[1].message);
    }
}
