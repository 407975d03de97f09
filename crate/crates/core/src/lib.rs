//! AZee expressions: parsing, typed rule registries, signing scores,
//! planar glyph layout, and structural document edits.

pub mod decimal;
pub mod doc;
pub mod expr;
pub mod layout;
pub mod parser;
pub mod pattern;
pub mod registry;
pub mod score;

pub use decimal::Decimal;
pub use doc::{parse_document, parse_piece, piece_lines, print_document, Document, EditError, HistoryEntry, LineError, Match};
pub use expr::{Expression, InvalidPath, NativeValue, Path, PointName, RuleName, Side};
pub use layout::{apply_templates, hit_test, layout, layout_document, to_svg, SceneGraph};
pub use parser::{offset_of, parse, parse_prefix, print_canonical, ParseError};
pub use pattern::{compile_pattern, Pattern};
pub use registry::{default_registry, load_registry, print_registry, ParamType, Registry, RegistryError, TypeError};
pub use score::{evaluate, export_score, EvalError, SigningScore, Track};
