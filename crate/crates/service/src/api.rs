//! JSON-over-HTTP handlers.

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post};
use axum::{Json, Router};
use azed_core::doc::parse_piece;
use azed_core::registry::TypeError;
use azed_core::{
    compile_pattern, evaluate, export_score, layout, print_canonical, to_svg, EditError, EvalError, Path,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::store::{DocumentStore, StoreError, Stored};

pub type AppState = Arc<DocumentStore>;

pub fn router(store: AppState) -> Router {
    Router::new()
        .route("/documents", post(create))
        .route("/documents/{id}", get(fetch))
        .route("/documents/{id}/pieces/{n}/node", patch(patch_root))
        .route("/documents/{id}/pieces/{n}/node/{path}", patch(patch_node))
        .route("/documents/{id}/pieces/{n}/render", get(render))
        .route("/documents/{id}/query", post(query))
        .route("/documents/{id}/undo", post(undo))
        .route("/rules", get(rules))
        .with_state(store)
}

/// An error response: status plus a JSON body with at least `error`.
pub struct ApiError(StatusCode, Value);

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: impl ToString) -> ApiError {
        ApiError(status, json!({ "error": message.to_string(), "kind": kind }))
    }

    fn not_found(message: impl ToString) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "NotFound", message)
    }

    fn unprocessable(kind: &str, message: impl ToString) -> ApiError {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, kind, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> ApiError {
        match &e {
            StoreError::NotFound(_) => ApiError::not_found(e),
            StoreError::Conflict { current, .. } => ApiError(
                StatusCode::CONFLICT,
                json!({ "error": e.to_string(), "kind": "RevisionConflict", "revision": current }),
            ),
            StoreError::Corrupt { .. } | StoreError::Io(_) => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Storage", e)
            }
        }
    }
}

fn type_error_kind(e: &TypeError) -> &'static str {
    match e {
        TypeError::UnknownRule { .. } => "UnknownRule",
        TypeError::UnknownPoint { .. } => "UnknownPoint",
        TypeError::ArityMismatch { .. } => "ArityMismatch",
        TypeError::TypeMismatch { .. } => "TypeMismatch",
    }
}

impl From<EditError> for ApiError {
    fn from(e: EditError) -> ApiError {
        let kind = match &e {
            EditError::NoSuchPiece { .. } => return ApiError::not_found(e),
            EditError::InvalidPath(_) => "InvalidPath",
            EditError::Type { error, .. } => type_error_kind(error),
            EditError::UnknownRule(_) => "UnknownRule",
            EditError::NoSuchSlot { .. } => "NoSuchSlot",
            EditError::SlotUnfillable { .. } => "SlotUnfillable",
            EditError::NothingToUndo => "NothingToUndo",
        };
        ApiError::unprocessable(kind, e)
    }
}

#[derive(Serialize)]
struct DocumentBody {
    id: String,
    revision: u64,
    pieces: Vec<String>,
}

impl From<&Stored> for DocumentBody {
    fn from(s: &Stored) -> DocumentBody {
        DocumentBody {
            id: s.doc.id.clone(),
            revision: s.revision,
            pieces: s.doc.pieces().iter().map(print_canonical).collect(),
        }
    }
}

#[derive(Deserialize)]
struct CreateRequest {
    pieces: Vec<String>,
}

async fn create(State(store): State<AppState>, Json(req): Json<CreateRequest>) -> Result<Response, ApiError> {
    let mut pieces = Vec::new();
    let mut errors = Vec::new();
    for (i, text) in req.pieces.iter().enumerate() {
        match parse_piece(store.registry(), text) {
            Ok(e) => pieces.push(e),
            Err((offset, message)) => errors.push(json!({ "line": i + 1, "offset": offset, "message": message })),
        }
    }
    if !errors.is_empty() {
        return Err(ApiError(
            StatusCode::UNPROCESSABLE_ENTITY,
            json!({ "error": "invalid pieces", "kind": "InvalidPieces", "errors": errors }),
        ));
    }
    let stored = store.create(pieces)?;
    Ok((StatusCode::CREATED, Json(DocumentBody::from(&stored))).into_response())
}

async fn fetch(State(store): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<DocumentBody>, ApiError> {
    Ok(Json(DocumentBody::from(&store.get(&id)?)))
}

#[derive(Deserialize)]
struct WrapSpec {
    rule: String,
    slot: usize,
}

#[derive(Deserialize)]
struct PatchRequest {
    revision: u64,
    replace: Option<String>,
    wrap: Option<WrapSpec>,
}

async fn patch_root(
    State(store): State<AppState>,
    UrlPath((id, n)): UrlPath<(String, usize)>,
    Json(req): Json<PatchRequest>,
) -> Result<Json<DocumentBody>, ApiError> {
    apply_patch(&store, &id, n, "", req)
}

async fn patch_node(
    State(store): State<AppState>,
    UrlPath((id, n, path)): UrlPath<(String, usize, String)>,
    Json(req): Json<PatchRequest>,
) -> Result<Json<DocumentBody>, ApiError> {
    apply_patch(&store, &id, n, &path, req)
}

fn apply_patch(store: &DocumentStore, id: &str, piece: usize, path: &str, req: PatchRequest) -> Result<Json<DocumentBody>, ApiError> {
    let path: Path = path.parse().map_err(|e| ApiError::unprocessable("InvalidPath", e))?;
    let reg = store.registry();
    let result = match (req.replace, req.wrap) {
        (Some(text), None) => {
            let replacement = azed_core::parse(&text).map_err(|e| ApiError::unprocessable("ParseError", e))?;
            store.update(id, Some(req.revision), |doc| doc.edit_replace(reg, piece, &path, replacement))?
        }
        (None, Some(w)) => store.update(id, Some(req.revision), |doc| doc.edit_wrap(reg, piece, &path, &w.rule, w.slot))?,
        _ => {
            return Err(ApiError::unprocessable(
                "BadRequest",
                "exactly one of `replace` and `wrap` is required",
            ))
        }
    };
    Ok(Json(DocumentBody::from(&result?)))
}

#[derive(Deserialize, Default)]
struct UndoRequest {
    revision: Option<u64>,
}

async fn undo(
    State(store): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Option<Json<UndoRequest>>,
) -> Result<Json<DocumentBody>, ApiError> {
    let req = body.map(|Json(b)| b).unwrap_or_default();
    let result = store.update(&id, req.revision, |doc| doc.undo())?;
    Ok(Json(DocumentBody::from(&result?)))
}

#[derive(Deserialize)]
struct RenderQuery {
    format: Option<String>,
}

async fn render(
    State(store): State<AppState>,
    UrlPath((id, n)): UrlPath<(String, usize)>,
    Query(q): Query<RenderQuery>,
) -> Result<Response, ApiError> {
    let stored = store.get(&id)?;
    let piece = stored.doc.piece(n)?;
    let reg = store.registry();
    match q.format.as_deref().unwrap_or("svg") {
        "svg" => Ok(([(header::CONTENT_TYPE, "image/svg+xml")], to_svg(&layout(reg, piece))).into_response()),
        "scene" => Ok(Json(layout(reg, piece)).into_response()),
        "score" => match evaluate(reg, piece) {
            Ok(score) => Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], export_score(&score)).into_response()),
            Err(e) => {
                let kind = match &e {
                    EvalError::Type(t) => type_error_kind(t),
                    EvalError::NotAScore { .. } => "NotAScore",
                    EvalError::Score { .. } => "TrackCollision",
                };
                Err(ApiError(
                    StatusCode::INTERNAL_SERVER_ERROR,
                    json!({ "error": e.to_string(), "kind": kind, "path": e.path().to_string() }),
                ))
            }
        },
        other => Err(ApiError::unprocessable(
            "BadFormat",
            format!("unknown format `{other}`; expected svg, scene or score"),
        )),
    }
}

#[derive(Deserialize)]
struct QueryRequest {
    pattern: String,
}

#[derive(Serialize)]
struct MatchBody {
    piece: usize,
    path: String,
    bindings: BTreeMap<String, String>,
}

async fn query(
    State(store): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Json(req): Json<QueryRequest>,
) -> Result<Json<Vec<MatchBody>>, ApiError> {
    let pattern = compile_pattern(&req.pattern).map_err(|e| ApiError::unprocessable("ParseError", e))?;
    let stored = store.get(&id)?;
    let matches = stored
        .doc
        .query(&pattern)
        .into_iter()
        .map(|m| MatchBody {
            piece: m.piece,
            path: m.path.to_string(),
            bindings: m.bindings.iter().map(|(k, v)| (k.clone(), print_canonical(v))).collect(),
        })
        .collect();
    Ok(Json(matches))
}

#[derive(Serialize)]
struct RuleBody {
    name: String,
    params: Vec<String>,
    glyph: &'static str,
}

async fn rules(State(store): State<AppState>) -> Json<Vec<RuleBody>> {
    let catalog = store
        .registry()
        .rules
        .values()
        .map(|def| {
            let mut params: Vec<String> = def.params.iter().map(|p| p.ty.as_str().to_string()).collect();
            if let Some(v) = &def.variadic {
                params.push(format!("{}...", v.ty.as_str()));
            }
            RuleBody {
                name: def.name.to_string(),
                params,
                glyph: def.glyph_or_default().kind(),
            }
        })
        .collect();
    Json(catalog)
}
