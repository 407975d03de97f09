//! On-disk document store: `<id>.azee` holds the canonical pieces, one per
//! line, and `<id>.meta.json` holds the revision and undo history. Every
//! file is replaced atomically by writing a temporary file and renaming it.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path as FsPath, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use azed_core::doc::{parse_document, print_document, HistoryEntry};
use azed_core::{parse, print_canonical, Document, Path, Registry};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("no document `{0}`")]
    NotFound(String),
    #[error("document `{id}` is at revision {current}, not {given}")]
    Conflict { id: String, current: u64, given: u64 },
    #[error("stored document `{id}` is corrupt: {reason}")]
    Corrupt { id: String, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Serialize, Deserialize)]
struct Meta {
    id: String,
    revision: u64,
    history: Vec<StoredEntry>,
}

#[derive(Serialize, Deserialize)]
struct StoredEntry {
    piece: usize,
    path: Path,
    previous: String,
}

/// A document with its revision counter.
#[derive(Debug, Clone, PartialEq)]
pub struct Stored {
    pub doc: Document,
    pub revision: u64,
}

pub struct DocumentStore {
    root: PathBuf,
    registry: Arc<Registry>,
    locks: Mutex<HashMap<String, Arc<RwLock<()>>>>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-')
}

fn write_atomic(path: &FsPath, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path)
}

impl DocumentStore {
    pub fn open(root: impl Into<PathBuf>, registry: Arc<Registry>) -> io::Result<DocumentStore> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(DocumentStore {
            root,
            registry,
            locks: Mutex::new(HashMap::new()),
        })
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    fn lock(&self, id: &str) -> Arc<RwLock<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(id.to_string()).or_default().clone()
    }

    fn text_path(&self, id: &str) -> PathBuf {
        self.root.join(format!("{id}.azee"))
    }

    fn meta_path(&self, id: &str) -> PathBuf {
        self.root.join(format!("{id}.meta.json"))
    }

    fn new_id(&self) -> String {
        loop {
            let id = format!("{:016x}", rand::random::<u64>());
            if !self.meta_path(&id).exists() {
                return id;
            }
        }
    }

    /// Persists a new document at revision 1.
    pub fn create(&self, pieces: Vec<azed_core::Expression>) -> Result<Stored, StoreError> {
        let id = self.new_id();
        let lock = self.lock(&id);
        let _guard = lock.write().unwrap_or_else(|e| e.into_inner());
        let doc = Document::new(&self.registry, id.clone(), pieces).map_err(|e| StoreError::Corrupt {
            id: id.clone(),
            reason: e.to_string(),
        })?;
        let stored = Stored { doc, revision: 1 };
        self.write(&stored)?;
        Ok(stored)
    }

    pub fn get(&self, id: &str) -> Result<Stored, StoreError> {
        if !valid_id(id) {
            return Err(StoreError::NotFound(id.to_string()));
        }
        let lock = self.lock(id);
        let _guard = lock.read().unwrap_or_else(|e| e.into_inner());
        self.read(id)
    }

    /// Applies `edit` if `revision` is current, then persists the result at
    /// the next revision. Writes to one document are serialized.
    pub fn update<E>(
        &self,
        id: &str,
        revision: Option<u64>,
        edit: impl FnOnce(&Document) -> Result<Document, E>,
    ) -> Result<Result<Stored, E>, StoreError> {
        if !valid_id(id) {
            return Err(StoreError::NotFound(id.to_string()));
        }
        let lock = self.lock(id);
        let _guard = lock.write().unwrap_or_else(|e| e.into_inner());
        let current = self.read(id)?;
        if let Some(given) = revision {
            if given != current.revision {
                return Err(StoreError::Conflict {
                    id: id.to_string(),
                    current: current.revision,
                    given,
                });
            }
        }
        let doc = match edit(&current.doc) {
            Ok(doc) => doc,
            Err(e) => return Ok(Err(e)),
        };
        let next = Stored {
            doc,
            revision: current.revision + 1,
        };
        self.write(&next)?;
        Ok(Ok(next))
    }

    fn write(&self, s: &Stored) -> Result<(), StoreError> {
        let id = &s.doc.id;
        let meta = Meta {
            id: id.clone(),
            revision: s.revision,
            history: s
                .doc
                .history()
                .iter()
                .map(|h| StoredEntry {
                    piece: h.piece,
                    path: h.path.clone(),
                    previous: print_canonical(&h.previous),
                })
                .collect(),
        };
        let json = serde_json::to_vec_pretty(&meta).map_err(io::Error::other)?;
        write_atomic(&self.text_path(id), print_document(s.doc.pieces()).as_bytes())?;
        write_atomic(&self.meta_path(id), &json)?;
        Ok(())
    }

    fn read(&self, id: &str) -> Result<Stored, StoreError> {
        let corrupt = |reason: String| StoreError::Corrupt {
            id: id.to_string(),
            reason,
        };
        let meta = match fs::read(self.meta_path(id)) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(StoreError::NotFound(id.to_string())),
            Err(e) => return Err(e.into()),
        };
        let meta: Meta = serde_json::from_slice(&meta).map_err(|e| corrupt(e.to_string()))?;
        let text = fs::read_to_string(self.text_path(id))?;
        let pieces = parse_document(&self.registry, &text).map_err(|errs| {
            corrupt(format!("line {}: {}", errs[0].line, errs[0].message))
        })?;
        let history = meta
            .history
            .into_iter()
            .map(|h| {
                Ok(HistoryEntry {
                    piece: h.piece,
                    path: h.path,
                    previous: parse(&h.previous).map_err(|e| corrupt(e.to_string()))?,
                })
            })
            .collect::<Result<Vec<_>, StoreError>>()?;
        let doc = Document::restore(&self.registry, meta.id, pieces, history).map_err(|e| corrupt(e.to_string()))?;
        Ok(Stored {
            doc,
            revision: meta.revision,
        })
    }
}
