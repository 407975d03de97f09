//! HTTP service over a directory of AZee documents.

mod api;
pub mod store;

use std::io;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use azed_core::Registry;
use tokio::net::TcpListener;

pub use api::{router, AppState};
pub use store::{DocumentStore, StoreError, Stored};

pub struct Config {
    pub registry: Registry,
    pub store: PathBuf,
    pub listen: SocketAddr,
}

/// Binds `config.listen` and serves until the process ends. `on_bound` is
/// called with the actual address once the socket is open, which matters
/// when the requested port is 0.
pub async fn serve(config: Config, on_bound: impl FnOnce(SocketAddr)) -> io::Result<()> {
    let store = DocumentStore::open(config.store, Arc::new(config.registry))?;
    let listener = TcpListener::bind(config.listen).await?;
    on_bound(listener.local_addr()?);
    axum::serve(listener, router(Arc::new(store))).await
}
