//! Provider catalog for trust-scored service advertisements.
//!
//! The catalog registers advertisement documents, acts as the marketplace
//! intermediary for transactions, verifications and ratings, and serves
//! scores and rankings over HTTP.

pub mod clock;
pub mod http;
pub mod store;
pub mod vat;

use std::future::Future;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

pub use clock::{Clock, ManualClock, SystemClock};
pub use http::{router, AppState};
pub use store::{
    read_events, replay_analytics, AnalyticsSnapshot, Event, ProviderMeta, RatingRecord,
    Registration, ScoringInputs, Store, StoreError, StoredProvider, TransactionRecord,
};
pub use vat::{MockVatVerifier, VatCheckResult, VatVerifier, EU_VAT_PATTERN};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub addr: SocketAddr,
    pub store_dir: PathBuf,
    pub profiles_dir: Option<PathBuf>,
}

/// Opens the store with the system clock and the offline VAT mock.
pub fn open_default_store(dir: impl Into<PathBuf>) -> Result<Store, StoreError> {
    Store::open(dir, Arc::new(SystemClock), Arc::new(MockVatVerifier::default()))
}

/// Serves the API until `shutdown` resolves.
pub async fn serve(
    config: ServiceConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    let store = open_default_store(&config.store_dir).map_err(std::io::Error::other)?;
    let app = router(AppState {
        store: Arc::new(store),
        profiles_dir: config.profiles_dir,
    });
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    tracing::info!("catalog listening on {}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown)
        .await
}
