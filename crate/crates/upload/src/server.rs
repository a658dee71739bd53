use std::future::Future;
use std::sync::Arc;

use axum::extract::multipart::MultipartRejection;
use axum::extract::{DefaultBodyLimit, Multipart, State};
use axum::routing::post;
use axum::Router;
use tokio::net::TcpListener;

use crate::error::UploadError;
use crate::store::{StoredFile, UploadStore};
use crate::{success_body, ALIAS_PATH, FAILURE_BODY, FIELD_NAME, RECEIVER_PATH};

/// Largest accepted request body.
pub const DEFAULT_BODY_LIMIT: usize = 64 * 1024 * 1024;

pub fn router(store: Arc<UploadStore>) -> Router {
    router_with_limit(store, DEFAULT_BODY_LIMIT)
}

pub fn router_with_limit(store: Arc<UploadStore>, body_limit: usize) -> Router {
    Router::new()
        .route(RECEIVER_PATH, post(receive))
        .route(ALIAS_PATH, post(receive))
        .layer(DefaultBodyLimit::max(body_limit))
        .with_state(store)
}

/// Serves the receiver on `listener` until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    store: Arc<UploadStore>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(store))
        .with_graceful_shutdown(shutdown)
        .await
}

async fn receive(
    State(store): State<Arc<UploadStore>>,
    multipart: Result<Multipart, MultipartRejection>,
) -> String {
    let outcome = match multipart {
        Ok(mp) => handle_upload(mp, store).await,
        Err(rejection) => Err(UploadError::Multipart(rejection.body_text())),
    };
    match outcome {
        Ok(stored) => {
            log::info!("stored {stored}");
            let name = stored
                .relative_path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            success_body(&name)
        }
        Err(e) => {
            log::warn!("upload rejected: {e}");
            FAILURE_BODY.to_string()
        }
    }
}

/// Reads the single `uploadedfile` part and writes it into the store.
pub async fn handle_upload(
    mut multipart: Multipart,
    store: Arc<UploadStore>,
) -> Result<StoredFile, UploadError> {
    let mut upload: Option<(String, Vec<u8>)> = None;
    while let Some(field) = multipart
        .next_field()
        .await
        .map_err(|e| UploadError::Multipart(e.body_text()))?
    {
        if field.name() != Some(FIELD_NAME) {
            continue;
        }
        if upload.is_some() {
            return Err(UploadError::DuplicatePart);
        }
        let name = field.file_name().unwrap_or_default().to_string();
        let bytes = field
            .bytes()
            .await
            .map_err(|e| UploadError::Multipart(e.body_text()))?;
        upload = Some((name, bytes.to_vec()));
    }
    let (name, bytes) = upload.ok_or(UploadError::MissingPart)?;
    tokio::task::spawn_blocking(move || store.store(&name, &bytes))
        .await
        .map_err(|e| UploadError::Io(std::io::Error::other(e)))?
}
