use std::path::Path;

use reqwest::multipart::{Form, Part};

use crate::error::UploadError;
use crate::FIELD_NAME;

/// POSTs a file as the `uploadedfile` part and returns the response body.
/// The local file is left in place.
pub async fn upload_file(path: &Path, endpoint: &str) -> Result<String, UploadError> {
    let bytes = tokio::fs::read(path).await?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    upload_bytes(&name, bytes, endpoint).await
}

pub async fn upload_bytes(
    name: &str,
    bytes: Vec<u8>,
    endpoint: &str,
) -> Result<String, UploadError> {
    let part = Part::bytes(bytes).file_name(name.to_string());
    let form = Form::new().part(FIELD_NAME, part);
    let response = reqwest::Client::new()
        .post(endpoint)
        .multipart(form)
        .send()
        .await
        .map_err(|e| {
            if e.is_connect() || e.is_timeout() {
                UploadError::ConnectFailed {
                    endpoint: endpoint.to_string(),
                    reason: e.to_string(),
                }
            } else {
                UploadError::Request(e.to_string())
            }
        })?;
    let status = response.status();
    let body = response
        .text()
        .await
        .map_err(|e| UploadError::Request(e.to_string()))?;
    if !status.is_success() {
        return Err(UploadError::Non2xxResponse {
            status: status.as_u16(),
            body,
        });
    }
    Ok(body)
}
