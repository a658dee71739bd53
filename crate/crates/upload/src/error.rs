use thiserror::Error;

#[derive(Debug, Error)]
pub enum UploadError {
    #[error("request has no `uploadedfile` part")]
    MissingPart,
    #[error("request has more than one `uploadedfile` part")]
    DuplicatePart,
    #[error("file name {0:?} is not a plain base name")]
    PathTraversal(String),
    #[error("malformed multipart body: {0}")]
    Multipart(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("could not reach {endpoint}: {reason}")]
    ConnectFailed { endpoint: String, reason: String },
    #[error("server answered {status}: {body}")]
    Non2xxResponse { status: u16, body: String },
    #[error("request failed: {0}")]
    Request(String),
}
