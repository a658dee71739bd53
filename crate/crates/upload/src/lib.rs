//! Upload path for recorded trace files.
//!
//! Phones POST each CSV as a `multipart/form-data` part named
//! `uploadedfile`. The receiver stores the bytes unchanged under a directory
//! named after the day of receipt (`j-m-Y`, e.g. `30-4-2016`) and answers
//! with a plain-text status line. The answer is sent with status 200 even
//! when the upload fails, so clients must inspect the body.

mod client;
mod error;
mod server;
mod store;

pub use client::{upload_bytes, upload_file};
pub use error::UploadError;
pub use server::{handle_upload, router, router_with_limit, serve, DEFAULT_BODY_LIMIT};
pub use store::{date_directory, Clock, FixedClock, StoredFile, SystemClock, UploadStore};

/// Form field that carries the file.
pub const FIELD_NAME: &str = "uploadedfile";
/// Path of the receiving script on the collection server.
pub const RECEIVER_PATH: &str = "/csv/post_date_receiver.php";
pub const ALIAS_PATH: &str = "/upload";

pub const FAILURE_BODY: &str = "There was an error uploading the file, please try again!";

pub fn success_body(name: &str) -> String {
    format!("The file {name} has been uploaded")
}

/// Whether a receiver response reports a stored file.
pub fn is_success_body(body: &str) -> bool {
    body.starts_with("The file ") && body.ends_with(" has been uploaded")
}
