use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{Datelike, Local, NaiveDate, NaiveDateTime};

use crate::error::UploadError;

/// Source of the receive time.
pub trait Clock: Send + Sync + fmt::Debug {
    fn now(&self) -> NaiveDateTime;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> NaiveDateTime {
        Local::now().naive_local()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FixedClock(pub NaiveDateTime);

impl Clock for FixedClock {
    fn now(&self) -> NaiveDateTime {
        self.0
    }
}

/// Day directory `D-M-YYYY`, day and month without zero padding.
pub fn date_directory(date: NaiveDate) -> String {
    format!("{}-{}-{:04}", date.day(), date.month(), date.year())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredFile {
    /// `<j-m-Y>/<file name>`, relative to the store root.
    pub relative_path: PathBuf,
    pub size: u64,
    pub received_at: NaiveDateTime,
}

impl fmt::Display for StoredFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} bytes, {})",
            self.relative_path.display(),
            self.size,
            self.received_at
        )
    }
}

fn check_basename(name: &str) -> Result<(), UploadError> {
    let bad = name.is_empty() || name == "." || name == ".." || name.contains(['/', '\\', '\0']);
    if bad {
        Err(UploadError::PathTraversal(name.to_string()))
    } else {
        Ok(())
    }
}

/// Date-partitioned file store.
///
/// Files are written to a temporary name in the target directory and then
/// renamed into place, so readers only ever see complete files and the last
/// concurrent writer of a name wins.
#[derive(Debug)]
pub struct UploadStore {
    root: PathBuf,
    clock: Box<dyn Clock>,
}

impl UploadStore {
    pub fn new(root: impl Into<PathBuf>, clock: impl Clock + 'static) -> Self {
        UploadStore {
            root: root.into(),
            clock: Box::new(clock),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn store(&self, name: &str, bytes: &[u8]) -> Result<StoredFile, UploadError> {
        check_basename(name)?;
        let received_at = self.clock.now();
        let day = date_directory(received_at.date());
        let dir = self.root.join(&day);
        fs::create_dir_all(&dir)?;

        let mut tmp = tempfile::Builder::new()
            .prefix(".upload-")
            .suffix(".part")
            .tempfile_in(&dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(dir.join(name)).map_err(|e| e.error)?;

        Ok(StoredFile {
            relative_path: Path::new(&day).join(name),
            size: bytes.len() as u64,
            received_at,
        })
    }
}
