//! The `modeclass` command line.
//!
//! Subcommands print to the supplied writer so they can be driven in-process;
//! the binary passes standard output. Fatal errors come back as [`CliError`]
//! and become a nonzero exit status in `main`.

pub mod error;
pub mod report;

use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::NaiveDateTime;
use clap::{Parser, Subcommand};
use modeclass_core::ingest::{
    format_filename, load_directory, load_file, parse_sensor_csv, write_sensor_csv,
};
use modeclass_core::pipeline::TraceAnalysis;
use modeclass_core::{
    generate_trace, FileMeta, FilterConfig, GateConfig, GeneratorProfile, ModeDecision, Pipeline,
    ReferenceTable, SensorKind, SensorTrace, TransportMode,
};
use modeclass_upload::{is_success_body, SystemClock, UploadStore};
use serde::Serialize;

pub use error::{CliError, CliResult};
use report::{analysis_text, rule_trail, Confusion, ConfusionRow, ReportRow, REPORT_HEADER};

/// Format of the `--timestamp` option of `gen`, same as in trace file names.
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%d_%H-%M-%S";

#[derive(Debug, Parser)]
#[command(
    name = "modeclass",
    version,
    about = "Transport-mode detection from accelerometer traces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-axis statistics, histograms, gravity, peaks and the decision for one trace.
    Analyze {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        /// Low-pass coefficient in (0, 1]; 1 leaves the trace unfiltered.
        #[arg(long)]
        alpha: Option<f64>,
        /// Drop samples whose change from the last kept one is below the threshold.
        #[arg(long)]
        gate: bool,
    },
    /// Classify a trace file or every trace in a directory.
    Classify {
        path: PathBuf,
        /// Reference table overrides in `Mode.field = value` form.
        #[arg(long = "ref", env = "MODECLASS_REF")]
        reference: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// One `;`-separated feature row per trace.
    Report {
        path: PathBuf,
        #[arg(long = "ref", env = "MODECLASS_REF")]
        reference: Option<PathBuf>,
    },
    /// Write a synthetic accelerometer trace for a mode.
    Gen {
        #[arg(long)]
        mode: TransportMode,
        #[arg(long)]
        seconds: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Capture time used in the file name, `YYYY-MM-DD_HH-MM-SS`; defaults to now.
        #[arg(long, value_parser = parse_timestamp)]
        timestamp: Option<NaiveDateTime>,
    },
    /// Receive multipart uploads into `<root>/<D-M-YYYY>/`.
    Serve {
        #[arg(long)]
        root: PathBuf,
        #[arg(long)]
        port: u16,
        #[arg(long, default_value = "0.0.0.0")]
        bind: String,
    },
    /// Send a file to an upload receiver.
    Upload {
        path: PathBuf,
        #[arg(
            long,
            default_value = "http://127.0.0.1:8080/csv/post_date_receiver.php"
        )]
        endpoint: String,
    },
}

fn parse_timestamp(s: &str) -> Result<NaiveDateTime, String> {
    NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT)
        .map_err(|e| format!("expected YYYY-MM-DD_HH-MM-SS: {e}"))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Analyze {
            path,
            json,
            alpha,
            gate,
        } => cmd_analyze(&path, json, alpha, gate, out),
        Command::Classify {
            path,
            reference,
            json,
        } => cmd_classify(&path, reference.as_deref(), json, out),
        Command::Report { path, reference } => cmd_report(&path, reference.as_deref(), out),
        Command::Gen {
            mode,
            seconds,
            seed,
            out: dir,
            timestamp,
        } => {
            let ts = timestamp.unwrap_or_else(|| chrono::Local::now().naive_local());
            let written = cmd_gen(mode, seconds, seed, &dir, ts)?;
            writeln!(out, "{}", written.display())?;
            Ok(())
        }
        Command::Serve { root, port, bind } => cmd_serve(&root, &bind, port, out),
        Command::Upload { path, endpoint } => cmd_upload(&path, &endpoint, out),
    }
}

/// Loads a trace, taking kind and label from the file name when it follows
/// the capture naming scheme and treating it as an unlabeled accelerometer
/// trace otherwise.
pub fn load_any(path: &Path) -> CliResult<SensorTrace> {
    let named = path
        .file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| modeclass_core::ingest::parse_filename(n).is_ok());
    if named {
        return Ok(load_file(path)?.1);
    }
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_sensor_csv(&text, SensorKind::Accelerometer)?)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_reference(path: Option<&Path>) -> CliResult<ReferenceTable> {
    match path {
        None => Ok(ReferenceTable::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            Ok(ReferenceTable::parse(&text)?)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyzeDoc<'a> {
    pub file: String,
    pub label: Option<TransportMode>,
    #[serde(flatten)]
    pub analysis: &'a TraceAnalysis,
}

pub fn cmd_analyze(
    path: &Path,
    json: bool,
    alpha: Option<f64>,
    gate: bool,
    out: &mut dyn Write,
) -> CliResult<()> {
    let trace = load_any(path)?;
    let mut pipeline = Pipeline::default();
    if let Some(a) = alpha {
        pipeline.filter = Some(FilterConfig::with_alpha(a)?);
    }
    if gate {
        pipeline.gate = Some(GateConfig::default());
    }
    let analysis = pipeline.analyze(&trace)?;
    let name = file_name(path);
    if json {
        let doc = AnalyzeDoc {
            file: name,
            label: trace.label,
            analysis: &analysis,
        };
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)?;
    } else {
        write!(out, "{}", analysis_text(&name, trace.label, &analysis))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifiedFile {
    pub file: String,
    pub label: Option<TransportMode>,
    pub decision: ModeDecision,
    pub row: ReportRow,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedFile {
    pub file: String,
    pub error: String,
}

#[derive(Debug, Default, Serialize)]
pub struct BatchResult {
    pub files: Vec<ClassifiedFile>,
    pub skipped: Vec<SkippedFile>,
    pub confusion: Vec<ConfusionRow>,
    pub unlabeled: usize,
}

/// Runs the pipeline over a file or directory. A directory never fails on
/// a single bad file; those end up in `skipped`.
pub fn classify_path(path: &Path, reference: &ReferenceTable) -> CliResult<BatchResult> {
    let pipeline = Pipeline {
        reference: reference.clone(),
        ..Pipeline::default()
    };
    let mut result = BatchResult::default();
    let mut confusion = Confusion::default();

    let inputs: Vec<(String, Result<SensorTrace, String>)> = if path.is_dir() {
        let load = load_directory(path)?;
        let mut v: Vec<_> = load
            .traces
            .into_iter()
            .map(|(meta, t)| (format_filename(&meta), Ok(t)))
            .collect();
        v.extend(
            load.skipped
                .into_iter()
                .map(|(p, e)| (file_name(&p), Err(e.to_string()))),
        );
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    } else {
        vec![(file_name(path), Ok(load_any(path)?))]
    };
    let single = !path.is_dir();

    for (name, trace) in inputs {
        let outcome = trace.and_then(|t| pipeline.classify(&t).map_err(|e| e.to_string()));
        match outcome {
            Ok((fv, decision)) => {
                confusion.record(fv.mode_label, decision.mode);
                result.files.push(ClassifiedFile {
                    row: ReportRow::new(&name, &fv, &decision),
                    file: name,
                    label: fv.mode_label,
                    decision,
                });
            }
            Err(e) if single => {
                return Err(CliError::Usage(format!("{name}: {e}")));
            }
            Err(e) => {
                result.skipped.push(SkippedFile {
                    file: name,
                    error: e,
                });
            }
        }
    }
    result.confusion = confusion.rows();
    result.unlabeled = confusion.unlabeled;
    Ok(result)
}

pub fn cmd_classify(
    path: &Path,
    reference: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> CliResult<()> {
    let table = load_reference(reference)?;
    let batch = classify_path(path, &table)?;
    if json {
        serde_json::to_writer_pretty(&mut *out, &batch)?;
        writeln!(out)?;
        return Ok(());
    }
    for f in &batch.files {
        writeln!(out, "{}: {}", f.file, f.decision)?;
        writeln!(out, "  rules: {}", rule_trail(&f.decision))?;
    }
    for s in &batch.skipped {
        writeln!(out, "{}: skipped: {}", s.file, s.error)?;
    }
    if path.is_dir() {
        let mut confusion = Confusion::default();
        for f in &batch.files {
            confusion.record(f.label, f.decision.mode);
        }
        write!(out, "{}", confusion.text())?;
    }
    Ok(())
}

pub fn cmd_report(path: &Path, reference: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let table = load_reference(reference)?;
    let batch = classify_path(path, &table)?;
    writeln!(out, "{REPORT_HEADER}")?;
    for f in &batch.files {
        writeln!(out, "{}", f.row.to_line())?;
    }
    for s in &batch.skipped {
        eprintln!("{}: skipped: {}", s.file, s.error);
    }
    Ok(())
}

/// Writes `acceleration_<Mode>_<timestamp>.csv` into `dir` and returns its path.
pub fn cmd_gen(
    mode: TransportMode,
    seconds: f64,
    seed: u64,
    dir: &Path,
    timestamp: NaiveDateTime,
) -> CliResult<PathBuf> {
    let profile = GeneratorProfile::for_mode(mode, seed)?;
    let trace = generate_trace(&profile, seconds)?;
    let text = write_sensor_csv(&trace)?;
    let name = format_filename(&FileMeta {
        kind: SensorKind::Accelerometer,
        mode,
        captured_at: timestamp,
    });
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

pub fn cmd_serve(root: &Path, bind: &str, port: u16, out: &mut dyn Write) -> CliResult<()> {
    fs::create_dir_all(root).map_err(|source| CliError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    let addr = format!("{bind}:{port}");
    let sock: SocketAddr = addr
        .parse()
        .map_err(|e| CliError::Usage(format!("bad address {addr:?}: {e}")))?;
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(sock)
            .await
            .map_err(|source| CliError::BindFailed {
                addr: addr.clone(),
                source,
            })?;
        let local = listener.local_addr()?;
        writeln!(out, "listening on http://{local}")?;
        out.flush()?;
        log::info!("storing uploads under {}", root.display());
        let store = Arc::new(UploadStore::new(root, SystemClock));
        modeclass_upload::serve(listener, store, async {
            let _ = tokio::signal::ctrl_c().await;
            log::info!("interrupted, shutting down");
        })
        .await?;
        Ok(())
    })
}

pub fn cmd_upload(path: &Path, endpoint: &str, out: &mut dyn Write) -> CliResult<()> {
    let rt = tokio::runtime::Runtime::new()?;
    let body = rt.block_on(modeclass_upload::upload_file(path, endpoint))?;
    writeln!(out, "{body}")?;
    if is_success_body(&body) {
        Ok(())
    } else {
        Err(CliError::Rejected(body))
    }
}
