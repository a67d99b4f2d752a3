//! Corpus input: format selection, truth-label discovery, and streaming
//! readers that turn files into scoreable documents without loading whole
//! corpora into memory.
//!
//! Truth labels for evaluation come either from a `label` field in
//! JSON-lines records or from the directory convention: an input directory
//! holding `legit/` and `phish/` subdirectories assigns the matching truth
//! to every file underneath them.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use profiler_core::eval::TruthLabel;
use profiler_core::ingest::{
    extract_envelope, parse_message, EmailDocument, IngestError, IngestErrorKind, MboxSplitter,
};
use serde::Deserialize;

/// On-disk corpus formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    /// Many messages per file, `From ` postmark delimited (mboxrd).
    Mbox,
    /// One RFC-822-style message per file.
    Eml,
    /// One JSON object per line: `sender`, `receiver`, `subject`, `body`
    /// (already decoded), optional `label`.
    Jsonl,
}

impl InputFormat {
    pub fn infer(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "mbox" => Some(InputFormat::Mbox),
            "eml" => Some(InputFormat::Eml),
            "jsonl" | "jl" | "ndjson" => Some(InputFormat::Jsonl),
            _ => None,
        }
    }
}

/// One file to read, with the format and any directory-derived truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputSpec {
    pub path: PathBuf,
    pub format: InputFormat,
    pub truth: Option<TruthLabel>,
}

/// A decoded document ready for scoring, with its truth label (when known)
/// and any non-fatal extraction warnings.
#[derive(Debug, Clone)]
pub struct ScorableDoc {
    pub doc: EmailDocument,
    pub truth: Option<TruthLabel>,
    pub warnings: Vec<String>,
}

/// One unit pulled from a corpus stream: a scoreable document or a
/// recorded per-message failure. Stream-level IO errors abort instead.
#[derive(Debug)]
pub enum CorpusItem {
    Doc(ScorableDoc),
    Error(IngestError),
}

/// Expand CLI input paths into concrete file specs.
///
/// Directories are walked recursively with deterministic (sorted) order;
/// `legit/` and `phish/` subdirectories assign truth labels. The format
/// comes from the `--format` flag when given, otherwise from each file
/// extension.
pub fn expand_inputs(
    paths: &[PathBuf],
    format: Option<InputFormat>,
) -> Result<Vec<InputSpec>, String> {
    let mut specs = Vec::new();
    for path in paths {
        if path.is_dir() {
            let legit = path.join("legit");
            let phish = path.join("phish");
            if legit.is_dir() || phish.is_dir() {
                for (dir, truth) in [
                    (legit, TruthLabel::Legitimate),
                    (phish, TruthLabel::Phishing),
                ] {
                    if dir.is_dir() {
                        walk_files(&dir, format, Some(truth), &mut specs)?;
                    }
                }
            } else {
                walk_files(path, format, None, &mut specs)?;
            }
        } else if path.is_file() {
            specs.push(spec_for(path, format, None)?);
        } else {
            return Err(format!("input {} does not exist", path.display()));
        }
    }
    if specs.is_empty() {
        return Err("no input files found".to_string());
    }
    Ok(specs)
}

fn walk_files(
    dir: &Path,
    format: Option<InputFormat>,
    truth: Option<TruthLabel>,
    specs: &mut Vec<InputSpec>,
) -> Result<(), String> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("cannot read directory {}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    entries.sort();
    for entry in entries {
        if entry.is_dir() {
            walk_files(&entry, format, truth, specs)?;
        } else if entry.is_file() {
            specs.push(spec_for(&entry, format, truth)?);
        }
    }
    Ok(())
}

fn spec_for(
    path: &Path,
    format: Option<InputFormat>,
    truth: Option<TruthLabel>,
) -> Result<InputSpec, String> {
    let format = format.or_else(|| InputFormat::infer(path)).ok_or_else(|| {
        format!(
            "cannot infer format of {} (use --format mbox|eml|jsonl)",
            path.display()
        )
    })?;
    Ok(InputSpec {
        path: path.to_path_buf(),
        format,
        truth,
    })
}

/// Open a streaming reader over one input file.
pub fn open_stream(spec: &InputSpec) -> io::Result<CorpusStream> {
    let file = File::open(&spec.path)?;
    let source = spec.path.display().to_string();
    let inner = match spec.format {
        InputFormat::Mbox => StreamKind::Mbox {
            reader: BufReader::new(file),
            splitter: MboxSplitter::new(),
            junk_reported: false,
            done: false,
        },
        InputFormat::Eml => StreamKind::Eml {
            reader: Some(BufReader::new(file)),
        },
        InputFormat::Jsonl => StreamKind::Jsonl {
            reader: BufReader::new(file),
            line: 0,
        },
    };
    Ok(CorpusStream {
        source,
        truth: spec.truth,
        inner,
    })
}

pub struct CorpusStream {
    source: String,
    truth: Option<TruthLabel>,
    inner: StreamKind,
}

enum StreamKind {
    Mbox {
        reader: BufReader<File>,
        splitter: MboxSplitter,
        junk_reported: bool,
        done: bool,
    },
    Eml {
        reader: Option<BufReader<File>>,
    },
    Jsonl {
        reader: BufReader<File>,
        line: u64,
    },
}

#[derive(Debug, Deserialize)]
struct JsonlRecord {
    sender: Option<String>,
    #[serde(default)]
    receiver: Option<String>,
    #[serde(default)]
    subject: Option<String>,
    #[serde(default)]
    body: Option<String>,
    #[serde(default)]
    label: Option<TruthLabel>,
}

impl CorpusStream {
    fn envelope_item(
        msg: &profiler_core::ingest::RawEmail,
        source_id: String,
        truth: Option<TruthLabel>,
    ) -> CorpusItem {
        match extract_envelope(msg, &source_id) {
            Ok(env) => CorpusItem::Doc(ScorableDoc {
                doc: env.document,
                truth,
                warnings: env.warnings,
            }),
            Err(e) => CorpusItem::Error(e),
        }
    }
}

impl Iterator for CorpusStream {
    type Item = io::Result<CorpusItem>;

    fn next(&mut self) -> Option<Self::Item> {
        let source = self.source.clone();
        let truth = self.truth;
        match &mut self.inner {
            StreamKind::Mbox {
                reader,
                splitter,
                junk_reported,
                done,
            } => {
                loop {
                    if *done {
                        if !*junk_reported && splitter.leading_junk {
                            *junk_reported = true;
                            return Some(Ok(CorpusItem::Error(IngestError {
                                source_id: source,
                                kind: IngestErrorKind::MalformedMessage,
                                detail: "content before first mbox postmark".to_string(),
                            })));
                        }
                        return None;
                    }
                    let mut line = Vec::new();
                    let n = match reader.read_until(b'\n', &mut line) {
                        Ok(n) => n,
                        Err(e) => return Some(Err(e)),
                    };
                    let record = if n == 0 {
                        *done = true;
                        splitter.finish()
                    } else {
                        splitter.push_line(&line)
                    };
                    if let Some(rec) = record {
                        let source_id = format!("{source}:{}", rec.offset);
                        let item = match parse_message(&rec.bytes, rec.offset) {
                            Ok(msg) => Self::envelope_item(&msg, source_id, truth),
                            Err(mut e) => {
                                e.source_id = source_id;
                                CorpusItem::Error(e)
                            }
                        };
                        return Some(Ok(item));
                    }
                }
            }
            StreamKind::Eml { reader } => {
                let mut reader = reader.take()?;
                let mut bytes = Vec::new();
                if let Err(e) = reader.read_to_end(&mut bytes) {
                    return Some(Err(e));
                }
                let item = match parse_message(&bytes, 0) {
                    Ok(msg) => Self::envelope_item(&msg, source, truth),
                    Err(mut e) => {
                        e.source_id = source;
                        CorpusItem::Error(e)
                    }
                };
                Some(Ok(item))
            }
            StreamKind::Jsonl { reader, line } => {
                let mut buf = String::new();
                loop {
                    buf.clear();
                    match reader.read_line(&mut buf) {
                        Ok(0) => return None,
                        Ok(_) => {}
                        Err(e) => return Some(Err(e)),
                    }
                    *line += 1;
                    if buf.trim().is_empty() {
                        continue;
                    }
                    let source_id = format!("{source}:{line}");
                    let item = match serde_json::from_str::<JsonlRecord>(buf.trim_end()) {
                        Err(e) => CorpusItem::Error(IngestError {
                            source_id,
                            kind: IngestErrorKind::MalformedMessage,
                            detail: format!("invalid JSON: {e}"),
                        }),
                        Ok(rec) => match rec.sender.filter(|s| !s.trim().is_empty()) {
                            None => CorpusItem::Error(IngestError {
                                source_id,
                                kind: IngestErrorKind::MissingSender,
                                detail: "record has no sender".to_string(),
                            }),
                            Some(sender) => CorpusItem::Doc(ScorableDoc {
                                doc: EmailDocument {
                                    sender,
                                    receiver: rec.receiver.unwrap_or_default(),
                                    subject: rec.subject.unwrap_or_default(),
                                    body: rec.body.unwrap_or_default(),
                                    source_id,
                                },
                                // per-record labels win over directory truth
                                truth: rec.label.or(truth),
                                warnings: Vec::new(),
                            }),
                        },
                    };
                    return Some(Ok(item));
                }
            }
        }
    }
}
