//! Streaming execution: documents are scored as they are parsed, in
//! bounded-size batches mapped across a thread pool, with source order
//! preserved in the output. Progress events go to the diagnostic stream
//! as JSON lines and never touch data output.

use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use profiler_core::ingest::IngestError;
use profiler_core::orchestrate::{assess_email, RiskAssessment};
use profiler_core::settings::ScoringConfig;
use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{open_stream, CorpusItem, InputSpec, ScorableDoc};

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Worker threads; `None` uses all available cores.
    pub jobs: Option<usize>,
    /// Documents scored per parallel batch.
    pub batch_size: usize,
    /// Emit a progress event every this many documents.
    pub progress_every: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            jobs: None,
            batch_size: 1024,
            progress_every: 1000,
        }
    }
}

/// One scored document with everything downstream consumers need.
#[derive(Debug, Clone)]
pub struct ScoredRecord {
    pub doc: ScorableDoc,
    pub assessment: RiskAssessment,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("reading {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("writing output: {0}")]
    Write(#[from] io::Error),
}

#[derive(Debug, Default, Clone, Copy)]
pub struct PipelineStats {
    pub processed: u64,
    pub errors: u64,
    pub warnings: u64,
}

/// Score every document of every input in order. Ingest errors are handed
/// to `on_error` (and counted) as they are met; scored records are handed
/// to `on_record` in source order.
pub fn run_pipeline(
    specs: &[InputSpec],
    config: &ScoringConfig,
    options: &PipelineOptions,
    progress: &mut Progress<impl Write>,
    mut on_error: impl FnMut(&IngestError) -> io::Result<()>,
    mut on_record: impl FnMut(ScoredRecord) -> io::Result<()>,
) -> Result<PipelineStats, PipelineError> {
    let pool = match options.jobs {
        None => None,
        Some(jobs) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| PipelineError::Write(io::Error::other(e)))?,
        ),
    };
    let mut stats = PipelineStats::default();
    progress.begin();

    let mut batch: Vec<ScorableDoc> = Vec::with_capacity(options.batch_size);
    let mut flush = |batch: &mut Vec<ScorableDoc>,
                     stats: &mut PipelineStats,
                     progress: &mut Progress<_>|
     -> Result<(), PipelineError> {
        if batch.is_empty() {
            return Ok(());
        }
        let score = || {
            batch
                .par_iter()
                .map(|s| assess_email(&s.doc, config))
                .collect::<Vec<_>>()
        };
        let assessments = match &pool {
            Some(p) => p.install(score),
            None => score(),
        };
        for (doc, assessment) in batch.drain(..).zip(assessments) {
            stats.processed += 1;
            stats.warnings += doc.warnings.len() as u64;
            for w in &doc.warnings {
                progress.warning(&doc.doc.source_id, w);
            }
            on_record(ScoredRecord { doc, assessment })?;
            progress.tick(stats);
        }
        Ok(())
    };

    for spec in specs {
        let path = spec.path.display().to_string();
        let stream = open_stream(spec).map_err(|source| PipelineError::Read {
            path: path.clone(),
            source,
        })?;
        for item in stream {
            match item.map_err(|source| PipelineError::Read {
                path: path.clone(),
                source,
            })? {
                CorpusItem::Doc(doc) => {
                    batch.push(doc);
                    if batch.len() >= options.batch_size {
                        flush(&mut batch, &mut stats, progress)?;
                    }
                }
                CorpusItem::Error(e) => {
                    stats.errors += 1;
                    on_error(&e)?;
                    progress.tick(&stats);
                }
            }
        }
        flush(&mut batch, &mut stats, progress)?;
    }
    flush(&mut batch, &mut stats, progress)?;
    Ok(stats)
}

/// JSON-lines progress events on the diagnostic stream.
pub struct Progress<W: Write> {
    out: W,
    every: u64,
    last_emitted: u64,
    started: Instant,
}

impl<W: Write> Progress<W> {
    pub fn new(out: W, every: u64) -> Self {
        Progress {
            out,
            every: every.max(1),
            last_emitted: 0,
            started: Instant::now(),
        }
    }

    fn emit(&mut self, value: serde_json::Value) {
        // diagnostics must never kill the run
        let _ = serde_json::to_writer(&mut self.out, &value);
        let _ = self.out.write_all(b"\n");
    }

    fn begin(&mut self) {
        self.emit(serde_json::json!({
            "event": "progress", "processed": 0, "errors": 0,
        }));
    }

    fn tick(&mut self, stats: &PipelineStats) {
        let seen = stats.processed + stats.errors;
        if seen >= self.last_emitted + self.every {
            self.last_emitted = seen;
            self.emit(serde_json::json!({
                "event": "progress",
                "processed": stats.processed,
                "errors": stats.errors,
            }));
        }
    }

    fn warning(&mut self, source_id: &str, detail: &str) {
        self.emit(serde_json::json!({
            "event": "warning", "source_id": source_id, "detail": detail,
        }));
    }

    /// Final summary: counts, throughput, and the error sidecar when one
    /// was written.
    pub fn finish(&mut self, stats: &PipelineStats, sidecar: Option<&Path>) {
        let elapsed = self.started.elapsed().as_secs_f64();
        let throughput = if elapsed > 0.0 {
            stats.processed as f64 / elapsed
        } else {
            0.0
        };
        self.emit(serde_json::json!({
            "event": "summary",
            "processed": stats.processed,
            "errors": stats.errors,
            "warnings": stats.warnings,
            "elapsed_secs": elapsed,
            "throughput_eps": throughput,
            "error_sidecar": sidecar.map(|p| p.display().to_string()),
        }));
    }
}
