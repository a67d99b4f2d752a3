//! Heuristic email risk profiling.
//!
//! Parses email corpora into decoded documents, scores each document with
//! three independent models (sender threat level, manipulative-language
//! counting, subject-based email typing), multiplies the model outputs into
//! a single risk score, and evaluates scored corpora against truth labels.
//!
//! The crate is `no_std`-compatible (requires `alloc`); everything here is
//! pure computation over in-memory bytes and strings. File IO, configuration
//! files, and the command-line front end live in the companion `profiler-cli`
//! crate.
//!
//! Pipeline shape:
//!
//! ```text
//! bytes ──ingest──► EmailDocument ──textprep──► tokens ──┬─► threat
//!                                                        ├─► cognitive
//!                                                        └─► profile
//!                                          orchestrate: product ──► RiskAssessment
//!                                          eval: thresholds, confusion counts
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cognitive;
pub mod decode;
pub mod eval;
pub mod ingest;
pub mod orchestrate;
pub mod profile;
pub mod settings;
pub mod textprep;
pub mod threat;

pub use cognitive::{CognitiveScore, Lexicon, LexiconKind, LexiconSet};
pub use eval::{EvaluationReport, Histogram, LabelMode, LabelledScore, TruthLabel};
pub use ingest::{EmailDocument, IngestError, IngestErrorKind, RawEmail, TransferEncoding};
pub use orchestrate::{
    assess_email, classify, triage, ModelWeights, RiskAssessment, ThresholdConfig, Verdict,
};
pub use profile::{ProfileLabel, ProfileRules};
pub use settings::ScoringConfig;
pub use textprep::{normalize_text, StopwordList, TokenStream};
pub use threat::{assess_threat, ThreatConfig, ThreatFeatures};
