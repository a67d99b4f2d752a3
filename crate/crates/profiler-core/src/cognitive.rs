//! Cognitive manipulation model: bag-of-words counts of scarcity,
//! consistency, and monetary-incentive language over subject and body.
//! The model score is the raw total count; higher means more persuasive
//! pressure in the text.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::string::String;

use crate::textprep::{normalize_text, StopwordList, TokenStream};

const BUILTIN_SCARCITY: &str = include_str!("../data/scarcity.txt");
const BUILTIN_CONSISTENCY: &str = include_str!("../data/consistency.txt");
const BUILTIN_MONETARY: &str = include_str!("../data/monetary.txt");

/// Which manipulation category a lexicon captures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum LexiconKind {
    Scarcity,
    Consistency,
    Monetary,
}

impl core::fmt::Display for LexiconKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            LexiconKind::Scarcity => "scarcity",
            LexiconKind::Consistency => "consistency",
            LexiconKind::Monetary => "monetary",
        })
    }
}

/// A lexicon that would match nothing is a configuration error, not a
/// model outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyLexicon {
    pub kind: LexiconKind,
    pub source: String,
}

impl core::fmt::Display for EmptyLexicon {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{} lexicon from {:?} has no entries surviving normalization",
            self.kind, self.source
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EmptyLexicon {}

/// A named set of normalized tokens to count in email text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    kind: LexiconKind,
    entries: BTreeSet<String>,
    source: String,
}

impl Lexicon {
    /// Parse a lexicon file: one term per line, `#` comments. Every line is
    /// run through text normalization; terms that normalize away are
    /// dropped, and a phrase contributes each of its surviving tokens
    /// (matching is unigram-only). An empty result is an error.
    pub fn parse(
        content: &str,
        kind: LexiconKind,
        source: &str,
        stopwords: &StopwordList,
    ) -> Result<Self, EmptyLexicon> {
        let mut entries = BTreeSet::new();
        for line in content.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for token in normalize_text(line, stopwords).iter() {
                entries.insert(token.clone());
            }
        }
        if entries.is_empty() {
            return Err(EmptyLexicon {
                kind,
                source: source.to_owned(),
            });
        }
        Ok(Lexicon {
            kind,
            entries,
            source: source.to_owned(),
        })
    }

    pub fn kind(&self) -> LexiconKind {
        self.kind
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains(token)
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// The three lexicons the model counts against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconSet {
    pub scarcity: Lexicon,
    pub consistency: Lexicon,
    pub monetary: Lexicon,
}

impl LexiconSet {
    /// The embedded default lexicons.
    pub fn builtin() -> Self {
        let stops = StopwordList::builtin();
        LexiconSet {
            scarcity: Lexicon::parse(BUILTIN_SCARCITY, LexiconKind::Scarcity, "builtin", &stops)
                .expect("built-in scarcity lexicon is non-empty"),
            consistency: Lexicon::parse(
                BUILTIN_CONSISTENCY,
                LexiconKind::Consistency,
                "builtin",
                &stops,
            )
            .expect("built-in consistency lexicon is non-empty"),
            monetary: Lexicon::parse(BUILTIN_MONETARY, LexiconKind::Monetary, "builtin", &stops)
                .expect("built-in monetary lexicon is non-empty"),
        }
    }
}

impl Default for LexiconSet {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Per-category hit counts; the model output is `total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CognitiveScore {
    pub scarcity: u32,
    pub consistency: u32,
    pub monetary: u32,
    pub total: u32,
}

/// Number of token occurrences (with multiplicity) present in the lexicon.
pub fn count_lexicon_hits(tokens: &TokenStream, lexicon: &Lexicon) -> u32 {
    tokens.iter().filter(|t| lexicon.contains(t)).count() as u32
}

/// Count all three lexicons over subject and body token streams. Subject
/// and body contribute equally: counts run over their concatenation.
pub fn assess_cognition(
    subject_tokens: &TokenStream,
    body_tokens: &TokenStream,
    lexicons: &LexiconSet,
) -> CognitiveScore {
    let count = |lex: &Lexicon| count_lexicon_hits(subject_tokens, lex) + count_lexicon_hits(body_tokens, lex);
    let scarcity = count(&lexicons.scarcity);
    let consistency = count(&lexicons.consistency);
    let monetary = count(&lexicons.monetary);
    CognitiveScore {
        scarcity,
        consistency,
        monetary,
        total: scarcity + consistency + monetary,
    }
}
