//! Text normalization: lowercase, drop short words, drop stop words.
//!
//! Both keyword models consume the token stream produced here, and lexicon
//! and rule files are validated against the same normalization so that
//! every configured term can actually be matched.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Minimum surviving token length in characters.
pub const MIN_TOKEN_LEN: usize = 3;

const BUILTIN_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Ordered normalized tokens of one text.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenStream {
    tokens: Vec<String>,
}

impl TokenStream {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, String> {
        self.tokens.iter()
    }

    /// Space-joined form; normalizing it again reproduces the stream.
    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

/// A frozen set of words removed during normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordList {
    words: BTreeSet<String>,
    source: String,
}

impl StopwordList {
    /// The embedded default list (127 common English words).
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_STOPWORDS, "builtin")
    }

    /// Parse a stop-word file: one word per line, `#` comments, blank lines
    /// ignored. Entries are lowercased on load.
    pub fn parse(content: &str, source: &str) -> Self {
        let words = content
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_lowercase())
            .collect();
        StopwordList {
            words,
            source: source.to_owned(),
        }
    }

    pub fn empty() -> Self {
        StopwordList {
            words: BTreeSet::new(),
            source: "empty".to_string(),
        }
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> Self {
        StopwordList {
            words: words
                .into_iter()
                .map(|w| w.as_ref().to_lowercase())
                .collect(),
            source: "inline".to_string(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl Default for StopwordList {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Normalize decoded text into tokens: split on runs of non-alphanumeric
/// characters, lowercase, drop tokens shorter than three characters, drop
/// stop words. Survivor order is preserved.
pub fn normalize_text(text: &str, stopwords: &StopwordList) -> TokenStream {
    let mut tokens = Vec::new();
    for raw in text.split(|c: char| !c.is_alphanumeric()) {
        if raw.is_empty() {
            continue;
        }
        let token = raw.to_lowercase();
        if token.chars().count() < MIN_TOKEN_LEN {
            continue;
        }
        if stopwords.contains(&token) {
            continue;
        }
        tokens.push(token);
    }
    TokenStream { tokens }
}
