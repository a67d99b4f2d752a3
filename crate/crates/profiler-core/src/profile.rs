//! Email profile model: label the email type from subject keywords and
//! return the label's weight. `Other` is the keyword-less fallback and its
//! weight of 1 is the multiplicative identity in the final product.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::textprep::{normalize_text, StopwordList, TokenStream};

const BUILTIN_RULES: &str = include_str!("../data/profile_rules.txt");

/// The eight email profiles, in table row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ProfileLabel {
    Welcome,
    Work,
    JobSearch,
    Update,
    Receipt,
    Congratulatory,
    Delivery,
    Other,
}

impl ProfileLabel {
    /// Row order used for tie-breaking between equal weights.
    pub const ALL: [ProfileLabel; 8] = [
        ProfileLabel::Welcome,
        ProfileLabel::Work,
        ProfileLabel::JobSearch,
        ProfileLabel::Update,
        ProfileLabel::Receipt,
        ProfileLabel::Congratulatory,
        ProfileLabel::Delivery,
        ProfileLabel::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProfileLabel::Welcome => "welcome",
            ProfileLabel::Work => "work",
            ProfileLabel::JobSearch => "job-search",
            ProfileLabel::Update => "update",
            ProfileLabel::Receipt => "receipt",
            ProfileLabel::Congratulatory => "congratulatory",
            ProfileLabel::Delivery => "delivery",
            ProfileLabel::Other => "other",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.name() == name)
    }

    fn row(self) -> usize {
        Self::ALL.iter().position(|l| *l == self).unwrap_or(usize::MAX)
    }

    /// Default weight of this label.
    pub fn default_weight(self) -> f64 {
        match self {
            ProfileLabel::Welcome | ProfileLabel::Work => 0.1,
            ProfileLabel::JobSearch => 0.3,
            ProfileLabel::Update => 0.5,
            ProfileLabel::Receipt => 0.9,
            ProfileLabel::Congratulatory | ProfileLabel::Delivery => 2.0,
            ProfileLabel::Other => 1.0,
        }
    }
}

impl core::fmt::Display for ProfileLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// A profile rules file failed validation.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileRulesError {
    UnknownSection(String),
    DuplicateSection(ProfileLabel),
    MissingSection(ProfileLabel),
    MissingWeight(ProfileLabel),
    InvalidWeight(ProfileLabel, String),
    NonPositiveWeight(ProfileLabel, f64),
    OtherHasKeywords,
    KeywordNormalizesAway(ProfileLabel, String),
    KeywordOutsideSection(String),
}

impl core::fmt::Display for ProfileRulesError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        use ProfileRulesError::*;
        match self {
            UnknownSection(s) => write!(f, "unknown profile section [{s}]"),
            DuplicateSection(l) => write!(f, "duplicate profile section [{l}]"),
            MissingSection(l) => write!(f, "missing profile section [{l}]"),
            MissingWeight(l) => write!(f, "profile [{l}] has no weight"),
            InvalidWeight(l, s) => write!(f, "profile [{l}] has unparseable weight {s:?}"),
            NonPositiveWeight(l, w) => write!(f, "profile [{l}] weight {w} must be positive"),
            OtherHasKeywords => write!(f, "profile [other] is the fallback and takes no keywords"),
            KeywordNormalizesAway(l, k) => {
                write!(f, "profile [{l}] keyword {k:?} does not survive normalization")
            }
            KeywordOutsideSection(k) => write!(f, "keyword {k:?} appears before any section"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ProfileRulesError {}

/// Keyword→label rules plus the label→weight map. Labels are tested in
/// descending weight order (ties broken by table row order); the first
/// label with a keyword present in the subject wins.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRules {
    keywords: [BTreeSet<String>; 8],
    weights: [f64; 8],
    /// Labels with keywords, pre-sorted into evaluation order.
    evaluation_order: Vec<ProfileLabel>,
}

impl ProfileRules {
    /// Parse a rules file: `[label]` sections, one subject keyword per
    /// line, one `weight = <num>` per section, `#` comments. All eight
    /// labels must be present; keyword phrases contribute each surviving
    /// token.
    pub fn parse(content: &str, stopwords: &StopwordList) -> Result<Self, ProfileRulesError> {
        let mut keywords: [BTreeSet<String>; 8] = Default::default();
        let mut weights: [Option<f64>; 8] = [None; 8];
        let mut seen: [bool; 8] = [false; 8];
        let mut current: Option<ProfileLabel> = None;

        for line in content.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(section) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let label = ProfileLabel::from_name(section.trim())
                    .ok_or_else(|| ProfileRulesError::UnknownSection(section.to_string()))?;
                if seen[label.row()] {
                    return Err(ProfileRulesError::DuplicateSection(label));
                }
                seen[label.row()] = true;
                current = Some(label);
                continue;
            }
            let Some(label) = current else {
                return Err(ProfileRulesError::KeywordOutsideSection(line.to_string()));
            };
            if let Some(value) = line.strip_prefix("weight") {
                let value = value.trim_start();
                if let Some(num) = value.strip_prefix('=') {
                    let num = num.trim();
                    let w: f64 = num
                        .parse()
                        .map_err(|_| ProfileRulesError::InvalidWeight(label, num.to_string()))?;
                    weights[label.row()] = Some(w);
                    continue;
                }
            }
            if label == ProfileLabel::Other {
                return Err(ProfileRulesError::OtherHasKeywords);
            }
            let tokens = normalize_text(line, stopwords);
            if tokens.is_empty() {
                return Err(ProfileRulesError::KeywordNormalizesAway(
                    label,
                    line.to_string(),
                ));
            }
            for token in tokens.iter() {
                keywords[label.row()].insert(token.clone());
            }
        }

        for label in ProfileLabel::ALL {
            if !seen[label.row()] {
                return Err(ProfileRulesError::MissingSection(label));
            }
        }
        let mut resolved = [0.0f64; 8];
        for label in ProfileLabel::ALL {
            let w = weights[label.row()].ok_or(ProfileRulesError::MissingWeight(label))?;
            if !w.is_finite() || w <= 0.0 {
                return Err(ProfileRulesError::NonPositiveWeight(label, w));
            }
            resolved[label.row()] = w;
        }
        Ok(Self::from_parts(keywords, resolved))
    }

    fn from_parts(keywords: [BTreeSet<String>; 8], weights: [f64; 8]) -> Self {
        let mut evaluation_order: Vec<ProfileLabel> = ProfileLabel::ALL
            .into_iter()
            .filter(|l| !keywords[l.row()].is_empty())
            .collect();
        evaluation_order.sort_by(|a, b| {
            weights[b.row()]
                .partial_cmp(&weights[a.row()])
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.row().cmp(&b.row()))
        });
        ProfileRules {
            keywords,
            weights,
            evaluation_order,
        }
    }

    /// The embedded default rules with the table weights.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_RULES, &StopwordList::builtin())
            .expect("built-in profile rules are valid")
    }

    pub fn weight(&self, label: ProfileLabel) -> f64 {
        self.weights[label.row()]
    }

    pub fn keywords(&self, label: ProfileLabel) -> impl Iterator<Item = &str> {
        self.keywords[label.row()].iter().map(String::as_str)
    }

    /// Render in the rules-file format; parsing the result reproduces the
    /// rules.
    pub fn to_file_format(&self) -> String {
        let mut out = String::new();
        for label in ProfileLabel::ALL {
            out.push_str(&format!("[{label}]\nweight = {}\n", self.weight(label)));
            for kw in self.keywords(label) {
                out.push_str(kw);
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}

impl Default for ProfileRules {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Label a subject token stream. Deterministic and total: every subject
/// yields exactly one label, `Other` when nothing matches.
pub fn classify_profile(subject_tokens: &TokenStream, rules: &ProfileRules) -> ProfileLabel {
    for &label in &rules.evaluation_order {
        let kws = &rules.keywords[label.row()];
        if subject_tokens.iter().any(|t| kws.contains(t)) {
            return label;
        }
    }
    ProfileLabel::Other
}

/// The weight the model returns for a label.
pub fn assess_profile(label: ProfileLabel, rules: &ProfileRules) -> f64 {
    rules.weight(label)
}
