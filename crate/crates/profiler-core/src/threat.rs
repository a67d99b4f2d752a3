//! Sender threat-level model: a binary low/high score from the sender
//! address alone. No-reply usernames and trusted or internal domains score
//! low (0.1), everything else scores high (0.9).

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ingest::EmailDocument;

/// Numeric value of a low-threat verdict.
pub const LOW_THREAT: f64 = 0.1;
/// Numeric value of a high-threat verdict.
pub const HIGH_THREAT: f64 = 0.9;

/// Substring lists driving the domain checks. Entries are matched against
/// the lowercased sender domain.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThreatConfig {
    /// Domains containing any of these are trusted (score low).
    pub trusted_domain_substrings: Vec<String>,
    /// Domains containing any of these are flagged as business domains
    /// (reported, not scored).
    pub business_domain_substrings: Vec<String>,
}

impl Default for ThreatConfig {
    fn default() -> Self {
        ThreatConfig {
            trusted_domain_substrings: ["gov.au", "edu.au"].map(String::from).to_vec(),
            business_domain_substrings: [".com", ".org"].map(String::from).to_vec(),
        }
    }
}

/// `username@domain` split of an address; the domain is lowercased.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressParts {
    pub username: String,
    pub domain: String,
}

/// Address has no `@` separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedAddress;

impl core::fmt::Display for MalformedAddress {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("address has no '@' separator")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MalformedAddress {}

/// Split an address at its last `@`. The username is preserved verbatim
/// (it may itself contain quoted `@`s), the domain is lowercased.
pub fn split_address(address: &str) -> Result<AddressParts, MalformedAddress> {
    let at = address.rfind('@').ok_or(MalformedAddress)?;
    Ok(AddressParts {
        username: address[..at].to_string(),
        domain: address[at + 1..].to_lowercase(),
    })
}

/// Per-address facts the score is derived from. All flags are reported in
/// the assessment; `business_domain` is informational only and never
/// affects the score.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThreatFeatures {
    pub no_reply_username: bool,
    pub internal_domain: bool,
    pub gov_domain: bool,
    pub edu_domain: bool,
    pub business_domain: bool,
    /// Configured trusted substrings found in the sender domain.
    pub matched_trusted: Vec<String>,
}

impl ThreatFeatures {
    /// The score implied by these features: low iff any trust signal fired.
    pub fn score(&self) -> f64 {
        if self.no_reply_username || self.internal_domain || !self.matched_trusted.is_empty() {
            LOW_THREAT
        } else {
            HIGH_THREAT
        }
    }
}

/// Compute the Table-style features for a split address.
/// `receiver_domain` must already be lowercase; empty disables the
/// internal-domain check.
pub fn extract_threat_features(
    parts: &AddressParts,
    receiver_domain: &str,
    config: &ThreatConfig,
) -> ThreatFeatures {
    let squashed: String = parts
        .username
        .chars()
        .filter(|c| !c.is_whitespace() && !matches!(c, '-' | '_' | '.'))
        .flat_map(char::to_lowercase)
        .collect();
    let matched_trusted: Vec<String> = config
        .trusted_domain_substrings
        .iter()
        .filter(|s| !s.is_empty() && parts.domain.contains(s.as_str()))
        .cloned()
        .collect();
    ThreatFeatures {
        no_reply_username: squashed.contains("noreply"),
        internal_domain: !receiver_domain.is_empty() && parts.domain == receiver_domain,
        gov_domain: parts.domain.contains("gov.au"),
        edu_domain: parts.domain.contains("edu.au"),
        business_domain: config
            .business_domain_substrings
            .iter()
            .any(|s| !s.is_empty() && parts.domain.contains(s.as_str())),
        matched_trusted,
    }
}

/// Outcome of the threat model for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreatAssessment {
    /// Exactly `LOW_THREAT` or `HIGH_THREAT`.
    pub score: f64,
    pub features: ThreatFeatures,
    /// Sender had no `@`; scored high as a fail-unsafe.
    pub malformed_sender: bool,
}

/// Score the sender of a document. A malformed sender address scores high
/// with a diagnostic flag rather than failing the pipeline.
pub fn assess_threat(doc: &EmailDocument, config: &ThreatConfig) -> ThreatAssessment {
    let parts = match split_address(&doc.sender) {
        Ok(p) => p,
        Err(MalformedAddress) => {
            return ThreatAssessment {
                score: HIGH_THREAT,
                features: ThreatFeatures::default(),
                malformed_sender: true,
            }
        }
    };
    let receiver_domain = split_address(&doc.receiver)
        .map(|p| p.domain)
        .unwrap_or_default();
    let features = extract_threat_features(&parts, &receiver_domain, config);
    ThreatAssessment {
        score: features.score(),
        features,
        malformed_sender: false,
    }
}
