//! Output orchestration: run the three models over one document, combine
//! their outputs by product, and classify the result against one or two
//! thresholds.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::cognitive::{assess_cognition, CognitiveScore};
use crate::ingest::EmailDocument;
use crate::profile::{assess_profile, classify_profile, ProfileLabel};
use crate::settings::ScoringConfig;
use crate::textprep::normalize_text;
use crate::threat::{assess_threat, ThreatFeatures};

/// Classification outcome. `Uncertain` only arises from dual-threshold
/// triage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Legitimate,
    Phishing,
    Uncertain,
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Verdict::Legitimate => "legitimate",
            Verdict::Phishing => "phishing",
            Verdict::Uncertain => "uncertain",
        })
    }
}

/// Classification thresholds: one for binary decisions, a low/high pair
/// for triage banding.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdConfig {
    pub single: f64,
    pub low: f64,
    pub high: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            single: 0.5,
            low: 0.3,
            high: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdError {
    Negative(f64),
    NotFinite,
    LowAboveHigh { low: f64, high: f64 },
}

impl core::fmt::Display for ThresholdError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ThresholdError::Negative(t) => write!(f, "threshold {t} must be >= 0"),
            ThresholdError::NotFinite => write!(f, "thresholds must be finite numbers"),
            ThresholdError::LowAboveHigh { low, high } => {
                write!(f, "low threshold {low} exceeds high threshold {high}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ThresholdError {}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<(), ThresholdError> {
        for t in [self.single, self.low, self.high] {
            if !t.is_finite() {
                return Err(ThresholdError::NotFinite);
            }
            if t < 0.0 {
                return Err(ThresholdError::Negative(t));
            }
        }
        if self.low > self.high {
            return Err(ThresholdError::LowAboveHigh {
                low: self.low,
                high: self.high,
            });
        }
        Ok(())
    }
}

/// Per-model multipliers applied before the product; all default to the
/// neutral 1.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelWeights {
    pub threat: f64,
    pub cognitive: f64,
    pub profile: f64,
}

impl Default for ModelWeights {
    fn default() -> Self {
        ModelWeights {
            threat: 1.0,
            cognitive: 1.0,
            profile: 1.0,
        }
    }
}

impl ModelWeights {
    pub fn validate(&self) -> Result<(), InvalidModelWeight> {
        for (name, w) in [
            ("threat", self.threat),
            ("cognitive", self.cognitive),
            ("profile", self.profile),
        ] {
            if !w.is_finite() || w <= 0.0 {
                return Err(InvalidModelWeight {
                    model: name,
                    weight: w,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvalidModelWeight {
    pub model: &'static str,
    pub weight: f64,
}

impl core::fmt::Display for InvalidModelWeight {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "model weight {} for {} must be a positive finite number",
            self.weight, self.model
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InvalidModelWeight {}

/// The full scored record for one email: the three model outputs, the
/// product, and (once classified) the verdict.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RiskAssessment {
    pub source_id: String,
    pub threat_score: f64,
    pub threat_features: ThreatFeatures,
    pub cognitive_score: CognitiveScore,
    pub profile_label: ProfileLabel,
    pub profile_score: f64,
    pub final_score: f64,
    pub verdict: Option<Verdict>,
    pub diagnostics: Vec<String>,
}

impl RiskAssessment {
    /// Recompute the product from the recorded model outputs; must equal
    /// `final_score` (within float tolerance) for every record.
    pub fn recompute_final(&self, weights: &ModelWeights, cognitive_floor: bool) -> f64 {
        let cognitive = effective_cognitive_total(&self.cognitive_score, cognitive_floor);
        (weights.threat * self.threat_score)
            * (weights.cognitive * cognitive)
            * (weights.profile * self.profile_score)
    }
}

fn effective_cognitive_total(score: &CognitiveScore, floor: bool) -> f64 {
    if floor && score.total == 0 {
        1.0
    } else {
        f64::from(score.total)
    }
}

/// Run all three models on one document and combine their outputs.
///
/// The subject and body are normalized once and shared: the cognitive
/// model counts over both streams, the profile model reads the subject
/// stream. Model failures never abort; they degrade to the fail-unsafe
/// score and leave a note in `diagnostics`.
pub fn assess_email(doc: &EmailDocument, config: &ScoringConfig) -> RiskAssessment {
    let subject_tokens = normalize_text(&doc.subject, &config.stopwords);
    let body_tokens = normalize_text(&doc.body, &config.stopwords);

    let threat = assess_threat(doc, &config.threat);
    let cognitive_score = assess_cognition(&subject_tokens, &body_tokens, &config.lexicons);
    let profile_label = classify_profile(&subject_tokens, &config.profile_rules);
    let profile_score = assess_profile(profile_label, &config.profile_rules);

    let weights = &config.model_weights;
    let cognitive = effective_cognitive_total(&cognitive_score, config.cognitive_floor);
    let final_score = (weights.threat * threat.score)
        * (weights.cognitive * cognitive)
        * (weights.profile * profile_score);

    let mut diagnostics = Vec::new();
    if threat.malformed_sender {
        diagnostics.push("malformed-sender-address".to_string());
    }

    RiskAssessment {
        source_id: doc.source_id.clone(),
        threat_score: threat.score,
        threat_features: threat.features,
        cognitive_score,
        profile_label,
        profile_score,
        final_score,
        verdict: None,
        diagnostics,
    }
}

/// Binary classification; the boundary goes to phishing.
pub fn classify(score: f64, threshold: f64) -> Verdict {
    if score < threshold {
        Verdict::Legitimate
    } else {
        Verdict::Phishing
    }
}

/// Dual-threshold triage: below `low` is legitimate, at or above `high` is
/// phishing, anything between is uncertain.
pub fn triage(score: f64, low: f64, high: f64) -> Result<Verdict, ThresholdError> {
    if low > high {
        return Err(ThresholdError::LowAboveHigh { low, high });
    }
    Ok(if score < low {
        Verdict::Legitimate
    } else if score >= high {
        Verdict::Phishing
    } else {
        Verdict::Uncertain
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::settings::ScoringConfig;

    fn doc(sender: &str, subject: &str, body: &str) -> EmailDocument {
        EmailDocument {
            sender: sender.into(),
            receiver: "bob@org.au".into(),
            subject: subject.into(),
            body: body.into(),
            source_id: "t:0".into(),
        }
    }

    #[test]
    fn product_examples() {
        let config = ScoringConfig::default();
        // threat 0.9, cognitive 2 (payment x2), profile other -> 1.8
        let a = assess_email(
            &doc("x@company.net", "Salary payment", "payment processed"),
            &config,
        );
        assert_eq!(a.threat_score, 0.9);
        assert_eq!(a.cognitive_score.total, 2);
        assert_eq!(a.profile_label, ProfileLabel::Other);
        assert!((a.final_score - 1.8).abs() < 1e-12);

        // zero cognitive annihilates the product
        let a = assess_email(&doc("alice@org.au", "hello", "nothing suspicious here"), &config);
        assert_eq!(a.threat_score, 0.1);
        assert_eq!(a.final_score, 0.0);

        // threat 0.9, cognitive 1, receipt 0.9 -> 0.81
        let a = assess_email(
            &doc("shop@store.net", "Your order receipt", "one payment received"),
            &config,
        );
        assert_eq!(a.profile_label, ProfileLabel::Receipt);
        assert_eq!(a.cognitive_score.total, 1);
        assert!((a.final_score - 0.81).abs() < 1e-12);
    }

    #[test]
    fn final_score_matches_recomputation() {
        let config = ScoringConfig::default();
        let a = assess_email(
            &doc("x@evil.net", "urgent reward", "transfer the funds immediately"),
            &config,
        );
        let recomputed = a.recompute_final(&config.model_weights, config.cognitive_floor);
        assert_eq!(a.final_score, recomputed);
    }

    #[test]
    fn classify_boundary_goes_to_phishing() {
        assert_eq!(classify(0.49, 0.5), Verdict::Legitimate);
        assert_eq!(classify(0.5, 0.5), Verdict::Phishing);
        assert_eq!(classify(0.0, 0.5), Verdict::Legitimate);
    }

    #[test]
    fn triage_band() {
        assert_eq!(triage(0.2, 0.3, 0.9).unwrap(), Verdict::Legitimate);
        assert_eq!(triage(0.5, 0.3, 0.9).unwrap(), Verdict::Uncertain);
        assert_eq!(triage(0.9, 0.3, 0.9).unwrap(), Verdict::Phishing);
        assert!(triage(0.5, 0.9, 0.3).is_err());
    }

    #[test]
    fn triage_degenerates_to_classify() {
        for score in [0.0, 0.29, 0.3, 0.5, 1.0, 7.5] {
            for t in [0.0, 0.3, 0.5, 2.0] {
                assert_eq!(triage(score, t, t).unwrap(), classify(score, t));
            }
        }
    }

    #[test]
    fn cognitive_floor_replaces_zero_total() {
        let mut config = ScoringConfig::default();
        config.cognitive_floor = true;
        let a = assess_email(&doc("x@evil.net", "hello", "nothing odd"), &config);
        assert_eq!(a.cognitive_score.total, 0);
        // floored product: 0.9 * 1 * 1
        assert!((a.final_score - 0.9).abs() < 1e-12);

        // non-zero totals are unaffected
        let a = assess_email(&doc("x@evil.net", "reward", ""), &config);
        assert!((a.final_score - 0.9).abs() < 1e-12);
    }

    #[test]
    fn model_weights_scale_linearly() {
        let base_config = ScoringConfig::default();
        let mut doubled = ScoringConfig::default();
        doubled.model_weights.cognitive = 2.0;
        let d = doc("x@evil.net", "urgent payment", "reply immediately");
        let base = assess_email(&d, &base_config);
        let scaled = assess_email(&d, &doubled);
        assert!((scaled.final_score - 2.0 * base.final_score).abs() <= 1e-12 * base.final_score.abs());
    }

    #[test]
    fn determinism() {
        let config = ScoringConfig::default();
        let d = doc("x@evil.net", "urgent payment", "reply immediately for your reward");
        assert_eq!(assess_email(&d, &config), assess_email(&d, &config));
    }

    #[test]
    fn malformed_sender_diagnostic_propagates() {
        let config = ScoringConfig::default();
        let a = assess_email(&doc("MAILER-DAEMON", "status", "returned"), &config);
        assert_eq!(a.threat_score, 0.9);
        assert_eq!(a.diagnostics, ["malformed-sender-address"]);
    }

    #[test]
    fn threshold_validation() {
        assert!(ThresholdConfig::default().validate().is_ok());
        let bad = ThresholdConfig {
            single: 0.5,
            low: 0.9,
            high: 0.3,
        };
        assert!(matches!(
            bad.validate(),
            Err(ThresholdError::LowAboveHigh { .. })
        ));
        let neg = ThresholdConfig {
            single: -0.1,
            low: 0.0,
            high: 0.0,
        };
        assert!(matches!(neg.validate(), Err(ThresholdError::Negative(_))));
    }
}
