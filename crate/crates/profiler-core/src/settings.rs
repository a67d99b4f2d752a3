//! Assembled, validated scoring configuration shared read-only by the
//! whole pipeline. Loading from files is the companion crate's job; this
//! type only holds the frozen result.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cognitive::LexiconSet;
use crate::orchestrate::{ModelWeights, ThresholdConfig};
use crate::profile::ProfileRules;
use crate::textprep::StopwordList;
use crate::threat::ThreatConfig;

/// Everything the scoring pipeline needs, immutable once built.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoringConfig {
    pub stopwords: StopwordList,
    pub lexicons: LexiconSet,
    pub profile_rules: ProfileRules,
    pub threat: ThreatConfig,
    pub thresholds: ThresholdConfig,
    pub cognitive_floor: bool,
    pub model_weights: ModelWeights,
}

impl ScoringConfig {
    /// Check every invariant, returning all problems at once.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut problems = Vec::new();
        if let Err(e) = self.thresholds.validate() {
            problems.push(format!("thresholds: {e}"));
        }
        if let Err(e) = self.model_weights.validate() {
            problems.push(format!("model weights: {e}"));
        }
        for (list, name) in [
            (&self.threat.trusted_domain_substrings, "trusted-domain"),
            (&self.threat.business_domain_substrings, "business-domain"),
        ] {
            if list.iter().any(|s| s.trim().is_empty()) {
                problems.push(format!("{name} substring list contains an empty entry"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn defaults_validate() {
        assert!(ScoringConfig::default().validate().is_ok());
    }

    #[test]
    fn all_problems_reported_at_once() {
        let mut config = ScoringConfig::default();
        config.thresholds.low = 2.0;
        config.thresholds.high = 1.0;
        config.model_weights.profile = 0.0;
        config.threat.trusted_domain_substrings.push("".to_string());
        let problems = config.validate().unwrap_err();
        assert_eq!(problems.len(), 3);
    }
}
