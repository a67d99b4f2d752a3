//! Evaluation harness: confusion matrices and rates for labelled corpora,
//! score histograms, threshold sweeps, and corpus auto-labelling.

use alloc::string::String;
use alloc::vec::Vec;

use crate::orchestrate::{classify, triage, RiskAssessment, ThresholdConfig, Verdict};

/// Ground truth for one scored email.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum TruthLabel {
    Legitimate,
    Phishing,
}

/// One scored, truth-labelled email.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LabelledScore {
    pub source_id: String,
    pub score: f64,
    pub truth: TruthLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    EmptyInput,
    EmptyThresholds,
    UnsortedThresholds,
    InvalidBins { lo: f64, hi: f64, bin_width: f64 },
    ScoreBelowRange { score: f64, lo: f64 },
}

impl core::fmt::Display for EvalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EvalError::EmptyInput => write!(f, "evaluation input is empty"),
            EvalError::EmptyThresholds => write!(f, "threshold list is empty"),
            EvalError::UnsortedThresholds => {
                write!(f, "threshold list must be sorted ascending")
            }
            EvalError::InvalidBins { lo, hi, bin_width } => {
                write!(f, "invalid histogram bins: lo={lo} hi={hi} width={bin_width}")
            }
            EvalError::ScoreBelowRange { score, lo } => {
                write!(f, "score {score} below histogram range start {lo}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EvalError {}

/// Confusion counts and rates of one corpus at one threshold.
///
/// Rates are exact fractions of their truth-class size (`None` when the
/// class is empty); `accuracy` is over the whole corpus. The `Display`
/// form rounds percentages to 0.1.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvaluationReport {
    pub threshold: f64,
    pub n: usize,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub fn_: usize,
    pub tpr: Option<f64>,
    pub fpr: Option<f64>,
    pub tnr: Option<f64>,
    pub fnr: Option<f64>,
    pub accuracy: f64,
}

impl EvaluationReport {
    /// Build a report directly from confusion counts.
    pub fn from_counts(
        tp: usize,
        fp: usize,
        tn: usize,
        fn_: usize,
        threshold: f64,
    ) -> Result<Self, EvalError> {
        let n = tp + fp + tn + fn_;
        if n == 0 {
            return Err(EvalError::EmptyInput);
        }
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                None
            } else {
                Some(num as f64 / den as f64)
            }
        };
        Ok(EvaluationReport {
            threshold,
            n,
            tp,
            fp,
            tn,
            fn_,
            tpr: ratio(tp, tp + fn_),
            fnr: ratio(fn_, tp + fn_),
            tnr: ratio(tn, tn + fp),
            fpr: ratio(fp, tn + fp),
            accuracy: (tp + tn) as f64 / n as f64,
        })
    }
}

/// Round a fraction to a percentage at 0.1 precision (reporting form).
pub fn percent(frac: f64) -> f64 {
    ((frac * 1000.0) + 0.5) as u64 as f64 / 10.0
}

fn fmt_rate(f: &mut core::fmt::Formatter<'_>, name: &str, rate: Option<f64>) -> core::fmt::Result {
    match rate {
        Some(r) => write!(f, " {name}={:.1}%", percent(r)),
        None => write!(f, " {name}=n/a"),
    }
}

impl core::fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "threshold={:.4} n={} tp={} fp={} tn={} fn={} |",
            self.threshold, self.n, self.tp, self.fp, self.tn, self.fn_
        )?;
        fmt_rate(f, "tpr", self.tpr)?;
        fmt_rate(f, "fpr", self.fpr)?;
        fmt_rate(f, "tnr", self.tnr)?;
        fmt_rate(f, "fnr", self.fnr)?;
        write!(f, " accuracy={:.1}%", percent(self.accuracy))
    }
}

/// Evaluate a labelled corpus at one threshold (boundary goes to
/// phishing).
pub fn evaluate(scores: &[LabelledScore], threshold: f64) -> Result<EvaluationReport, EvalError> {
    if scores.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for s in scores {
        let verdict = classify(s.score, threshold);
        match (s.truth, verdict) {
            (TruthLabel::Phishing, Verdict::Phishing) => tp += 1,
            (TruthLabel::Phishing, _) => fn_ += 1,
            (TruthLabel::Legitimate, Verdict::Phishing) => fp += 1,
            (TruthLabel::Legitimate, _) => tn += 1,
        }
    }
    EvaluationReport::from_counts(tp, fp, tn, fn_, threshold)
}

/// Evaluate at each threshold of an ascending list; one report per
/// threshold, ready to plot FPR/FNR against the threshold.
pub fn threshold_sweep(
    scores: &[LabelledScore],
    thresholds: &[f64],
) -> Result<Vec<EvaluationReport>, EvalError> {
    if thresholds.is_empty() {
        return Err(EvalError::EmptyThresholds);
    }
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(EvalError::UnsortedThresholds);
    }
    thresholds.iter().map(|&t| evaluate(scores, t)).collect()
}

/// Fixed-width score histogram over `[lo, hi)` with an explicit overflow
/// bucket for scores at or above `hi`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub bin_width: f64,
    pub counts: Vec<usize>,
    pub overflow: usize,
}

impl Histogram {
    /// Lower edge of bin `i`.
    pub fn bin_lo(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.bin_width
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.overflow
    }
}

/// Bin scores into `[lo + i*w, lo + (i+1)*w)`; scores at or above `hi`
/// land in the overflow bucket, scores below `lo` are an error.
pub fn build_histogram(
    scores: &[f64],
    lo: f64,
    hi: f64,
    bin_width: f64,
) -> Result<Histogram, EvalError> {
    if !(lo < hi) || !(bin_width > 0.0) || !lo.is_finite() || !hi.is_finite() || !bin_width.is_finite()
    {
        return Err(EvalError::InvalidBins { lo, hi, bin_width });
    }
    let nbins = {
        let exact = (hi - lo) / bin_width;
        let mut n = exact as usize;
        if (n as f64) * bin_width + lo < hi {
            n += 1;
        }
        n
    };
    let mut counts = alloc::vec![0usize; nbins];
    let mut overflow = 0usize;
    for &score in scores {
        if score < lo {
            return Err(EvalError::ScoreBelowRange { score, lo });
        }
        if score >= hi {
            overflow += 1;
            continue;
        }
        let idx = ((score - lo) / bin_width) as usize;
        let idx = idx.min(nbins - 1);
        counts[idx] += 1;
    }
    Ok(Histogram {
        lo,
        hi,
        bin_width,
        counts,
        overflow,
    })
}

/// How verdicts are assigned when labelling a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    /// Single threshold, two-way verdicts.
    Binary,
    /// Low/high band, three-way verdicts; uncertain records are flagged
    /// for downstream analysis.
    Banded,
}

/// Fill the verdict of every assessment from its final score.
pub fn label_assessments(
    assessments: &mut [RiskAssessment],
    mode: LabelMode,
    thresholds: &ThresholdConfig,
) -> Result<(), crate::orchestrate::ThresholdError> {
    for a in assessments.iter_mut() {
        a.verdict = Some(match mode {
            LabelMode::Binary => classify(a.final_score, thresholds.single),
            LabelMode::Banded => triage(a.final_score, thresholds.low, thresholds.high)?,
        });
    }
    Ok(())
}
