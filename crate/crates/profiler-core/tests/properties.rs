//! Property suites for the pipeline invariants. The encoders used by the
//! round-trip properties are independent test-local implementations, not
//! the crate's decoders run backwards.

use proptest::prelude::*;

use profiler_core::cognitive::{assess_cognition, count_lexicon_hits};
use profiler_core::eval::{build_histogram, evaluate, threshold_sweep, LabelledScore, TruthLabel};
use profiler_core::ingest::{decode_body, extract_envelope, parse_mbox, parse_message};
use profiler_core::orchestrate::{assess_email, classify, triage, Verdict};
use profiler_core::settings::ScoringConfig;
use profiler_core::textprep::{normalize_text, StopwordList};
use profiler_core::threat::{extract_threat_features, AddressParts, ThreatConfig};
use profiler_core::{decode, EmailDocument};

// --------------------------------------------------------------------------
// Independent encoders (test oracles)
// --------------------------------------------------------------------------

const B64_ALPHABET: &[u8; 64] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

fn oracle_base64(data: &[u8]) -> String {
    let mut out = String::new();
    for chunk in data.chunks(3) {
        let b = [
            chunk[0],
            chunk.get(1).copied().unwrap_or(0),
            chunk.get(2).copied().unwrap_or(0),
        ];
        let n = (u32::from(b[0]) << 16) | (u32::from(b[1]) << 8) | u32::from(b[2]);
        let idx = [
            (n >> 18) & 63,
            (n >> 12) & 63,
            (n >> 6) & 63,
            n & 63,
        ];
        out.push(B64_ALPHABET[idx[0] as usize] as char);
        out.push(B64_ALPHABET[idx[1] as usize] as char);
        out.push(if chunk.len() > 1 {
            B64_ALPHABET[idx[2] as usize] as char
        } else {
            '='
        });
        out.push(if chunk.len() > 2 {
            B64_ALPHABET[idx[3] as usize] as char
        } else {
            '='
        });
    }
    out
}

/// Quoted-printable encoder that escapes everything outside unambiguous
/// ASCII, including spaces and line breaks.
fn oracle_quoted_printable(data: &[u8]) -> String {
    let mut out = String::new();
    for &b in data {
        match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'.' | b',' | b'!' => out.push(b as char),
            _ => out.push_str(&format!("={b:02X}")),
        }
    }
    out
}

proptest! {
    #[test]
    fn base64_oracle_roundtrip(text in ".*") {
        let payload = oracle_base64(text.as_bytes());
        let raw = format!(
            "From: a@b.c\nContent-Transfer-Encoding: base64\n\n{payload}"
        );
        let msg = parse_message(raw.as_bytes(), 0).unwrap();
        prop_assert_eq!(decode_body(&msg).unwrap(), text);
    }

    #[test]
    fn quoted_printable_oracle_roundtrip(text in ".*") {
        let payload = oracle_quoted_printable(text.as_bytes());
        let raw = format!(
            "From: a@b.c\nContent-Transfer-Encoding: quoted-printable\n\n{payload}"
        );
        let msg = parse_message(raw.as_bytes(), 0).unwrap();
        prop_assert_eq!(decode_body(&msg).unwrap(), text);
    }

    #[test]
    fn encoded_word_subject_roundtrip(text in "\\PC*") {
        let payload = oracle_base64(text.as_bytes());
        let raw = format!("From: a@b.c\nSubject: =?utf-8?B?{payload}?=\n\nbody");
        let msg = parse_message(raw.as_bytes(), 0).unwrap();
        let env = extract_envelope(&msg, "prop:0").unwrap();
        prop_assert_eq!(env.document.subject, text);
    }

    #[test]
    fn header_decode_is_identity_without_encoded_words(value in "[^=]*") {
        // no '=' at all certainly means no "=?"
        prop_assert_eq!(decode::decode_header_value(&value).unwrap(), value);
    }

    #[test]
    fn mbox_roundtrip_on_generated_corpora(
        messages in prop::collection::vec(
            ("[a-zA-Z0-9 ]{0,30}", "[a-zA-Z0-9 .,!>\n]{0,80}"),
            1..6,
        )
    ) {
        let mut stream = Vec::new();
        for (subject, body) in &messages {
            // canonical body: newline-terminated when non-empty
            let mut body = body.clone();
            if !body.is_empty() && !body.ends_with('\n') {
                body.push('\n');
            }
            stream.extend_from_slice(b"From - generator\n");
            stream.extend_from_slice(format!("From: gen@example.net\nSubject: {subject}\n\n").as_bytes());
            for line in body.split_inclusive('\n') {
                let quotes = line.bytes().take_while(|&b| b == b'>').count();
                if line[quotes..].starts_with("From ") {
                    stream.push(b'>');
                }
                stream.extend_from_slice(line.as_bytes());
            }
            stream.extend_from_slice(b"\n");
        }
        let (first, errors) = parse_mbox(&stream, "gen.mbox");
        prop_assert!(errors.is_empty(), "unexpected errors: {errors:?}");
        prop_assert_eq!(first.len(), messages.len());
        for (email, (subject, body)) in first.iter().zip(&messages) {
            let mut canonical = body.clone();
            if !canonical.is_empty() && !canonical.ends_with('\n') {
                canonical.push('\n');
            }
            prop_assert_eq!(email.header("Subject").unwrap_or(""), subject.trim());
            prop_assert_eq!(decode_body(email).unwrap(), canonical);
        }
    }

    #[test]
    fn ingest_count_conservation(
        messages in prop::collection::vec(
            (any::<bool>(), "[a-zA-Z0-9 ]{0,20}"),
            0..8,
        )
    ) {
        // with_sender=false drops the From header, forcing an error record
        let mut stream = Vec::new();
        for (with_sender, subject) in &messages {
            stream.extend_from_slice(b"From - generator\n");
            if *with_sender {
                stream.extend_from_slice(b"From: gen@example.net\n");
            }
            stream.extend_from_slice(format!("Subject: {subject}\n\nbody\n\n").as_bytes());
        }
        let (emails, mut errors) = parse_mbox(&stream, "gen.mbox");
        let mut docs = 0usize;
        for email in &emails {
            match extract_envelope(email, "gen") {
                Ok(_) => docs += 1,
                Err(e) => errors.push(e),
            }
        }
        prop_assert_eq!(docs + errors.len(), messages.len());
    }

    #[test]
    fn normalize_idempotent_and_bounded(text in "\\PC{0,200}") {
        let stops = StopwordList::builtin();
        let stream = normalize_text(&text, &stops);
        let again = normalize_text(&stream.joined(), &stops);
        prop_assert_eq!(&stream, &again);

        let segment_count = text
            .split(|c: char| !c.is_alphanumeric())
            .filter(|s| !s.is_empty())
            .count();
        prop_assert!(stream.len() <= segment_count);
    }

    #[test]
    fn normalize_case_invariant(text in "[a-zA-Z0-9 .,!?'-]{0,200}") {
        // scoped to simple scripts: Unicode uppercasing can introduce
        // combining marks that change the split itself
        let stops = StopwordList::builtin();
        prop_assert_eq!(
            normalize_text(&text.to_uppercase(), &stops),
            normalize_text(&text, &stops)
        );
    }

    #[test]
    fn threat_score_is_binary_and_monotone(
        username in "[a-z0-9._-]{1,12}",
        domain in "[a-z0-9.-]{1,16}",
        receiver in "[a-z0-9.-]{0,16}",
    ) {
        let config = ThreatConfig::default();
        let parts = AddressParts { username, domain };
        let base = extract_threat_features(&parts, &receiver, &config);
        let base_score = base.score();
        prop_assert!(base_score == 0.1 || base_score == 0.9);

        // forcing any trust flag on never raises the score
        for flag in 0..3 {
            let mut f = base.clone();
            match flag {
                0 => f.no_reply_username = true,
                1 => f.internal_domain = true,
                _ => f.matched_trusted = vec!["gov.au".to_string()],
            }
            prop_assert!(f.score() <= base_score);
        }
        // the business flag never changes the score
        let mut f = base.clone();
        f.business_domain = !f.business_domain;
        prop_assert_eq!(f.score(), base_score);
    }

    #[test]
    fn no_reply_detection_survives_separator_noise(seps in prop::collection::vec(0usize..4, 7)) {
        // splice separators between the letters of "noreply"
        let letters = ["n", "o", "r", "e", "p", "l", "y"];
        let sep_chars = ["", "-", "_", ".", " "];
        let mut username = String::new();
        for (i, l) in letters.iter().enumerate() {
            let upper = l.to_uppercase();
            username.push_str(if i % 2 == 0 { &upper } else { l });
            username.push_str(sep_chars[seps[i] % sep_chars.len()]);
        }
        let parts = AddressParts { username, domain: "x.net".into() };
        let f = extract_threat_features(&parts, "", &ThreatConfig::default());
        prop_assert!(f.no_reply_username);
    }

    #[test]
    fn cognitive_additive_and_monotone(
        body_a in "[a-z ]{0,60}",
        body_b in "[a-z ]{0,60}",
        extra in "[a-z]{3,10}",
    ) {
        let config = ScoringConfig::default();
        let stops = &config.stopwords;
        let empty = normalize_text("", stops);
        let a = assess_cognition(&empty, &normalize_text(&body_a, stops), &config.lexicons);
        let b = assess_cognition(&empty, &normalize_text(&body_b, stops), &config.lexicons);
        let joined = format!("{body_a} {body_b}");
        let ab = assess_cognition(&empty, &normalize_text(&joined, stops), &config.lexicons);
        prop_assert_eq!(ab.total, a.total + b.total);

        // appending a token never decreases the total
        let appended = format!("{body_a} {extra}");
        let more = assess_cognition(&empty, &normalize_text(&appended, stops), &config.lexicons);
        prop_assert!(more.total >= a.total);

        // zero iff no token hits any lexicon
        let tokens = normalize_text(&body_a, stops);
        let any_hit = count_lexicon_hits(&tokens, &config.lexicons.scarcity)
            + count_lexicon_hits(&tokens, &config.lexicons.consistency)
            + count_lexicon_hits(&tokens, &config.lexicons.monetary)
            > 0;
        prop_assert_eq!(a.total > 0, any_hit);
    }

    #[test]
    fn verdict_properties(score in 0.0f64..10.0, t1 in 0.0f64..5.0, t2 in 0.0f64..5.0) {
        // raising the threshold never turns legitimate into phishing
        let (lo_t, hi_t) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let at_low = classify(score, lo_t);
        let at_high = classify(score, hi_t);
        prop_assert!(!(at_low == Verdict::Legitimate && at_high == Verdict::Phishing));

        // collapsing the band reproduces binary classification
        prop_assert_eq!(triage(score, t1, t1).unwrap(), classify(score, t1));

        // banded verdicts agree with the outer thresholds
        let banded = triage(score, lo_t, hi_t).unwrap();
        match banded {
            Verdict::Legitimate => prop_assert!(score < lo_t),
            Verdict::Phishing => prop_assert!(score >= hi_t),
            Verdict::Uncertain => prop_assert!(score >= lo_t && score < hi_t),
        }
    }

    #[test]
    fn assessment_product_recomputes(
        sender in "[a-z]{1,8}@[a-z]{1,8}\\.(com|net|gov\\.au)",
        subject in "[a-z ]{0,40}",
        body in "[a-z ]{0,120}",
        weight in 0.25f64..4.0,
    ) {
        let doc = EmailDocument {
            sender,
            receiver: "bob@org.au".into(),
            subject,
            body,
            source_id: "prop".into(),
        };
        let config = ScoringConfig::default();
        let a = assess_email(&doc, &config);
        prop_assert!(a.threat_score == 0.1 || a.threat_score == 0.9);
        prop_assert!(a.final_score >= 0.0);
        let recomputed = a.recompute_final(&config.model_weights, config.cognitive_floor);
        prop_assert_eq!(a.final_score, recomputed);

        // scaling one model weight scales the product linearly
        let mut scaled_config = ScoringConfig::default();
        scaled_config.model_weights.profile = weight;
        let scaled = assess_email(&doc, &scaled_config);
        let expected = weight * a.final_score;
        let tolerance = 1e-12 * expected.abs();
        prop_assert!((scaled.final_score - expected).abs() <= tolerance);
    }

    #[test]
    fn sweep_monotone_and_histogram_conserves(
        raw_scores in prop::collection::vec((0.0f64..6.0, any::<bool>()), 1..60),
    ) {
        let corpus: Vec<LabelledScore> = raw_scores
            .iter()
            .enumerate()
            .map(|(i, &(score, phish))| LabelledScore {
                source_id: format!("s{i}"),
                score,
                truth: if phish { TruthLabel::Phishing } else { TruthLabel::Legitimate },
            })
            .collect();
        let thresholds: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let reports = threshold_sweep(&corpus, &thresholds).unwrap();
        for w in reports.windows(2) {
            prop_assert!(w[0].tp + w[0].fp >= w[1].tp + w[1].fp);
            prop_assert!(w[0].tn + w[0].fn_ <= w[1].tn + w[1].fn_);
        }
        for r in &reports {
            prop_assert_eq!(r.tp + r.fp + r.tn + r.fn_, r.n);
        }

        let just_scores: Vec<f64> = corpus.iter().map(|s| s.score).collect();
        let h = build_histogram(&just_scores, 0.0, 1.0, 0.1).unwrap();
        prop_assert_eq!(h.total(), just_scores.len());

        // evaluation is permutation invariant
        let mut reversed = corpus.clone();
        reversed.reverse();
        prop_assert_eq!(evaluate(&reversed, 0.5).unwrap(), evaluate(&corpus, 0.5).unwrap());
    }
}
