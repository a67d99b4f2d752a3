//! Decoding primitives for email text: RFC 2047 encoded-words in headers,
//! base64 and quoted-printable transfer encodings in bodies, charset
//! mapping, and HTML tag stripping.

use alloc::string::String;
use alloc::vec::Vec;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine as _;

/// Why a header or body payload could not be decoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    /// Base64 payload contains bytes outside the alphabet or has a truncated
    /// quantum.
    InvalidBase64,
    /// Q-encoded header payload has a malformed `=XX` escape.
    InvalidQEscape,
}

impl core::fmt::Display for DecodeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DecodeError::InvalidBase64 => write!(f, "invalid base64 payload"),
            DecodeError::InvalidQEscape => write!(f, "invalid quoted-printable escape"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DecodeError {}

/// Strict base64 decode of a contiguous payload (encoded-word use).
pub fn decode_base64(payload: &str) -> Result<Vec<u8>, DecodeError> {
    BASE64
        .decode(payload.as_bytes())
        .map_err(|_| DecodeError::InvalidBase64)
}

/// Base64 decode of a body region: embedded line breaks and other ASCII
/// whitespace are stripped first, the remainder must decode cleanly.
pub fn decode_base64_body(raw: &[u8]) -> Result<Vec<u8>, DecodeError> {
    let compact: Vec<u8> = raw
        .iter()
        .copied()
        .filter(|b| !b.is_ascii_whitespace())
        .collect();
    BASE64
        .decode(&compact)
        .map_err(|_| DecodeError::InvalidBase64)
}

/// RFC 2047 Q-encoding decode (header payloads): `_` is a space, `=XX` is a
/// byte. Malformed escapes are an error; the caller keeps the raw value.
pub fn decode_q_encoding(payload: &str) -> Result<Vec<u8>, DecodeError> {
    let mut out = Vec::with_capacity(payload.len());
    let mut bytes = payload.bytes();
    while let Some(b) = bytes.next() {
        match b {
            b'_' => out.push(b' '),
            b'=' => {
                let hi = bytes.next().ok_or(DecodeError::InvalidQEscape)?;
                let lo = bytes.next().ok_or(DecodeError::InvalidQEscape)?;
                out.push(hex_pair(hi, lo).ok_or(DecodeError::InvalidQEscape)?);
            }
            _ => out.push(b),
        }
    }
    Ok(out)
}

/// Quoted-printable decode of a body region. Robust: soft line breaks
/// (`=` at end of line) are removed, malformed escapes pass through
/// literally so dirty real-world bodies still score.
pub fn decode_quoted_printable(raw: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        let b = raw[i];
        if b != b'=' {
            out.push(b);
            i += 1;
            continue;
        }
        match (raw.get(i + 1), raw.get(i + 2)) {
            (Some(b'\n'), _) => i += 2,
            (Some(b'\r'), Some(b'\n')) => i += 3,
            (Some(&hi), Some(&lo)) => match hex_pair(hi, lo) {
                Some(byte) => {
                    out.push(byte);
                    i += 3;
                }
                None => {
                    out.push(b'=');
                    i += 1;
                }
            },
            _ => {
                out.push(b'=');
                i += 1;
            }
        }
    }
    out
}

fn hex_pair(hi: u8, lo: u8) -> Option<u8> {
    let h = (hi as char).to_digit(16)?;
    let l = (lo as char).to_digit(16)?;
    Some((h * 16 + l) as u8)
}

/// Map bytes to text under the named charset. UTF-8 (and its aliases) is
/// decoded as such with a whole-buffer latin-1 fallback on invalid
/// sequences; every other charset maps bytes one-to-one as latin-1, which
/// never fails, trading fidelity for scoring availability.
pub fn decode_charset(bytes: &[u8], charset: &str) -> String {
    let mut label = String::with_capacity(charset.len());
    for ch in charset.chars() {
        if ch != '-' && ch != '_' && ch != ' ' {
            label.extend(ch.to_lowercase());
        }
    }
    match label.as_str() {
        "" | "utf8" | "usascii" | "ascii" | "ansix341968" => {
            match core::str::from_utf8(bytes) {
                Ok(s) => String::from(s),
                Err(_) => latin1(bytes),
            }
        }
        _ => latin1(bytes),
    }
}

fn latin1(bytes: &[u8]) -> String {
    bytes.iter().map(|&b| char::from(b)).collect()
}

/// Decode RFC 2047 encoded-words (`=?charset?B|Q?payload?=`) in a header
/// value. Plain segments are preserved verbatim; text that does not match
/// the encoded-word grammar stays as-is. A well-formed frame with an
/// undecodable payload is an error so the caller can keep the raw value.
pub fn decode_header_value(raw: &str) -> Result<String, DecodeError> {
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(pos) = rest.find("=?") {
        out.push_str(&rest[..pos]);
        let candidate = &rest[pos..];
        match parse_encoded_word(candidate) {
            Some((consumed, charset, encoding, payload)) => {
                let bytes = match encoding {
                    b'B' | b'b' => decode_base64(payload)?,
                    _ => decode_q_encoding(payload)?,
                };
                out.push_str(&decode_charset(&bytes, charset));
                rest = &candidate[consumed..];
            }
            None => {
                out.push_str("=?");
                rest = &candidate[2..];
            }
        }
    }
    out.push_str(rest);
    Ok(out)
}

/// Match one encoded-word at the start of `s` (which begins with `=?`).
/// Returns (bytes consumed, charset, encoding letter, payload).
fn parse_encoded_word(s: &str) -> Option<(usize, &str, u8, &str)> {
    let inner = &s[2..];
    let cs_end = inner.find('?')?;
    let charset = &inner[..cs_end];
    if charset.is_empty() || charset.contains(char::is_whitespace) {
        return None;
    }
    let after_cs = &inner[cs_end + 1..];
    let mut chars = after_cs.bytes();
    let enc = chars.next()?;
    if !matches!(enc, b'B' | b'b' | b'Q' | b'q') {
        return None;
    }
    if chars.next()? != b'?' {
        return None;
    }
    let payload_area = &after_cs[2..];
    let pay_end = payload_area.find('?')?;
    if payload_area.as_bytes().get(pay_end + 1) != Some(&b'=') {
        return None;
    }
    let payload = &payload_area[..pay_end];
    if payload.contains(char::is_whitespace) {
        return None;
    }
    // "=?" + charset + "?" + enc + "?" + payload + "?="
    let consumed = 2 + cs_end + 3 + pay_end + 2;
    Some((consumed, charset, enc, payload))
}

/// Reduce an HTML fragment to its text: drop `<...>` spans, decode the five
/// standard character entities, collapse whitespace runs to single spaces.
pub fn strip_html(html: &str) -> String {
    let mut text = String::with_capacity(html.len());
    let mut in_tag = false;
    for ch in html.chars() {
        match ch {
            '<' => in_tag = true,
            '>' if in_tag => {
                in_tag = false;
                text.push(' ');
            }
            c if !in_tag => text.push(c),
            _ => {}
        }
    }
    let text = text
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&");
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}
