//! Built-in word constructions and the letters/meta file formats.

use std::path::Path;

use wordent_core::bounds::{rational_to_text, LogParam};
use wordent_core::generate::{
    champernowne, exp_order_word, prop6_word, sft_from_forbidden, transitive_word,
};
use wordent_core::stream::WordStream;
use wordent_core::{Alphabet, FiniteWord, Rational};

use crate::{CmdError, CmdResult, TOOL_NAME, TOOL_VERSION};

/// Largest block length probed when computing `exact_to` for a sidecar.
const EXACT_TO_SCAN: usize = 64;

/// Flags selecting and parameterizing a built-in word.
#[derive(Debug, Clone, Default)]
pub struct WordRequest {
    pub word: String,
    pub q: Option<u32>,
    pub c: Option<String>,
    pub h: Option<String>,
    pub forbid: Vec<String>,
}

/// What `verify` must re-measure for a generated letters file.
#[derive(Debug, Clone)]
pub enum CheckRule {
    /// `p(n) = q^n` wherever the prefix saturates.
    Champernowne { q: u32 },
    /// `p(n) = n + 1` up to `linear_to`; `p(n) <= max(n+1, e^{cn})`
    /// at every measured length.
    Prop6 { c: LogParam, linear_to: u64 },
    /// `p(n)` equals the subshift count wherever the prefix saturates.
    Sft { q: u32, forbid: Vec<String> },
    /// `e^{hn} <= p(n) <= C e^{hn}` at every measured length.
    ExpOrder { h: LogParam, big_c: Rational },
}

/// A constructed stream plus its sidecar content.
pub struct BuiltWord {
    pub stream: WordStream,
    pub q: u32,
    /// Ordered `key=value` pairs for the `.meta` sidecar (everything
    /// except `length` and `exact_to`, which depend on the prefix).
    pub meta: Vec<(String, String)>,
    pub check: CheckRule,
}

/// Builds the requested word and its construction metadata.
pub fn build(req: &WordRequest) -> CmdResult<BuiltWord> {
    let mut meta: Vec<(String, String)> = vec![
        ("tool".into(), TOOL_NAME.into()),
        ("version".into(), TOOL_VERSION.into()),
        ("word".into(), req.word.clone()),
    ];
    match req.word.as_str() {
        "champernowne" => {
            let q = req.q.unwrap_or(2);
            let stream = champernowne(q)?;
            meta.push(("q".into(), q.to_string()));
            meta.push(("description".into(), stream.describe()));
            Ok(BuiltWord { stream, q, meta, check: CheckRule::Champernowne { q } })
        }
        "prop6" => {
            let text = req.c.as_deref().ok_or_else(|| {
                CmdError::usage("--word prop6 needs --c <rate> (a rational or log(R))")
            })?;
            let c = LogParam::parse(text)?;
            let (stream, k) = prop6_word(&c)?;
            meta.push(("q".into(), "2".into()));
            meta.push(("param.c".into(), text.trim().into()));
            meta.push(("k".into(), k.to_string()));
            meta.push(("linear_to".into(), (k + 1).to_string()));
            meta.push(("description".into(), stream.describe()));
            Ok(BuiltWord {
                stream,
                q: 2,
                meta,
                check: CheckRule::Prop6 { c, linear_to: k + 1 },
            })
        }
        "sft" => {
            let q = req.q.unwrap_or(2);
            if req.forbid.is_empty() {
                return Err(CmdError::usage(
                    "--word sft needs at least one --forbid <word>",
                ));
            }
            let alphabet = Alphabet::new(q)?;
            let forbidden = req
                .forbid
                .iter()
                .map(|w| FiniteWord::parse(alphabet, w))
                .collect::<Result<Vec<_>, _>>()?;
            let system = sft_from_forbidden(q, &forbidden)?;
            let stream = transitive_word(&system)?;
            meta.push(("q".into(), q.to_string()));
            for w in &req.forbid {
                meta.push(("forbid".into(), w.clone()));
            }
            meta.push(("description".into(), stream.describe()));
            Ok(BuiltWord {
                stream,
                q,
                meta,
                check: CheckRule::Sft { q, forbid: req.forbid.clone() },
            })
        }
        "exp-order" => {
            let text = req.h.as_deref().ok_or_else(|| {
                CmdError::usage("--word exp-order needs --h <rate> (a rational or log(R))")
            })?;
            let h = LogParam::parse(text)?;
            let (stream, em) = exp_order_word(&h)?;
            meta.push(("q".into(), em.q.to_string()));
            meta.push(("param.h".into(), text.trim().into()));
            if let Some(r) = em.filler {
                meta.push(("filler".into(), r.to_string()));
            }
            meta.push(("big_c".into(), rational_to_text(&em.big_c)));
            meta.push(("description".into(), stream.describe()));
            Ok(BuiltWord {
                stream,
                q: em.q,
                meta,
                check: CheckRule::ExpOrder { h, big_c: em.big_c },
            })
        }
        other => Err(CmdError::usage(format!(
            "unknown word {other:?}; expected champernowne, prop6, sft, or exp-order"
        ))),
    }
}

/// Largest `n <= 64` whose factor set provably saturates within a
/// `length`-letter prefix, when the construction can tell.
pub fn exact_to(stream: &mut WordStream, length: usize) -> Option<usize> {
    let mut best = None;
    for n in 1..=EXACT_TO_SCAN.min(length) {
        match stream.saturating_prefix(n) {
            Some(sat) if sat <= length as u64 => best = Some(n),
            _ => break,
        }
    }
    best
}

/// Encodes letters in the documented file format: bare digits for
/// alphabets up to ten letters, comma-separated integers otherwise.
pub fn letters_to_bytes(q: u32, letters: &[u8]) -> Vec<u8> {
    if q <= 10 {
        letters.iter().map(|&c| b'0' + c).collect()
    } else {
        let mut out = String::new();
        for (i, &c) in letters.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&c.to_string());
        }
        out.into_bytes()
    }
}

/// Decodes the letters file format; letters must stay below `q`.
pub fn letters_from_bytes(q: u32, bytes: &[u8]) -> CmdResult<Vec<u8>> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| CmdError::usage("letters file is not UTF-8"))?;
    let text = text.trim_end_matches('\n');
    let letters: Vec<u8> = if q <= 10 {
        text.bytes()
            .map(|b| {
                if b.is_ascii_digit() {
                    Ok(b - b'0')
                } else {
                    Err(CmdError::usage(format!(
                        "unexpected byte {:?} in a digit letters file",
                        b as char
                    )))
                }
            })
            .collect::<CmdResult<_>>()?
    } else {
        text.split(',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.trim().parse::<u8>().map_err(|_| {
                    CmdError::usage(format!("bad letter {s:?} in a comma-separated file"))
                })
            })
            .collect::<CmdResult<_>>()?
    };
    if let Some(&bad) = letters.iter().find(|&&c| u32::from(c) >= q) {
        return Err(CmdError::usage(format!(
            "letter {bad} is outside the {q}-letter alphabet"
        )));
    }
    Ok(letters)
}

/// Serializes meta pairs as `key=value` lines with a comment header.
pub fn meta_to_bytes(pairs: &[(String, String)]) -> Vec<u8> {
    let mut out = String::from("# letters sidecar; key=value, repeated keys allowed\n");
    for (k, v) in pairs {
        out.push_str(k);
        out.push('=');
        out.push_str(v);
        out.push('\n');
    }
    out.into_bytes()
}

/// Parses a meta sidecar back into ordered pairs.
pub fn meta_from_path(path: &Path) -> CmdResult<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::usage(format!("read {}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CmdError::usage(format!(
                "meta {}: expected key=value, got {raw:?}",
                path.display()
            )));
        };
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

/// First value stored under `key`, if any.
pub fn meta_get<'a>(pairs: &'a [(String, String)], key: &str) -> Option<&'a str> {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

/// All values stored under `key`, in file order.
pub fn meta_get_all<'a>(pairs: &'a [(String, String)], key: &str) -> Vec<&'a str> {
    pairs
        .iter()
        .filter(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .collect()
}

/// Rebuilds the verification rule documented in a meta sidecar.
pub fn check_from_meta(pairs: &[(String, String)]) -> CmdResult<CheckRule> {
    let word = meta_get(pairs, "word")
        .ok_or_else(|| CmdError::usage("meta sidecar is missing the word key"))?;
    let q: u32 = meta_get(pairs, "q")
        .ok_or_else(|| CmdError::usage("meta sidecar is missing the q key"))?
        .parse()
        .map_err(|_| CmdError::usage("bad q in meta sidecar"))?;
    match word {
        "champernowne" => Ok(CheckRule::Champernowne { q }),
        "prop6" => {
            let c = LogParam::parse(meta_get(pairs, "param.c").ok_or_else(|| {
                CmdError::usage("prop6 meta is missing param.c")
            })?)?;
            let linear_to: u64 = meta_get(pairs, "linear_to")
                .ok_or_else(|| CmdError::usage("prop6 meta is missing linear_to"))?
                .parse()
                .map_err(|_| CmdError::usage("bad linear_to in meta sidecar"))?;
            Ok(CheckRule::Prop6 { c, linear_to })
        }
        "sft" => {
            let forbid: Vec<String> = meta_get_all(pairs, "forbid")
                .into_iter()
                .map(str::to_string)
                .collect();
            if forbid.is_empty() {
                return Err(CmdError::usage("sft meta has no forbid keys"));
            }
            Ok(CheckRule::Sft { q, forbid })
        }
        "exp-order" => {
            let h = LogParam::parse(meta_get(pairs, "param.h").ok_or_else(|| {
                CmdError::usage("exp-order meta is missing param.h")
            })?)?;
            let big_c = wordent_core::bounds::parse_rational(
                meta_get(pairs, "big_c")
                    .ok_or_else(|| CmdError::usage("exp-order meta is missing big_c"))?,
            )?;
            Ok(CheckRule::ExpOrder { h, big_c })
        }
        other => Err(CmdError::usage(format!("unknown word {other:?} in meta sidecar"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_roundtrip_small_alphabet() {
        let letters = vec![0u8, 1, 1, 0, 1];
        let bytes = letters_to_bytes(2, &letters);
        assert_eq!(bytes, b"01101");
        assert_eq!(letters_from_bytes(2, &bytes).unwrap(), letters);
        assert!(letters_from_bytes(2, b"012").is_err());
        assert!(letters_from_bytes(2, b"0a1").is_err());
    }

    #[test]
    fn letters_roundtrip_large_alphabet() {
        let letters = vec![0u8, 11, 3];
        let bytes = letters_to_bytes(12, &letters);
        assert_eq!(bytes, b"0,11,3");
        assert_eq!(letters_from_bytes(12, &bytes).unwrap(), letters);
    }

    #[test]
    fn champernowne_binary_prefix_matches_the_counting_sequence() {
        let mut built = build(&WordRequest {
            word: "champernowne".into(),
            q: Some(2),
            ..WordRequest::default()
        })
        .unwrap();
        let prefix = built.stream.prefix(10).unwrap().to_vec();
        assert_eq!(letters_to_bytes(2, &prefix), b"0110111001");
    }

    #[test]
    fn meta_roundtrips_with_repeated_keys() {
        let pairs = vec![
            ("word".to_string(), "sft".to_string()),
            ("q".to_string(), "2".to_string()),
            ("forbid".to_string(), "11".to_string()),
            ("forbid".to_string(), "000".to_string()),
        ];
        let dir = std::env::temp_dir().join("wordent-words-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w.txt.meta");
        std::fs::write(&path, meta_to_bytes(&pairs)).unwrap();
        let back = meta_from_path(&path).unwrap();
        assert_eq!(back, pairs);
        assert_eq!(meta_get_all(&back, "forbid"), vec!["11", "000"]);
        assert!(matches!(
            check_from_meta(&back).unwrap(),
            CheckRule::Sft { q: 2, .. }
        ));
    }

    #[test]
    fn unknown_word_is_a_usage_error() {
        let err = build(&WordRequest { word: "mystery".into(), ..WordRequest::default() })
            .unwrap_err();
        assert_eq!(err.code, crate::EXIT_USAGE);
    }
}
