//! Greedy longest-match segmentation of IPA strings into feature-bearing
//! segments.

use crate::error::{Error, Result};
use crate::phonology::table::{FeatureTable, FeatureVector};

/// One IPA base unit together with its ternary feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub surface: String,
    pub features: FeatureVector,
}

/// A vocabulary unit: one or more segments plus the surface string they
/// concatenate to. Tokens admitted to triphone distances carry at most
/// three segments; that limit is enforced where vocabularies are loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct PhonemeToken {
    pub surface: String,
    pub segments: Vec<Segment>,
}

impl PhonemeToken {
    /// Segment `surface` against the table. Empty input is rejected: a
    /// token always carries at least one segment.
    pub fn parse(surface: &str, table: &FeatureTable) -> Result<PhonemeToken> {
        let segments = segment_ipa(surface, table)?;
        if segments.is_empty() {
            return Err(Error::Invalid("empty phoneme token".into()));
        }
        Ok(PhonemeToken {
            surface: surface.to_string(),
            segments,
        })
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }
}

/// Split an IPA string into table segments, greedy longest-match from the
/// left. The whole input must be consumed; anything unmatchable reports
/// its byte offset and the offending character.
pub fn segment_ipa(s: &str, table: &FeatureTable) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    let mut pos = 0;
    let max = table.max_key_bytes();
    while pos < s.len() {
        let mut end = (pos + max).min(s.len());
        let mut matched = None;
        while end > pos {
            if s.is_char_boundary(end) {
                if let Some(features) = table.get(&s[pos..end]) {
                    matched = Some((end, features.clone()));
                    break;
                }
            }
            end -= 1;
        }
        match matched {
            Some((end, features)) => {
                out.push(Segment {
                    surface: s[pos..end].to_string(),
                    features,
                });
                pos = end;
            }
            None => {
                let found = s[pos..].chars().next().expect("pos on char boundary");
                return Err(Error::Unsegmentable { offset: pos, found });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn table(keys: &[&str]) -> FeatureTable {
        // distinct single-feature rows are enough for segmentation tests
        let mut text = String::from("segment\tf1\tf2\tf3\tf4\n");
        let pats = ["+\t-\t-\t-", "-\t+\t-\t-", "-\t-\t+\t-", "-\t-\t-\t+"];
        for (i, k) in keys.iter().enumerate() {
            text.push_str(&format!("{}\t{}\n", k, pats[i % pats.len()]));
        }
        FeatureTable::parse_str(&text, "test").unwrap()
    }

    /// Oracle: enumerate every way of covering `s` with table keys.
    fn all_parses(s: &str, keys: &BTreeSet<&str>) -> Vec<Vec<String>> {
        if s.is_empty() {
            return vec![vec![]];
        }
        let mut parses = Vec::new();
        for k in keys {
            if let Some(rest) = s.strip_prefix(k) {
                for mut tail in all_parses(rest, keys) {
                    tail.insert(0, k.to_string());
                    parses.push(tail);
                }
            }
        }
        parses
    }

    #[test]
    fn empty_input_yields_no_segments() {
        let t = table(&["a"]);
        assert!(segment_ipa("", &t).unwrap().is_empty());
    }

    #[test]
    fn single_character_matches() {
        let t = table(&["a", "b", "c"]);
        let segs = segment_ipa("abc", &t).unwrap();
        let surfaces: Vec<&str> = segs.iter().map(|s| s.surface.as_str()).collect();
        assert_eq!(surfaces, ["a", "b", "c"]);
    }

    #[test]
    fn longest_match_wins_over_shorter_parse() {
        // keys {ab, a, b}: "ab" has two parses; greedy must take the 1-token one
        let t = table(&["ab", "a", "b"]);
        let keys: BTreeSet<&str> = ["ab", "a", "b"].into_iter().collect();
        let parses = all_parses("ab", &keys);
        assert_eq!(parses.len(), 2, "expected an ambiguous input");
        let shortest = parses.iter().map(Vec::len).min().unwrap();
        let segs = segment_ipa("ab", &t).unwrap();
        assert_eq!(segs.len(), shortest);
        assert_eq!(segs[0].surface, "ab");
    }

    #[test]
    fn affricate_with_tie_bar_stays_one_segment() {
        let t = FeatureTable::load(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/features.tsv"
        ))
        .unwrap();
        let segs = segment_ipa("t\u{361}ʃa", &t).unwrap();
        let surfaces: Vec<&str> = segs.iter().map(|s| s.surface.as_str()).collect();
        assert_eq!(surfaces, ["t\u{361}ʃ", "a"]);

        // oracle: among all coverings with the shipped keys this is the
        // 2-segment parse greedy longest-match is required to pick
        let keys: BTreeSet<&str> = t.segments().collect();
        let parses = all_parses("t\u{361}ʃa", &keys);
        assert!(parses.contains(&vec!["t\u{361}ʃ".to_string(), "a".to_string()]));
        assert!(parses.iter().all(|p| p.len() >= 2));
    }

    #[test]
    fn unmatchable_reports_offset_and_char() {
        let t = table(&["a", "b"]);
        let err = segment_ipa("abQb", &t).unwrap_err();
        match err {
            Error::Unsegmentable { offset, found } => {
                assert_eq!(offset, 2);
                assert_eq!(found, 'Q');
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn rejoining_surfaces_reproduces_input() {
        let t = FeatureTable::load(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/features.tsv"
        ))
        .unwrap();
        for input in ["pat\u{361}ʃa", "aːbeː", "tʲornʲi", "ʃt\u{361}ɕukə"] {
            let segs = segment_ipa(input, &t).unwrap();
            let joined: String = segs.iter().map(|s| s.surface.as_str()).collect();
            assert_eq!(joined, input);
        }
    }

    #[test]
    fn empty_token_is_rejected() {
        let t = table(&["a"]);
        assert!(PhonemeToken::parse("", &t).is_err());
        assert_eq!(PhonemeToken::parse("a", &t).unwrap().segment_count(), 1);
    }
}
