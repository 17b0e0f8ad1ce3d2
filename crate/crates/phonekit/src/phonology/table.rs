//! Articulatory feature table: one ternary feature vector per IPA segment.
//!
//! File format: UTF-8, tab-separated, header `segment<TAB>f1...fN`, values
//! `+`, `-`, `0`, comment lines starting with `#`.

use std::collections::HashMap;
use std::path::Path;

use crate::corpus::read_text_lines;
use crate::error::{Error, Result};

/// Ordered ternary feature values, one per feature name, in {+1, 0, -1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureVector(Vec<i8>);

impl FeatureVector {
    pub fn new(values: Vec<i8>) -> Self {
        debug_assert!(values.iter().all(|v| (-1..=1).contains(v)));
        FeatureVector(values)
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Count of positions where the two vectors disagree.
    pub fn hamming(&self, other: &FeatureVector) -> usize {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Immutable segment -> feature-vector table; all operations downstream of
/// loading are pure, so the table can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    feature_names: Vec<String>,
    entries: HashMap<String, FeatureVector>,
    max_key_bytes: usize,
}

impl FeatureTable {
    /// The articulatory feature table bundled with the crate: 24 ternary
    /// features over a broad IPA segment inventory.
    pub fn shipped() -> &'static FeatureTable {
        static SHIPPED: std::sync::OnceLock<FeatureTable> = std::sync::OnceLock::new();
        SHIPPED.get_or_init(|| {
            FeatureTable::parse_str(
                include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/features.tsv")),
                "shipped features.tsv",
            )
            .expect("bundled feature table parses")
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FeatureTable> {
        let path = path.as_ref();
        let lines = read_text_lines(path)?;
        Self::parse_lines(&lines, &path.display().to_string())
    }

    pub fn parse_str(content: &str, label: &str) -> Result<FeatureTable> {
        let lines: Vec<String> = content.lines().map(str::to_owned).collect();
        Self::parse_lines(&lines, label)
    }

    fn parse_lines(lines: &[String], path: &str) -> Result<FeatureTable> {
        let mut feature_names: Option<Vec<String>> = None;
        let mut entries = HashMap::new();
        let mut max_key_bytes = 0;

        for (idx, raw) in lines.iter().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim_end_matches('\n');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match &feature_names {
                None => {
                    if fields.len() < 2 || fields[0] != "segment" {
                        return Err(Error::parse(
                            path,
                            lineno,
                            "expected header \"segment<TAB>f1...fN\"",
                        ));
                    }
                    feature_names = Some(fields[1..].iter().map(|s| s.to_string()).collect());
                }
                Some(names) => {
                    if fields.len() != names.len() + 1 {
                        return Err(Error::parse(
                            path,
                            lineno,
                            format!(
                                "row has {} fields, expected {}",
                                fields.len(),
                                names.len() + 1
                            ),
                        ));
                    }
                    let segment = fields[0];
                    if segment.is_empty() {
                        return Err(Error::parse(path, lineno, "empty segment string"));
                    }
                    let mut values = Vec::with_capacity(names.len());
                    for v in &fields[1..] {
                        values.push(match *v {
                            "+" => 1,
                            "-" => -1,
                            "0" => 0,
                            other => {
                                return Err(Error::parse(
                                    path,
                                    lineno,
                                    format!("invalid feature value {other:?} (want +, -, 0)"),
                                ))
                            }
                        });
                    }
                    if entries
                        .insert(segment.to_string(), FeatureVector::new(values))
                        .is_some()
                    {
                        return Err(Error::DuplicateSegment {
                            segment: segment.to_string(),
                        });
                    }
                    max_key_bytes = max_key_bytes.max(segment.len());
                }
            }
        }

        let feature_names = feature_names
            .ok_or_else(|| Error::parse(path, lines.len(), "missing header row"))?;
        if entries.is_empty() {
            return Err(Error::EmptyFeatureTable);
        }
        Ok(FeatureTable {
            feature_names,
            entries,
            max_key_bytes,
        })
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn get(&self, segment: &str) -> Option<&FeatureVector> {
        self.entries.get(segment)
    }

    pub fn contains(&self, segment: &str) -> bool {
        self.entries.contains_key(segment)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub(crate) fn max_key_bytes(&self) -> usize {
        self.max_key_bytes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_table() {
        let text = "# comment\nsegment\tf1\tf2\tf3\na\t+\t-\t0\nb\t-\t-\t-\nc\t+\t+\t+\n";
        let t = FeatureTable::parse_str(text, "test").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.n_features(), 3);
        assert_eq!(t.get("a").unwrap().values(), &[1, -1, 0]);
    }

    #[test]
    fn header_only_is_an_error() {
        let err = FeatureTable::parse_str("segment\tf1\n", "test").unwrap_err();
        assert!(matches!(err, Error::EmptyFeatureTable), "got {err}");
    }

    #[test]
    fn malformed_value_cites_line() {
        let text = "segment\tf1\tf2\na\t+\t-\nb\tx\t-\n";
        let err = FeatureTable::parse_str(text, "test").unwrap_err();
        match err {
            Error::Parse { line, ref msg, .. } => {
                assert_eq!(line, 3);
                assert!(msg.contains("\"x\""), "msg = {msg}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn duplicate_segment_is_named() {
        let text = "segment\tf1\na\t+\na\t-\n";
        let err = FeatureTable::parse_str(text, "test").unwrap_err();
        match err {
            Error::DuplicateSegment { segment } => assert_eq!(segment, "a"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn row_width_mismatch_cites_line() {
        let text = "segment\tf1\tf2\na\t+\n";
        let err = FeatureTable::parse_str(text, "test").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "got {err}");
    }

    #[test]
    fn shipped_table_loads_with_unique_vectors() {
        let t = FeatureTable::load(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/features.tsv"
        ))
        .unwrap();
        assert_eq!(t.n_features(), 24);
        assert!(t.len() >= 100, "only {} segments", t.len());
        let mut seen = std::collections::HashSet::new();
        for seg in t.segments() {
            assert!(
                seen.insert(t.get(seg).unwrap().clone()),
                "segment {seg} shares a vector with another segment"
            );
        }
    }
}
