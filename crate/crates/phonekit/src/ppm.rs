//! Pivot phoneme merging: per-language vocabularies, global pivot
//! selection by summed occurrence probability, distance-thresholded merge
//! maps, and cross-lingual vocabulary coverage.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use crate::corpus::read_text_lines;
use crate::error::{Error, Result};
use crate::phonology::{token_distance, FeatureTable, PhonemeToken};
use crate::real::Real;
use crate::{Score, WORD_DELIMITER};

/// Maximum segments per vocabulary token; longer tokens are rejected at
/// load so every token distance stays within the 0-3 window.
pub const MAX_TOKEN_SEGMENTS: usize = 3;

/// Token-type counts and occurrence probabilities for one language.
#[derive(Debug, Clone)]
pub struct LanguageVocabulary {
    pub lang_id: String,
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl LanguageVocabulary {
    /// Count token types over a phoneme corpus. Word delimiters are
    /// excluded; every token must segment to at most three table segments.
    pub fn build(lang_id: &str, lines: &[String], table: &FeatureTable) -> Result<LanguageVocabulary> {
        let mut counts = BTreeMap::new();
        let mut checked: HashMap<String, ()> = HashMap::new();
        for (idx, line) in lines.iter().enumerate() {
            for tok in line.split_whitespace() {
                if tok == WORD_DELIMITER {
                    continue;
                }
                if !checked.contains_key(tok) {
                    validate_token(tok, table, idx + 1)?;
                    checked.insert(tok.to_string(), ());
                }
                *counts.entry(tok.to_string()).or_insert(0) += 1;
            }
        }
        Self::from_counts(lang_id, counts)
    }

    pub fn from_counts(lang_id: &str, counts: BTreeMap<String, u64>) -> Result<LanguageVocabulary> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::EmptyCorpus);
        }
        Ok(LanguageVocabulary {
            lang_id: lang_id.to_string(),
            counts,
            total,
        })
    }

    /// `token<TAB>count` per line, descending count then ascending token.
    pub fn to_file_string(&self) -> String {
        let mut rows: Vec<(&String, &u64)> = self.counts.iter().collect();
        rows.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
        let mut out = String::new();
        for (tok, count) in rows {
            out.push_str(&format!("{tok}\t{count}\n"));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::corpus::write_atomic(path, &self.to_file_string())
    }

    pub fn load(lang_id: &str, path: impl AsRef<Path>, table: &FeatureTable) -> Result<LanguageVocabulary> {
        let path = path.as_ref();
        let lines = read_text_lines(path)?;
        let label = path.display().to_string();
        let mut counts = BTreeMap::new();
        for (idx, line) in lines.iter().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (tok, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(&label, idx + 1, "expected \"token<TAB>count\""))?;
            let count: u64 = count
                .parse()
                .map_err(|_| Error::parse(&label, idx + 1, "bad count"))?;
            if count == 0 {
                return Err(Error::parse(&label, idx + 1, "zero count"));
            }
            validate_token(tok, table, idx + 1)?;
            if counts.insert(tok.to_string(), count).is_some() {
                return Err(Error::parse(&label, idx + 1, format!("duplicate token {tok:?}")));
            }
        }
        Self::from_counts(lang_id, counts)
    }

    pub fn count(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    /// Occurrence probability: count / total. Sums to 1 over the vocabulary.
    pub fn prob(&self, token: &str) -> Score {
        self.count(token) as Score / self.total as Score
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    pub fn token_set(&self) -> BTreeSet<String> {
        self.counts.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

fn validate_token(tok: &str, table: &FeatureTable, line: usize) -> Result<()> {
    let parsed = PhonemeToken::parse(tok, table).map_err(|e| Error::BadToken {
        token: tok.to_string(),
        line,
        reason: e.to_string(),
    })?;
    if parsed.segment_count() > MAX_TOKEN_SEGMENTS {
        return Err(Error::BadToken {
            token: tok.to_string(),
            line,
            reason: format!(
                "{} segments; vocabulary tokens carry at most {MAX_TOKEN_SEGMENTS}",
                parsed.segment_count()
            ),
        });
    }
    Ok(())
}

/// Global pivots ordered by importance (summed per-language probability),
/// ties broken by ascending surface.
#[derive(Debug, Clone)]
pub struct PivotSet {
    pivots: Vec<String>,
    scores: BTreeMap<String, Score>,
}

impl PivotSet {
    /// Importance of a token is the sum of its occurrence probabilities
    /// across all languages; the top `k` become pivots.
    pub fn select(vocabs: &[LanguageVocabulary], k: usize) -> Result<PivotSet> {
        if k == 0 {
            return Err(Error::Invalid("pivot count must be >= 1".into()));
        }
        if vocabs.is_empty() {
            return Err(Error::Invalid("pivot selection needs >= 1 vocabulary".into()));
        }
        let mut importance: BTreeMap<String, Score> = BTreeMap::new();
        for vocab in vocabs {
            for tok in vocab.tokens() {
                *importance.entry(tok.to_string()).or_insert(0.0) += vocab.prob(tok);
            }
        }
        let mut ranked: Vec<(&String, &Score)> = importance.iter().collect();
        ranked.sort_by(|a, b| {
            b.1.partial_cmp(a.1)
                .expect("scores are finite")
                .then_with(|| a.0.cmp(b.0))
        });
        let pivots: Vec<String> = ranked.iter().take(k).map(|(t, _)| (*t).clone()).collect();
        let scores = pivots
            .iter()
            .map(|p| (p.clone(), importance[p]))
            .collect();
        Ok(PivotSet { pivots, scores })
    }

    /// Pivots in rank order (descending importance).
    pub fn pivots(&self) -> &[String] {
        &self.pivots
    }

    pub fn score(&self, token: &str) -> Option<Score> {
        self.scores.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.scores.contains_key(token)
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    /// `token<TAB>score`, descending.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for p in &self.pivots {
            out.push_str(&format!("{p}\t{}\n", self.scores[p]));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::corpus::write_atomic(path, &self.to_file_string())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<PivotSet> {
        let path = path.as_ref();
        let label = path.display().to_string();
        let mut pivots = Vec::new();
        let mut scores = BTreeMap::new();
        for (idx, line) in read_text_lines(path)?.iter().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (tok, score) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(&label, idx + 1, "expected \"token<TAB>score\""))?;
            let score: Score = score
                .parse()
                .map_err(|_| Error::parse(&label, idx + 1, "bad score"))?;
            pivots.push(tok.to_string());
            scores.insert(tok.to_string(), score);
        }
        if pivots.is_empty() {
            return Err(Error::Invalid(format!("{label}: empty pivot set")));
        }
        Ok(PivotSet { pivots, scores })
    }
}

/// Per-language token -> token merge mapping against a global pivot set.
/// Kept tokens are the fixed points: pivots, plus non-pivots whose nearest
/// pivot lies beyond the threshold.
#[derive(Debug, Clone)]
pub struct PivotMergeMap {
    pub k: usize,
    pub t: Score,
    per_language: BTreeMap<String, BTreeMap<String, String>>,
    kept: BTreeMap<String, BTreeSet<String>>,
}

impl PivotMergeMap {
    /// Map every non-pivot token to its nearest pivot when that distance
    /// is within `t`, otherwise keep it; pivots map to themselves. Argmin
    /// ties resolve to the higher-importance pivot (pivot rank order).
    pub fn build(
        vocabs: &[LanguageVocabulary],
        pivots: &PivotSet,
        t: Score,
        table: &FeatureTable,
    ) -> Result<PivotMergeMap> {
        if t < 0.0 {
            return Err(Error::Invalid("threshold must be >= 0".into()));
        }
        let pivot_tokens: Vec<PhonemeToken> = pivots
            .pivots()
            .iter()
            .map(|p| {
                PhonemeToken::parse(p, table).map_err(|e| Error::BadToken {
                    token: p.clone(),
                    line: 0,
                    reason: e.to_string(),
                })
            })
            .collect::<Result<_>>()?;

        // the assignment of a token depends only on (token, pivots, t), so
        // resolve each distinct token once across all languages
        let distinct: BTreeSet<&str> = vocabs.iter().flat_map(|v| v.tokens()).collect();
        let mut assignment: HashMap<&str, &str> = HashMap::with_capacity(distinct.len());
        for tok in distinct {
            if pivots.contains(tok) {
                assignment.insert(tok, tok);
                continue;
            }
            let parsed = PhonemeToken::parse(tok, table).map_err(|e| Error::BadToken {
                token: tok.to_string(),
                line: 0,
                reason: e.to_string(),
            })?;
            let mut best: Option<(Score, usize)> = None;
            for (rank, pivot) in pivot_tokens.iter().enumerate() {
                let d = token_distance::<Score>(&parsed, pivot);
                // strict < keeps the earliest (highest-importance) pivot on ties
                if best.map_or(true, |(bd, _)| d < bd) {
                    best = Some((d, rank));
                }
            }
            let target = match best {
                Some((d, rank)) if d <= t => pivots.pivots()[rank].as_str(),
                _ => tok,
            };
            assignment.insert(tok, target);
        }

        let mut per_language = BTreeMap::new();
        let mut kept = BTreeMap::new();
        for vocab in vocabs {
            let mut map = BTreeMap::new();
            let mut kept_set = BTreeSet::new();
            for tok in vocab.tokens() {
                let target = assignment[tok];
                map.insert(tok.to_string(), target.to_string());
                if target == tok {
                    kept_set.insert(tok.to_string());
                }
            }
            per_language.insert(vocab.lang_id.clone(), map);
            kept.insert(vocab.lang_id.clone(), kept_set);
        }
        Ok(PivotMergeMap {
            k: pivots.len(),
            t,
            per_language,
            kept,
        })
    }

    pub fn languages(&self) -> impl Iterator<Item = &str> {
        self.per_language.keys().map(String::as_str)
    }

    pub fn mapping(&self, lang: &str) -> Option<&BTreeMap<String, String>> {
        self.per_language.get(lang)
    }

    pub fn kept(&self, lang: &str) -> Option<&BTreeSet<String>> {
        self.kept.get(lang)
    }

    /// Post-merge vocabulary of one language: the image of its merge map.
    pub fn merged_vocab(&self, lang: &str) -> Option<BTreeSet<String>> {
        self.per_language
            .get(lang)
            .map(|m| m.values().cloned().collect())
    }

    /// Token-wise substitution over a corpus; delimiters pass through,
    /// anything outside the language's domain is a hard error.
    pub fn apply_corpus(&self, lang: &str, lines: &[String]) -> Result<Vec<String>> {
        let map = self
            .per_language
            .get(lang)
            .ok_or_else(|| Error::Invalid(format!("merge map has no language {lang:?}")))?;
        let mut out = Vec::with_capacity(lines.len());
        for (idx, line) in lines.iter().enumerate() {
            let mut mapped: Vec<&str> = Vec::new();
            for tok in line.split_whitespace() {
                if tok == WORD_DELIMITER {
                    mapped.push(tok);
                    continue;
                }
                match map.get(tok) {
                    Some(target) => mapped.push(target),
                    None => {
                        return Err(Error::OutOfDomain {
                            token: tok.to_string(),
                            lang: lang.to_string(),
                            line: idx + 1,
                        })
                    }
                }
            }
            out.push(mapped.join(" "));
        }
        Ok(out)
    }

    /// `lang<TAB>original<TAB>merged<TAB>kept_flag` rows under a header
    /// comment recording K and T.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("# K={} T={}\n", self.k, self.t);
        for (lang, map) in &self.per_language {
            let kept = &self.kept[lang];
            for (orig, merged) in map {
                let flag = u8::from(kept.contains(orig));
                out.push_str(&format!("{lang}\t{orig}\t{merged}\t{flag}\n"));
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::corpus::write_atomic(path, &self.to_file_string())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<PivotMergeMap> {
        let path = path.as_ref();
        let label = path.display().to_string();
        let mut k = 0usize;
        let mut t: Score = 0.0;
        let mut per_language: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut kept: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (idx, line) in read_text_lines(path)?.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix("# K=") {
                let (kv, tv) = header
                    .split_once(" T=")
                    .ok_or_else(|| Error::parse(&label, idx + 1, "malformed K/T header"))?;
                k = kv
                    .parse()
                    .map_err(|_| Error::parse(&label, idx + 1, "bad K"))?;
                t = tv
                    .parse()
                    .map_err(|_| Error::parse(&label, idx + 1, "bad T"))?;
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::parse(
                    &label,
                    idx + 1,
                    "expected \"lang<TAB>original<TAB>merged<TAB>kept_flag\"",
                ));
            }
            let (lang, orig, merged, flag) = (fields[0], fields[1], fields[2], fields[3]);
            per_language
                .entry(lang.to_string())
                .or_default()
                .insert(orig.to_string(), merged.to_string());
            match flag {
                "1" => {
                    kept.entry(lang.to_string())
                        .or_default()
                        .insert(orig.to_string());
                }
                "0" => {
                    kept.entry(lang.to_string()).or_default();
                }
                other => {
                    return Err(Error::parse(
                        &label,
                        idx + 1,
                        format!("bad kept_flag {other:?}"),
                    ))
                }
            }
        }
        if per_language.is_empty() {
            return Err(Error::Invalid(format!("{label}: empty merge map")));
        }
        Ok(PivotMergeMap {
            k,
            t,
            per_language,
            kept,
        })
    }
}

/// Type-based cross-lingual coverage: the share of a language's tokens
/// present in at least one other language's set, plus the unweighted mean.
pub fn coverage<R: Real>(
    vocab_sets: &[(String, BTreeSet<String>)],
) -> Result<(BTreeMap<String, R>, R)> {
    if vocab_sets.len() < 2 {
        return Err(Error::CoverageNeedsTwoLanguages);
    }
    let mut per_language = BTreeMap::new();
    let mut sum = R::zero();
    for (lang, set) in vocab_sets {
        if set.is_empty() {
            return Err(Error::Invalid(format!("language {lang:?} has an empty vocabulary")));
        }
        let shared = set
            .iter()
            .filter(|tok| {
                vocab_sets
                    .iter()
                    .any(|(other, other_set)| other != lang && other_set.contains(*tok))
            })
            .count();
        let cov = R::from_count(shared as u64) / R::from_count(set.len() as u64);
        per_language.insert(lang.clone(), cov);
        sum += cov;
    }
    let avg = sum / R::from_count(vocab_sets.len() as u64);
    Ok((per_language, avg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shipped() -> FeatureTable {
        FeatureTable::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/features.tsv")).unwrap()
    }

    fn vocab(lang: &str, counts: &[(&str, u64)]) -> LanguageVocabulary {
        LanguageVocabulary::from_counts(
            lang,
            counts.iter().map(|(t, c)| (t.to_string(), *c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn build_counts_types_and_excludes_delimiters() {
        let table = shipped();
        let lines = vec!["a b | a".to_string()];
        let v = LanguageVocabulary::build("xx", &lines, &table).unwrap();
        assert_eq!(v.count("a"), 2);
        assert_eq!(v.count("b"), 1);
        assert_eq!(v.count(WORD_DELIMITER), 0);
        assert!((v.prob("a") - 2.0 / 3.0).abs() < 1e-12);
        assert!((v.prob("b") - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn delimiter_only_corpus_is_empty() {
        let table = shipped();
        let lines = vec!["| | |".to_string()];
        let err = LanguageVocabulary::build("xx", &lines, &table).unwrap_err();
        assert!(matches!(err, Error::EmptyCorpus), "got {err}");
    }

    #[test]
    fn overlong_tokens_are_rejected_at_load() {
        let table = shipped();
        let lines = vec!["pata".to_string()];
        let err = LanguageVocabulary::build("xx", &lines, &table).unwrap_err();
        match err {
            Error::BadToken { token, line, .. } => {
                assert_eq!(token, "pata");
                assert_eq!(line, 1);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let table = shipped();
        let lines = vec!["a b u p t k i e o m n s".to_string(), "a a a b".to_string()];
        let v = LanguageVocabulary::build("xx", &lines, &table).unwrap();
        let sum: Score = v.tokens().map(|t| v.prob(t)).sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pivot_selection_sums_probabilities() {
        let l1 = vocab("l1", &[("a", 6), ("b", 4)]);
        let l2 = vocab("l2", &[("a", 5), ("c", 5)]);
        let p = PivotSet::select(&[l1, l2], 2).unwrap();
        assert_eq!(p.pivots(), ["a".to_string(), "c".to_string()]);
        assert!((p.score("a").unwrap() - 1.1).abs() < 1e-12);
        assert!((p.score("c").unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn oversized_k_saturates() {
        let l1 = vocab("l1", &[("a", 1), ("b", 1)]);
        let p = PivotSet::select(&[l1], 10).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn score_ties_rank_lexicographically() {
        let l1 = vocab("l1", &[("a", 2), ("c", 1), ("b", 1)]);
        let p = PivotSet::select(&[l1], 3).unwrap();
        assert_eq!(p.pivots(), ["a".to_string(), "b".to_string(), "c".to_string()]);
    }

    #[test]
    fn zero_threshold_keeps_every_non_pivot() {
        let table = shipped();
        let l1 = vocab("l1", &[("p", 3), ("b", 2), ("m", 1)]);
        let l2 = vocab("l2", &[("p", 2), ("t", 2)]);
        let vocabs = [l1, l2];
        let pivots = PivotSet::select(&vocabs, 2).unwrap();
        let map = PivotMergeMap::build(&vocabs, &pivots, 0.0, &table).unwrap();
        for v in &vocabs {
            let m = map.mapping(&v.lang_id).unwrap();
            for tok in v.tokens() {
                assert_eq!(m[tok], tok, "lang {} token {tok}", v.lang_id);
            }
            assert_eq!(map.merged_vocab(&v.lang_id).unwrap(), v.token_set());
        }
    }

    #[test]
    fn close_token_merges_to_its_unique_nearest_pivot() {
        let table = shipped();
        // b sits one feature from pivot p and far from pivot a
        let l1 = vocab("l1", &[("p", 5), ("a", 4), ("b", 1)]);
        let vocabs = [l1];
        let pivots = PivotSet::select(&vocabs, 2).unwrap();
        assert_eq!(pivots.pivots(), ["p".to_string(), "a".to_string()]);
        let map = PivotMergeMap::build(&vocabs, &pivots, 1.0, &table).unwrap();
        let m = map.mapping("l1").unwrap();
        assert_eq!(m["b"], "p");
        assert_eq!(m["p"], "p");
        assert!(map.kept("l1").unwrap().contains("p"));
        assert!(!map.kept("l1").unwrap().contains("b"));
    }

    #[test]
    fn merge_map_matches_exhaustive_distance_matrix() {
        let table = shipped();
        // three synthetic languages over a mixed inventory
        let l1 = vocab("l1", &[("p", 8), ("a", 6), ("t\u{361}ʃ", 2), ("m", 1)]);
        let l2 = vocab("l2", &[("b", 5), ("a", 5), ("ʃ", 3), ("n", 2)]);
        let l3 = vocab("l3", &[("p", 4), ("e", 4), ("d", 2), ("ŋ", 1)]);
        let vocabs = [l1, l2, l3];
        let k = 2;
        let t = 1.0;
        let pivots = PivotSet::select(&vocabs, k).unwrap();
        let map = PivotMergeMap::build(&vocabs, &pivots, t, &table).unwrap();

        // oracle: recursive alignment distance, independent of the DP path
        fn brute(x: &PhonemeToken, y: &PhonemeToken) -> Score {
            fn go(xs: &[crate::phonology::Segment], ys: &[crate::phonology::Segment]) -> Score {
                if xs.is_empty() {
                    return ys.len() as Score;
                }
                if ys.is_empty() {
                    return xs.len() as Score;
                }
                let sub = go(&xs[1..], &ys[1..])
                    + crate::phonology::segment_distance::<Score>(&xs[0], &ys[0]);
                let del = go(&xs[1..], ys) + 1.0;
                let ins = go(xs, &ys[1..]) + 1.0;
                sub.min(del).min(ins)
            }
            go(&x.segments, &y.segments)
        }

        for vocab in &vocabs {
            let m = map.mapping(&vocab.lang_id).unwrap();
            assert_eq!(m.len(), vocab.len());
            for tok in vocab.tokens() {
                let expect = if pivots.contains(tok) {
                    tok.to_string()
                } else {
                    let parsed = PhonemeToken::parse(tok, &table).unwrap();
                    let mut best: Option<(Score, &str)> = None;
                    for p in pivots.pivots() {
                        let d = brute(&parsed, &PhonemeToken::parse(p, &table).unwrap());
                        if best.map_or(true, |(bd, _)| d < bd) {
                            best = Some((d, p));
                        }
                    }
                    match best {
                        Some((d, p)) if d <= t => p.to_string(),
                        _ => tok.to_string(),
                    }
                };
                assert_eq!(m[tok], expect, "lang {} token {tok}", vocab.lang_id);
            }
        }
    }

    #[test]
    fn apply_substitutes_tokens_and_passes_delimiters() {
        let table = shipped();
        let l1 = vocab("l1", &[("p", 5), ("b", 1)]);
        let vocabs = [l1];
        let pivots = PivotSet::select(&vocabs, 1).unwrap();
        let map = PivotMergeMap::build(&vocabs, &pivots, 3.0, &table).unwrap();
        let lines = vec!["b | b".to_string()];
        assert_eq!(map.apply_corpus("l1", &lines).unwrap(), ["p | p"]);

        let err = map
            .apply_corpus("l1", &["b x".to_string()])
            .unwrap_err();
        match err {
            Error::OutOfDomain { token, line, .. } => {
                assert_eq!(token, "x");
                assert_eq!(line, 1);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn merged_corpus_inventory_is_inside_merged_vocab() {
        let table = shipped();
        let lines: Vec<String> = vec![
            "p a | b e".to_string(),
            "m a b | p e p".to_string(),
            "b a b a | m e".to_string(),
        ];
        let v = LanguageVocabulary::build("l1", &lines, &table).unwrap();
        let vocabs = [v];
        let pivots = PivotSet::select(&vocabs, 2).unwrap();
        let map = PivotMergeMap::build(&vocabs, &pivots, 2.0, &table).unwrap();
        let merged = map.apply_corpus("l1", &lines).unwrap();
        let allowed = map.merged_vocab("l1").unwrap();
        for line in &merged {
            for tok in line.split_whitespace() {
                if tok != WORD_DELIMITER {
                    assert!(allowed.contains(tok), "{tok} outside merged vocab");
                }
            }
        }
        assert!(allowed.len() <= vocabs[0].len());
    }

    #[test]
    fn merge_map_serialization_round_trips() {
        let table = shipped();
        let l1 = vocab("l1", &[("p", 5), ("b", 2), ("ʃ", 1)]);
        let l2 = vocab("l2", &[("p", 3), ("s", 3)]);
        let vocabs = [l1, l2];
        let pivots = PivotSet::select(&vocabs, 2).unwrap();
        let map = PivotMergeMap::build(&vocabs, &pivots, 0.5, &table).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.tsv");
        map.save(&path).unwrap();
        let loaded = PivotMergeMap::load(&path).unwrap();
        assert_eq!(loaded.to_file_string(), map.to_file_string());
        assert_eq!(loaded.k, map.k);
        assert_eq!(loaded.t, map.t);
    }

    #[test]
    fn coverage_of_identical_vocabs_is_one() {
        let sets = vec![
            ("l1".to_string(), ["a", "b"].iter().map(|s| s.to_string()).collect()),
            ("l2".to_string(), ["a", "b"].iter().map(|s| s.to_string()).collect()),
        ];
        let (per, avg) = coverage::<Score>(&sets).unwrap();
        assert_eq!(per["l1"], 1.0);
        assert_eq!(per["l2"], 1.0);
        assert_eq!(avg, 1.0);
    }

    #[test]
    fn coverage_of_disjoint_vocabs_is_zero() {
        let sets = vec![
            ("l1".to_string(), std::iter::once("a".to_string()).collect()),
            ("l2".to_string(), std::iter::once("b".to_string()).collect()),
        ];
        let (per, avg) = coverage::<Score>(&sets).unwrap();
        assert_eq!(per["l1"], 0.0);
        assert_eq!(per["l2"], 0.0);
        assert_eq!(avg, 0.0);
    }

    #[test]
    fn coverage_requires_two_languages() {
        let sets = vec![("l1".to_string(), std::iter::once("a".to_string()).collect())];
        let err = coverage::<Score>(&sets).unwrap_err();
        assert!(matches!(err, Error::CoverageNeedsTwoLanguages), "got {err}");
    }

    #[test]
    fn pivot_and_vocab_serializations_are_byte_stable() {
        let table = shipped();
        let l1 = vocab("l1", &[("p", 5), ("b", 2), ("a", 7)]);
        let l2 = vocab("l2", &[("p", 1), ("e", 4)]);
        let vocabs = [l1, l2];
        let p1 = PivotSet::select(&vocabs, 3).unwrap();
        let p2 = PivotSet::select(&vocabs, 3).unwrap();
        assert_eq!(p1.to_file_string(), p2.to_file_string());
        let m1 = PivotMergeMap::build(&vocabs, &p1, 1.0, &table).unwrap();
        let m2 = PivotMergeMap::build(&vocabs, &p2, 1.0, &table).unwrap();
        assert_eq!(m1.to_file_string(), m2.to_file_string());
        assert_eq!(vocabs[0].to_file_string(), vocabs[0].clone().to_file_string());
    }
}
