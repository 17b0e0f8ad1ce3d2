//! Triphone substitution mining and the replacement-probability model.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::corpus::read_text_lines;
use crate::error::{Error, Result};
use crate::noise::align::{align_sequences, AlignOp};
use crate::phonology::{position_cost, FeatureTable, PhonemeToken};
use crate::real::Real;
use crate::{Score, BOUNDARY, WORD_DELIMITER};

/// Three consecutive corpus tokens; utterances shorter than three are
/// padded on the right with the reserved boundary token.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triphone(pub [String; 3]);

impl Triphone {
    pub fn new(a: &str, b: &str, c: &str) -> Self {
        Triphone([a.to_string(), b.to_string(), c.to_string()])
    }

    pub fn contains_boundary(&self) -> bool {
        self.0.iter().any(|t| t == BOUNDARY)
    }

    pub fn parse(s: &str) -> Result<Triphone> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Invalid(format!(
                "triphone {s:?} has {} tokens, want 3",
                toks.len()
            )));
        }
        Ok(Triphone::new(toks[0], toks[1], toks[2]))
    }
}

impl fmt::Display for Triphone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

/// One observed noisy rewrite of a clean triphone.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseEntry {
    pub noisy: Triphone,
    pub freq: u64,
    pub distance: Score,
    pub prob: Score,
}

/// Clean-triphone -> weighted noisy-triphone substitution table, plus the
/// occurrence totals of every clean-side triphone.
#[derive(Debug, Clone, Default)]
pub struct TriphoneNoiseModel {
    entries: std::collections::BTreeMap<Triphone, Vec<NoiseEntry>>,
    totals: std::collections::BTreeMap<Triphone, u64>,
}

/// The paper-facing probability that a clean triphone observed `freq` times
/// as a given noisy form (out of `total_freq` clean occurrences, at feature
/// distance `distance`) is rewritten: `(freq/total_freq) * ((3-d)/3)`.
/// Preconditions are hard errors; values are never clamped silently.
pub fn replacement_probability<R: Real>(freq: u64, total_freq: u64, distance: R) -> Result<R> {
    if freq == 0 {
        return Err(Error::BadProbabilityInput {
            msg: "freq must be positive".into(),
        });
    }
    if freq > total_freq {
        return Err(Error::BadProbabilityInput {
            msg: format!("freq {freq} exceeds total_freq {total_freq}"),
        });
    }
    let three = R::from_count(3);
    if distance < R::zero() || distance > three {
        return Err(Error::BadProbabilityInput {
            msg: format!("distance {distance} outside [0, 3]"),
        });
    }
    let ratio = R::from_count(freq) / R::from_count(total_freq);
    Ok(ratio * ((three - distance) / three))
}

/// Resolves corpus tokens to segmented phonemes once, treating the word
/// delimiter and the boundary pad as opaque special tokens.
struct TokenResolver<'a> {
    table: &'a FeatureTable,
    cache: HashMap<String, Option<PhonemeToken>>,
}

impl<'a> TokenResolver<'a> {
    fn new(table: &'a FeatureTable) -> Self {
        TokenResolver {
            table,
            cache: HashMap::new(),
        }
    }

    /// Validate and cache a token; errors carry the corpus line number.
    fn resolve(&mut self, token: &str, line: usize) -> Result<()> {
        if token == WORD_DELIMITER || token == BOUNDARY || self.cache.contains_key(token) {
            return Ok(());
        }
        let parsed = PhonemeToken::parse(token, self.table).map_err(|e| Error::BadToken {
            token: token.to_string(),
            line,
            reason: e.to_string(),
        })?;
        self.cache.insert(token.to_string(), Some(parsed));
        Ok(())
    }

    /// `None` for the delimiter and boundary specials.
    fn cached(&self, token: &str) -> Option<&PhonemeToken> {
        self.cache.get(token).and_then(Option::as_ref)
    }
}

/// Distance between two triphones where either side may hold special
/// tokens: specials compare by surface (0 when equal, the clamp maximum 1
/// otherwise); phoneme positions use the clamped token distance.
fn triphone_distance_mixed(clean: &Triphone, noisy: &Triphone, resolver: &TokenResolver) -> Score {
    clean
        .0
        .iter()
        .zip(noisy.0.iter())
        .map(|(c, n)| match (resolver.cached(c), resolver.cached(n)) {
            (Some(c), Some(n)) => position_cost::<Score>(c, n),
            (None, None) if c == n => 0.0,
            _ => 1.0,
        })
        .sum()
}

/// Right-pad a short utterance to one triphone window; `None` for empty.
fn windows(tokens: &[&str]) -> Option<Vec<Triphone>> {
    match tokens.len() {
        0 => None,
        1 => Some(vec![Triphone::new(tokens[0], BOUNDARY, BOUNDARY)]),
        2 => Some(vec![Triphone::new(tokens[0], tokens[1], BOUNDARY)]),
        _ => Some(
            tokens
                .windows(3)
                .map(|w| Triphone::new(w[0], w[1], w[2]))
                .collect(),
        ),
    }
}

impl TriphoneNoiseModel {
    /// Mine triphone substitution statistics from aligned clean/noisy
    /// utterance pairs. A width-3 window over the aligned clean side is
    /// recorded when it holds at least one substitution and no insertion
    /// or deletion touches it; totals count every clean-side triphone.
    pub fn analyze(pairs: &[(String, String)], table: &FeatureTable) -> Result<TriphoneNoiseModel> {
        if pairs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut resolver = TokenResolver::new(table);
        let mut totals = std::collections::BTreeMap::new();
        let mut counts: std::collections::BTreeMap<Triphone, std::collections::BTreeMap<Triphone, u64>> =
            std::collections::BTreeMap::new();

        for (idx, (clean_line, noisy_line)) in pairs.iter().enumerate() {
            let lineno = idx + 1;
            let clean: Vec<&str> = clean_line.split_whitespace().collect();
            let noisy: Vec<&str> = noisy_line.split_whitespace().collect();
            for tok in clean.iter().chain(noisy.iter()) {
                resolver.resolve(tok, lineno)?;
            }

            let n = clean.len();
            match windows(&clean) {
                Some(ws) => {
                    for w in ws {
                        *totals.entry(w).or_insert(0) += 1;
                    }
                }
                None => continue,
            }

            let aligned = align_sequences(&clean, &noisy);
            // per clean position: was it a substitution, and the aligned
            // noisy token (None when deleted); inserts_before[j] counts
            // insertions before clean position j, index n = trailing.
            let mut is_sub = Vec::with_capacity(n);
            let mut aligned_noisy: Vec<Option<&str>> = Vec::with_capacity(n);
            let mut inserts_before = vec![0usize; n + 1];
            for op in &aligned.ops {
                match op {
                    AlignOp::Match { noisy, .. } => {
                        is_sub.push(false);
                        aligned_noisy.push(Some(noisy));
                    }
                    AlignOp::Substitute { noisy, .. } => {
                        is_sub.push(true);
                        aligned_noisy.push(Some(noisy));
                    }
                    AlignOp::Delete { .. } => {
                        is_sub.push(false);
                        aligned_noisy.push(None);
                    }
                    AlignOp::Insert { .. } => {
                        inserts_before[is_sub.len()] += 1;
                    }
                }
            }
            debug_assert_eq!(is_sub.len(), n);

            let span = n.min(3);
            for start in 0..=n.saturating_sub(span) {
                let positions = start..start + span;
                // a deletion inside the window, or an insertion between
                // its positions (trailing ones count for a padded window),
                // breaks the clean/noisy pairing
                if positions.clone().any(|p| aligned_noisy[p].is_none()) {
                    continue;
                }
                if ((start + 1)..=(start + span.min(2)).min(n)).any(|p| inserts_before[p] > 0) {
                    continue;
                }
                if !positions.clone().any(|p| is_sub[p]) {
                    continue;
                }
                let clean_at = |p: usize| if p < n { clean[p] } else { BOUNDARY };
                let noisy_at = |p: usize| {
                    if p < n {
                        aligned_noisy[p].expect("no deletion in window")
                    } else {
                        BOUNDARY
                    }
                };
                let clean_tri = Triphone::new(clean_at(start), clean_at(start + 1), clean_at(start + 2));
                let noisy_tri = Triphone::new(noisy_at(start), noisy_at(start + 1), noisy_at(start + 2));
                *counts
                    .entry(clean_tri)
                    .or_default()
                    .entry(noisy_tri)
                    .or_insert(0) += 1;
            }
        }

        let mut entries = std::collections::BTreeMap::new();
        for (clean_tri, noisy_counts) in counts {
            let total = *totals
                .get(&clean_tri)
                .expect("mined windows are counted in totals");
            let mut list = Vec::with_capacity(noisy_counts.len());
            for (noisy_tri, freq) in noisy_counts {
                let distance = triphone_distance_mixed(&clean_tri, &noisy_tri, &resolver);
                let prob = replacement_probability(freq, total, distance)?;
                list.push(NoiseEntry {
                    noisy: noisy_tri,
                    freq,
                    distance,
                    prob,
                });
            }
            // candidate order: descending frequency, then noisy surface
            list.sort_by(|a, b| b.freq.cmp(&a.freq).then_with(|| a.noisy.cmp(&b.noisy)));
            entries.insert(clean_tri, list);
        }
        Ok(TriphoneNoiseModel { entries, totals })
    }

    pub fn candidates(&self, clean: &Triphone) -> Option<&[NoiseEntry]> {
        self.entries.get(clean).map(Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Triphone, &[NoiseEntry])> {
        self.entries.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn total_freq(&self, clean: &Triphone) -> Option<u64> {
        self.totals.get(clean).copied()
    }

    pub fn totals(&self) -> impl Iterator<Item = (&Triphone, u64)> {
        self.totals.iter().map(|(k, v)| (k, *v))
    }

    pub fn n_entries(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `clean_tri<TAB>noisy_tri<TAB>freq<TAB>total_freq<TAB>distance<TAB>prob`
    /// per entry; clean triphones that were observed but never substituted
    /// are preserved as `#total` comment lines so loading is lossless.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (clean, list) in &self.entries {
            let total = self.totals[clean];
            for e in list {
                out.push_str(&format!(
                    "{clean}\t{}\t{}\t{}\t{}\t{}\n",
                    e.noisy, e.freq, total, e.distance, e.prob
                ));
            }
        }
        for (tri, count) in &self.totals {
            if !self.entries.contains_key(tri) {
                out.push_str(&format!("#total\t{tri}\t{count}\n"));
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::corpus::write_atomic(path, &self.to_file_string())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<TriphoneNoiseModel> {
        let path = path.as_ref();
        let lines = read_text_lines(path)?;
        Self::parse_lines(&lines, &path.display().to_string())
    }

    pub fn parse_lines(lines: &[String], path: &str) -> Result<TriphoneNoiseModel> {
        let mut model = TriphoneNoiseModel::default();
        for (idx, line) in lines.iter().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#total\t") {
                let (tri, count) = rest
                    .rsplit_once('\t')
                    .ok_or_else(|| Error::parse(path, lineno, "malformed #total line"))?;
                let count: u64 = count
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, "bad total count"))?;
                model.totals.insert(Triphone::parse(tri)?, count);
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 6 {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected 6 tab-separated fields, got {}", fields.len()),
                ));
            }
            let clean = Triphone::parse(fields[0])
                .map_err(|e| Error::parse(path, lineno, e.to_string()))?;
            let noisy = Triphone::parse(fields[1])
                .map_err(|e| Error::parse(path, lineno, e.to_string()))?;
            let freq: u64 = fields[2]
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad freq"))?;
            let total: u64 = fields[3]
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad total_freq"))?;
            let distance: Score = fields[4]
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad distance"))?;
            let prob: Score = fields[5]
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad prob"))?;
            if let Some(prev) = model.totals.get(&clean) {
                if *prev != total {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("inconsistent total_freq for {clean}: {prev} vs {total}"),
                    ));
                }
            }
            model.totals.insert(clean.clone(), total);
            model.entries.entry(clean).or_default().push(NoiseEntry {
                noisy,
                freq,
                distance,
                prob,
            });
        }
        for list in model.entries.values_mut() {
            list.sort_by(|a, b| b.freq.cmp(&a.freq).then_with(|| a.noisy.cmp(&b.noisy)));
        }
        Ok(model)
    }
}
