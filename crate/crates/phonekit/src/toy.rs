//! Deterministic toy grapheme-to-phoneme rule language and a synthetic
//! corpus generator, so every end-to-end test runs without external
//! datasets or a real phonemizer.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::read_text_lines;
use crate::error::{Error, Result};
use crate::WORD_DELIMITER;

/// Ordered rewrite rules from grapheme strings to phoneme token strings.
/// Application is leftmost-longest and total over the rule alphabet.
#[derive(Debug, Clone)]
pub struct ToyG2pRules {
    rules: BTreeMap<String, Vec<String>>,
    max_lhs_bytes: usize,
}

impl ToyG2pRules {
    /// Rule file: `grapheme<TAB>phoneme tokens`, `#` comments.
    pub fn load(path: impl AsRef<Path>) -> Result<ToyG2pRules> {
        let path = path.as_ref();
        let lines = read_text_lines(path)?;
        Self::parse_lines(&lines, &path.display().to_string())
    }

    pub fn parse_str(content: &str, label: &str) -> Result<ToyG2pRules> {
        let lines: Vec<String> = content.lines().map(str::to_owned).collect();
        Self::parse_lines(&lines, label)
    }

    fn parse_lines(lines: &[String], path: &str) -> Result<ToyG2pRules> {
        let mut rules = BTreeMap::new();
        let mut max_lhs_bytes = 0;
        for (idx, line) in lines.iter().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line.split_once('\t').ok_or_else(|| {
                Error::parse(path, idx + 1, "expected \"grapheme<TAB>phonemes\"")
            })?;
            if lhs.is_empty() {
                return Err(Error::parse(path, idx + 1, "empty grapheme side"));
            }
            let phonemes: Vec<String> = rhs.split_whitespace().map(str::to_owned).collect();
            if phonemes.is_empty() {
                return Err(Error::parse(path, idx + 1, "empty phoneme side"));
            }
            if rules.insert(lhs.to_string(), phonemes).is_some() {
                return Err(Error::parse(path, idx + 1, format!("duplicate rule for {lhs:?}")));
            }
            max_lhs_bytes = max_lhs_bytes.max(lhs.len());
        }
        if rules.is_empty() {
            return Err(Error::Invalid(format!("{path}: no rules")));
        }
        Ok(ToyG2pRules {
            rules,
            max_lhs_bytes,
        })
    }

    /// All left-hand sides, the grapheme alphabet of the language.
    pub fn graphemes(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(String::as_str)
    }

    /// Rewrite one word to its phoneme tokens, leftmost-longest.
    pub fn word_to_phonemes(&self, word: &str) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < word.len() {
            let mut end = (pos + self.max_lhs_bytes).min(word.len());
            let mut matched = None;
            while end > pos {
                if word.is_char_boundary(end) {
                    if let Some(ph) = self.rules.get(&word[pos..end]) {
                        matched = Some((end, ph));
                        break;
                    }
                }
                end -= 1;
            }
            match matched {
                Some((end, ph)) => {
                    out.extend(ph.iter().cloned());
                    pos = end;
                }
                None => {
                    let found = word[pos..].chars().next().expect("char boundary");
                    return Err(Error::Unsegmentable { offset: pos, found });
                }
            }
        }
        Ok(out)
    }
}

/// Rewrite a whitespace-separated grapheme sentence into a phoneme
/// utterance, words joined with the word delimiter.
pub fn toy_g2p(rules: &ToyG2pRules, sentence: &str) -> Result<String> {
    let mut words = Vec::new();
    for word in sentence.split_whitespace() {
        words.push(rules.word_to_phonemes(word)?.join(" "));
    }
    Ok(words.join(&format!(" {WORD_DELIMITER} ")))
}

/// Parameters for the synthetic language sampler.
#[derive(Debug, Clone)]
pub struct SynthSpec {
    /// distinct words in the language
    pub n_words: usize,
    /// grapheme units per word, inclusive
    pub word_len: (usize, usize),
    /// words per sentence, inclusive
    pub sentence_len: (usize, usize),
    pub n_sentences: usize,
    /// Zipf exponent for word frequencies
    pub zipf: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n_words: 60,
            word_len: (2, 4),
            sentence_len: (3, 8),
            n_sentences: 200,
            zipf: 1.1,
            seed: crate::DEFAULT_SEED,
        }
    }
}

/// A generated parallel corpus: grapheme sentences and their phoneme
/// utterances, plus the sampled word list in rank order.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub graphemes: Vec<String>,
    pub phonemes: Vec<String>,
    pub words: Vec<String>,
}

/// Sample a vocabulary of words over the rule alphabet and emit Zipf-weighted
/// sentences. Deterministic in the spec seed.
pub fn synth_corpus(rules: &ToyG2pRules, spec: &SynthSpec) -> Result<SynthCorpus> {
    if spec.n_words == 0 || spec.n_sentences == 0 {
        return Err(Error::Invalid("synth spec needs words and sentences".into()));
    }
    let units: Vec<&str> = rules.graphemes().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut words = Vec::with_capacity(spec.n_words);
    let mut seen = std::collections::BTreeSet::new();
    let mut attempts = 0usize;
    while words.len() < spec.n_words {
        attempts += 1;
        if attempts > spec.n_words * 1000 {
            return Err(Error::Invalid(
                "rule alphabet too small for the requested word count".into(),
            ));
        }
        let len = rng.gen_range(spec.word_len.0..=spec.word_len.1);
        let word: String = (0..len)
            .map(|_| units[rng.gen_range(0..units.len())])
            .collect();
        if seen.insert(word.clone()) {
            words.push(word);
        }
    }

    // Zipf cumulative weights over rank
    let weights: Vec<f64> = (1..=words.len())
        .map(|r| 1.0 / (r as f64).powf(spec.zipf))
        .collect();
    let total: f64 = weights.iter().sum();
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w / total;
        cumulative.push(acc);
    }

    let mut graphemes = Vec::with_capacity(spec.n_sentences);
    let mut phonemes = Vec::with_capacity(spec.n_sentences);
    for _ in 0..spec.n_sentences {
        let len = rng.gen_range(spec.sentence_len.0..=spec.sentence_len.1);
        let sentence: Vec<&str> = (0..len)
            .map(|_| {
                let x: f64 = rng.gen();
                let idx = cumulative.partition_point(|c| *c < x);
                words[idx.min(words.len() - 1)].as_str()
            })
            .collect();
        let sentence = sentence.join(" ");
        phonemes.push(toy_g2p(rules, &sentence)?);
        graphemes.push(sentence);
    }
    Ok(SynthCorpus {
        graphemes,
        phonemes,
        words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> ToyG2pRules {
        ToyG2pRules::parse_str("a\tɑ\nb\tb\nsh\tʃ\ns\ts\nh\th\n", "test").unwrap()
    }

    #[test]
    fn empty_sentence_gives_empty_utterance() {
        assert_eq!(toy_g2p(&rules(), "").unwrap(), "");
    }

    #[test]
    fn single_word_rewrites_without_delimiter() {
        assert_eq!(toy_g2p(&rules(), "ab").unwrap(), "ɑ b");
        assert_eq!(toy_g2p(&rules(), "ab ba").unwrap(), "ɑ b | b ɑ");
    }

    #[test]
    fn leftmost_longest_beats_shorter_parse() {
        // "sh" parses as {sh} or {s,h}; leftmost-longest must pick ʃ
        let r = rules();
        assert_eq!(toy_g2p(&r, "sh").unwrap(), "ʃ");
        // oracle: both parses exist; the 1-token one is the policy's choice
        assert_eq!(r.word_to_phonemes("sh").unwrap().len(), 1);
        assert_eq!(
            r.word_to_phonemes("s").unwrap().len() + r.word_to_phonemes("h").unwrap().len(),
            2
        );
    }

    #[test]
    fn uncovered_character_is_an_error() {
        let err = toy_g2p(&rules(), "abq").unwrap_err();
        match err {
            Error::Unsegmentable { offset, found } => {
                assert_eq!((offset, found), (2, 'q'));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn synth_is_deterministic_in_seed() {
        let r = rules();
        let spec = SynthSpec {
            n_words: 20,
            n_sentences: 30,
            ..SynthSpec::default()
        };
        let a = synth_corpus(&r, &spec).unwrap();
        let b = synth_corpus(&r, &spec).unwrap();
        assert_eq!(a.graphemes, b.graphemes);
        assert_eq!(a.phonemes, b.phonemes);
        let c = synth_corpus(
            &r,
            &SynthSpec {
                seed: spec.seed + 1,
                ..spec
            },
        )
        .unwrap();
        assert_ne!(a.graphemes, c.graphemes);
    }

    #[test]
    fn synth_phonemes_follow_the_rules() {
        let r = rules();
        let spec = SynthSpec {
            n_words: 10,
            n_sentences: 15,
            ..SynthSpec::default()
        };
        let c = synth_corpus(&r, &spec).unwrap();
        assert_eq!(c.graphemes.len(), 15);
        for (g, p) in c.graphemes.iter().zip(&c.phonemes) {
            assert_eq!(&toy_g2p(&r, g).unwrap(), p);
        }
    }
}
