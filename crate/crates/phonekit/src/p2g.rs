//! Lexicon-based phoneme-to-grapheme decoding with optional noise-model
//! rescoring: a desk-scale, swappable stand-in for a neural translator.

use std::collections::BTreeMap;

use crate::corpus::ParallelCorpus;
use crate::error::{Error, Result};
use crate::noise::{Triphone, TriphoneNoiseModel};
use crate::{Score, WORD_DELIMITER};

/// Phoneme-word -> grapheme-word counts from training pairs. Keys are the
/// space-joined tokens of one phoneme word and never contain delimiters.
#[derive(Debug, Clone, Default)]
pub struct P2gLexicon {
    entries: BTreeMap<String, Vec<(String, u64)>>,
}

/// Split a phoneme utterance into its per-word token strings.
pub fn phoneme_words(utterance: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for tok in utterance.split_whitespace() {
        if tok == WORD_DELIMITER {
            words.push(current.join(" "));
            current.clear();
        } else {
            current.push(tok);
        }
    }
    words.push(current.join(" "));
    words.retain(|w| !w.is_empty());
    words
}

impl P2gLexicon {
    /// Build from a parallel corpus; every line must pair the same number
    /// of grapheme words and phoneme words.
    pub fn build(corpus: &ParallelCorpus) -> Result<P2gLexicon> {
        let mut entries: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        for (idx, (graphemes, phonemes)) in corpus.records.iter().enumerate() {
            let gw: Vec<&str> = graphemes.split_whitespace().collect();
            let pw = phoneme_words(phonemes);
            if gw.len() != pw.len() {
                return Err(Error::parse(
                    format!("corpus[{}]", corpus.lang_id),
                    idx + 1,
                    format!("{} grapheme words vs {} phoneme words", gw.len(), pw.len()),
                ));
            }
            for (g, p) in gw.iter().zip(pw) {
                *entries.entry(p).or_default().entry(g.to_string()).or_insert(0) += 1;
            }
        }
        let entries = entries
            .into_iter()
            .map(|(p, counts)| {
                let mut list: Vec<(String, u64)> = counts.into_iter().collect();
                list.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
                (p, list)
            })
            .collect();
        Ok(P2gLexicon { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn graphemes(&self, phoneme_word: &str) -> Option<&[(String, u64)]> {
        self.entries.get(phoneme_word).map(Vec::as_slice)
    }

    fn key_count(&self, key: &str) -> u64 {
        self.entries
            .get(key)
            .map(|l| l.iter().map(|(_, c)| c).sum())
            .unwrap_or(0)
    }

    /// Decode one phoneme word. Exact lexicon hit wins; otherwise, with a
    /// noise model, every key is scored by generative likelihood times its
    /// count prior and the argmax is taken; with no candidate the phoneme
    /// word itself is emitted.
    pub fn decode_word(&self, phoneme_word: &str, model: Option<&TriphoneNoiseModel>) -> String {
        if let Some(list) = self.entries.get(phoneme_word) {
            return list[0].0.clone();
        }
        if let Some(model) = model {
            let observed: Vec<&str> = phoneme_word.split_whitespace().collect();
            let mut best: Option<(Score, u64, &str)> = None;
            for key in self.entries.keys() {
                let clean: Vec<&str> = key.split_whitespace().collect();
                let likelihood = noise_likelihood(&clean, &observed, model);
                if likelihood <= 0.0 {
                    continue;
                }
                let count = self.key_count(key);
                let score = likelihood * count as Score;
                let better = match &best {
                    None => true,
                    Some((bs, bc, bk)) => {
                        score > *bs
                            || (score == *bs && (count > *bc || (count == *bc && key.as_str() < *bk)))
                    }
                };
                if better {
                    best = Some((score, count, key));
                }
            }
            if let Some((_, _, key)) = best {
                return self.entries[key][0].0.clone();
            }
        }
        phoneme_word.to_string()
    }

    /// Decode a delimiter-separated phoneme utterance into a grapheme
    /// sentence, word by word.
    pub fn decode_utterance(&self, utterance: &str, model: Option<&TriphoneNoiseModel>) -> String {
        phoneme_words(utterance)
            .iter()
            .map(|w| self.decode_word(w, model))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Probability that the pseudo-noise scan rewrites `clean` into `observed`:
/// fired windows contribute their replacement probability and consume three
/// positions, unfired windows contribute `1 - sum(candidates)` (floored at
/// zero) and must match one token. Token counts are preserved by the scan,
/// so differing lengths never match.
pub fn noise_likelihood(clean: &[&str], observed: &[&str], model: &TriphoneNoiseModel) -> Score {
    if clean.len() != observed.len() {
        return 0.0;
    }
    let n = clean.len();
    // suffix[i] = probability the scan maps clean[i..] to observed[i..]
    let mut suffix = vec![0.0 as Score; n + 1];
    suffix[n] = 1.0;
    for i in (0..n).rev() {
        let mut p = 0.0;
        let mut no_fire: Score = 1.0;
        if i + 3 <= n {
            let window = Triphone::new(clean[i], clean[i + 1], clean[i + 2]);
            if let Some(cands) = model.candidates(&window) {
                let mut fired_mass: Score = 0.0;
                for cand in cands {
                    if cand.noisy.contains_boundary() {
                        continue;
                    }
                    fired_mass += cand.prob;
                    if cand.noisy.0.iter().map(String::as_str).eq(observed[i..i + 3].iter().copied())
                    {
                        p += cand.prob * suffix[i + 3];
                    }
                }
                no_fire = (1.0 - fired_mass).max(0.0);
            }
        }
        if clean[i] == observed[i] {
            p += no_fire * suffix[i + 1];
        }
        suffix[i] = p;
    }
    suffix[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(records: &[(&str, &str)]) -> ParallelCorpus {
        ParallelCorpus {
            lang_id: "xx".into(),
            records: records
                .iter()
                .map(|(g, p)| (g.to_string(), p.to_string()))
                .collect(),
        }
    }

    #[test]
    fn phoneme_words_split_on_delimiters() {
        assert_eq!(phoneme_words("p a t | b a t"), ["p a t", "b a t"]);
        assert_eq!(phoneme_words("p a t"), ["p a t"]);
        assert_eq!(phoneme_words(""), Vec::<String>::new());
    }

    #[test]
    fn clean_input_recovers_training_graphemes() {
        let c = corpus(&[("pat bat", "p a t | b a t"), ("pat", "p a t")]);
        let lex = P2gLexicon::build(&c).unwrap();
        assert_eq!(lex.decode_utterance("p a t | b a t", None), "pat bat");
    }

    #[test]
    fn empty_lexicon_echoes_phoneme_words() {
        let lex = P2gLexicon::default();
        assert_eq!(lex.decode_utterance("p a t | i", None), "p a t i");
    }

    #[test]
    fn homophones_resolve_by_count_then_lexicographic() {
        let c = corpus(&[
            ("led", "l e d"),
            ("lead", "l e d"),
            ("led", "l e d"),
            ("ned zed", "n e d | z e d"),
        ]);
        let lex = P2gLexicon::build(&c).unwrap();
        assert_eq!(lex.decode_word("l e d", None), "led"); // count 2 beats 1
        // equal counts: lexicographically smaller grapheme wins
        let c = corpus(&[("aa", "p a"), ("ab", "p a")]);
        let lex = P2gLexicon::build(&c).unwrap();
        assert_eq!(lex.decode_word("p a", None), "aa");
    }

    #[test]
    fn word_count_mismatch_is_an_error_with_line() {
        let c = corpus(&[("two words", "p a t")]);
        let err = P2gLexicon::build(&c).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "got {err}");
    }

    #[test]
    fn noise_aware_decode_recovers_a_substituted_word() {
        // toy lexicon of three words; the model rewrites (p,a,t)->(b,a,t)
        let c = corpus(&[("pat", "p a t"), ("kit", "k i t"), ("sun", "s u n")]);
        let lex = P2gLexicon::build(&c).unwrap();
        let model_line = "p a t\tb a t\t1\t4\t0.05\t0.245".to_string();
        let model = TriphoneNoiseModel::parse_lines(&[model_line], "mem").unwrap();

        // noise-blind: not in lexicon, falls back to the phoneme word
        assert_eq!(lex.decode_word("b a t", None), "b a t");
        // noise-aware: (p,a,t) can generate (b,a,t), so "pat" is recovered
        assert_eq!(lex.decode_word("b a t", Some(&model)), "pat");
        // clean word still decodes exactly
        assert_eq!(lex.decode_word("p a t", Some(&model)), "pat");
    }

    #[test]
    fn likelihood_follows_the_generative_scan() {
        let lines = vec![
            "p a t\tb a t\t1\t4\t0.0\t0.25".to_string(),
            "p a t\tp o t\t1\t4\t0.0\t0.25".to_string(),
        ];
        let model = TriphoneNoiseModel::parse_lines(&lines, "mem").unwrap();
        let l = |obs: &[&str]| noise_likelihood(&["p", "a", "t"], obs, &model);
        assert!((l(&["b", "a", "t"]) - 0.25).abs() < 1e-12);
        assert!((l(&["p", "o", "t"]) - 0.25).abs() < 1e-12);
        // unfired path: 1 - 0.5 mass, tokens must match exactly
        assert!((l(&["p", "a", "t"]) - 0.5).abs() < 1e-12);
        assert_eq!(l(&["x", "a", "t"]), 0.0);
        assert_eq!(l(&["p", "a"]), 0.0);
    }

    #[test]
    fn likelihood_composes_over_consecutive_windows() {
        // six tokens, two disjoint windows both rewriteable
        let lines = vec![
            "a a a\tk k k\t1\t2\t0.0\t0.5".to_string(),
        ];
        let model = TriphoneNoiseModel::parse_lines(&lines, "mem").unwrap();
        let clean = ["a", "a", "a", "a", "a", "a"];
        let both = noise_likelihood(&clean, &["k", "k", "k", "k", "k", "k"], &model);
        assert!((both - 0.25).abs() < 1e-12, "got {both}");
        // first window fired, second untouched: 0.5 * (0.5 no-fire at 3)
        // positions 4 and 5 carry no full window after i=3, so they only
        // need to match; the scan still evaluates window at 3
        let one = noise_likelihood(&clean, &["k", "k", "k", "a", "a", "a"], &model);
        assert!((one - 0.25).abs() < 1e-12, "got {one}");
    }
}
