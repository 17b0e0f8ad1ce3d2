//! Phoneme and word error rates over minimum-edit alignments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::align_sequences;
use crate::real::Real;
use crate::Score;

/// Substitution/insertion/deletion counts against a reference length.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ErrorCounts {
    pub substitutions: u64,
    pub insertions: u64,
    pub deletions: u64,
    pub ref_len: u64,
}

impl ErrorCounts {
    pub fn errors(&self) -> u64 {
        self.substitutions + self.insertions + self.deletions
    }

    /// (S + I + D) / N; may exceed 1 when the hypothesis runs long.
    pub fn rate<R: Real>(&self) -> R {
        R::from_count(self.errors()) / R::from_count(self.ref_len)
    }

    pub fn accumulate(&mut self, other: &ErrorCounts) {
        self.substitutions += other.substitutions;
        self.insertions += other.insertions;
        self.deletions += other.deletions;
        self.ref_len += other.ref_len;
    }
}

fn eval_tokens(ref_tokens: &[&str], hyp_tokens: &[&str], line: usize) -> Result<ErrorCounts> {
    if ref_tokens.is_empty() {
        return Err(Error::EmptyReference { line });
    }
    let aligned = align_sequences(ref_tokens, hyp_tokens);
    let (substitutions, insertions, deletions) = aligned.counts();
    Ok(ErrorCounts {
        substitutions,
        insertions,
        deletions,
        ref_len: ref_tokens.len() as u64,
    })
}

/// Phoneme error rate: token-level edit distance over the reference length.
pub fn per(ref_line: &str, hyp_line: &str, line: usize) -> Result<ErrorCounts> {
    let r: Vec<&str> = ref_line.split_whitespace().collect();
    let h: Vec<&str> = hyp_line.split_whitespace().collect();
    eval_tokens(&r, &h, line)
}

/// Word error rate: whitespace-word edit distance over the reference length.
pub fn wer(ref_sentence: &str, hyp_sentence: &str, line: usize) -> Result<ErrorCounts> {
    let r: Vec<&str> = ref_sentence.split_whitespace().collect();
    let h: Vec<&str> = hyp_sentence.split_whitespace().collect();
    eval_tokens(&r, &h, line)
}

/// Per-utterance slice of an evaluation report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct UtteranceReport {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per: Option<Score>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wer: Option<Score>,
}

/// Corpus-level evaluation: headline rates, the headline metric's counts,
/// and the per-utterance breakdown.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvalReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per: Option<Score>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wer: Option<Score>,
    #[serde(rename = "S")]
    pub substitutions: u64,
    #[serde(rename = "I")]
    pub insertions: u64,
    #[serde(rename = "D")]
    pub deletions: u64,
    #[serde(rename = "N")]
    pub ref_len: u64,
    pub utterances: Vec<UtteranceReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Per,
    Wer,
}

/// Evaluate a hypothesis corpus against references, one line per record.
/// Rates are corpus-level: summed errors over summed reference lengths.
pub fn evaluate_corpus(refs: &[String], hyps: &[String], metric: Metric) -> Result<EvalReport> {
    if refs.len() != hyps.len() {
        return Err(Error::LineCountMismatch {
            left: "reference".into(),
            left_lines: refs.len(),
            right: "hypothesis".into(),
            right_lines: hyps.len(),
        });
    }
    let mut total = ErrorCounts::default();
    let mut utterances = Vec::with_capacity(refs.len());
    for (idx, (r, h)) in refs.iter().zip(hyps).enumerate() {
        let counts = match metric {
            Metric::Per => per(r, h, idx + 1)?,
            Metric::Wer => wer(r, h, idx + 1)?,
        };
        total.accumulate(&counts);
        let rate: Score = counts.rate();
        utterances.push(UtteranceReport {
            index: idx,
            per: (metric == Metric::Per).then_some(rate),
            wer: (metric == Metric::Wer).then_some(rate),
        });
    }
    let rate: Score = total.rate();
    Ok(EvalReport {
        per: (metric == Metric::Per).then_some(rate),
        wer: (metric == Metric::Wer).then_some(rate),
        substitutions: total.substitutions,
        insertions: total.insertions,
        deletions: total.deletions,
        ref_len: total.ref_len,
        utterances,
    })
}
