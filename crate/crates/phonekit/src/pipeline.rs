//! End-to-end two-pass evaluation: clean phonemes go through a noise
//! channel, the noisy phonemes through the lexicon decoder, and both
//! stages are scored against the references.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::corpus::{read_text_lines, ExternalCommand, ParallelCorpus};
use crate::error::{Error, Result};
use crate::gpn::{ExternalChannel, IdentityChannel, NoiseChannel, StatisticalChannel};
use crate::metrics::{per, wer, ErrorCounts, EvalReport, UtteranceReport};
use crate::noise::TriphoneNoiseModel;
use crate::p2g::P2gLexicon;
use crate::ppm::PivotMergeMap;
use crate::{Score, DEFAULT_SEED};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChannelSpec {
    Identity,
    Statistical,
    External(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeMode {
    /// lexicon + noise-model rescoring
    Aware,
    /// lexicon only
    Blind,
}

/// Pipeline configuration, readable from a `key = value` file.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub lang: String,
    pub test_graphemes: PathBuf,
    pub test_phonemes: PathBuf,
    pub lexicon_graphemes: PathBuf,
    pub lexicon_phonemes: PathBuf,
    pub merge_map: Option<PathBuf>,
    pub noise_model: Option<PathBuf>,
    pub channel: ChannelSpec,
    pub decode: DecodeMode,
    pub seed: u64,
    pub report: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn parse_file(path: impl AsRef<Path>) -> Result<PipelineConfig> {
        let path = path.as_ref();
        let label = path.display().to_string();
        let mut kv = BTreeMap::new();
        for (idx, line) in read_text_lines(path)?.iter().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(&label, idx + 1, "expected \"key = value\""))?;
            kv.insert(key.trim().to_string(), value.trim().to_string());
        }
        Self::from_pairs(&kv, &label)
    }

    pub fn from_pairs(kv: &BTreeMap<String, String>, label: &str) -> Result<PipelineConfig> {
        let known = [
            "lang",
            "test_graphemes",
            "test_phonemes",
            "lexicon_graphemes",
            "lexicon_phonemes",
            "merge_map",
            "noise_model",
            "channel",
            "decode",
            "seed",
            "report",
        ];
        for key in kv.keys() {
            if !known.contains(&key.as_str()) {
                return Err(Error::Invalid(format!("{label}: unknown config key {key:?}")));
            }
        }
        let required = |key: &str| -> Result<String> {
            kv.get(key)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("{label}: missing config key {key:?}")))
        };
        let channel = match kv.get("channel").map(String::as_str) {
            None | Some("identity") => ChannelSpec::Identity,
            Some("statistical") => ChannelSpec::Statistical,
            Some(other) => match other.strip_prefix("external ") {
                Some(cmd) => ChannelSpec::External(cmd.to_string()),
                None => {
                    return Err(Error::Invalid(format!(
                        "{label}: channel must be identity, statistical, or \"external <cmd>\""
                    )))
                }
            },
        };
        let decode = match kv.get("decode").map(String::as_str) {
            Some("blind") => DecodeMode::Blind,
            Some("aware") => DecodeMode::Aware,
            None => {
                if kv.contains_key("noise_model") {
                    DecodeMode::Aware
                } else {
                    DecodeMode::Blind
                }
            }
            Some(other) => {
                return Err(Error::Invalid(format!(
                    "{label}: decode must be aware or blind, got {other:?}"
                )))
            }
        };
        let seed = match kv.get("seed") {
            Some(s) => s
                .parse()
                .map_err(|_| Error::Invalid(format!("{label}: bad seed {s:?}")))?,
            None => DEFAULT_SEED,
        };
        Ok(PipelineConfig {
            lang: required("lang")?,
            test_graphemes: required("test_graphemes")?.into(),
            test_phonemes: required("test_phonemes")?.into(),
            lexicon_graphemes: required("lexicon_graphemes")?.into(),
            lexicon_phonemes: required("lexicon_phonemes")?.into(),
            merge_map: kv.get("merge_map").map(PathBuf::from),
            noise_model: kv.get("noise_model").map(PathBuf::from),
            channel,
            decode,
            seed,
            report: kv.get("report").map(PathBuf::from),
        })
    }

    /// Every referenced artifact must exist before any work starts.
    pub fn validate_paths(&self) -> Result<()> {
        let mut paths: Vec<(&str, &Path)> = vec![
            ("test_graphemes", &self.test_graphemes),
            ("test_phonemes", &self.test_phonemes),
            ("lexicon_graphemes", &self.lexicon_graphemes),
            ("lexicon_phonemes", &self.lexicon_phonemes),
        ];
        if let Some(p) = &self.merge_map {
            paths.push(("merge_map", p));
        }
        if let Some(p) = &self.noise_model {
            paths.push(("noise_model", p));
        }
        for (key, path) in paths {
            if !path.exists() {
                return Err(Error::Invalid(format!(
                    "missing artifact: {key} = {}",
                    path.display()
                )));
            }
        }
        if matches!(self.channel, ChannelSpec::Statistical) && self.noise_model.is_none() {
            return Err(Error::Invalid(
                "statistical channel requires noise_model".into(),
            ));
        }
        if self.decode == DecodeMode::Aware && self.noise_model.is_none() {
            return Err(Error::Invalid(
                "noise-aware decoding requires noise_model".into(),
            ));
        }
        Ok(())
    }
}

/// Phoneme- and grapheme-level results of one pipeline run. The headline
/// [`EvalReport`] carries word-level counts; `per` is the phoneme rate of
/// the channel output against the clean phonemes.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub report: EvalReport,
    pub noisy_phonemes: Vec<String>,
    pub hypotheses: Vec<String>,
}

/// Run the two-pass evaluation described by the config: apply the channel,
/// decode, and score. `workdir` hosts scratch files for external channels.
pub fn run_pipeline(config: &PipelineConfig, workdir: impl AsRef<Path>) -> Result<PipelineOutcome> {
    config.validate_paths()?;

    let test = ParallelCorpus::load(&config.lang, &config.test_graphemes, &config.test_phonemes)?;
    let train = ParallelCorpus::load(
        &config.lang,
        &config.lexicon_graphemes,
        &config.lexicon_phonemes,
    )?;
    if test.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let model = config
        .noise_model
        .as_ref()
        .map(TriphoneNoiseModel::load)
        .transpose()?;

    // optional merged-vocabulary run: both the lexicon corpus and the test
    // phonemes move into merged units
    let (train, test) = match &config.merge_map {
        Some(path) => {
            let map = PivotMergeMap::load(path)?;
            let map_side = |corpus: &ParallelCorpus| -> Result<ParallelCorpus> {
                let phonemes: Vec<String> =
                    corpus.records.iter().map(|(_, p)| p.clone()).collect();
                let merged = map.apply_corpus(&config.lang, &phonemes)?;
                Ok(ParallelCorpus {
                    lang_id: corpus.lang_id.clone(),
                    records: corpus
                        .records
                        .iter()
                        .zip(merged)
                        .map(|((g, _), p)| (g.clone(), p))
                        .collect(),
                })
            };
            (map_side(&train)?, map_side(&test)?)
        }
        None => (train, test),
    };

    let lexicon = P2gLexicon::build(&train)?;

    let clean_phonemes: Vec<String> = test.records.iter().map(|(_, p)| p.clone()).collect();
    let ref_graphemes: Vec<String> = test.records.iter().map(|(g, _)| g.clone()).collect();

    let channel: Box<dyn NoiseChannel> = match &config.channel {
        ChannelSpec::Identity => Box::new(IdentityChannel),
        ChannelSpec::Statistical => Box::new(StatisticalChannel::new(
            model.clone().expect("validated: statistical needs a model"),
        )),
        ChannelSpec::External(spec) => Box::new(ExternalChannel::new(
            ExternalCommand::parse(spec)?,
            workdir.as_ref(),
        )),
    };
    let noisy_phonemes = channel.corrupt_corpus(&clean_phonemes, &config.lang, config.seed)?;

    let decode_model = match config.decode {
        DecodeMode::Aware => model.as_ref(),
        DecodeMode::Blind => None,
    };
    let hypotheses: Vec<String> = noisy_phonemes
        .par_iter()
        .map(|utt| lexicon.decode_utterance(utt, decode_model))
        .collect();

    let mut word_total = ErrorCounts::default();
    let mut phone_total = ErrorCounts::default();
    let mut utterances = Vec::with_capacity(test.len());
    for (idx, ((clean, noisy), (reference, hypothesis))) in clean_phonemes
        .iter()
        .zip(&noisy_phonemes)
        .zip(ref_graphemes.iter().zip(&hypotheses))
        .enumerate()
    {
        let pc = per(clean, noisy, idx + 1)?;
        let wc = wer(reference, hypothesis, idx + 1)?;
        phone_total.accumulate(&pc);
        word_total.accumulate(&wc);
        utterances.push(UtteranceReport {
            index: idx,
            per: Some(pc.rate()),
            wer: Some(wc.rate()),
        });
    }
    let report = EvalReport {
        per: Some(phone_total.rate::<Score>()),
        wer: Some(word_total.rate::<Score>()),
        substitutions: word_total.substitutions,
        insertions: word_total.insertions,
        deletions: word_total.deletions,
        ref_len: word_total.ref_len,
        utterances,
    };
    if let Some(path) = &config.report {
        let json = serde_json::to_string_pretty(&report).map_err(|e| {
            Error::Invalid(format!("report serialization failed: {e}"))
        })?;
        crate::corpus::write_atomic(path, &format!("{json}\n"))?;
    }
    Ok(PipelineOutcome {
        report,
        noisy_phonemes,
        hypotheses,
    })
}
