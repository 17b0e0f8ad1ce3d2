//! Global phoneme noise: multilingual training-data preparation from
//! K-fold and triphone-labeled sources, and the noise-channel abstraction
//! a trained generator plugs into.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{read_text_lines, write_lines_atomic, ExternalCommand};
use crate::error::{Error, Result};
use crate::noise::{apply_pseudo_noise_line, TriphoneNoiseModel};
use crate::{mix_seed, WORD_DELIMITER};

/// Where a clean/noisy pair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NoiseSource {
    Kfold,
    Triphone,
}

impl fmt::Display for NoiseSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseSource::Kfold => "kfold",
            NoiseSource::Triphone => "triphone",
        })
    }
}

impl std::str::FromStr for NoiseSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<NoiseSource> {
        match s {
            "kfold" => Ok(NoiseSource::Kfold),
            "triphone" => Ok(NoiseSource::Triphone),
            other => Err(Error::Invalid(format!("unknown noise source {other:?}"))),
        }
    }
}

/// One language's pair stream from one source.
#[derive(Debug, Clone)]
pub struct GpnInput {
    pub lang: String,
    pub source: NoiseSource,
    pub pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct GpnPair {
    pub lang: String,
    pub source: NoiseSource,
    pub clean: String,
    pub noisy: String,
}

impl GpnPair {
    /// Model-ready clean line: language conveyed as a reserved first token.
    pub fn tagged_clean(&self) -> String {
        if self.clean.is_empty() {
            format!("<lang:{}>", self.lang)
        } else {
            format!("<lang:{}> {}", self.lang, self.clean)
        }
    }
}

/// Language- and source-tagged multilingual pair set with per-source counts.
#[derive(Debug, Clone)]
pub struct GpnTrainingSet {
    pub pairs: Vec<GpnPair>,
    pub manifest: BTreeMap<(String, NoiseSource), u64>,
}

/// Concatenate the per-language inputs, validate them against the optional
/// per-language vocabularies, shuffle deterministically, and count.
pub fn prepare_gpn_training_data(
    inputs: &[GpnInput],
    vocabs: Option<&BTreeMap<String, BTreeSet<String>>>,
    seed: u64,
) -> Result<GpnTrainingSet> {
    if inputs.is_empty() {
        return Err(Error::Invalid("no input pair streams".into()));
    }
    let mut seen_tags = BTreeSet::new();
    let mut pairs = Vec::new();
    let mut manifest: BTreeMap<(String, NoiseSource), u64> = BTreeMap::new();
    for input in inputs {
        if !seen_tags.insert((input.lang.clone(), input.source)) {
            return Err(Error::TagCollision {
                lang: input.lang.clone(),
                tag: input.source.to_string(),
            });
        }
        if let Some(vocabs) = vocabs {
            let vocab = vocabs.get(&input.lang).ok_or_else(|| {
                Error::Invalid(format!("no vocabulary for language {:?}", input.lang))
            })?;
            for (idx, (clean, noisy)) in input.pairs.iter().enumerate() {
                for tok in clean.split_whitespace().chain(noisy.split_whitespace()) {
                    if tok != WORD_DELIMITER && !vocab.contains(tok) {
                        return Err(Error::Parse {
                            path: format!("{}/{}", input.lang, input.source),
                            line: idx + 1,
                            msg: format!("token {tok:?} outside the language vocabulary"),
                        });
                    }
                }
            }
        }
        manifest.insert(
            (input.lang.clone(), input.source),
            input.pairs.len() as u64,
        );
        for (clean, noisy) in &input.pairs {
            pairs.push(GpnPair {
                lang: input.lang.clone(),
                source: input.source,
                clean: clean.clone(),
                noisy: noisy.clone(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    Ok(GpnTrainingSet { pairs, manifest })
}

impl GpnTrainingSet {
    /// `lang<TAB>source<TAB>clean<TAB>noisy` per pair.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                p.lang, p.source, p.clean, p.noisy
            ));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::corpus::write_atomic(path, &self.to_file_string())
    }

    /// `lang<TAB>source<TAB>count` rows.
    pub fn manifest_string(&self) -> String {
        let mut out = String::new();
        for ((lang, source), count) in &self.manifest {
            out.push_str(&format!("{lang}\t{source}\t{count}\n"));
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<GpnTrainingSet> {
        let path = path.as_ref();
        let label = path.display().to_string();
        let mut pairs = Vec::new();
        let mut manifest: BTreeMap<(String, NoiseSource), u64> = BTreeMap::new();
        for (idx, line) in read_text_lines(path)?.iter().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::parse(
                    &label,
                    idx + 1,
                    "expected \"lang<TAB>source<TAB>clean<TAB>noisy\"",
                ));
            }
            let source: NoiseSource = fields[1].parse()?;
            *manifest
                .entry((fields[0].to_string(), source))
                .or_insert(0) += 1;
            pairs.push(GpnPair {
                lang: fields[0].to_string(),
                source,
                clean: fields[2].to_string(),
                noisy: fields[3].to_string(),
            });
        }
        Ok(GpnTrainingSet { pairs, manifest })
    }
}

/// A clean-to-noisy rewriting channel. Implementations must be safe to
/// call concurrently and never change line counts.
pub trait NoiseChannel: Send + Sync {
    fn corrupt_utterance(&self, line: &str, lang: &str, seed: u64) -> Result<String>;

    /// Whole-corpus form; the default derives one seed per line so output
    /// is independent of sharding.
    fn corrupt_corpus(&self, lines: &[String], lang: &str, seed: u64) -> Result<Vec<String>> {
        lines
            .iter()
            .enumerate()
            .map(|(idx, line)| self.corrupt_utterance(line, lang, mix_seed(seed, idx as u64)))
            .collect()
    }
}

pub struct IdentityChannel;

impl NoiseChannel for IdentityChannel {
    fn corrupt_utterance(&self, line: &str, _lang: &str, _seed: u64) -> Result<String> {
        Ok(line.to_string())
    }
}

/// Statistical stand-in for a trained noise generator: replays the mined
/// triphone replacement probabilities over single utterances.
pub struct StatisticalChannel {
    model: TriphoneNoiseModel,
}

impl StatisticalChannel {
    pub fn new(model: TriphoneNoiseModel) -> Self {
        StatisticalChannel { model }
    }

    pub fn model(&self) -> &TriphoneNoiseModel {
        &self.model
    }
}

impl NoiseChannel for StatisticalChannel {
    fn corrupt_utterance(&self, line: &str, _lang: &str, seed: u64) -> Result<String> {
        // seed is already line-mixed by corrupt_corpus; index 0 keeps the
        // single-utterance call deterministic
        Ok(apply_pseudo_noise_line(line, &self.model, seed, 0))
    }
}

/// Batch file protocol for an externally trained generator:
/// `cmd --in <file> --out <file> --lang <id> --seed <int>`.
pub struct ExternalChannel {
    pub cmd: ExternalCommand,
    pub workdir: PathBuf,
}

impl ExternalChannel {
    pub fn new(cmd: ExternalCommand, workdir: impl Into<PathBuf>) -> Self {
        ExternalChannel {
            cmd,
            workdir: workdir.into(),
        }
    }
}

impl NoiseChannel for ExternalChannel {
    fn corrupt_utterance(&self, line: &str, lang: &str, seed: u64) -> Result<String> {
        let out = self.corrupt_corpus(std::slice::from_ref(&line.to_string()), lang, seed)?;
        Ok(out.into_iter().next().expect("one line in, one line out"))
    }

    fn corrupt_corpus(&self, lines: &[String], lang: &str, seed: u64) -> Result<Vec<String>> {
        let in_path = self.workdir.join(format!("channel.{lang}.{seed}.in"));
        let out_path = self.workdir.join(format!("channel.{lang}.{seed}.out"));
        write_lines_atomic(&in_path, lines)?;
        self.cmd.run(&[
            "--in",
            &in_path.display().to_string(),
            "--out",
            &out_path.display().to_string(),
            "--lang",
            lang,
            "--seed",
            &seed.to_string(),
        ])?;
        let out = read_text_lines(&out_path)?;
        if out.len() != lines.len() {
            return Err(Error::LineCountMismatch {
                left: in_path.display().to_string(),
                left_lines: lines.len(),
                right: out_path.display().to_string(),
                right_lines: out.len(),
            });
        }
        Ok(out)
    }
}
