//! K-fold clean/noisy pair assembly with a pluggable recognizer: each fold
//! is recognized by a model trained on the remaining folds, so the whole
//! train set gets a noisy transcription.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{read_text_lines, write_lines_atomic, ExternalCommand};
use crate::error::{Error, Result};
use crate::{mix_seed, Score, WORD_DELIMITER};

/// Deterministic balanced partition of record indices into folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub n_folds: usize,
    pub seed: u64,
    /// fold id per record index
    pub assignment: Vec<usize>,
}

/// Shuffle the indices with the seed, then deal balanced contiguous
/// chunks: the first `n % k` folds take one extra record.
pub fn split_folds(n_records: usize, n_folds: usize, seed: u64) -> Result<FoldPlan> {
    if n_folds < 2 {
        return Err(Error::Invalid("need at least 2 folds".into()));
    }
    if n_records < n_folds {
        return Err(Error::TooFewRecords {
            records: n_records,
            folds: n_folds,
        });
    }
    let mut order: Vec<usize> = (0..n_records).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let base = n_records / n_folds;
    let extra = n_records % n_folds;
    let mut assignment = vec![0usize; n_records];
    let mut cursor = 0;
    for fold in 0..n_folds {
        let size = base + usize::from(fold < extra);
        for &idx in &order[cursor..cursor + size] {
            assignment[idx] = fold;
        }
        cursor += size;
    }
    Ok(FoldPlan {
        n_folds,
        seed,
        assignment,
    })
}

impl FoldPlan {
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n_folds];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }

    /// `index<TAB>fold` rows under a header comment.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("# n_folds={} seed={}\n", self.n_folds, self.seed);
        for (idx, fold) in self.assignment.iter().enumerate() {
            out.push_str(&format!("{idx}\t{fold}\n"));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::corpus::write_atomic(path, &self.to_file_string())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FoldPlan> {
        let path = path.as_ref();
        let label = path.display().to_string();
        let mut n_folds = 0;
        let mut seed = 0;
        let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
        for (idx, line) in read_text_lines(path)?.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix("# n_folds=") {
                let (k, s) = header
                    .split_once(" seed=")
                    .ok_or_else(|| Error::parse(&label, idx + 1, "malformed header"))?;
                n_folds = k
                    .parse()
                    .map_err(|_| Error::parse(&label, idx + 1, "bad n_folds"))?;
                seed = s
                    .parse()
                    .map_err(|_| Error::parse(&label, idx + 1, "bad seed"))?;
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let (i, f) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(&label, idx + 1, "expected \"index<TAB>fold\""))?;
            let i: usize = i
                .parse()
                .map_err(|_| Error::parse(&label, idx + 1, "bad index"))?;
            let f: usize = f
                .parse()
                .map_err(|_| Error::parse(&label, idx + 1, "bad fold"))?;
            rows.insert(i, f);
        }
        let n = rows.len();
        if n == 0 || rows.keys().copied().ne(0..n) {
            return Err(Error::Invalid(format!("{label}: fold plan indices not contiguous")));
        }
        Ok(FoldPlan {
            n_folds,
            seed,
            assignment: rows.into_values().collect(),
        })
    }
}

/// Train-then-infer contract for one fold: given the training records and
/// the held-out records, return one hypothesis line per held-out record.
pub trait Recognizer {
    fn run_fold(&self, fold: usize, train: &[String], heldout: &[String]) -> Result<Vec<String>>;
}

/// Echoes the held-out records; useful as a no-noise baseline.
pub struct IdentityRecognizer;

impl Recognizer for IdentityRecognizer {
    fn run_fold(&self, _fold: usize, _train: &[String], heldout: &[String]) -> Result<Vec<String>> {
        Ok(heldout.to_vec())
    }
}

/// Simulated recognizer: a fixed confusion channel that substitutes each
/// mapped token independently with the configured rate. Ignores the
/// training split, which makes channel parameters exactly recoverable.
pub struct ConfusionRecognizer {
    pub rate: Score,
    pub map: BTreeMap<String, String>,
    pub seed: u64,
}

impl ConfusionRecognizer {
    pub fn new(rate: Score, map: BTreeMap<String, String>, seed: u64) -> Self {
        ConfusionRecognizer { rate, map, seed }
    }

    /// `from<TAB>to` rows.
    pub fn load_map(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
        let path = path.as_ref();
        let label = path.display().to_string();
        let mut map = BTreeMap::new();
        for (idx, line) in read_text_lines(path)?.iter().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (from, to) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(&label, idx + 1, "expected \"from<TAB>to\""))?;
            map.insert(from.to_string(), to.to_string());
        }
        Ok(map)
    }

    pub fn corrupt_line(&self, line: &str, rng: &mut impl Rng) -> String {
        let out: Vec<&str> = line
            .split_whitespace()
            .map(|tok| {
                if tok == WORD_DELIMITER {
                    return tok;
                }
                let fire = rng.gen::<f64>() < self.rate;
                match self.map.get(tok) {
                    Some(to) if fire => to.as_str(),
                    _ => tok,
                }
            })
            .collect();
        out.join(" ")
    }
}

impl Recognizer for ConfusionRecognizer {
    fn run_fold(&self, fold: usize, _train: &[String], heldout: &[String]) -> Result<Vec<String>> {
        Ok(heldout
            .iter()
            .enumerate()
            .map(|(i, line)| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(mix_seed(mix_seed(self.seed, fold as u64), i as u64));
                self.corrupt_line(line, &mut rng)
            })
            .collect())
    }
}

/// File-protocol recognizer: `cmd --train <file> --infer <file> --out <file>`,
/// one record per line; a nonzero exit status aborts the fold.
pub struct SubprocessRecognizer {
    pub cmd: ExternalCommand,
    pub workdir: PathBuf,
}

impl Recognizer for SubprocessRecognizer {
    fn run_fold(&self, fold: usize, train: &[String], heldout: &[String]) -> Result<Vec<String>> {
        let train_path = self.workdir.join(format!("fold{fold}.train"));
        let infer_path = self.workdir.join(format!("fold{fold}.infer"));
        let out_path = self.workdir.join(format!("fold{fold}.out"));
        write_lines_atomic(&train_path, train)?;
        write_lines_atomic(&infer_path, heldout)?;
        self.cmd.run(&[
            "--train",
            &train_path.display().to_string(),
            "--infer",
            &infer_path.display().to_string(),
            "--out",
            &out_path.display().to_string(),
        ])?;
        read_text_lines(&out_path)
    }
}

/// Run every fold: train on the rest, recognize the held-out records, and
/// stitch the hypotheses back in original record order.
pub fn assemble_noisy_pairs(
    records: &[String],
    plan: &FoldPlan,
    recognizer: &dyn Recognizer,
) -> Result<Vec<(String, String)>> {
    if plan.assignment.len() != records.len() {
        return Err(Error::Invalid(format!(
            "fold plan covers {} records, corpus has {}",
            plan.assignment.len(),
            records.len()
        )));
    }
    let mut noisy: Vec<Option<String>> = vec![None; records.len()];
    for fold in 0..plan.n_folds {
        let mut train = Vec::new();
        let mut held = Vec::new();
        let mut held_idx = Vec::new();
        for (idx, record) in records.iter().enumerate() {
            if plan.assignment[idx] == fold {
                held.push(record.clone());
                held_idx.push(idx);
            } else {
                train.push(record.clone());
            }
        }
        let hyps = recognizer.run_fold(fold, &train, &held)?;
        if hyps.len() != held.len() {
            return Err(Error::FoldOutputMismatch {
                fold,
                got: hyps.len(),
                want: held.len(),
            });
        }
        for (idx, hyp) in held_idx.into_iter().zip(hyps) {
            noisy[idx] = Some(hyp);
        }
    }
    Ok(records
        .iter()
        .cloned()
        .zip(noisy.into_iter().map(|h| h.expect("folds partition indices")))
        .collect())
}
