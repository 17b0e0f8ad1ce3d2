use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Subcommand;
use phonekit::corpus::{read_text_lines, write_lines_atomic};
use phonekit::noise::{align_sequences, apply_pseudo_noise, TriphoneNoiseModel};
use phonekit::{mix_seed, DEFAULT_SEED};

#[derive(Subcommand)]
pub enum NoiseCmd {
    /// Align clean/noisy corpora; one JSON op array per line.
    Align {
        #[arg(long)]
        clean: PathBuf,
        #[arg(long)]
        noisy: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mine a triphone substitution model from a clean/noisy pair file.
    Analyze {
        /// `clean<TAB>noisy` per line
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pseudo-label a clean corpus with the mined noise model.
    Apply {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// noisy copies to emit per clean corpus (output is concatenated)
        #[arg(long, default_value_t = 1)]
        copies: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn read_pair_file(path: &PathBuf) -> Result<Vec<(String, String)>> {
    read_text_lines(path)?
        .into_iter()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(idx, line)| {
            line.split_once('\t')
                .map(|(c, n)| (c.to_string(), n.to_string()))
                .with_context(|| {
                    format!("{}:{}: expected \"clean<TAB>noisy\"", path.display(), idx + 1)
                })
        })
        .collect()
}

pub fn run(cmd: NoiseCmd) -> Result<()> {
    match cmd {
        NoiseCmd::Align { clean, noisy, out } => {
            let clean_lines = read_text_lines(&clean)?;
            let noisy_lines = read_text_lines(&noisy)?;
            anyhow::ensure!(
                clean_lines.len() == noisy_lines.len(),
                "line counts differ: {} vs {}",
                clean_lines.len(),
                noisy_lines.len()
            );
            super::count_lines("pairs", clean_lines.len());
            let mut rows = Vec::with_capacity(clean_lines.len());
            for (c, n) in clean_lines.iter().zip(&noisy_lines) {
                let ct: Vec<&str> = c.split_whitespace().collect();
                let nt: Vec<&str> = n.split_whitespace().collect();
                let aligned = align_sequences(&ct, &nt);
                rows.push(serde_json::to_string(&aligned.ops)?);
            }
            write_lines_atomic(&out, &rows)?;
            Ok(())
        }
        NoiseCmd::Analyze {
            pairs,
            features,
            out,
        } => {
            let table = super::feature_table(&features)?;
            let pairs = read_pair_file(&pairs)?;
            super::count_lines("pairs", pairs.len());
            let model = TriphoneNoiseModel::analyze(&pairs, &table)?;
            model.save(&out)?;
            Ok(())
        }
        NoiseCmd::Apply {
            corpus,
            model,
            seed,
            copies,
            out,
        } => {
            let lines = read_text_lines(&corpus)?;
            super::count_lines("corpus", lines.len());
            let model = TriphoneNoiseModel::load(&model)?;
            let mut output = Vec::with_capacity(lines.len() * copies as usize);
            for copy in 0..copies {
                output.extend(apply_pseudo_noise(&lines, &model, mix_seed(seed, copy)));
            }
            write_lines_atomic(&out, &output)?;
            Ok(())
        }
    }
}
