use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Subcommand;
use phonekit::corpus::{read_text_lines, write_lines_atomic, ExternalCommand};
use phonekit::kfold::{
    assemble_noisy_pairs, split_folds, ConfusionRecognizer, FoldPlan, IdentityRecognizer,
    Recognizer, SubprocessRecognizer,
};
use phonekit::{Score, DEFAULT_SEED};

#[derive(Subcommand)]
pub enum KfoldCmd {
    /// Partition record indices into balanced folds.
    Split {
        /// corpus whose line count is partitioned
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train/infer every fold and emit `clean<TAB>noisy` pairs in
    /// original record order.
    Run {
        #[arg(long)]
        records: PathBuf,
        /// reuse a saved fold plan instead of splitting
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// external recognizer: `cmd --train F --infer F --out F`
        #[arg(long, conflicts_with_all = ["identity", "confusion_rate"])]
        recognizer: Option<String>,
        /// echo the clean input (no-noise baseline)
        #[arg(long, conflicts_with = "confusion_rate")]
        identity: bool,
        /// simulated recognizer: per-token substitution rate
        #[arg(long, requires = "confusion_map")]
        confusion_rate: Option<Score>,
        /// `from<TAB>to` substitution table for the simulated recognizer
        #[arg(long)]
        confusion_map: Option<PathBuf>,
        /// scratch directory for the external recognizer protocol
        #[arg(long)]
        workdir: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn run(cmd: KfoldCmd) -> Result<()> {
    match cmd {
        KfoldCmd::Split {
            records,
            folds,
            seed,
            out,
        } => {
            let lines = read_text_lines(&records)?;
            super::count_lines("records", lines.len());
            let plan = split_folds(lines.len(), folds, seed)?;
            plan.save(&out)?;
            Ok(())
        }
        KfoldCmd::Run {
            records,
            plan,
            folds,
            seed,
            recognizer,
            identity,
            confusion_rate,
            confusion_map,
            workdir,
            out,
        } => {
            let lines = read_text_lines(&records)?;
            super::count_lines("records", lines.len());
            let plan = match plan {
                Some(path) => FoldPlan::load(&path)?,
                None => split_folds(lines.len(), folds, seed)?,
            };
            let scratch;
            let recognizer: Box<dyn Recognizer> = if let Some(spec) = recognizer {
                let dir = match workdir {
                    Some(dir) => {
                        std::fs::create_dir_all(&dir)?;
                        dir
                    }
                    None => {
                        scratch = tempfile::tempdir()?;
                        scratch.path().to_path_buf()
                    }
                };
                Box::new(SubprocessRecognizer {
                    cmd: ExternalCommand::parse(&spec)?,
                    workdir: dir,
                })
            } else if let Some(rate) = confusion_rate {
                let map = ConfusionRecognizer::load_map(
                    confusion_map.expect("clap enforces --confusion-map"),
                )?;
                Box::new(ConfusionRecognizer::new(rate, map, seed))
            } else if identity {
                Box::new(IdentityRecognizer)
            } else {
                bail!("pick a recognizer: --recognizer, --identity, or --confusion-rate");
            };
            let pairs = assemble_noisy_pairs(&lines, &plan, recognizer.as_ref())?;
            let rows: Vec<String> = pairs
                .into_iter()
                .map(|(clean, noisy)| format!("{clean}\t{noisy}"))
                .collect();
            write_lines_atomic(&out, &rows)?;
            Ok(())
        }
    }
}
