use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Subcommand;
use phonekit::corpus::write_atomic;
use phonekit::gpn::{prepare_gpn_training_data, GpnInput, NoiseSource};
use phonekit::DEFAULT_SEED;

#[derive(Subcommand)]
pub enum GpnCmd {
    /// Concatenate per-language K-fold and triphone pair files into one
    /// shuffled, language- and source-tagged training set.
    Prepare {
        /// K-fold pair file per language, as `lang=path`; repeatable
        #[arg(long = "kfold", value_name = "LANG=FILE")]
        kfold: Vec<String>,
        /// triphone-labeled pair file per language, as `lang=path`
        #[arg(long = "triphone", value_name = "LANG=FILE")]
        triphone: Vec<String>,
        /// per-language vocabularies (directory of `lang.tsv`) used to
        /// validate every pair token
        #[arg(long)]
        vocabs: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// `lang<TAB>source<TAB>clean<TAB>noisy` output
        #[arg(long)]
        out: PathBuf,
        /// per-language, per-source counts; defaults to `<out>.manifest`
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

fn parse_tagged(args: &[String], source: NoiseSource) -> Result<Vec<GpnInput>> {
    args.iter()
        .map(|arg| {
            let (lang, path) = arg
                .split_once('=')
                .with_context(|| format!("expected LANG=FILE, got {arg:?}"))?;
            let pairs = super::noise::read_pair_file(&PathBuf::from(path))?;
            Ok(GpnInput {
                lang: lang.to_string(),
                source,
                pairs,
            })
        })
        .collect()
}

pub fn run(cmd: GpnCmd) -> Result<()> {
    match cmd {
        GpnCmd::Prepare {
            kfold,
            triphone,
            vocabs,
            seed,
            out,
            manifest,
        } => {
            let mut inputs = parse_tagged(&kfold, NoiseSource::Kfold)?;
            inputs.extend(parse_tagged(&triphone, NoiseSource::Triphone)?);
            let vocab_sets: Option<BTreeMap<String, BTreeSet<String>>> = match vocabs {
                Some(dir) => {
                    let table = super::feature_table(&None)?;
                    let vocabs = super::load_vocab_dir(&dir, &table)?;
                    Some(
                        vocabs
                            .into_iter()
                            .map(|v| {
                                let set = v.token_set();
                                (v.lang_id, set)
                            })
                            .collect(),
                    )
                }
                None => None,
            };
            let set = prepare_gpn_training_data(&inputs, vocab_sets.as_ref(), seed)?;
            super::count_lines("pairs", set.pairs.len());
            set.save(&out)?;
            let manifest_path = manifest.unwrap_or_else(|| {
                let mut p = out.clone();
                p.set_extension(match p.extension() {
                    Some(ext) => format!("{}.manifest", ext.to_string_lossy()),
                    None => "manifest".to_string(),
                });
                p
            });
            write_atomic(&manifest_path, &set.manifest_string())?;
            Ok(())
        }
    }
}
