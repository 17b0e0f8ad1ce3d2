use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Subcommand;
use phonekit::corpus::{read_text_lines, write_atomic, write_lines_atomic};
use phonekit::ppm::{coverage, PivotMergeMap, PivotSet};
use phonekit::Score;

#[derive(Subcommand)]
pub enum PpmCmd {
    /// Select the top-K pivots by summed occurrence probability.
    Pivots {
        /// directory of per-language `*.tsv` vocabularies
        #[arg(long)]
        vocabs: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        features: Option<PathBuf>,
        /// pivot file, `token<TAB>score` descending
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a merge map (`--vocabs --pivots --t`), or apply one to a
    /// corpus (`--map --corpus --lang`).
    Merge {
        #[arg(long, requires = "pivots", conflicts_with = "map")]
        vocabs: Option<PathBuf>,
        #[arg(long)]
        pivots: Option<PathBuf>,
        /// threshold distance; merge when the nearest pivot is within it
        #[arg(long, requires = "vocabs")]
        t: Option<Score>,
        #[arg(long)]
        features: Option<PathBuf>,
        /// existing merge map to apply
        #[arg(long, requires_all = ["corpus", "lang"])]
        map: Option<PathBuf>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        lang: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-lingual coverage of (optionally merged) vocabularies.
    Coverage {
        #[arg(long)]
        vocabs: PathBuf,
        #[arg(long)]
        merge_map: Option<PathBuf>,
        #[arg(long)]
        features: Option<PathBuf>,
        /// `lang<TAB>coverage` rows plus an `average` row; stdout if absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: PpmCmd) -> Result<()> {
    match cmd {
        PpmCmd::Pivots {
            vocabs,
            k,
            features,
            out,
        } => {
            let table = super::feature_table(&features)?;
            let vocabs = super::load_vocab_dir(&vocabs, &table)?;
            let pivots = PivotSet::select(&vocabs, k)?;
            pivots.save(&out)?;
            Ok(())
        }
        PpmCmd::Merge {
            vocabs,
            pivots,
            t,
            features,
            map,
            corpus,
            lang,
            out,
        } => {
            if let Some(map_path) = map {
                let map = PivotMergeMap::load(&map_path)?;
                let corpus = corpus.expect("clap enforces --corpus with --map");
                let lang = lang.expect("clap enforces --lang with --map");
                let lines = read_text_lines(&corpus)?;
                super::count_lines("corpus", lines.len());
                let merged = map.apply_corpus(&lang, &lines)?;
                write_lines_atomic(&out, &merged)?;
                return Ok(());
            }
            let (Some(vocabs), Some(pivots), Some(t)) = (vocabs, pivots, t) else {
                bail!("merge needs either --map --corpus --lang or --vocabs --pivots --t");
            };
            let table = super::feature_table(&features)?;
            let vocabs = super::load_vocab_dir(&vocabs, &table)?;
            let pivots = PivotSet::load(&pivots)?;
            let map = PivotMergeMap::build(&vocabs, &pivots, t, &table)?;
            map.save(&out)?;
            Ok(())
        }
        PpmCmd::Coverage {
            vocabs,
            merge_map,
            features,
            out,
        } => {
            let table = super::feature_table(&features)?;
            let vocabs = super::load_vocab_dir(&vocabs, &table)?;
            let sets: Vec<(String, std::collections::BTreeSet<String>)> = match merge_map {
                Some(path) => {
                    let map = PivotMergeMap::load(&path)?;
                    vocabs
                        .iter()
                        .map(|v| {
                            map.merged_vocab(&v.lang_id).ok_or_else(|| {
                                anyhow::anyhow!("merge map has no language {:?}", v.lang_id)
                            })
                            .map(|set| (v.lang_id.clone(), set))
                        })
                        .collect::<Result<_>>()?
                }
                None => vocabs
                    .iter()
                    .map(|v| (v.lang_id.clone(), v.token_set()))
                    .collect(),
            };
            let (per_language, average) = coverage::<Score>(&sets)?;
            let mut text = String::new();
            for (lang, cov) in &per_language {
                text.push_str(&format!("{lang}\t{cov}\n"));
            }
            text.push_str(&format!("average\t{average}\n"));
            match out {
                Some(path) => write_atomic(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}
