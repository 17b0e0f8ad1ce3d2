use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use phonekit::corpus::read_text_lines;
use phonekit::ppm::LanguageVocabulary;

#[derive(Subcommand)]
pub enum VocabCmd {
    /// Count token types over a phoneme corpus into `token<TAB>count`.
    Build {
        /// phoneme corpus, one utterance per line
        #[arg(long)]
        corpus: PathBuf,
        /// 2-letter language code
        #[arg(long)]
        lang: String,
        /// feature table (defaults to the bundled one)
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn run(cmd: VocabCmd) -> Result<()> {
    match cmd {
        VocabCmd::Build {
            corpus,
            lang,
            features,
            out,
        } => {
            let table = super::feature_table(&features)?;
            let lines = read_text_lines(&corpus)?;
            super::count_lines("corpus", lines.len());
            let vocab = LanguageVocabulary::build(&lang, &lines, &table)?;
            vocab.save(&out)?;
            Ok(())
        }
    }
}
