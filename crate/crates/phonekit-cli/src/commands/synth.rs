use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use phonekit::corpus::write_lines_atomic;
use phonekit::toy::{synth_corpus, SynthSpec, ToyG2pRules};
use phonekit::DEFAULT_SEED;

#[derive(Subcommand)]
pub enum SynthCmd {
    /// Sample a toy-language parallel corpus from a rule file.
    Make {
        /// `grapheme<TAB>phonemes` rewrite rules
        #[arg(long)]
        rules: PathBuf,
        #[arg(long, default_value_t = 200)]
        sentences: usize,
        #[arg(long, default_value_t = 60)]
        words: usize,
        #[arg(long, default_value_t = 2)]
        min_word_len: usize,
        #[arg(long, default_value_t = 4)]
        max_word_len: usize,
        #[arg(long, default_value_t = 3)]
        min_sentence_len: usize,
        #[arg(long, default_value_t = 8)]
        max_sentence_len: usize,
        /// Zipf exponent for word frequencies
        #[arg(long, default_value_t = 1.1)]
        zipf: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out_graphemes: PathBuf,
        #[arg(long)]
        out_phonemes: PathBuf,
        /// sampled word list in rank order
        #[arg(long)]
        out_words: Option<PathBuf>,
    },
}

pub fn run(cmd: SynthCmd) -> Result<()> {
    match cmd {
        SynthCmd::Make {
            rules,
            sentences,
            words,
            min_word_len,
            max_word_len,
            min_sentence_len,
            max_sentence_len,
            zipf,
            seed,
            out_graphemes,
            out_phonemes,
            out_words,
        } => {
            let rules = ToyG2pRules::load(&rules)?;
            let spec = SynthSpec {
                n_words: words,
                word_len: (min_word_len, max_word_len),
                sentence_len: (min_sentence_len, max_sentence_len),
                n_sentences: sentences,
                zipf,
                seed,
            };
            let corpus = synth_corpus(&rules, &spec)?;
            super::count_lines("sentences", corpus.graphemes.len());
            write_lines_atomic(&out_graphemes, &corpus.graphemes)?;
            write_lines_atomic(&out_phonemes, &corpus.phonemes)?;
            if let Some(path) = out_words {
                write_lines_atomic(&path, &corpus.words)?;
            }
            Ok(())
        }
    }
}
