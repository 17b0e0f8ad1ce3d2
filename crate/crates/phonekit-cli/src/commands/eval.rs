use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use phonekit::corpus::{read_text_lines, write_atomic};
use phonekit::metrics::{evaluate_corpus, Metric};

#[derive(Subcommand)]
pub enum EvalCmd {
    /// Phoneme error rate of a hypothesis corpus against references.
    Per {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        /// JSON report; stdout if absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Word error rate of a hypothesis corpus against references.
    Wer {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn evaluate(reference: &PathBuf, hyp: &PathBuf, metric: Metric, out: Option<PathBuf>) -> Result<()> {
    let refs = read_text_lines(reference)?;
    let hyps = read_text_lines(hyp)?;
    super::count_lines("records", refs.len());
    let report = evaluate_corpus(&refs, &hyps, metric)?;
    let json = serde_json::to_string_pretty(&report)?;
    match out {
        Some(path) => write_atomic(&path, &format!("{json}\n"))?,
        None => println!("{json}"),
    }
    Ok(())
}

pub fn run(cmd: EvalCmd) -> Result<()> {
    match cmd {
        EvalCmd::Per {
            reference,
            hyp,
            out,
        } => evaluate(&reference, &hyp, Metric::Per, out),
        EvalCmd::Wer {
            reference,
            hyp,
            out,
        } => evaluate(&reference, &hyp, Metric::Wer, out),
    }
}
