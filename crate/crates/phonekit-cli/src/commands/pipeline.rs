use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use phonekit::pipeline::{run_pipeline, PipelineConfig};

#[derive(Subcommand)]
pub enum PipelineCmd {
    /// Run the two-pass evaluation described by a `key = value` config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// scratch directory for external channels
        #[arg(long)]
        workdir: Option<PathBuf>,
    },
}

pub fn run(cmd: PipelineCmd) -> Result<()> {
    match cmd {
        PipelineCmd::Run { config, workdir } => {
            let config = PipelineConfig::parse_file(&config)?;
            let scratch;
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
            let outcome = run_pipeline(&config, &dir)?;
            super::count_lines("utterances", outcome.report.utterances.len());
            if config.report.is_none() {
                println!("{}", serde_json::to_string_pretty(&outcome.report)?);
            }
            Ok(())
        }
    }
}
