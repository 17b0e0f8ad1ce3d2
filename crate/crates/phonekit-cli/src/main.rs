//! Single entry point wiring the toolkit's modules into workflows:
//! vocabulary building, pivot merging, noise mining and application,
//! K-fold pair assembly, noise training-data preparation, evaluation,
//! and the toy-language synthesizer.

mod commands;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "phonekit", version, about, max_term_width = 100)]
struct Cli {
    /// Shard parallelism; output is independent of this value.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-language vocabulary operations
    #[command(subcommand)]
    Vocab(commands::vocab::VocabCmd),
    /// Pivot phoneme merging
    #[command(subcommand)]
    Ppm(commands::ppm::PpmCmd),
    /// ASR-noise alignment, mining, and application
    #[command(subcommand)]
    Noise(commands::noise::NoiseCmd),
    /// K-fold clean/noisy pair assembly
    #[command(subcommand)]
    Kfold(commands::kfold::KfoldCmd),
    /// Multilingual noise training-data preparation
    #[command(subcommand)]
    Gpn(commands::gpn::GpnCmd),
    /// Error-rate evaluation
    #[command(subcommand)]
    Eval(commands::eval::EvalCmd),
    /// End-to-end two-pass evaluation
    #[command(subcommand)]
    Pipeline(commands::pipeline::PipelineCmd),
    /// Synthetic toy-language corpora
    #[command(subcommand)]
    Synth(commands::synth::SynthCmd),
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // ignore failure: the global pool may already be configured
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let result = match cli.command {
        Command::Vocab(cmd) => commands::vocab::run(cmd),
        Command::Ppm(cmd) => commands::ppm::run(cmd),
        Command::Noise(cmd) => commands::noise::run(cmd),
        Command::Kfold(cmd) => commands::kfold::run(cmd),
        Command::Gpn(cmd) => commands::gpn::run(cmd),
        Command::Eval(cmd) => commands::eval::run(cmd),
        Command::Pipeline(cmd) => commands::pipeline::run(cmd),
        Command::Synth(cmd) => commands::synth::run(cmd),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
