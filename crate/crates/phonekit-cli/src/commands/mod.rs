pub mod eval;
pub mod gpn;
pub mod kfold;
pub mod noise;
pub mod pipeline;
pub mod ppm;
pub mod synth;
pub mod vocab;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use phonekit::phonology::FeatureTable;

/// Load `--features` when given, the bundled table otherwise.
pub fn feature_table(path: &Option<PathBuf>) -> Result<FeatureTable> {
    match path {
        Some(p) => FeatureTable::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(FeatureTable::shipped().clone()),
    }
}

/// Read every `*.tsv` vocabulary in a directory; the file stem names the
/// language. Sorted by language for deterministic downstream output.
pub fn load_vocab_dir(
    dir: &Path,
    table: &FeatureTable,
) -> Result<Vec<phonekit::ppm::LanguageVocabulary>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "tsv"))
        .collect();
    paths.sort();
    anyhow::ensure!(!paths.is_empty(), "no *.tsv vocabularies in {}", dir.display());
    let mut vocabs = Vec::with_capacity(paths.len());
    for path in paths {
        let lang = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        vocabs.push(
            phonekit::ppm::LanguageVocabulary::load(&lang, &path, table)
                .with_context(|| format!("loading {}", path.display()))?,
        );
    }
    Ok(vocabs)
}

/// Count lines to stderr, the only progress output the tool emits.
pub fn count_lines(label: &str, n: usize) {
    eprintln!("{label}: {n} lines");
}
