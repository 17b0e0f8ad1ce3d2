//! Corpus readers and writers plus the external phonemizer interface.
//!
//! Corpora are UTF-8 text, one record per line. Phoneme utterances are
//! space-separated tokens with [`crate::WORD_DELIMITER`] between words.
//! Readers reject undecodable bytes and mixed line endings; writers emit
//! UTF-8 with `\n`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use crate::error::{Error, Result};
use crate::phonology::{FeatureTable, PhonemeToken};

/// Read a text file into lines. A file that mixes `\r\n` and bare `\n`
/// endings is rejected; a consistently `\r\n`-terminated file is accepted
/// and normalized.
pub fn read_text_lines(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let text = String::from_utf8(bytes).map_err(|e| {
        Error::parse(
            path.display().to_string(),
            0,
            format!("not valid UTF-8: {e}"),
        )
    })?;
    split_lines(&text, &path.display().to_string())
}

pub(crate) fn split_lines(text: &str, label: &str) -> Result<Vec<String>> {
    let mut saw_crlf = false;
    let mut saw_lf = false;
    let mut lines = Vec::new();
    for (idx, raw) in text.split_inclusive('\n').enumerate() {
        let line = match raw.strip_suffix('\n') {
            Some(body) => match body.strip_suffix('\r') {
                Some(body) => {
                    saw_crlf = true;
                    body
                }
                None => {
                    saw_lf = true;
                    body
                }
            },
            // final line without newline
            None => raw,
        };
        if line.contains('\r') {
            return Err(Error::parse(label, idx + 1, "stray carriage return"));
        }
        lines.push(line.to_string());
    }
    if saw_crlf && saw_lf {
        return Err(Error::parse(label, 0, "mixed \\r\\n and \\n line endings"));
    }
    Ok(lines)
}

/// Write lines atomically: temp file in the same directory, then rename.
pub fn write_lines_atomic(path: impl AsRef<Path>, lines: &[String]) -> Result<()> {
    let mut content = String::new();
    for line in lines {
        content.push_str(line);
        content.push('\n');
    }
    write_atomic(path, &content)
}

pub fn write_atomic(path: impl AsRef<Path>, content: &str) -> Result<()> {
    let path = path.as_ref();
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = PathBuf::from(dir);
    tmp.push(format!(
        ".{}.tmp.{}",
        path.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".into()),
        std::process::id()
    ));
    fs::write(&tmp, content).map_err(|e| Error::io(tmp.display().to_string(), e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Split an utterance into its whitespace-separated tokens.
pub fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

/// Aligned grapheme/phoneme record stream for one language.
#[derive(Debug, Clone)]
pub struct ParallelCorpus {
    pub lang_id: String,
    pub records: Vec<(String, String)>,
}

impl ParallelCorpus {
    pub fn load(
        lang_id: &str,
        grapheme_path: impl AsRef<Path>,
        phoneme_path: impl AsRef<Path>,
    ) -> Result<ParallelCorpus> {
        let graphemes = read_text_lines(&grapheme_path)?;
        let phonemes = read_text_lines(&phoneme_path)?;
        if graphemes.len() != phonemes.len() {
            return Err(Error::LineCountMismatch {
                left: grapheme_path.as_ref().display().to_string(),
                left_lines: graphemes.len(),
                right: phoneme_path.as_ref().display().to_string(),
                right_lines: phonemes.len(),
            });
        }
        Ok(ParallelCorpus {
            lang_id: lang_id.to_string(),
            records: graphemes.into_iter().zip(phonemes).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// An external executable invoked in batch file-in/file-out mode.
#[derive(Debug, Clone)]
pub struct ExternalCommand {
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalCommand {
    /// Parse a whitespace-separated command specification.
    pub fn parse(spec: &str) -> Result<ExternalCommand> {
        let mut parts = spec.split_whitespace().map(str::to_owned);
        let program = parts
            .next()
            .ok_or_else(|| Error::Invalid("empty command specification".into()))?;
        Ok(ExternalCommand {
            program,
            args: parts.collect(),
        })
    }

    /// Run with extra arguments appended; any nonzero exit status is an error.
    pub fn run(&self, extra: &[&str]) -> Result<()> {
        let status = Command::new(&self.program)
            .args(&self.args)
            .args(extra)
            .status()
            .map_err(|e| Error::io(self.program.clone(), e))?;
        if !status.success() {
            return Err(Error::ExternalCommand {
                cmd: self.display(),
                status: status.code().unwrap_or(-1),
            });
        }
        Ok(())
    }

    pub fn display(&self) -> String {
        let mut s = self.program.clone();
        for a in &self.args {
            s.push(' ');
            s.push_str(a);
        }
        s
    }
}

/// Run an external phonemizer (`cmd --in <graphemes> --out <phonemes>
/// --lang <id>`) over a grapheme corpus and pair its output line by line.
/// Output line counts are verified and every non-delimiter token must
/// segment against `table`.
pub fn phonemize_external(
    cmd: &ExternalCommand,
    grapheme_path: impl AsRef<Path>,
    lang_id: &str,
    table: &FeatureTable,
    workdir: impl AsRef<Path>,
) -> Result<ParallelCorpus> {
    let grapheme_path = grapheme_path.as_ref();
    let graphemes = read_text_lines(grapheme_path)?;
    let out_path = workdir.as_ref().join(format!("phonemize.{lang_id}.out"));
    cmd.run(&[
        "--in",
        &grapheme_path.display().to_string(),
        "--out",
        &out_path.display().to_string(),
        "--lang",
        lang_id,
    ])?;
    let phonemes = read_text_lines(&out_path)?;
    if phonemes.len() != graphemes.len() {
        return Err(Error::LineCountMismatch {
            left: grapheme_path.display().to_string(),
            left_lines: graphemes.len(),
            right: out_path.display().to_string(),
            right_lines: phonemes.len(),
        });
    }
    for (idx, line) in phonemes.iter().enumerate() {
        validate_phoneme_line(line, idx + 1, table)?;
    }
    Ok(ParallelCorpus {
        lang_id: lang_id.to_string(),
        records: graphemes.into_iter().zip(phonemes).collect(),
    })
}

/// Check that every non-delimiter token of a phoneme line segments against
/// the feature table.
pub fn validate_phoneme_line(line: &str, lineno: usize, table: &FeatureTable) -> Result<()> {
    for tok in line.split_whitespace() {
        if tok == crate::WORD_DELIMITER {
            continue;
        }
        PhonemeToken::parse(tok, table).map_err(|e| Error::BadToken {
            token: tok.to_string(),
            line: lineno,
            reason: e.to_string(),
        })?;
    }
    Ok(())
}
