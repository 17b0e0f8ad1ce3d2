//! Minimum-edit alignment of clean/noisy token sequences with unit costs.

use serde::Serialize;

/// One alignment operation. Clean-side tokens read in order reproduce the
/// clean sequence, noisy-side tokens the noisy sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum AlignOp {
    Match { clean: String, noisy: String },
    Substitute { clean: String, noisy: String },
    Delete { clean: String },
    Insert { noisy: String },
}

#[derive(Debug, Clone, Default)]
pub struct AlignedUtterance {
    pub ops: Vec<AlignOp>,
}

impl AlignedUtterance {
    pub fn clean_tokens(&self) -> Vec<&str> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                AlignOp::Match { clean, .. }
                | AlignOp::Substitute { clean, .. }
                | AlignOp::Delete { clean } => Some(clean.as_str()),
                AlignOp::Insert { .. } => None,
            })
            .collect()
    }

    pub fn noisy_tokens(&self) -> Vec<&str> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                AlignOp::Match { noisy, .. }
                | AlignOp::Substitute { noisy, .. }
                | AlignOp::Insert { noisy } => Some(noisy.as_str()),
                AlignOp::Delete { .. } => None,
            })
            .collect()
    }

    /// Total unit edit cost: substitutions + insertions + deletions.
    pub fn cost(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| !matches!(op, AlignOp::Match { .. }))
            .count()
    }

    /// (substitutions, insertions, deletions)
    pub fn counts(&self) -> (u64, u64, u64) {
        let mut s = 0;
        let mut i = 0;
        let mut d = 0;
        for op in &self.ops {
            match op {
                AlignOp::Match { .. } => {}
                AlignOp::Substitute { .. } => s += 1,
                AlignOp::Insert { .. } => i += 1,
                AlignOp::Delete { .. } => d += 1,
            }
        }
        (s, i, d)
    }
}

/// Align two token sequences under unit costs. Among co-optimal
/// alignments the backtrace prefers match > substitute > delete > insert.
pub fn align_sequences(clean: &[&str], noisy: &[&str]) -> AlignedUtterance {
    let m = clean.len();
    let n = noisy.len();
    let mut dist = vec![vec![0usize; n + 1]; m + 1];
    for (i, row) in dist.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=n {
        dist[0][j] = j;
    }
    for i in 1..=m {
        for j in 1..=n {
            let sub = dist[i - 1][j - 1] + usize::from(clean[i - 1] != noisy[j - 1]);
            let del = dist[i - 1][j] + 1;
            let ins = dist[i][j - 1] + 1;
            dist[i][j] = sub.min(del).min(ins);
        }
    }

    let mut ops = Vec::with_capacity(m.max(n));
    let (mut i, mut j) = (m, n);
    while i > 0 || j > 0 {
        let here = dist[i][j];
        if i > 0 && j > 0 && clean[i - 1] == noisy[j - 1] && dist[i - 1][j - 1] == here {
            ops.push(AlignOp::Match {
                clean: clean[i - 1].to_string(),
                noisy: noisy[j - 1].to_string(),
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && dist[i - 1][j - 1] + 1 == here {
            ops.push(AlignOp::Substitute {
                clean: clean[i - 1].to_string(),
                noisy: noisy[j - 1].to_string(),
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && dist[i - 1][j] + 1 == here {
            ops.push(AlignOp::Delete {
                clean: clean[i - 1].to_string(),
            });
            i -= 1;
        } else {
            ops.push(AlignOp::Insert {
                noisy: noisy[j - 1].to_string(),
            });
            j -= 1;
        }
    }
    ops.reverse();
    AlignedUtterance { ops }
}
