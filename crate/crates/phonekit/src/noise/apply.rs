//! Pseudo-noise labeling: rewrite clean corpora through the mined
//! triphone substitution table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::mix_seed;
use crate::noise::model::{Triphone, TriphoneNoiseModel};

/// Corrupt one tokenized utterance. Left-to-right scan: at each position
/// the clean triphone's candidates are tried in model order, one Bernoulli
/// draw each, first success wins and the scan jumps past the window.
/// Boundary-padded triphones never fire.
pub fn apply_pseudo_noise_tokens(
    tokens: &[&str],
    model: &TriphoneNoiseModel,
    rng: &mut impl Rng,
) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if i + 3 <= tokens.len() {
            let window = Triphone::new(tokens[i], tokens[i + 1], tokens[i + 2]);
            if let Some(cands) = model.candidates(&window) {
                let mut fired = false;
                for cand in cands {
                    if cand.noisy.contains_boundary() {
                        continue;
                    }
                    if rng.gen::<f64>() < cand.prob {
                        out.extend(cand.noisy.0.iter().cloned());
                        i += 3;
                        fired = true;
                        break;
                    }
                }
                if fired {
                    continue;
                }
            }
        }
        out.push(tokens[i].to_string());
        i += 1;
    }
    out
}

/// Corrupt one utterance line with the RNG seeded from `(seed, line_index)`.
pub fn apply_pseudo_noise_line(
    line: &str,
    model: &TriphoneNoiseModel,
    seed: u64,
    line_index: u64,
) -> String {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, line_index));
    apply_pseudo_noise_tokens(&tokens, model, &mut rng).join(" ")
}

/// Corrupt a whole corpus, one line per record. Each line draws from its
/// own `(seed, index)` stream, so the output is independent of sharding.
pub fn apply_pseudo_noise(lines: &[String], model: &TriphoneNoiseModel, seed: u64) -> Vec<String> {
    lines
        .par_iter()
        .enumerate()
        .map(|(idx, line)| apply_pseudo_noise_line(line, model, seed, idx as u64))
        .collect()
}
