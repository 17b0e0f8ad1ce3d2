//! ASR-noise modeling: clean/noisy alignment, triphone substitution
//! mining, the replacement-probability formula, and pseudo-noise labeling.

mod align;
mod apply;
mod model;

pub use align::{align_sequences, AlignOp, AlignedUtterance};
pub use apply::{apply_pseudo_noise, apply_pseudo_noise_line, apply_pseudo_noise_tokens};
pub use model::{replacement_probability, NoiseEntry, Triphone, TriphoneNoiseModel};
