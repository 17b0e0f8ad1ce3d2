//! Articulatory feature table, IPA segmentation, and feature-based
//! distances between segments, tokens, and triphone windows.

mod distance;
mod segment;
mod table;

pub use distance::{position_cost, segment_distance, token_distance, triphone_distance};
pub use segment::{segment_ipa, PhonemeToken, Segment};
pub use table::{FeatureTable, FeatureVector};
