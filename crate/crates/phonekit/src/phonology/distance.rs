//! Feature-based distances: normalized hamming between segments,
//! Levenshtein over segment sequences between tokens, and the clamped
//! per-position sum between triphone windows.

use crate::phonology::segment::{PhonemeToken, Segment};
use crate::real::Real;

/// Fraction of feature positions where the two segments disagree, in [0,1].
/// Both segments must come from the same feature table.
pub fn segment_distance<R: Real>(x: &Segment, y: &Segment) -> R {
    debug_assert_eq!(x.features.len(), y.features.len());
    let diff = x.features.hamming(&y.features);
    R::from_count(diff as u64) / R::from_count(x.features.len() as u64)
}

/// Levenshtein distance over segment sequences: substitution costs
/// [`segment_distance`], insertion and deletion cost 1. For tokens of at
/// most three segments the result lies in [0, 3].
pub fn token_distance<R: Real>(x: &PhonemeToken, y: &PhonemeToken) -> R {
    let xs = &x.segments;
    let ys = &y.segments;
    let mut prev: Vec<R> = (0..=ys.len()).map(|j| R::from_count(j as u64)).collect();
    let mut cur = vec![R::zero(); ys.len() + 1];
    for (i, xi) in xs.iter().enumerate() {
        cur[0] = R::from_count(i as u64 + 1);
        for (j, yj) in ys.iter().enumerate() {
            let sub = prev[j] + segment_distance(xi, yj);
            let del = prev[j + 1] + R::one();
            let ins = cur[j] + R::one();
            cur[j + 1] = sub.min(del).min(ins);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[ys.len()]
}

/// Token distance clamped to 1; the per-position cost inside a triphone.
pub fn position_cost<R: Real>(x: &PhonemeToken, y: &PhonemeToken) -> R {
    token_distance::<R>(x, y).min(R::one())
}

/// Sum of clamped per-position token distances over the three positions of
/// a triphone window; always in [0, 3].
pub fn triphone_distance<R: Real>(x: &[PhonemeToken; 3], y: &[PhonemeToken; 3]) -> R {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| position_cost(a, b))
        .sum()
}
