//! ORB-style features: FAST corners on a scale pyramid, intensity-centroid
//! orientation, steered BRIEF descriptors, and the matcher/filter family used
//! by the benchmark grid.

mod bow;
mod dump;
mod fast;
mod lsh;
mod matching;
mod orb;
mod pattern;

pub use bow::{bow_distance, bow_encode, bow_vocab, BowVector, Vocabulary, DEFAULT_BOW_RADIUS};
pub use dump::{read_feature_dump, write_feature_dump, DUMP_MAGIC, DUMP_VERSION};
pub use fast::{detect_fast, harris_response, segment_test, Pyramid};
pub use lsh::{LshIndex, LshParams};
pub use matching::{
    cross_check, filter_far_threshold, filter_ratio, knn_match, match_bruteforce, match_knn2,
    pair_score, pair_score_capped, BruteForce, LenMode, Match, MatchList, NeighborSearch, RatioMode,
    DEFAULT_FAR_THRESHOLD, DEFAULT_RATIO,
};
pub use orb::{describe, extract_orb, extract_orb_with, orient, OrbParams, PATCH_RADIUS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bits per descriptor.
pub const DESCRIPTOR_BITS: u32 = 256;

/// Detected corner. Coordinates are in level-0 pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keypoint {
    pub x: f32,
    pub y: f32,
    pub response: f32,
    /// Radians in `[0, 2π)`.
    pub angle: f32,
    pub octave: u8,
}

/// 256-bit binary descriptor; bit `i` is bit `i % 64` of word `i / 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Descriptor(pub [u64; 4]);

impl Descriptor {
    #[inline]
    pub fn hamming(&self, other: &Descriptor) -> u32 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        (self.0[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set_bit(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.0[i / 64] |= mask;
        } else {
            self.0[i / 64] &= !mask;
        }
    }

    pub fn to_bytes(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        for (chunk, word) in out.chunks_exact_mut(8).zip(self.0.iter()) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8; 32]) -> Self {
        let mut words = [0u64; 4];
        for (word, chunk) in words.iter_mut().zip(bytes.chunks_exact(8)) {
            *word = u64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
        }
        Descriptor(words)
    }
}

impl std::ops::Not for Descriptor {
    type Output = Descriptor;

    fn not(self) -> Descriptor {
        Descriptor(self.0.map(|w| !w))
    }
}

/// Keypoints and their descriptors for one image.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureSet {
    image_id: String,
    keypoints: Vec<Keypoint>,
    descriptors: Vec<Descriptor>,
}

impl FeatureSet {
    pub fn new(
        image_id: impl Into<String>,
        keypoints: Vec<Keypoint>,
        descriptors: Vec<Descriptor>,
    ) -> Result<Self> {
        if keypoints.len() != descriptors.len() {
            return Err(Error::InvalidInput(format!(
                "{} keypoints but {} descriptors",
                keypoints.len(),
                descriptors.len()
            )));
        }
        Ok(Self {
            image_id: image_id.into(),
            keypoints,
            descriptors,
        })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.image_id = id.into();
        self
    }

    pub fn image_id(&self) -> &str {
        &self.image_id
    }

    pub fn keypoints(&self) -> &[Keypoint] {
        &self.keypoints
    }

    pub fn descriptors(&self) -> &[Descriptor] {
        &self.descriptors
    }

    pub fn len(&self) -> usize {
        self.descriptors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.is_empty()
    }

    /// Keep only the first `n` entries.
    pub fn truncated(mut self, n: usize) -> Self {
        self.keypoints.truncate(n);
        self.descriptors.truncate(n);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_bits_and_bytes() {
        let mut d = Descriptor::default();
        d.set_bit(0, true);
        d.set_bit(255, true);
        assert!(d.bit(0) && d.bit(255) && !d.bit(1));
        assert_eq!(Descriptor::from_bytes(&d.to_bytes()), d);
        assert_eq!(d.hamming(&!d), 256);
        assert_eq!(d.hamming(&d), 0);
    }

    #[test]
    fn feature_set_lengths_must_agree() {
        assert!(FeatureSet::new("a", vec![], vec![Descriptor::default()]).is_err());
    }
}
