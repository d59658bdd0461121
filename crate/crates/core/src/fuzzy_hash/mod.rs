//! Perceptual and fuzzy hashes with their distances.
//!
//! All 64-bit hashes are laid out in raster order of their 8x8 source grid,
//! with grid cell 0 stored in the most significant bit.

mod perceptual;
mod tlsh;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use perceptual::{ahash, dhash, hash_image, phash, whash, DhashOrientation};
pub use tlsh::{tlsh_distance, tlsh_hash, TlshDigest, TLSH_HEX_LEN, TLSH_MAX_DISTANCE, TLSH_MIN_LEN};

use crate::error::{Error, Result};

/// 64-bit perceptual hash families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HashAlgorithm {
    Ahash,
    DhashH,
    DhashV,
    Phash,
    PhashSimple,
    Whash,
}

impl HashAlgorithm {
    pub const ALL: [HashAlgorithm; 6] = [
        HashAlgorithm::Ahash,
        HashAlgorithm::DhashH,
        HashAlgorithm::DhashV,
        HashAlgorithm::Phash,
        HashAlgorithm::PhashSimple,
        HashAlgorithm::Whash,
    ];

    /// Token used in hash dump lines.
    pub fn token(self) -> &'static str {
        match self {
            HashAlgorithm::Ahash => "AHASH",
            HashAlgorithm::DhashH => "DHASH_H",
            HashAlgorithm::DhashV => "DHASH_V",
            HashAlgorithm::Phash => "PHASH",
            HashAlgorithm::PhashSimple => "PHASH_SIMPLE",
            HashAlgorithm::Whash => "WHASH",
        }
    }

    /// Name used in reports and configuration names.
    pub fn display_name(self) -> &'static str {
        match self {
            HashAlgorithm::Ahash => "A HASH",
            HashAlgorithm::DhashH => "D HASH",
            HashAlgorithm::DhashV => "D HASH VERTICAL",
            HashAlgorithm::Phash => "P HASH",
            HashAlgorithm::PhashSimple => "P HASH SIMPLE",
            HashAlgorithm::Whash => "W HASH",
        }
    }
}

impl fmt::Display for HashAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for HashAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.token().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown hash algorithm `{s}`")))
    }
}

/// Fixed-width 64-bit signature tagged with the algorithm that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FuzzyHash {
    pub algorithm: HashAlgorithm,
    pub bits: u64,
}

impl FuzzyHash {
    pub fn new(algorithm: HashAlgorithm, bits: u64) -> Self {
        Self { algorithm, bits }
    }

    /// Pack up to 64 booleans, first one into the most significant bit.
    pub(crate) fn from_bools(algorithm: HashAlgorithm, bools: impl IntoIterator<Item = bool>) -> Self {
        let mut bits = 0u64;
        let mut count = 0;
        for b in bools {
            bits = (bits << 1) | b as u64;
            count += 1;
        }
        debug_assert_eq!(count, 64);
        Self { algorithm, bits }
    }

    pub fn to_hex(&self) -> String {
        format!("{:016x}", self.bits)
    }
}

/// Number of differing bits; both hashes must come from the same algorithm.
pub fn hamming(a: &FuzzyHash, b: &FuzzyHash) -> Result<u32> {
    if a.algorithm != b.algorithm {
        return Err(Error::AlgorithmMismatch(
            a.algorithm.to_string(),
            b.algorithm.to_string(),
        ));
    }
    Ok((a.bits ^ b.bits).count_ones())
}

/// Hamming distance scaled into `[0, 1]`.
pub fn normalized_hash_score(a: &FuzzyHash, b: &FuzzyHash) -> Result<f64> {
    Ok(hamming(a, b)? as f64 / 64.0)
}

/// Any digest that can appear in a hash dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyHash {
    Perceptual(FuzzyHash),
    Tlsh(TlshDigest),
}

impl AnyHash {
    pub fn token(&self) -> &'static str {
        match self {
            AnyHash::Perceptual(h) => h.algorithm.token(),
            AnyHash::Tlsh(_) => "TLSH",
        }
    }

    pub fn to_hex(&self) -> String {
        match self {
            AnyHash::Perceptual(h) => h.to_hex(),
            AnyHash::Tlsh(d) => d.to_hex(),
        }
    }
}

/// One `<image_id> <algo> <hex>` line of a hash dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashLine {
    pub image_id: String,
    pub hash: AnyHash,
}

impl fmt::Display for HashLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.image_id, self.hash.token(), self.hash.to_hex())
    }
}

impl FromStr for HashLine {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut parts = line.split_ascii_whitespace();
        let (Some(id), Some(algo), Some(hex), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::Parse(format!("expected `<id> <algo> <hex>`, got `{line}`")));
        };
        let hash = if algo.eq_ignore_ascii_case("TLSH") {
            AnyHash::Tlsh(hex.parse()?)
        } else {
            let algorithm: HashAlgorithm = algo.parse()?;
            if hex.len() != 16 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(Error::Parse(format!("expected 16 hex digits, got `{hex}`")));
            }
            let bits = u64::from_str_radix(hex, 16).map_err(|e| Error::Parse(e.to_string()))?;
            AnyHash::Perceptual(FuzzyHash::new(algorithm, bits))
        };
        Ok(HashLine {
            image_id: id.to_owned(),
            hash,
        })
    }
}

/// Parse a whole dump, skipping blank lines.
pub fn parse_hash_dump(text: &str) -> Result<Vec<HashLine>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn hamming_basics() {
        let h = FuzzyHash::new(HashAlgorithm::Ahash, 0xdead_beef_0123_4567);
        let inv = FuzzyHash::new(HashAlgorithm::Ahash, !h.bits);
        assert_eq!(hamming(&h, &h).unwrap(), 0);
        assert_eq!(hamming(&h, &inv).unwrap(), 64);
        assert_eq!(normalized_hash_score(&h, &inv).unwrap(), 1.0);
        let other = FuzzyHash::new(HashAlgorithm::Phash, h.bits);
        assert!(matches!(hamming(&h, &other), Err(Error::AlgorithmMismatch(..))));
    }

    /// Bit-by-bit comparison, independent of `count_ones`.
    fn popcount_oracle(a: u64, b: u64) -> u32 {
        (0..64).filter(|i| (a >> i) & 1 != (b >> i) & 1).count() as u32
    }

    #[test]
    fn hamming_matches_popcount_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (a, b) = (rng.random::<u64>(), rng.random::<u64>());
            let d = hamming(&FuzzyHash::new(HashAlgorithm::Whash, a), &FuzzyHash::new(HashAlgorithm::Whash, b));
            assert_eq!(d.unwrap(), popcount_oracle(a, b));
        }
    }

    #[test]
    fn dump_lines_parse_and_print() {
        let line: HashLine = "shot_1 DHASH_V 00ff00ff00ff00ff".parse().unwrap();
        assert_eq!(line.hash, AnyHash::Perceptual(FuzzyHash::new(HashAlgorithm::DhashV, 0x00ff00ff00ff00ff)));
        assert_eq!(line.to_string(), "shot_1 DHASH_V 00ff00ff00ff00ff");
        assert!("a AHASH 123".parse::<HashLine>().is_err());
        assert!("a NOPE 0000000000000000".parse::<HashLine>().is_err());
        assert!("a AHASH +000000000000000".parse::<HashLine>().is_err());
        assert!("a AHASH 0000000000000000 extra".parse::<HashLine>().is_err());
        let dump = parse_hash_dump("a AHASH 0000000000000001\n\nb WHASH ffffffffffffffff\n").unwrap();
        assert_eq!(dump.len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn hamming_is_a_metric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let h = |v| FuzzyHash::new(HashAlgorithm::DhashH, v);
            let (ha, hb, hc) = (h(a), h(b), h(c));
            let ab = hamming(&ha, &hb).unwrap();
            prop_assert_eq!(ab == 0, a == b);
            prop_assert_eq!(ab, hamming(&hb, &ha).unwrap());
            prop_assert!(hamming(&ha, &hc).unwrap() <= ab + hamming(&hb, &hc).unwrap());
            prop_assert!(ab <= 64);
        }
    }
}
