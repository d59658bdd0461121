use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::{Descriptor, FeatureSet};

/// Presence radius used by [`bow_encode`].
pub const DEFAULT_BOW_RADIUS: u32 = 64;
const MAX_ITERATIONS: usize = 20;

/// k medoid descriptors plus the presence radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    medoids: Vec<Descriptor>,
    radius: u32,
}

impl Vocabulary {
    pub fn new(medoids: Vec<Descriptor>, radius: u32) -> Result<Self> {
        if medoids.is_empty() {
            return Err(Error::InvalidInput("vocabulary is empty".into()));
        }
        Ok(Self { medoids, radius })
    }

    pub fn medoids(&self) -> &[Descriptor] {
        &self.medoids
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.medoids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.medoids.is_empty()
    }
}

fn nearest(medoids: &[Descriptor], d: &Descriptor) -> usize {
    (0..medoids.len())
        .min_by_key(|&j| (d.hamming(&medoids[j]), j))
        .expect("non-empty medoids")
}

/// k-medoids (Voronoi iteration) under Hamming distance, seeded initialisation.
pub fn bow_vocab(train: &[Descriptor], k: usize, seed: u64) -> Result<Vocabulary> {
    if k == 0 {
        return Err(Error::InvalidInput("vocabulary size k must be >= 1".into()));
    }
    if k > train.len() {
        return Err(Error::TooFewDescriptors {
            needed: k,
            got: train.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = sample(&mut rng, train.len(), k).into_vec();
    idx.sort_unstable();
    let mut medoids: Vec<Descriptor> = idx.iter().map(|&i| train[i]).collect();
    for _ in 0..MAX_ITERATIONS {
        let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, d) in train.iter().enumerate() {
            clusters[nearest(&medoids, d)].push(i);
        }
        let mut changed = false;
        for (j, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let current = cost_of(&medoids[j], members, train);
            let (best, best_cost) = members
                .iter()
                .map(|&c| (c, cost_of(&train[c], members, train)))
                .min_by_key(|&(c, s)| (s, c))
                .expect("non-empty cluster");
            if best_cost < current {
                medoids[j] = train[best];
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Vocabulary::new(medoids, DEFAULT_BOW_RADIUS)
}

fn cost_of(medoid: &Descriptor, members: &[usize], train: &[Descriptor]) -> u64 {
    members
        .iter()
        .map(|&m| medoid.hamming(&train[m]) as u64)
        .sum()
}

/// Fixed-width presence vector over a vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BowVector {
    words: Vec<u64>,
    len: usize,
}

impl BowVector {
    pub fn bit(&self, j: usize) -> bool {
        (self.words[j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }
}

/// Bit `j` is set iff some descriptor lies within the vocabulary radius of medoid `j`.
pub fn bow_encode(fs: &FeatureSet, vocab: &Vocabulary) -> BowVector {
    let k = vocab.len();
    let mut words = vec![0u64; k.div_ceil(64)];
    for (j, m) in vocab.medoids.iter().enumerate() {
        if fs.descriptors().iter().any(|d| d.hamming(m) <= vocab.radius) {
            words[j / 64] |= 1 << (j % 64);
        }
    }
    BowVector { words, len: k }
}

/// `1 - Jaccard(a, b)`; two empty vectors are at distance 1.
pub fn bow_distance(a: &BowVector, b: &BowVector) -> Result<f64> {
    if a.len != b.len {
        return Err(Error::InvalidInput(format!(
            "presence vectors of length {} and {}",
            a.len, b.len
        )));
    }
    let (mut inter, mut union) = (0u32, 0u32);
    for (x, y) in a.words.iter().zip(&b.words) {
        inter += (x & y).count_ones();
        union += (x | y).count_ones();
    }
    if union == 0 {
        return Ok(1.0);
    }
    Ok(1.0 - inter as f64 / union as f64)
}
