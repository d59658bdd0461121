use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Descriptor, FeatureSet, DESCRIPTOR_BITS};

/// Lowe ratio used by the standard configurations.
pub const DEFAULT_RATIO: f64 = 0.75;
/// Absolute distance cutoff used by the far-threshold configurations.
pub const DEFAULT_FAR_THRESHOLD: u32 = 64;

/// One query-to-train descriptor correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Match {
    pub query: usize,
    pub train: usize,
    pub distance: u32,
}

pub type MatchList = Vec<Match>;

/// k-nearest-neighbour lookup over a fixed train set.
pub trait NeighborSearch {
    /// Up to `k` `(index, distance)` pairs, ascending by distance then index.
    fn knn(&self, query: &Descriptor, k: usize) -> Vec<(usize, u32)>;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Exhaustive Hamming search.
#[derive(Debug, Clone, Copy)]
pub struct BruteForce<'a>(pub &'a [Descriptor]);

impl NeighborSearch for BruteForce<'_> {
    fn knn(&self, query: &Descriptor, k: usize) -> Vec<(usize, u32)> {
        let mut best: Vec<(usize, u32)> = Vec::with_capacity(k + 1);
        for (i, d) in self.0.iter().enumerate() {
            let dist = query.hamming(d);
            if best.len() == k && best.last().is_some_and(|&(_, w)| dist >= w) {
                continue;
            }
            let pos = best.partition_point(|&(_, w)| w <= dist);
            best.insert(pos, (i, dist));
            best.truncate(k);
        }
        best
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

/// Per-query neighbour lists from any search backend.
pub fn knn_match(query: &[Descriptor], train: &impl NeighborSearch, k: usize) -> Vec<Vec<Match>> {
    query
        .iter()
        .enumerate()
        .map(|(qi, q)| {
            train
                .knn(q, k)
                .into_iter()
                .map(|(train, distance)| Match {
                    query: qi,
                    train,
                    distance,
                })
                .collect()
        })
        .collect()
}

/// Keep matches whose train descriptor's nearest query (via `reverse`) is the match's query.
pub fn cross_check(
    matches: MatchList,
    train: &[Descriptor],
    reverse: &impl NeighborSearch,
) -> MatchList {
    matches
        .into_iter()
        .filter(|m| {
            reverse
                .knn(&train[m.train], 1)
                .first()
                .is_some_and(|&(back, _)| back == m.query)
        })
        .collect()
}

fn non_empty(fs: &FeatureSet) -> Result<()> {
    if fs.is_empty() {
        Err(Error::EmptyFeatureSet)
    } else {
        Ok(())
    }
}

/// Nearest train descriptor for every query; with `crosscheck`, mutual nearest pairs only.
pub fn match_bruteforce(a: &FeatureSet, b: &FeatureSet, crosscheck: bool) -> Result<MatchList> {
    non_empty(a)?;
    non_empty(b)?;
    let best: MatchList = knn_match(a.descriptors(), &BruteForce(b.descriptors()), 1)
        .into_iter()
        .filter_map(|v| v.into_iter().next())
        .collect();
    Ok(if crosscheck {
        cross_check(best, b.descriptors(), &BruteForce(a.descriptors()))
    } else {
        best
    })
}

/// Two nearest train descriptors per query, closest first.
pub fn match_knn2(a: &FeatureSet, b: &FeatureSet) -> Result<Vec<[Match; 2]>> {
    non_empty(a)?;
    if b.len() < 2 {
        return Err(Error::TooFewDescriptors {
            needed: 2,
            got: b.len(),
        });
    }
    Ok(knn_match(a.descriptors(), &BruteForce(b.descriptors()), 2)
        .into_iter()
        .map(|v| [v[0], v[1]])
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RatioMode {
    /// Lowe test: `d1 < ratio * d2`.
    Correct,
    /// Absolute variant: `d1 < ratio * 256`, second neighbour ignored.
    Bad,
}

/// Ratio filter over 2-NN lists; the surviving entries are the first neighbours.
pub fn filter_ratio(knn: &[[Match; 2]], ratio: f64, mode: RatioMode) -> MatchList {
    knn.iter()
        .filter(|[m1, m2]| {
            let bound = match mode {
                RatioMode::Correct => ratio * m2.distance as f64,
                RatioMode::Bad => ratio * DESCRIPTOR_BITS as f64,
            };
            (m1.distance as f64) < bound
        })
        .map(|[m1, _]| *m1)
        .collect()
}

/// Keep matches with `distance <= t`.
pub fn filter_far_threshold(matches: &[Match], t: u32) -> MatchList {
    matches.iter().copied().filter(|m| m.distance <= t).collect()
}

/// Which descriptor count serves as the pair-score denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LenMode {
    Min,
    Max,
}

impl LenMode {
    pub fn slots(self, n_a: usize, n_b: usize) -> usize {
        match self {
            LenMode::Min => n_a.min(n_b),
            LenMode::Max => n_a.max(n_b),
        }
    }
}

/// Mean normalized distance over `slots(n_a, n_b)` slots; unmatched slots cost 256.
pub fn pair_score(matches: &[Match], n_a: usize, n_b: usize, len_mode: LenMode) -> Result<f64> {
    if n_a == 0 || n_b == 0 {
        return Err(Error::EmptyFeatureSet);
    }
    let slots = len_mode.slots(n_a, n_b);
    if matches.len() > slots {
        return Err(Error::MatchCountOverflow {
            matches: matches.len(),
            slots,
        });
    }
    let bits = DESCRIPTOR_BITS as u64;
    let total: u64 = matches.iter().map(|m| m.distance as u64).sum::<u64>()
        + bits * (slots - matches.len()) as u64;
    Ok(total as f64 / (bits * slots as u64) as f64)
}

/// [`pair_score`] keeping only the `slots(n_a, n_b)` closest matches when there are more.
pub fn pair_score_capped(matches: &[Match], n_a: usize, n_b: usize, len_mode: LenMode) -> Result<f64> {
    let slots = len_mode.slots(n_a, n_b);
    if matches.len() <= slots {
        return pair_score(matches, n_a, n_b, len_mode);
    }
    let mut best = matches.to_vec();
    best.sort_by_key(|m| (m.distance, m.query, m.train));
    best.truncate(slots);
    pair_score(&best, n_a, n_b, len_mode)
}
