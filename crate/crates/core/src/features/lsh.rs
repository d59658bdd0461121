use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::matching::NeighborSearch;
use super::{Descriptor, DESCRIPTOR_BITS};

/// Index shape: `tables` hash tables keyed by `key_bits` sampled descriptor bits,
/// probed at every key within Hamming radius `multiprobe` of the query key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LshParams {
    pub tables: usize,
    pub key_bits: usize,
    pub multiprobe: u8,
    pub seed: u64,
}

impl Default for LshParams {
    fn default() -> Self {
        Self {
            tables: 6,
            key_bits: 12,
            multiprobe: 1,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
struct Table {
    bits: Vec<u16>,
    /// Bucket `k` holds `items[offsets[k]..offsets[k + 1]]`.
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl Table {
    fn key(&self, d: &Descriptor) -> usize {
        self.bits
            .iter()
            .enumerate()
            .fold(0usize, |k, (i, &b)| k | ((d.bit(b as usize) as usize) << i))
    }

    fn bucket(&self, key: usize) -> &[u32] {
        &self.items[self.offsets[key] as usize..self.offsets[key + 1] as usize]
    }
}

/// Multi-table bit-sampling LSH over binary descriptors. Immutable once built.
#[derive(Debug, Clone)]
pub struct LshIndex {
    params: LshParams,
    corpus: Vec<Descriptor>,
    tables: Vec<Table>,
}

impl LshIndex {
    pub fn build(descs: &[Descriptor], params: LshParams) -> Result<Self> {
        if descs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        if params.tables == 0 || params.key_bits == 0 || params.key_bits > 24 {
            return Err(Error::InvalidInput(format!(
                "LSH needs >= 1 table and 1..=24 key bits, got {} and {}",
                params.tables, params.key_bits
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let n_keys = 1usize << params.key_bits;
        let tables = (0..params.tables)
            .map(|_| {
                let mut bits: Vec<u16> = sample(&mut rng, DESCRIPTOR_BITS as usize, params.key_bits)
                    .into_iter()
                    .map(|b| b as u16)
                    .collect();
                bits.sort_unstable();
                let mut t = Table {
                    bits,
                    offsets: vec![0; n_keys + 1],
                    items: vec![0; descs.len()],
                };
                let keys: Vec<usize> = descs.iter().map(|d| t.key(d)).collect();
                for &k in &keys {
                    t.offsets[k + 1] += 1;
                }
                for k in 0..n_keys {
                    t.offsets[k + 1] += t.offsets[k];
                }
                let mut fill = t.offsets.clone();
                for (i, &k) in keys.iter().enumerate() {
                    t.items[fill[k] as usize] = i as u32;
                    fill[k] += 1;
                }
                t
            })
            .collect();
        Ok(Self {
            params,
            corpus: descs.to_vec(),
            tables,
        })
    }

    pub fn params(&self) -> &LshParams {
        &self.params
    }

    pub fn corpus(&self) -> &[Descriptor] {
        &self.corpus
    }

    /// Approximate `k` nearest neighbours; may return fewer when probes find fewer candidates.
    pub fn query(&self, d: &Descriptor, k: usize) -> Vec<(usize, u32)> {
        let mut seen = vec![false; self.corpus.len()];
        let mut cands: Vec<(u32, usize)> = Vec::new();
        let mut visit = |bucket: &[u32], cands: &mut Vec<(u32, usize)>| {
            for &i in bucket {
                let i = i as usize;
                if !seen[i] {
                    seen[i] = true;
                    cands.push((d.hamming(&self.corpus[i]), i));
                }
            }
        };
        for t in &self.tables {
            let key = t.key(d);
            visit(t.bucket(key), &mut cands);
            if self.params.multiprobe >= 1 {
                for b in 0..self.params.key_bits {
                    visit(t.bucket(key ^ (1 << b)), &mut cands);
                }
            }
            if self.params.multiprobe >= 2 {
                for b1 in 0..self.params.key_bits {
                    for b2 in b1 + 1..self.params.key_bits {
                        visit(t.bucket(key ^ (1 << b1) ^ (1 << b2)), &mut cands);
                    }
                }
            }
        }
        cands.sort_unstable();
        cands.truncate(k);
        cands.into_iter().map(|(dist, i)| (i, dist)).collect()
    }
}

impl NeighborSearch for LshIndex {
    fn knn(&self, query: &Descriptor, k: usize) -> Vec<(usize, u32)> {
        self.query(query, k)
    }

    fn len(&self) -> usize {
        self.corpus.len()
    }
}
