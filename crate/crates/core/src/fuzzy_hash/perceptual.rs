use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::fuzzy_hash::{FuzzyHash, HashAlgorithm};
use crate::imaging::{resize, GrayImage};

/// Magnitudes below this are treated as exact zeros after a floating DCT, so that
/// flat regions hash deterministically.
const DCT_ZERO_EPS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DhashOrientation {
    Horizontal,
    Vertical,
}

fn thumbnail(img: &GrayImage, width: u32, height: u32) -> GrayImage {
    resize(img, width, height).expect("non-zero thumbnail size")
}

/// Average hash: bit set iff the thumbnail pixel is at least the thumbnail mean.
pub fn ahash(img: &GrayImage) -> FuzzyHash {
    let thumb = thumbnail(img, 8, 8);
    let sum: u32 = thumb.pixels().iter().map(|&p| p as u32).sum();
    // p >= sum / 64, kept in integers
    FuzzyHash::from_bools(
        HashAlgorithm::Ahash,
        thumb.pixels().iter().map(|&p| p as u32 * 64 >= sum),
    )
}

/// Difference hash: bit set iff the next pixel along the orientation is strictly brighter.
pub fn dhash(img: &GrayImage, orientation: DhashOrientation) -> FuzzyHash {
    match orientation {
        DhashOrientation::Horizontal => {
            let t = thumbnail(img, 9, 8);
            let bits = (0..8).flat_map(|r| (0..8).map(move |c| (r, c)));
            FuzzyHash::from_bools(
                HashAlgorithm::DhashH,
                bits.map(|(r, c)| t.get(c + 1, r) > t.get(c, r)),
            )
        }
        DhashOrientation::Vertical => {
            let t = thumbnail(img, 8, 9);
            let bits = (0..8).flat_map(|r| (0..8).map(move |c| (r, c)));
            FuzzyHash::from_bools(
                HashAlgorithm::DhashV,
                bits.map(|(r, c)| t.get(c, r + 1) > t.get(c, r)),
            )
        }
    }
}

/// Unnormalized DCT-II basis: `table[k][n] = cos(pi / len * (n + 1/2) * k)`.
fn dct_table(len: usize) -> Vec<Vec<f64>> {
    (0..len)
        .map(|k| {
            (0..len)
                .map(|n| (PI / len as f64 * (n as f64 + 0.5) * k as f64).cos())
                .collect()
        })
        .collect()
}

fn snap(v: f64) -> f64 {
    if v.abs() < DCT_ZERO_EPS {
        0.0
    } else {
        v
    }
}

/// Low-frequency `keep x keep` block of the 2-D DCT (or row-only DCT when `rows_only`).
fn dct_block(thumb: &GrayImage, keep: usize, rows_only: bool) -> Vec<f64> {
    let n = thumb.width() as usize;
    debug_assert_eq!(n, thumb.height() as usize);
    let table = dct_table(n);
    let px: Vec<f64> = thumb.pixels().iter().map(|&p| p as f64).collect();

    // Row transform: row_dct[y][v] for the first `keep` frequencies.
    let mut row_dct = vec![0.0; n * keep];
    for y in 0..n {
        let row = &px[y * n..(y + 1) * n];
        for v in 0..keep {
            row_dct[y * keep + v] = table[v].iter().zip(row).map(|(c, p)| c * p).sum();
        }
    }
    if rows_only {
        return row_dct[..keep * keep].iter().copied().map(snap).collect();
    }
    let mut out = vec![0.0; keep * keep];
    for u in 0..keep {
        for v in 0..keep {
            out[u * keep + v] = snap((0..n).map(|y| table[u][y] * row_dct[y * keep + v]).sum());
        }
    }
    out
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// DCT perceptual hash on a 32x32 thumbnail.
///
/// Full mode: 2-D DCT, 8x8 low-frequency block, threshold at the median of the
/// 63 AC terms. Simple mode: row DCT only, threshold at the mean of the same
/// 63 terms. Every bit (DC included) uses a strict `>` against the threshold.
pub fn phash(img: &GrayImage, simple: bool) -> FuzzyHash {
    let thumb = thumbnail(img, 32, 32);
    let block = dct_block(&thumb, 8, simple);
    let mut ac: Vec<f64> = block[1..].to_vec();
    let threshold = if simple {
        ac.iter().sum::<f64>() / ac.len() as f64
    } else {
        median(&mut ac)
    };
    let algorithm = if simple {
        HashAlgorithm::PhashSimple
    } else {
        HashAlgorithm::Phash
    };
    FuzzyHash::from_bools(algorithm, block.iter().map(|&c| c > threshold))
}

/// One level of the averaging Haar transform on the top-left `size x size` area.
///
/// Uses `(a + b) / 2` and `(a - b) / 2`; on integer input every value stays a
/// dyadic rational, so forward and inverse passes are exact in `f64`.
fn haar_forward_level(data: &mut [f64], stride: usize, size: usize) {
    let half = size / 2;
    let mut tmp = vec![0.0; size];
    for y in 0..size {
        let row = &mut data[y * stride..y * stride + size];
        for i in 0..half {
            tmp[i] = (row[2 * i] + row[2 * i + 1]) / 2.0;
            tmp[half + i] = (row[2 * i] - row[2 * i + 1]) / 2.0;
        }
        row.copy_from_slice(&tmp);
    }
    for x in 0..size {
        for i in 0..half {
            let a = data[2 * i * stride + x];
            let b = data[(2 * i + 1) * stride + x];
            tmp[i] = (a + b) / 2.0;
            tmp[half + i] = (a - b) / 2.0;
        }
        for (y, &v) in tmp.iter().enumerate() {
            data[y * stride + x] = v;
        }
    }
}

fn haar_inverse_level(data: &mut [f64], stride: usize, size: usize) {
    let half = size / 2;
    let mut tmp = vec![0.0; size];
    for x in 0..size {
        for i in 0..half {
            let (avg, diff) = (data[i * stride + x], data[(half + i) * stride + x]);
            tmp[2 * i] = avg + diff;
            tmp[2 * i + 1] = avg - diff;
        }
        for (y, &v) in tmp.iter().enumerate() {
            data[y * stride + x] = v;
        }
    }
    for y in 0..size {
        let row = &mut data[y * stride..y * stride + size];
        for i in 0..half {
            tmp[2 * i] = row[i] + row[half + i];
            tmp[2 * i + 1] = row[i] - row[half + i];
        }
        row.copy_from_slice(&tmp);
    }
}

/// Wavelet hash: 64x64 thumbnail, full-depth Haar decomposition with the scaling
/// coefficient removed, then the 8x8 approximation band thresholded at its median.
pub fn whash(img: &GrayImage) -> FuzzyHash {
    const SIDE: usize = 64;
    const BAND: usize = 8;
    let thumb = thumbnail(img, SIDE as u32, SIDE as u32);
    let mut data: Vec<f64> = thumb.pixels().iter().map(|&p| p as f64).collect();

    let mut size = SIDE;
    while size > 1 {
        haar_forward_level(&mut data, SIDE, size);
        size /= 2;
    }
    data[0] = 0.0;
    while size < SIDE {
        size *= 2;
        haar_inverse_level(&mut data, SIDE, size);
    }

    let mut size = SIDE;
    while size > BAND {
        haar_forward_level(&mut data, SIDE, size);
        size /= 2;
    }
    let band: Vec<f64> = (0..BAND)
        .flat_map(|y| data[y * SIDE..y * SIDE + BAND].to_vec())
        .collect();
    let med = median(&mut band.clone());
    FuzzyHash::from_bools(HashAlgorithm::Whash, band.iter().map(|&c| c > med))
}

/// Dispatch on algorithm tag.
pub fn hash_image(img: &GrayImage, algorithm: HashAlgorithm) -> FuzzyHash {
    match algorithm {
        HashAlgorithm::Ahash => ahash(img),
        HashAlgorithm::DhashH => dhash(img, DhashOrientation::Horizontal),
        HashAlgorithm::DhashV => dhash(img, DhashOrientation::Vertical),
        HashAlgorithm::Phash => phash(img, false),
        HashAlgorithm::PhashSimple => phash(img, true),
        HashAlgorithm::Whash => whash(img),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random(w: u32, h: u32, seed: u64) -> GrayImage {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        GrayImage::from_fn(w, h, |_, _| rng.random())
    }

    fn pack(bools: &[bool]) -> u64 {
        bools.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    #[test]
    fn ahash_uniform_sets_all_bits() {
        assert_eq!(ahash(&GrayImage::filled(13, 7, 42)).bits, u64::MAX);
    }

    #[test]
    fn ahash_half_split() {
        let img = GrayImage::from_fn(16, 8, |x, _| if x < 8 { 0 } else { 255 });
        // per-pixel oracle: 32 zeros, 32 x 255, mean 127.5
        let thumb = resize(&img, 8, 8).unwrap();
        let mean = thumb.pixels().iter().map(|&p| p as f64).sum::<f64>() / 64.0;
        assert_eq!(mean, 127.5);
        let bools: Vec<bool> = thumb.pixels().iter().map(|&p| p as f64 >= mean).collect();
        assert_eq!(ahash(&img).bits, pack(&bools));
        assert_eq!(ahash(&img).bits, 0x0F0F_0F0F_0F0F_0F0F);
        assert_eq!(ahash(&img), ahash(&img.clone()));
    }

    #[test]
    fn dhash_ramp_and_constant() {
        let ramp = GrayImage::from_fn(9, 8, |x, _| (x * 20) as u8);
        assert_eq!(dhash(&ramp, DhashOrientation::Horizontal).bits, u64::MAX);
        let vramp = GrayImage::from_fn(8, 9, |_, y| (y * 20) as u8);
        assert_eq!(dhash(&vramp, DhashOrientation::Vertical).bits, u64::MAX);
        let flat = GrayImage::filled(40, 30, 9);
        assert_eq!(dhash(&flat, DhashOrientation::Horizontal).bits, 0);
        assert_eq!(dhash(&flat, DhashOrientation::Vertical).bits, 0);
    }

    #[test]
    fn dhash_random_thumbnail_oracle() {
        let t = random(9, 8, 3);
        let mut bools = Vec::new();
        for r in 0..8 {
            for c in 0..8 {
                bools.push(t.get(c + 1, r) > t.get(c, r));
            }
        }
        assert_eq!(dhash(&t, DhashOrientation::Horizontal).bits, pack(&bools));
        let t = random(8, 9, 4);
        let mut bools = Vec::new();
        for r in 0..8 {
            for c in 0..8 {
                bools.push(t.get(c, r + 1) > t.get(c, r));
            }
        }
        assert_eq!(dhash(&t, DhashOrientation::Vertical).bits, pack(&bools));
    }

    #[test]
    fn phash_constant_has_no_ac_bits() {
        let h = phash(&GrayImage::filled(50, 50, 200), false);
        // only the DC bit (MSB) exceeds the zero median
        assert_eq!(h.bits, 1 << 63);
        assert_eq!(phash(&GrayImage::filled(32, 32, 0), false).bits, 0);
    }

    /// Textbook DCT-II straight from the definition.
    fn reference_dct(t: &GrayImage, u: usize, v: usize) -> f64 {
        let n = t.width() as usize;
        let mut acc = 0.0;
        for y in 0..n {
            for x in 0..n {
                acc += t.get(x as u32, y as u32) as f64
                    * (PI * (2 * x + 1) as f64 * v as f64 / (2 * n) as f64).cos()
                    * (PI * (2 * y + 1) as f64 * u as f64 / (2 * n) as f64).cos();
            }
        }
        acc
    }

    #[test]
    fn phash_low_frequency_cosine_concentrates_in_first_row() {
        // one horizontal cosine period across the width: energy at (u=0, v=2)
        let img = GrayImage::from_fn(32, 32, |x, _| {
            (127.5 + 100.0 * (2.0 * PI * (x as f64 + 0.5) / 32.0).cos()).round() as u8
        });
        let block = dct_block(&img, 8, false);
        let (peak, _) = block
            .iter()
            .enumerate()
            .skip(1)
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        assert_eq!(peak, 2);
        for u in 1..8 {
            for v in 0..8 {
                assert!(block[u * 8 + v].abs() < 1e-6, "u={u} v={v}");
            }
        }
        assert!((block[2] - reference_dct(&img, 0, 2)).abs() < 1e-6);
    }

    #[test]
    fn phash_matches_reference_dct_oracle() {
        for seed in 0..4 {
            let t = random(32, 32, 100 + seed);
            let coeffs: Vec<f64> = (0..64).map(|i| reference_dct(&t, i / 8, i % 8)).collect();
            let mut ac = coeffs[1..].to_vec();
            ac.sort_by(f64::total_cmp);
            let med = ac[31];
            let expected = pack(&coeffs.iter().map(|&c| c > med).collect::<Vec<_>>());
            assert_eq!(phash(&t, false).bits, expected);
        }
    }

    #[test]
    fn phash_simple_matches_row_dct_oracle() {
        let t = random(32, 32, 11);
        let mut coeffs = Vec::new();
        for y in 0..8u32 {
            for v in 0..8 {
                let mut acc = 0.0;
                for x in 0..32u32 {
                    acc += t.get(x, y) as f64 * (PI * (2 * x + 1) as f64 * v as f64 / 64.0).cos();
                }
                coeffs.push(acc);
            }
        }
        let mean = coeffs[1..].iter().sum::<f64>() / 63.0;
        let expected = pack(&coeffs.iter().map(|&c| c > mean).collect::<Vec<_>>());
        assert_eq!(phash(&t, true).bits, expected);
    }

    #[test]
    fn whash_constant_is_zero() {
        assert_eq!(whash(&GrayImage::filled(64, 64, 90)).bits, 0);
        assert_eq!(whash(&GrayImage::filled(100, 37, 255)).bits, 0);
    }

    #[test]
    fn whash_split_differs_from_constant() {
        let split = GrayImage::from_fn(64, 64, |x, _| if x < 32 { 0 } else { 255 });
        let h = whash(&split);
        assert_ne!(h.bits, whash(&GrayImage::filled(64, 64, 0)).bits);
        assert_eq!(h.bits, 0x0F0F_0F0F_0F0F_0F0F);
    }

    /// Closed form: the approximation band after removing the scaling term is the
    /// 8x8 block mean minus the global mean.
    #[test]
    fn whash_matches_block_mean_oracle() {
        for seed in 0..4 {
            let t = random(64, 64, 50 + seed);
            let global = t.pixels().iter().map(|&p| p as f64).sum::<f64>() / 4096.0;
            let mut band = Vec::new();
            for by in 0..8u32 {
                for bx in 0..8u32 {
                    let mut acc = 0.0;
                    for y in 0..8 {
                        for x in 0..8 {
                            acc += t.get(bx * 8 + x, by * 8 + y) as f64;
                        }
                    }
                    band.push(acc / 64.0 - global);
                }
            }
            let mut sorted = band.clone();
            sorted.sort_by(f64::total_cmp);
            let med = (sorted[31] + sorted[32]) / 2.0;
            let expected = pack(&band.iter().map(|&c| c > med).collect::<Vec<_>>());
            assert_eq!(whash(&t).bits, expected, "seed {seed}");
        }
    }

    #[test]
    fn haar_round_trip_is_exact() {
        let t = random(64, 64, 9);
        let orig: Vec<f64> = t.pixels().iter().map(|&p| p as f64).collect();
        let mut data = orig.clone();
        let mut size = 64;
        while size > 1 {
            haar_forward_level(&mut data, 64, size);
            size /= 2;
        }
        while size < 64 {
            size *= 2;
            haar_inverse_level(&mut data, 64, size);
        }
        assert_eq!(data, orig);
    }

    #[test]
    fn hashes_are_deterministic() {
        let img = random(120, 90, 5);
        for alg in HashAlgorithm::ALL {
            assert_eq!(hash_image(&img, alg), hash_image(&img.clone(), alg));
            assert_eq!(hash_image(&img, alg).algorithm, alg);
        }
    }
}
