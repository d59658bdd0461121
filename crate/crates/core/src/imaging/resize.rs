use crate::error::{Error, Result};
use crate::imaging::GrayImage;

/// Overlap of source cells with one destination cell along one axis.
///
/// Coordinates are scaled so that every source cell spans `dst_len` units and
/// every destination cell spans `src_len` units; overlaps are then integers.
fn axis_weights(src_len: u32, dst_len: u32) -> Vec<Vec<(u32, u64)>> {
    let (src, dst) = (src_len as u64, dst_len as u64);
    (0..dst)
        .map(|j| {
            let lo = j * src;
            let hi = lo + src;
            let first = lo / dst;
            let last = (hi - 1) / dst;
            (first..=last)
                .map(|i| {
                    let cell_lo = i * dst;
                    let cell_hi = cell_lo + dst;
                    let overlap = hi.min(cell_hi) - lo.max(cell_lo);
                    (i as u32, overlap)
                })
                .collect()
        })
        .collect()
}

/// Area-averaging (box) resample with exact integer arithmetic, ties rounding up.
pub fn resize(img: &GrayImage, width: u32, height: u32) -> Result<GrayImage> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidInput(format!(
            "resize target must be at least 1x1, got {width}x{height}"
        )));
    }
    if (width, height) == (img.width(), img.height()) {
        return Ok(img.clone());
    }
    let wx = axis_weights(img.width(), width);
    let wy = axis_weights(img.height(), height);
    let area = img.width() as u64 * img.height() as u64;
    let mut out = Vec::with_capacity(width as usize * height as usize);
    for row_weights in &wy {
        for col_weights in &wx {
            let mut acc = 0u64;
            for &(sy, oy) in row_weights {
                for &(sx, ox) in col_weights {
                    acc += oy * ox * img.get(sx, sy) as u64;
                }
            }
            out.push(((2 * acc + area) / (2 * area)) as u8);
        }
    }
    GrayImage::new(width, height, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn same_size_is_identity() {
        let img = GrayImage::from_fn(8, 8, |x, y| (x * 31 + y * 7) as u8);
        assert_eq!(resize(&img, 8, 8).unwrap(), img);
    }

    #[test]
    fn two_by_two_mean_rounds_half_up() {
        let img = GrayImage::new(2, 2, vec![0, 0, 255, 255]).unwrap();
        assert_eq!(resize(&img, 1, 1).unwrap().pixels(), &[128]);
    }

    #[test]
    fn checkerboard_averages_to_uniform() {
        let img = GrayImage::from_fn(64, 64, |x, y| if (x + y) % 2 == 0 { 0 } else { 255 });
        let small = resize(&img, 8, 8).unwrap();
        // 8x8 block: 32 zeros and 32 x 255 -> mean 127.5 -> 128
        assert!(small.pixels().iter().all(|&p| p == 128));
    }

    #[test]
    fn non_integer_ratio_matches_float_oracle() {
        let img = GrayImage::from_fn(7, 5, |x, y| (x * 37 + y * 11) as u8);
        let out = resize(&img, 3, 2).unwrap();
        for oy in 0..2u32 {
            for ox in 0..3u32 {
                // Continuous box integral over the destination cell, sampled finely.
                let (x0, x1) = (ox as f64 * 7.0 / 3.0, (ox + 1) as f64 * 7.0 / 3.0);
                let (y0, y1) = (oy as f64 * 5.0 / 2.0, (oy + 1) as f64 * 5.0 / 2.0);
                let n = 420;
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let x = x0 + (i as f64 + 0.5) * (x1 - x0) / n as f64;
                        let y = y0 + (j as f64 + 0.5) * (y1 - y0) / n as f64;
                        acc += img.get(x as u32, y as u32) as f64;
                    }
                }
                let mean = acc / (n * n) as f64;
                assert!((out.get(ox, oy) as f64 - mean).abs() <= 0.51, "{ox},{oy}: {} vs {mean}", out.get(ox, oy));
            }
        }
    }

    #[test]
    fn zero_target_rejected() {
        let img = GrayImage::filled(4, 4, 1);
        assert!(resize(&img, 0, 2).is_err());
    }

    proptest! {
        #[test]
        fn resize_is_idempotent(w in 1u32..40, h in 1u32..40, tw in 1u32..20, th in 1u32..20, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let img = GrayImage::from_fn(w, h, |_, _| rng.random());
            let once = resize(&img, tw, th).unwrap();
            prop_assert_eq!(resize(&once, tw, th).unwrap(), once);
        }

        #[test]
        fn constant_stays_constant(w in 1u32..50, h in 1u32..50, tw in 1u32..30, th in 1u32..30, v in any::<u8>()) {
            let out = resize(&GrayImage::filled(w, h, v), tw, th).unwrap();
            prop_assert!(out.pixels().iter().all(|&p| p == v));
        }
    }
}
