use crate::error::{Error, Result};
use crate::imaging::GrayImage;

/// Sobel gradient magnitude with replicated borders, rounded and clamped to 255.
pub fn sobel_edges(img: &GrayImage) -> Result<GrayImage> {
    if img.width() < 3 || img.height() < 3 {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min_width: 3,
            min_height: 3,
        });
    }
    Ok(GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let (x, y) = (x as i64, y as i64);
        let p = |dx: i64, dy: i64| img.get_clamped(x + dx, y + dy) as i32;
        let gx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
        let gy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
        let magnitude = ((gx * gx + gy * gy) as f64).sqrt().round();
        magnitude.min(255.0) as u8
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_has_no_edges() {
        let out = sobel_edges(&GrayImage::filled(9, 6, 77)).unwrap();
        assert!(out.pixels().iter().all(|&p| p == 0));
    }

    #[test]
    fn vertical_step_peaks_on_edge_columns() {
        let img = GrayImage::from_fn(10, 5, |x, _| if x < 5 { 0 } else { 255 });
        let out = sobel_edges(&img).unwrap();
        for y in 0..5 {
            for x in 0..10 {
                let expected = if x == 4 || x == 5 { 255 } else { 0 };
                assert_eq!(out.get(x, y), expected, "({x},{y})");
            }
        }
    }

    #[test]
    fn ramp_matches_direct_convolution() {
        let img = GrayImage::from_fn(8, 6, |x, y| (x * 9 + y * 4) as u8);
        let out = sobel_edges(&img).unwrap();
        let kx = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]];
        let ky = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]];
        for y in 0..6i64 {
            for x in 0..8i64 {
                let (mut gx, mut gy) = (0i64, 0i64);
                for (r, (krx, kry)) in kx.iter().zip(&ky).enumerate() {
                    for c in 0..3 {
                        let sx = (x + c as i64 - 1).clamp(0, 7);
                        let sy = (y + r as i64 - 1).clamp(0, 5);
                        let v = (sx * 9 + sy * 4) as i64;
                        gx += krx[c] * v;
                        gy += kry[c] * v;
                    }
                }
                let m = ((gx * gx + gy * gy) as f64).sqrt().round().min(255.0) as u8;
                assert_eq!(out.get(x as u32, y as u32), m);
            }
        }
        // interior: gx = 4 * 2 * 9 = 72, gy = 4 * 2 * 4 = 32
        assert_eq!(out.get(3, 3), (72f64.hypot(32.0)).round() as u8);
    }

    #[test]
    fn too_small() {
        assert!(matches!(
            sobel_edges(&GrayImage::filled(2, 5, 0)),
            Err(Error::ImageTooSmall { .. })
        ));
    }
}
