use std::path::Path;

use nalgebra::{Matrix3, Point2};

use crate::error::{Error, Result};
use crate::imaging::{encode_gray_png, GrayImage};

use super::dlt::project;

/// `<query>__<candidate>__warp.png`
pub fn triptych_file_name(query: &str, candidate: &str) -> String {
    format!("{query}__{candidate}__warp.png")
}

fn bilinear(img: &GrayImage, x: f64, y: f64) -> Option<u8> {
    let (w, h) = (img.width() as f64, img.height() as f64);
    if !(x >= 0.0 && y >= 0.0 && x <= w - 1.0 && y <= h - 1.0) {
        return None;
    }
    let (x0, y0) = (x.floor(), y.floor());
    let (fx, fy) = (x - x0, y - y0);
    let (x0, y0) = (x0 as i64, y0 as i64);
    let p = |dx: i64, dy: i64| img.get_clamped(x0 + dx, y0 + dy) as f64;
    let v = (1.0 - fy) * ((1.0 - fx) * p(0, 0) + fx * p(1, 0)) + fy * ((1.0 - fx) * p(0, 1) + fx * p(1, 1));
    Some((v + 0.5).floor().clamp(0.0, 255.0) as u8)
}

/// Output pixel `p` of a `width x height` canvas takes `src(H p)`, bilinear; outside is black.
pub fn warp_image(src: &GrayImage, h: &Matrix3<f64>, width: u32, height: u32) -> GrayImage {
    GrayImage::from_fn(width, height, |x, y| {
        project(h, &Point2::new(x as f64, y as f64))
            .ok()
            .and_then(|q| bilinear(src, q.x, q.y))
            .unwrap_or(0)
    })
}

/// Database image, request image, and the request warped back onto the database frame.
///
/// `h` maps database coordinates to request coordinates. Panels share the size of the
/// larger input and are padded with black.
pub fn warp_triptych(db: &GrayImage, request: &GrayImage, h: &Matrix3<f64>) -> GrayImage {
    let pw = db.width().max(request.width());
    let ph = db.height().max(request.height());
    let warped = warp_image(request, h, pw, ph);
    let panels = [db, request, &warped];
    GrayImage::from_fn(3 * pw, ph, |x, y| {
        let panel = panels[(x / pw) as usize];
        let px = x % pw;
        if px < panel.width() && y < panel.height() {
            panel.get(px, y)
        } else {
            0
        }
    })
}

/// Write [`warp_triptych`] as a PNG.
pub fn export_warp_triptych(
    db: &GrayImage,
    request: &GrayImage,
    h: &Matrix3<f64>,
    out_path: impl AsRef<Path>,
) -> Result<()> {
    let out_path = out_path.as_ref();
    let bytes = encode_gray_png(&warp_triptych(db, request, h))?;
    std::fs::write(out_path, bytes).map_err(|e| Error::io(out_path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::{decode_image, to_grayscale};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(w: u32, h: u32, seed: u64) -> GrayImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GrayImage::from_fn(w, h, |_, _| rng.random())
    }

    #[test]
    fn identity_panel_equals_request() {
        let db = noise(30, 20, 1);
        let req = noise(30, 20, 2);
        let t = warp_triptych(&db, &req, &Matrix3::identity());
        assert_eq!(t.width(), 90);
        for y in 0..20 {
            for x in 0..30 {
                assert_eq!(t.get(x + 60, y), req.get(x, y));
                assert_eq!(t.get(x + 30, y), req.get(x, y));
                assert_eq!(t.get(x, y), db.get(x, y));
            }
        }
    }

    #[test]
    fn translation_shifts_content() {
        let req = noise(40, 30, 3);
        let h = Matrix3::new(1.0, 0.0, 7.0, 0.0, 1.0, 4.0, 0.0, 0.0, 1.0);
        let w = warp_image(&req, &h, 40, 30);
        for y in 0..30 {
            for x in 0..40 {
                let expected = if x + 7 < 40 && y + 4 < 30 { req.get(x + 7, y + 4) } else { 0 };
                assert_eq!(w.get(x, y), expected);
            }
        }
    }

    #[test]
    fn export_writes_decodable_png() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(triptych_file_name("q", "c"));
        export_warp_triptych(&noise(25, 10, 4), &noise(20, 12, 5), &Matrix3::identity(), &path).unwrap();
        let img = to_grayscale(&decode_image(&std::fs::read(&path).unwrap(), None).unwrap());
        assert_eq!((img.width(), img.height()), (75, 12));
        assert!(path.ends_with("q__c__warp.png"));
    }
}
