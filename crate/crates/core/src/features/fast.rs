use crate::error::{Error, Result};
use crate::imaging::{resize, GrayImage};

use super::Keypoint;

/// Bresenham circle of radius 3, clockwise from 12 o'clock (dx, dy).
pub(crate) const CIRCLE: [(i32, i32); 16] = [
    (0, -3),
    (1, -3),
    (2, -2),
    (3, -1),
    (3, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 3),
    (-1, 3),
    (-2, 2),
    (-3, 1),
    (-3, 0),
    (-3, -1),
    (-2, -2),
    (-1, -3),
];

const ARC: usize = 9;
const HARRIS_BLOCK: i64 = 7;
const HARRIS_K: f64 = 0.04;
pub(crate) const MIN_SIDE: u32 = 7;
const FAST_BORDER: u32 = 3;

/// FAST-9 segment test at `(x, y)`; caller guarantees a 3 px margin.
pub fn segment_test(img: &GrayImage, x: u32, y: u32, threshold: u8) -> bool {
    let c = img.get(x, y) as i16;
    let t = threshold as i16;
    let mut state = [0i8; 16];
    for (s, &(dx, dy)) in state.iter_mut().zip(CIRCLE.iter()) {
        let p = img.get((x as i32 + dx) as u32, (y as i32 + dy) as u32) as i16;
        *s = if p > c + t {
            1
        } else if p < c - t {
            -1
        } else {
            0
        };
    }
    for sign in [1i8, -1] {
        let mut run = 0;
        for i in 0..16 + ARC - 1 {
            if state[i % 16] == sign {
                run += 1;
                if run >= ARC {
                    return true;
                }
            } else {
                run = 0;
            }
        }
    }
    false
}

/// Harris corner measure over a 7x7 block of Sobel gradients (k = 0.04).
pub fn harris_response(img: &GrayImage, x: u32, y: u32) -> f32 {
    let r = HARRIS_BLOCK / 2;
    let (cx, cy) = (x as i64, y as i64);
    let (mut a, mut b, mut c) = (0f64, 0f64, 0f64);
    for yy in cy - r..=cy + r {
        for xx in cx - r..=cx + r {
            let p = |dx: i64, dy: i64| img.get_clamped(xx + dx, yy + dy) as f64;
            let gx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
            let gy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
            a += gx * gx;
            b += gy * gy;
            c += gx * gy;
        }
    }
    let scale = 1.0 / (4.0 * HARRIS_BLOCK as f64 * 255.0);
    let s4 = scale.powi(4);
    ((a * b - c * c - HARRIS_K * (a + b) * (a + b)) * s4) as f32
}

/// Corners of one image: segment test, Harris response, 3x3 non-maximum suppression.
pub(crate) fn detect_level(img: &GrayImage, threshold: u8, border: u32) -> Vec<(u32, u32, f32)> {
    let (w, h) = (img.width(), img.height());
    let border = border.max(FAST_BORDER);
    if w <= 2 * border || h <= 2 * border {
        return Vec::new();
    }
    let mut map = vec![f32::NEG_INFINITY; w as usize * h as usize];
    let mut corners = Vec::new();
    for y in border..h - border {
        for x in border..w - border {
            if segment_test(img, x, y, threshold) {
                let r = harris_response(img, x, y);
                map[(y * w + x) as usize] = r;
                corners.push((x, y, r));
            }
        }
    }
    corners.retain(|&(x, y, r)| {
        let idx = (y * w + x) as usize;
        for dy in -1i32..=1 {
            for dx in -1i32..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let n = ((y as i32 + dy) as u32 * w + (x as i32 + dx) as u32) as usize;
                let other = map[n];
                // Equal responses: the earlier pixel in raster order wins.
                if other > r || (other == r && n < idx) {
                    return false;
                }
            }
        }
        true
    });
    corners
}

/// Scale pyramid built by area resampling from level 0.
#[derive(Debug, Clone)]
pub struct Pyramid {
    levels: Vec<GrayImage>,
    scales: Vec<f32>,
}

impl Pyramid {
    /// Levels whose sides both reach `min_side` are kept; coarser ones are dropped.
    pub fn build(img: &GrayImage, n_levels: u8, factor: f32, min_side: u32) -> Result<Self> {
        let mut levels = Vec::new();
        let mut scales = Vec::new();
        for i in 0..n_levels.max(1) {
            let s = factor.powi(i as i32);
            let w = (img.width() as f32 / s).round() as u32;
            let h = (img.height() as f32 / s).round() as u32;
            if w < min_side || h < min_side {
                break;
            }
            levels.push(if i == 0 { img.clone() } else { resize(img, w, h)? });
            scales.push(s);
        }
        Ok(Self { levels, scales })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, i: usize) -> &GrayImage {
        &self.levels[i]
    }

    /// Level-0 pixels per level-`i` pixel.
    pub fn scale(&self, i: usize) -> f32 {
        self.scales[i]
    }
}

pub(crate) fn check_threshold(threshold: u8) -> Result<()> {
    if threshold == 0 {
        return Err(Error::InvalidInput("FAST threshold must be in [1, 255]".into()));
    }
    Ok(())
}

pub(crate) fn check_size(img: &GrayImage) -> Result<()> {
    if img.width() < MIN_SIDE || img.height() < MIN_SIDE {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min_width: MIN_SIDE,
            min_height: MIN_SIDE,
        });
    }
    Ok(())
}

/// Corners from every pyramid level, strongest first (ties by octave, then raster order).
pub(crate) fn pyramid_corners(
    pyramid: &Pyramid,
    threshold: u8,
    border: u32,
    n_max: usize,
) -> Vec<Keypoint> {
    let mut all: Vec<(u8, u32, u32, f32)> = Vec::new();
    for lvl in 0..pyramid.len() {
        for (x, y, r) in detect_level(pyramid.level(lvl), threshold, border) {
            all.push((lvl as u8, x, y, r));
        }
    }
    all.sort_by(|a, b| {
        b.3.total_cmp(&a.3)
            .then(a.0.cmp(&b.0))
            .then(a.2.cmp(&b.2))
            .then(a.1.cmp(&b.1))
    });
    all.truncate(n_max);
    all.into_iter()
        .map(|(lvl, x, y, r)| {
            let s = pyramid.scale(lvl as usize);
            Keypoint {
                x: x as f32 * s,
                y: y as f32 * s,
                response: r,
                angle: 0.0,
                octave: lvl,
            }
        })
        .collect()
}

/// FAST-9 corners over an 8-level, factor-1.2 pyramid, ranked by Harris response.
///
/// Angles are left at 0; see [`super::orient`].
pub fn detect_fast(img: &GrayImage, threshold: u8, n_max: usize) -> Result<Vec<Keypoint>> {
    check_threshold(threshold)?;
    check_size(img)?;
    let pyramid = Pyramid::build(img, 8, 1.2, MIN_SIDE)?;
    Ok(pyramid_corners(&pyramid, threshold, FAST_BORDER, n_max))
}
