use std::f32::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::GrayImage;

use super::fast::{check_size, check_threshold, pyramid_corners, Pyramid, MIN_SIDE};
use super::pattern::PATTERN;
use super::{Descriptor, FeatureSet, Keypoint};

/// Radius of the orientation patch and bound of the sampling pattern.
pub const PATCH_RADIUS: i64 = 15;
/// Keypoints closer than this to a level border are not described.
const EDGE_MARGIN: u32 = 22;
const SMOOTH_RADIUS: i64 = 2;

/// Extraction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbParams {
    pub n_max: usize,
    pub fast_threshold: u8,
    pub levels: u8,
    pub scale_factor: f32,
}

impl Default for OrbParams {
    fn default() -> Self {
        Self {
            n_max: 500,
            fast_threshold: 20,
            levels: 8,
            scale_factor: 1.2,
        }
    }
}

fn orient_at(img: &GrayImage, cx: i64, cy: i64) -> f32 {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let (mut m10, mut m01) = (0i64, 0i64);
    for dy in -PATCH_RADIUS..=PATCH_RADIUS {
        let y = cy + dy;
        if y < 0 || y >= h {
            continue;
        }
        for dx in -PATCH_RADIUS..=PATCH_RADIUS {
            let x = cx + dx;
            if x < 0 || x >= w || dx * dx + dy * dy > PATCH_RADIUS * PATCH_RADIUS {
                continue;
            }
            let v = img.get(x as u32, y as u32) as i64;
            m10 += dx * v;
            m01 += dy * v;
        }
    }
    if m10 == 0 && m01 == 0 {
        return 0.0;
    }
    let a = (m01 as f64).atan2(m10 as f64) as f32;
    let a = if a < 0.0 { a + TAU } else { a };
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Intensity-centroid orientation of the radius-15 disc around `kp`, in `img` coordinates.
///
/// Pixels outside the image are ignored. A zero moment vector yields 0.
pub fn orient(img: &GrayImage, kp: &Keypoint) -> f32 {
    orient_at(img, kp.x.round() as i64, kp.y.round() as i64)
}

/// 5x5 box sum around `(x, y)` with clamped borders.
#[inline]
fn box_sum(img: &GrayImage, x: i64, y: i64) -> u16 {
    let mut s = 0u16;
    for yy in y - SMOOTH_RADIUS..=y + SMOOTH_RADIUS {
        for xx in x - SMOOTH_RADIUS..=x + SMOOTH_RADIUS {
            s += img.get_clamped(xx, yy) as u16;
        }
    }
    s
}

fn describe_at(img: &GrayImage, cx: i64, cy: i64, angle: f32) -> Result<Descriptor> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let (sin, cos) = angle.sin_cos();
    let rotate = |x: i8, y: i8| -> (i64, i64) {
        let (x, y) = (x as f32, y as f32);
        (
            cx + (cos * x - sin * y).round() as i64,
            cy + (sin * x + cos * y).round() as i64,
        )
    };
    let mut d = Descriptor::default();
    for (i, &[x1, y1, x2, y2]) in PATTERN.iter().enumerate() {
        let (px, py) = rotate(x1, y1);
        let (qx, qy) = rotate(x2, y2);
        if px < 0 || py < 0 || qx < 0 || qy < 0 || px >= w || qx >= w || py >= h || qy >= h {
            return Err(Error::PatchOutOfBounds {
                x: cx as f32,
                y: cy as f32,
            });
        }
        d.set_bit(i, box_sum(img, px, py) < box_sum(img, qx, qy));
    }
    Ok(d)
}

/// Steered BRIEF descriptor of `kp` in `img` coordinates, using `kp.angle`.
pub fn describe(img: &GrayImage, kp: &Keypoint) -> Result<Descriptor> {
    describe_at(img, kp.x.round() as i64, kp.y.round() as i64, kp.angle)
}

/// [`extract_orb_with`] using default parameters and the given cap.
pub fn extract_orb(img: &GrayImage, n_max: usize) -> Result<FeatureSet> {
    extract_orb_with(
        img,
        &OrbParams {
            n_max,
            ..OrbParams::default()
        },
    )
}

/// Detect, orient and describe up to `params.n_max` keypoints.
pub fn extract_orb_with(img: &GrayImage, params: &OrbParams) -> Result<FeatureSet> {
    check_threshold(params.fast_threshold)?;
    check_size(img)?;
    let pyramid = Pyramid::build(img, params.levels, params.scale_factor, MIN_SIDE)?;
    let corners = pyramid_corners(&pyramid, params.fast_threshold, EDGE_MARGIN, params.n_max);
    let mut keypoints = Vec::with_capacity(corners.len());
    let mut descriptors = Vec::with_capacity(corners.len());
    for mut kp in corners {
        let lvl = kp.octave as usize;
        let level = pyramid.level(lvl);
        let s = pyramid.scale(lvl);
        let (cx, cy) = ((kp.x / s).round() as i64, (kp.y / s).round() as i64);
        kp.angle = orient_at(level, cx, cy);
        descriptors.push(describe_at(level, cx, cy, kp.angle)?);
        keypoints.push(kp);
    }
    FeatureSet::new("", keypoints, descriptors)
}
