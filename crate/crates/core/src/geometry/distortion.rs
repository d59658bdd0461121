use nalgebra::{Matrix2, Matrix3, Point2};
use serde::{Deserialize, Serialize};

use super::dlt::{reprojection_error, Correspondence};

const SCALE_RANGE: (f64, f64) = (0.5, 2.0);
const MAX_ANISOTROPY: f64 = 2.0;
const MAX_ROTATION_DEG: f64 = 15.0;
/// Perspective bound, multiplied by `1 / min(width, height)`.
const PERSPECTIVE_BUDGET: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DistortionClass {
    Light,
    Strong,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub class: DistortionClass,
    pub translation: f64,
    /// Singular values of the upper-left 2x2 block, largest first.
    pub scale_factors: (f64, f64),
    pub anisotropy: f64,
    pub rotation_deg: f64,
    /// `|h31| + |h32|` after normalising `h33` to 1.
    pub perspective: f64,
    /// Warped corner quad is self-intersecting, non-convex or crosses the line at infinity.
    pub corner_fold: bool,
    /// Warped quad is convex but mirrored.
    pub orientation_flip: bool,
    pub mean_reprojection_error: Option<f64>,
}

impl DistortionReport {
    /// Attach the mean reprojection error of `pairs` under `h`, when defined.
    pub fn with_reprojection(mut self, h: &Matrix3<f64>, pairs: &[Correspondence]) -> Self {
        self.mean_reprojection_error = reprojection_error(h, pairs).ok().map(|r| r.mean);
        self
    }
}

fn cross(o: Point2<f64>, a: Point2<f64>, b: Point2<f64>) -> f64 {
    (a.x - o.x) * (b.y - a.y) - (a.y - o.y) * (b.x - a.x)
}

/// Classify how strongly `h` deforms a `source_dims` image.
pub fn classify_distortion(h: &Matrix3<f64>, source_dims: (u32, u32)) -> DistortionReport {
    let (w, ht) = (source_dims.0.max(1) as f64, source_dims.1.max(1) as f64);
    let corners = [(0.0, 0.0), (w, 0.0), (w, ht), (0.0, ht)];
    let mut warped = Vec::with_capacity(4);
    let mut ws = Vec::with_capacity(4);
    for &(x, y) in &corners {
        let hx = h[(0, 0)] * x + h[(0, 1)] * y + h[(0, 2)];
        let hy = h[(1, 0)] * x + h[(1, 1)] * y + h[(1, 2)];
        let hw = h[(2, 0)] * x + h[(2, 1)] * y + h[(2, 2)];
        ws.push(hw);
        warped.push(Point2::new(hx / hw, hy / hw));
    }
    let scale_w = ws.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let crosses_infinity = scale_w == 0.0
        || ws.iter().any(|v| v.abs() <= 1e-12 * scale_w)
        || !(ws.iter().all(|&v| v > 0.0) || ws.iter().all(|&v| v < 0.0));

    let (mut corner_fold, mut orientation_flip) = (crosses_infinity, false);
    if !crosses_infinity {
        let z: Vec<f64> = (0..4)
            .map(|i| cross(warped[i], warped[(i + 1) % 4], warped[(i + 2) % 4]))
            .collect();
        if z.iter().all(|&v| v < 0.0) {
            orientation_flip = true;
        } else if !z.iter().all(|&v| v > 0.0) {
            corner_fold = true;
        }
    }

    let h33 = h[(2, 2)];
    let n = if h33.abs() > 1e-12 * h.abs().max() {
        h / h33
    } else {
        h / h.norm()
    };
    let a = Matrix2::new(n[(0, 0)], n[(0, 1)], n[(1, 0)], n[(1, 1)]);
    let sv = a.singular_values();
    let (s1, s2) = (sv[0].max(sv[1]), sv[0].min(sv[1]));
    let anisotropy = if s2 > 0.0 { s1 / s2 } else { f64::INFINITY };
    let rotation_deg = (n[(1, 0)] - n[(0, 1)]).atan2(n[(0, 0)] + n[(1, 1)]).to_degrees();
    let translation = n[(0, 2)].hypot(n[(1, 2)]);
    let perspective = n[(2, 0)].abs() + n[(2, 1)].abs();

    let class = if corner_fold || orientation_flip {
        DistortionClass::Degenerate
    } else if s1 > SCALE_RANGE.1
        || s2 < SCALE_RANGE.0
        || anisotropy > MAX_ANISOTROPY
        || rotation_deg.abs() > MAX_ROTATION_DEG
        || perspective > PERSPECTIVE_BUDGET / w.min(ht)
    {
        DistortionClass::Strong
    } else {
        DistortionClass::Light
    };
    DistortionReport {
        class,
        translation,
        scale_factors: (s1, s2),
        anisotropy,
        rotation_deg,
        perspective,
        corner_fold,
        orientation_flip,
        mean_reprojection_error: None,
    }
}
