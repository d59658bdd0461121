use nalgebra::{DMatrix, Matrix3, Point2};

use crate::error::{Error, Result};

/// Source point and its claimed image.
pub type Correspondence = (Point2<f64>, Point2<f64>);

const W_EPS: f64 = 1e-12;

/// Apply `h` to `p`; fails when the point maps to infinity.
pub fn project(h: &Matrix3<f64>, p: &Point2<f64>) -> Result<Point2<f64>> {
    let x = h[(0, 0)] * p.x + h[(0, 1)] * p.y + h[(0, 2)];
    let y = h[(1, 0)] * p.x + h[(1, 1)] * p.y + h[(1, 2)];
    let w = h[(2, 0)] * p.x + h[(2, 1)] * p.y + h[(2, 2)];
    if w.abs() < W_EPS * (x.abs() + y.abs()).max(1.0) {
        return Err(Error::PointAtInfinity);
    }
    Ok(Point2::new(x / w, y / w))
}

/// Per-pair and mean forward reprojection error.
#[derive(Debug, Clone, PartialEq)]
pub struct Reprojection {
    pub per_pair: Vec<f64>,
    pub mean: f64,
}

pub fn reprojection_error(h: &Matrix3<f64>, pairs: &[Correspondence]) -> Result<Reprojection> {
    let per_pair = pairs
        .iter()
        .map(|(p, q)| project(h, p).map(|hp| (hp - q).norm()))
        .collect::<Result<Vec<f64>>>()?;
    let mean = if per_pair.is_empty() {
        0.0
    } else {
        per_pair.iter().sum::<f64>() / per_pair.len() as f64
    };
    Ok(Reprojection { per_pair, mean })
}

/// Similarity moving the centroid to the origin and the mean distance to √2.
fn normalizer(points: impl Iterator<Item = Point2<f64>> + Clone) -> Result<Matrix3<f64>> {
    let n = points.clone().count() as f64;
    let (sx, sy) = points.clone().fold((0.0, 0.0), |(a, b), p| (a + p.x, b + p.y));
    let (cx, cy) = (sx / n, sy / n);
    let mean_dist = points
        .map(|p| ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt())
        .sum::<f64>()
        / n;
    if !(mean_dist > 1e-12) || !mean_dist.is_finite() {
        return Err(Error::DegenerateConfiguration);
    }
    let s = std::f64::consts::SQRT_2 / mean_dist;
    Ok(Matrix3::new(s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0))
}

fn apply(t: &Matrix3<f64>, p: &Point2<f64>) -> Point2<f64> {
    Point2::new(t[(0, 0)] * p.x + t[(0, 2)], t[(1, 1)] * p.y + t[(1, 2)])
}

pub(crate) fn collinear(a: &Point2<f64>, b: &Point2<f64>, c: &Point2<f64>) -> bool {
    let area2 = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    let scale = (b - a).norm().max((c - a).norm()).max(1e-300);
    area2.abs() <= 1e-9 * scale * scale
}

pub(crate) fn any_three_collinear(points: &[Point2<f64>]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if collinear(&points[i], &points[j], &points[k]) {
                    return true;
                }
            }
        }
    }
    false
}

fn scale_to_unit(mut h: Matrix3<f64>) -> Matrix3<f64> {
    let h33 = h[(2, 2)];
    if h33.abs() > 1e-12 * h.abs().max() {
        h /= h33;
    } else {
        let n = h.norm();
        h /= n;
    }
    h
}

/// Normalized DLT. Four pairs give the exact solution; more give the algebraic least-squares fit.
pub fn dlt_homography(pairs: &[Correspondence]) -> Result<Matrix3<f64>> {
    if pairs.len() < 4 {
        return Err(Error::TooFewMatches {
            needed: 4,
            got: pairs.len(),
        });
    }
    let src: Vec<Point2<f64>> = pairs.iter().map(|c| c.0).collect();
    let dst: Vec<Point2<f64>> = pairs.iter().map(|c| c.1).collect();
    if pairs.len() == 4 && (any_three_collinear(&src) || any_three_collinear(&dst)) {
        return Err(Error::DegenerateConfiguration);
    }
    let t1 = normalizer(src.iter().copied())?;
    let t2 = normalizer(dst.iter().copied())?;
    let rows = (2 * pairs.len()).max(9);
    let mut a = DMatrix::<f64>::zeros(rows, 9);
    for (i, (p, q)) in pairs.iter().enumerate() {
        let p = apply(&t1, p);
        let q = apply(&t2, q);
        let r = 2 * i;
        a.row_mut(r).copy_from_slice(&[0.0, 0.0, 0.0, -p.x, -p.y, -1.0, q.y * p.x, q.y * p.y, q.y]);
        a.row_mut(r + 1)
            .copy_from_slice(&[p.x, p.y, 1.0, 0.0, 0.0, 0.0, -q.x * p.x, -q.x * p.y, -q.x]);
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::DegenerateConfiguration)?;
    let sv = &svd.singular_values;
    let (mut imin, mut smin) = (0, f64::INFINITY);
    for i in 0..sv.len() {
        if sv[i] < smin {
            smin = sv[i];
            imin = i;
        }
    }
    // A second (near-)null direction means the solution is not unique.
    let mut sorted: Vec<f64> = sv.iter().copied().collect();
    sorted.sort_by(f64::total_cmp);
    if sorted[1] <= 1e-10 * sorted[8].max(1e-300) {
        return Err(Error::DegenerateConfiguration);
    }
    let v = v_t.row(imin);
    let hn = Matrix3::new(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]);
    let t2_inv = t2.try_inverse().ok_or(Error::DegenerateConfiguration)?;
    let h = t2_inv * hn * t1;
    if !h.iter().all(|x| x.is_finite()) {
        return Err(Error::DegenerateConfiguration);
    }
    Ok(scale_to_unit(h))
}

/// Least-squares affine map (last row `0 0 1`) from ≥3 non-collinear pairs.
pub fn affine_lstsq(pairs: &[Correspondence]) -> Result<Matrix3<f64>> {
    if pairs.len() < 3 {
        return Err(Error::TooFewMatches {
            needed: 3,
            got: pairs.len(),
        });
    }
    let src: Vec<Point2<f64>> = pairs.iter().map(|c| c.0).collect();
    if pairs.len() == 3 && any_three_collinear(&src) {
        return Err(Error::DegenerateConfiguration);
    }
    let t1 = normalizer(src.iter().copied())?;
    let t2 = normalizer(pairs.iter().map(|c| c.1))?;
    let n = pairs.len();
    let mut a = DMatrix::<f64>::zeros(n, 3);
    let mut b = DMatrix::<f64>::zeros(n, 2);
    for (i, (p, q)) in pairs.iter().enumerate() {
        let p = apply(&t1, p);
        let q = apply(&t2, q);
        a.row_mut(i).copy_from_slice(&[p.x, p.y, 1.0]);
        b.row_mut(i).copy_from_slice(&[q.x, q.y]);
    }
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    if sv.min() <= 1e-10 * smax.max(1e-300) {
        return Err(Error::DegenerateConfiguration);
    }
    let x = svd
        .solve(&b, 1e-14)
        .map_err(|_| Error::DegenerateConfiguration)?;
    let an = Matrix3::new(
        x[(0, 0)],
        x[(1, 0)],
        x[(2, 0)],
        x[(0, 1)],
        x[(1, 1)],
        x[(2, 1)],
        0.0,
        0.0,
        1.0,
    );
    let t2_inv = t2.try_inverse().ok_or(Error::DegenerateConfiguration)?;
    Ok(scale_to_unit(t2_inv * an * t1))
}
