use nalgebra::{Matrix3, Point2};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{pair_score_capped, Keypoint, LenMode, Match};

use super::distortion::{classify_distortion, DistortionClass, DistortionReport};
use super::dlt::{affine_lstsq, any_three_collinear, dlt_homography, project, Correspondence};

/// Transformation model fitted by RANSAC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Model {
    #[default]
    Homography,
    Affine,
}

impl Model {
    pub fn sample_size(self) -> usize {
        match self {
            Model::Homography => 4,
            Model::Affine => 3,
        }
    }

    fn fit(self, pairs: &[Correspondence]) -> Result<Matrix3<f64>> {
        match self {
            Model::Homography => dlt_homography(pairs),
            Model::Affine => affine_lstsq(pairs),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RansacParams {
    pub iters: usize,
    /// Symmetric transfer error bound, pixels.
    pub reproj_thresh: f64,
    pub seed: u64,
    /// Early-exit confidence for adaptive termination.
    pub confidence: f64,
    /// Smallest consensus accepted as a model.
    pub min_inliers: usize,
    pub model: Model,
}

impl Default for RansacParams {
    fn default() -> Self {
        Self {
            iters: 2000,
            reproj_thresh: 3.0,
            seed: 0,
            confidence: 0.995,
            min_inliers: 8,
            model: Model::Homography,
        }
    }
}

/// Estimated transform with the consensus it was refitted on.
#[derive(Debug, Clone, PartialEq)]
pub struct Homography {
    pub matrix: Matrix3<f64>,
    pub inlier_mask: Vec<bool>,
    pub inlier_count: usize,
}

/// `sqrt(|Hp - q|² + |H⁻¹q - p|²)`; infinite when either side maps to infinity.
pub fn symmetric_transfer_error(
    h: &Matrix3<f64>,
    h_inv: &Matrix3<f64>,
    p: &Point2<f64>,
    q: &Point2<f64>,
) -> f64 {
    match (project(h, p), project(h_inv, q)) {
        (Ok(hp), Ok(hq)) => ((hp - q).norm_squared() + (hq - p).norm_squared()).sqrt(),
        _ => f64::INFINITY,
    }
}

fn consensus(h: &Matrix3<f64>, pairs: &[Correspondence], thresh: f64) -> Option<(Vec<bool>, usize, f64)> {
    let h_inv = h.try_inverse()?;
    let mut mask = Vec::with_capacity(pairs.len());
    let (mut count, mut err) = (0, 0.0);
    for (p, q) in pairs {
        let e = symmetric_transfer_error(h, &h_inv, p, q);
        let inlier = e < thresh;
        if inlier {
            count += 1;
            err += e;
        }
        mask.push(inlier);
    }
    Some((mask, count, err))
}

fn correspondences(matches: &[Match], kp_a: &[Keypoint], kp_b: &[Keypoint]) -> Result<Vec<Correspondence>> {
    matches
        .iter()
        .map(|m| {
            let a = kp_a.get(m.query).ok_or_else(|| Error::InvalidInput(format!("query index {} out of range", m.query)))?;
            let b = kp_b.get(m.train).ok_or_else(|| Error::InvalidInput(format!("train index {} out of range", m.train)))?;
            Ok((Point2::new(a.x as f64, a.y as f64), Point2::new(b.x as f64, b.y as f64)))
        })
        .collect()
}

/// Seeded RANSAC: minimal samples, symmetric-transfer consensus, refit on the best set.
pub fn ransac_homography(
    matches: &[Match],
    kp_a: &[Keypoint],
    kp_b: &[Keypoint],
    params: &RansacParams,
) -> Result<Homography> {
    let pairs = correspondences(matches, kp_a, kp_b)?;
    ransac_on_pairs(&pairs, params)
}

pub(crate) fn ransac_on_pairs(pairs: &[Correspondence], params: &RansacParams) -> Result<Homography> {
    let s = params.model.sample_size();
    if pairs.len() < s {
        return Err(Error::TooFewMatches {
            needed: s,
            got: pairs.len(),
        });
    }
    let min_inliers = params.min_inliers.max(s);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best: Option<(Matrix3<f64>, Vec<bool>, usize, f64)> = None;
    let mut budget = params.iters;
    let mut it = 0;
    while it < budget {
        it += 1;
        let idx = sample(&mut rng, pairs.len(), s);
        let subset: Vec<Correspondence> = idx.iter().map(|i| pairs[i]).collect();
        let src: Vec<Point2<f64>> = subset.iter().map(|c| c.0).collect();
        let dst: Vec<Point2<f64>> = subset.iter().map(|c| c.1).collect();
        if any_three_collinear(&src) || any_three_collinear(&dst) {
            continue;
        }
        let Ok(h) = params.model.fit(&subset) else {
            continue;
        };
        let Some((mask, count, err)) = consensus(&h, pairs, params.reproj_thresh) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((_, _, c, e)) => count > *c || (count == *c && err < *e),
        };
        if better {
            best = Some((h, mask, count, err));
            let w = count as f64 / pairs.len() as f64;
            let p_fail = 1.0 - w.powi(s as i32);
            if p_fail <= 0.0 {
                budget = it;
            } else if p_fail < 1.0 {
                let needed = ((1.0 - params.confidence).ln() / p_fail.ln()).ceil();
                if needed.is_finite() && needed >= 0.0 {
                    budget = budget.min((needed as usize).max(1)).max(it);
                }
            }
        }
    }
    let (mut h, mut mask, mut count, mut err) = match best {
        Some(b) if b.2 >= min_inliers => b,
        _ => return Err(Error::NoConsensus),
    };
    // Refit on the consensus while it does not shrink.
    for _ in 0..4 {
        let inliers: Vec<Correspondence> = pairs
            .iter()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(c, _)| *c)
            .collect();
        let Ok(refit) = params.model.fit(&inliers) else {
            break;
        };
        let Some((m2, c2, e2)) = consensus(&refit, pairs, params.reproj_thresh) else {
            break;
        };
        if c2 < count || (c2 == count && e2 >= err) {
            break;
        }
        let grew = c2 > count;
        (h, mask, count, err) = (refit, m2, c2, e2);
        if !grew {
            break;
        }
    }
    Ok(Homography {
        matrix: h,
        inlier_mask: mask,
        inlier_count: count,
    })
}

/// Pair score recomputed through RANSAC.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScoreOutcome {
    pub score: f64,
    /// Score over all input matches, before geometric filtering.
    pub raw_score: f64,
    pub homography: Option<Homography>,
    pub report: Option<DistortionReport>,
}

/// [`pair_score_capped`] over RANSAC inliers.
///
/// No consensus (or too few matches) yields 1.0. With `matrix_filter`, a
/// DEGENERATE transform also yields 1.0.
#[allow(clippy::too_many_arguments)]
pub fn ransac_pair_score(
    matches: &[Match],
    kp_a: &[Keypoint],
    kp_b: &[Keypoint],
    n_a: usize,
    n_b: usize,
    len_mode: LenMode,
    source_dims: (u32, u32),
    params: &RansacParams,
    matrix_filter: bool,
) -> Result<PairScoreOutcome> {
    let raw_score = pair_score_capped(matches, n_a, n_b, len_mode)?;
    let h = match ransac_homography(matches, kp_a, kp_b, params) {
        Ok(h) => h,
        Err(Error::NoConsensus | Error::TooFewMatches { .. }) => {
            return Ok(PairScoreOutcome {
                score: 1.0,
                raw_score,
                homography: None,
                report: None,
            })
        }
        Err(e) => return Err(e),
    };
    let inliers: Vec<Match> = matches
        .iter()
        .zip(&h.inlier_mask)
        .filter(|(_, &m)| m)
        .map(|(m, _)| *m)
        .collect();
    let mut score = pair_score_capped(&inliers, n_a, n_b, len_mode)?;
    let pairs = correspondences(&inliers, kp_a, kp_b)?;
    let report = classify_distortion(&h.matrix, source_dims).with_reprojection(&h.matrix, &pairs);
    if matrix_filter && report.class == DistortionClass::Degenerate {
        score = 1.0;
    }
    Ok(PairScoreOutcome {
        score,
        raw_score,
        homography: Some(h),
        report: Some(report),
    })
}
