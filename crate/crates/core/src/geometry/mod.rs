//! Homography estimation (normalized DLT inside RANSAC), reprojection error,
//! distortion classification and warp visualisation.

mod distortion;
mod dlt;
mod ransac;
mod warp;

pub use distortion::{classify_distortion, DistortionClass, DistortionReport};
pub use dlt::{affine_lstsq, dlt_homography, project, reprojection_error, Correspondence, Reprojection};
pub use ransac::{
    ransac_homography, ransac_pair_score, symmetric_transfer_error, Homography, Model, PairScoreOutcome,
    RansacParams,
};
pub use warp::{export_warp_triptych, triptych_file_name, warp_image, warp_triptych};

pub use nalgebra::{Matrix3, Point2};
