//! Benchmarking toolkit for image-matching algorithms on screenshot corpora.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: images, ground truth, match graphs and their file formats.
//! * [`imaging`]: decoding and preprocessing (grayscale, resize, text hiding, edges).
//! * [`fuzzy_hash`]: aHash / dHash / pHash / wHash and TLSH with their distances.
//! * [`features`]: ORB extraction, matchers, match filters, LSH and bag-of-words.
//! * [`geometry`]: DLT + RANSAC homography filtering and distortion analysis.
//! * [`evaluation`]: ground-truth scoring, inclusion / pair-quality matrices, reports.
//! * [`bench`]: configuration sweeps, timed execution and output bundles.

pub mod bench;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod fuzzy_hash;
pub mod geometry;
pub mod imaging;
pub mod model;

pub use error::{Error, Result};
