use std::collections::BTreeMap;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{max_score, true_positive_score};
use crate::features::{
    cross_check, extract_orb_with, filter_ratio, knn_match, pair_score_capped, BruteForce, FeatureSet,
    LshIndex, LshParams, Match, MatchList, OrbParams, RatioMode,
};
use crate::fuzzy_hash::{
    hash_image, normalized_hash_score, tlsh_distance, tlsh_hash, FuzzyHash, TlshDigest, TLSH_MAX_DISTANCE,
};
use crate::geometry::{ransac_pair_score, RansacParams};
use crate::imaging::{load_image, paint_boxes, resize, sobel_edges, to_grayscale, BoxList, GrayImage};
use crate::model::{graph_from_ranked, Dataset, DatasetEntry, GroundTruth, MatchGraph, Node};

use super::config::{Algorithm, Backend, FilterKind, OrbConfig, Preprocessing, RunConfig};
use super::memory::measure_memory;

/// Environment variable bounding the worker pool.
pub const WORKERS_ENV: &str = "IMATCH_WORKERS";

/// `IMATCH_WORKERS` when set to a positive integer, otherwise the available parallelism.
pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub workers: usize,
    /// Ranked candidates kept per query in the graph.
    pub top_k: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            workers: workers_from_env(),
            top_k: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedImage {
    pub id: String,
    pub reason: String,
}

/// Timing, memory and quality figures of one configuration run. Times are seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub config_name: String,
    pub images_total: usize,
    pub images_processed: usize,
    pub images_skipped: usize,
    pub skipped: Vec<SkippedImage>,
    /// Decoding and sidecar reads, excluded from pre-computation.
    pub io_seconds: f64,
    pub precompute_seconds_total: f64,
    pub precompute_seconds_per_image: f64,
    pub queries: usize,
    pub matching_seconds_total: f64,
    pub matching_seconds_per_query: f64,
    pub peak_memory_bytes: u64,
    pub raw_tp: Option<f64>,
    pub normalized_tp: Option<f64>,
    pub max_score: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub graph: MatchGraph,
    pub stats: StatsRecord,
}

struct OrbItem {
    features: FeatureSet,
    index: Option<LshIndex>,
    dims: (u32, u32),
}

enum Item {
    Hash(FuzzyHash),
    Tlsh(TlshDigest),
    Orb(Box<OrbItem>),
}

struct Prepared {
    id: String,
    item: Item,
    io_seconds: f64,
    compute_seconds: f64,
}

pub(crate) fn preprocess(entry: &DatasetEntry, pre: &Preprocessing) -> Result<(GrayImage, f64, Instant)> {
    let t_io = Instant::now();
    let mut record = load_image(&entry.path)?;
    let boxes = match pre.paint_boxes {
        Some(_) if entry.boxes_path().is_file() => {
            Some(BoxList::load(entry.boxes_path(), record.width(), record.height())?)
        }
        _ => None,
    };
    let io_seconds = t_io.elapsed().as_secs_f64();
    let t_compute = Instant::now();
    if let (Some(mode), Some(boxes)) = (pre.paint_boxes, &boxes) {
        record = paint_boxes(&record, boxes, mode);
    }
    let mut gray = to_grayscale(&record);
    if let Some([w, h]) = pre.resize {
        gray = resize(&gray, w, h)?;
    }
    if pre.edges {
        gray = sobel_edges(&gray)?;
    }
    Ok((gray, io_seconds, t_compute))
}

fn lsh_params(seed: u64) -> LshParams {
    let d = LshParams::default();
    LshParams {
        seed: d.seed ^ seed,
        ..d
    }
}

fn prepare(entry: &DatasetEntry, cfg: &RunConfig) -> Result<Prepared> {
    let (gray, io_seconds, t) = preprocess(entry, &cfg.preprocessing)?;
    let item = match &cfg.algorithm {
        Algorithm::Hash { hash } => Item::Hash(hash_image(&gray, *hash)),
        Algorithm::Tlsh { .. } => Item::Tlsh(tlsh_hash(gray.pixels())?),
        Algorithm::Orb(o) => {
            let params = OrbParams {
                n_max: o.n,
                fast_threshold: o.fast_threshold,
                ..OrbParams::default()
            };
            let features = extract_orb_with(&gray, &params)?.with_id(entry.id.clone());
            let index = if o.backend == Backend::FlannLsh && !features.is_empty() {
                Some(LshIndex::build(features.descriptors(), lsh_params(cfg.seed))?)
            } else {
                None
            };
            Item::Orb(Box::new(OrbItem {
                features,
                index,
                dims: (gray.width(), gray.height()),
            }))
        }
    };
    Ok(Prepared {
        id: entry.id.clone(),
        item,
        io_seconds,
        compute_seconds: t.elapsed().as_secs_f64(),
    })
}

fn search(query: &[crate::features::Descriptor], target: &OrbItem, k: usize) -> Vec<Vec<Match>> {
    match &target.index {
        Some(index) => knn_match(query, index, k),
        None => knn_match(query, &BruteForce(target.features.descriptors()), k),
    }
}

/// Descriptor matches of `a` against `b` after filtering and optional cross-check.
fn orb_matches(o: &OrbConfig, a: &OrbItem, b: &OrbItem) -> MatchList {
    let lists = search(a.features.descriptors(), b, o.matcher.k());
    let firsts = || lists.iter().filter_map(|l| l.first().copied());
    let mut kept: MatchList = match o.filter {
        FilterKind::NoFilter => firsts().collect(),
        FilterKind::RatioBad => {
            let pairs: Vec<[Match; 2]> = firsts().map(|m| [m, m]).collect();
            filter_ratio(&pairs, o.ratio, RatioMode::Bad)
        }
        FilterKind::RatioCorrect => {
            let pairs: Vec<[Match; 2]> = lists
                .iter()
                .filter(|l| l.len() == 2)
                .map(|l| [l[0], l[1]])
                .collect();
            filter_ratio(&pairs, o.ratio, RatioMode::Correct)
        }
        FilterKind::FarThreshold => firsts().filter(|m| m.distance <= o.far_threshold).collect(),
    };
    if o.crosscheck {
        kept = match &a.index {
            Some(index) => cross_check(kept, b.features.descriptors(), index),
            None => cross_check(kept, b.features.descriptors(), &BruteForce(a.features.descriptors())),
        };
    }
    kept
}

fn pair_seed(seed: u64, a: &str, b: &str) -> u64 {
    // FNV-1a over both ids keeps per-pair RANSAC seeds stable across runs and thread counts.
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed;
    for byte in a.bytes().chain([0u8]).chain(b.bytes()) {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn orb_score(o: &OrbConfig, a: &OrbItem, b: &OrbItem, seed: u64) -> Result<f64> {
    let (n_a, n_b) = (a.features.len(), b.features.len());
    if n_a == 0 || n_b == 0 {
        return Ok(1.0);
    }
    let matches = orb_matches(o, a, b);
    match &o.ransac {
        None => pair_score_capped(&matches, n_a, n_b, o.len_mode),
        Some(r) => {
            let params = RansacParams {
                iters: r.iters,
                reproj_thresh: r.reproj_thresh,
                seed,
                min_inliers: r.min_inliers,
                model: r.model,
                ..RansacParams::default()
            };
            ransac_pair_score(
                &matches,
                a.features.keypoints(),
                b.features.keypoints(),
                n_a,
                n_b,
                o.len_mode,
                a.dims,
                &params,
                r.matrix_filter,
            )
            .map(|out| out.score)
        }
    }
}

fn score(cfg: &RunConfig, a: &Prepared, b: &Prepared) -> Result<f64> {
    match (&cfg.algorithm, &a.item, &b.item) {
        (Algorithm::Hash { .. }, Item::Hash(x), Item::Hash(y)) => normalized_hash_score(x, y),
        (Algorithm::Tlsh { with_length }, Item::Tlsh(x), Item::Tlsh(y)) => {
            Ok((tlsh_distance(x, y, *with_length) as f64 / TLSH_MAX_DISTANCE as f64).min(1.0))
        }
        (Algorithm::Orb(o), Item::Orb(x), Item::Orb(y)) => orb_score(o, x, y, pair_seed(cfg.seed, &a.id, &b.id)),
        _ => Err(Error::Other("pre-computed item does not match the configuration".into())),
    }
}

/// Best `k` candidates for `query` by (score, id); returns them with the elapsed seconds.
fn rank_candidates(
    cfg: &RunConfig,
    items: &[Prepared],
    qi: usize,
    k: usize,
) -> Result<(Vec<(String, f64)>, f64)> {
    let t = Instant::now();
    let query = &items[qi];
    let mut scored = Vec::with_capacity(items.len().saturating_sub(1));
    for (j, cand) in items.iter().enumerate() {
        if j == qi {
            continue;
        }
        let s = score(cfg, query, cand)?;
        if cfg.discard_threshold.is_some_and(|t| s > t) {
            continue;
        }
        scored.push((cand.id.as_str(), s));
    }
    scored.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
    scored.truncate(k);
    let ranked = scored.into_iter().map(|(id, s)| (id.to_owned(), s)).collect();
    Ok((ranked, t.elapsed().as_secs_f64()))
}

/// `(raw, normalized, max)` rank-1 scores.
///
/// Skipped images shrink the set of guesses, so the raw score can exceed the
/// ground-truth maximum; the ratio is then reported above 1 with a warning.
pub(crate) fn evaluate(graph: &MatchGraph, gt: &GroundTruth) -> Result<(f64, f64, f64)> {
    let max = max_score(gt);
    let raw = match true_positive_score(graph, gt) {
        Ok(raw) => raw,
        Err(Error::EmptyEdgeSet) => 0.0,
        Err(e) => return Err(e),
    };
    if max <= 0.0 {
        return Err(Error::ZeroMaxScore);
    }
    if raw > max {
        warn!("{}: raw score {raw:.5} exceeds the maximum {max:.5}", graph.algorithm());
    }
    Ok((raw, raw / max, max))
}

fn per(total: f64, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        total / count as f64
    }
}

/// Pre-compute every image, then match each processed image against all the others.
///
/// Images that fail to decode or hash are recorded in the stats and stay graph nodes
/// without edges. With `gt`, the rank-1 score is attached to the stats.
pub fn run_config(
    cfg: &RunConfig,
    dataset: &Dataset,
    gt: Option<&GroundTruth>,
    opts: &RunOptions,
) -> Result<RunOutput> {
    cfg.validate()?;
    if dataset.is_empty() {
        return Err(Error::InvalidInput(format!(
            "dataset {} has no images",
            dataset.root().display()
        )));
    }
    if let Some(gt) = gt {
        gt.check_covers(dataset.ids())?;
    }
    let name = cfg.canonical_name();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::Other(e.to_string()))?;

    let prepared: Vec<Result<Prepared>> =
        pool.install(|| dataset.entries().par_iter().map(|e| prepare(e, cfg)).collect());
    let mut items = Vec::with_capacity(prepared.len());
    let mut skipped = Vec::new();
    for (entry, res) in dataset.entries().iter().zip(prepared) {
        match res {
            Ok(p) => items.push(p),
            Err(e) => {
                warn!("{name}: skipping {}: {e}", entry.id);
                skipped.push(SkippedImage {
                    id: entry.id.clone(),
                    reason: e.to_string(),
                });
            }
        }
    }
    let io_seconds: f64 = items.iter().map(|p| p.io_seconds).sum();
    let precompute_total: f64 = items.iter().map(|p| p.compute_seconds).sum();

    let top_k = opts.top_k.max(1);
    let ranked: Vec<Result<(Vec<(String, f64)>, f64)>> = pool.install(|| {
        (0..items.len())
            .into_par_iter()
            .map(|qi| rank_candidates(cfg, &items, qi, top_k))
            .collect()
    });
    let mut per_query = BTreeMap::new();
    let mut matching_total = 0.0;
    for (item, res) in items.iter().zip(ranked) {
        let (list, secs) = res?;
        matching_total += secs;
        if !list.is_empty() {
            per_query.insert(item.id.clone(), list);
        }
    }

    let nodes = dataset.ids().map(Node::new).collect();
    let graph = graph_from_ranked(name.clone(), nodes, &per_query)?;
    let (raw_tp, normalized_tp, max_score) = match gt {
        Some(gt) => {
            let (raw, norm, max) = evaluate(&graph, gt)?;
            (Some(raw), Some(norm), Some(max))
        }
        None => (None, None, None),
    };
    let stats = StatsRecord {
        config_name: name.clone(),
        images_total: dataset.len(),
        images_processed: items.len(),
        images_skipped: skipped.len(),
        skipped,
        io_seconds,
        precompute_seconds_total: precompute_total,
        precompute_seconds_per_image: per(precompute_total, items.len()),
        queries: items.len(),
        matching_seconds_total: matching_total,
        matching_seconds_per_query: per(matching_total, items.len()),
        peak_memory_bytes: measure_memory(),
        raw_tp,
        normalized_tp,
        max_score,
    };
    info!(
        "{name}: {} images, {} skipped, raw TP {:?}",
        stats.images_processed, stats.images_skipped, stats.raw_tp
    );
    Ok(RunOutput { graph, stats })
}

/// Score one query image against every image of `candidates`, best `top_k` first.
///
/// A candidate that is the query file itself scores like any other image. Candidates
/// that fail to load are skipped with a warning; a failing query is an error.
pub fn rank_query(
    cfg: &RunConfig,
    query: &DatasetEntry,
    candidates: &Dataset,
    opts: &RunOptions,
) -> Result<Vec<(String, f64)>> {
    cfg.validate()?;
    if candidates.is_empty() {
        return Err(Error::InvalidInput(format!(
            "candidate directory {} has no images",
            candidates.root().display()
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::Other(e.to_string()))?;
    let q = prepare(query, cfg)?;
    let scored: Vec<Option<Result<(String, f64)>>> = pool.install(|| {
        candidates
            .entries()
            .par_iter()
            .map(|entry| match prepare(entry, cfg) {
                Ok(c) => Some(score(cfg, &q, &c).map(|s| (c.id, s))),
                Err(e) => {
                    warn!("skipping candidate {}: {e}", entry.id);
                    None
                }
            })
            .collect()
    });
    let mut list = Vec::new();
    for res in scored.into_iter().flatten() {
        let (id, s) = res?;
        if !cfg.discard_threshold.is_some_and(|t| s > t) {
            list.push((id, s));
        }
    }
    list.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    list.truncate(opts.top_k.max(1));
    Ok(list)
}
