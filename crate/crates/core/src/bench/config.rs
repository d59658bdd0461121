use std::collections::HashSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{LenMode, DEFAULT_FAR_THRESHOLD, DEFAULT_RATIO};
use crate::fuzzy_hash::HashAlgorithm;
use crate::geometry::Model;
use crate::imaging::FillMode;

/// Distance above which a match is usually considered discarded.
pub const DEFAULT_DISCARD_THRESHOLD: f64 = 0.96;

pub const DEFAULT_ORB_FEATURES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FilterKind {
    NoFilter,
    RatioCorrect,
    RatioBad,
    FarThreshold,
}

impl FilterKind {
    pub const ALL: [FilterKind; 4] = [
        FilterKind::NoFilter,
        FilterKind::RatioCorrect,
        FilterKind::RatioBad,
        FilterKind::FarThreshold,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FilterKind::NoFilter => "NO_FILTER",
            FilterKind::RatioCorrect => "RATIO_CORRECT",
            FilterKind::RatioBad => "RATIO_BAD",
            FilterKind::FarThreshold => "FAR_THRESHOLD",
        }
    }

    /// The matcher this filter needs: nearest only, or two nearest.
    pub fn required_matcher(self) -> MatcherKind {
        match self {
            FilterKind::NoFilter | FilterKind::RatioBad => MatcherKind::Std,
            FilterKind::RatioCorrect | FilterKind::FarThreshold => MatcherKind::Knn2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MatcherKind {
    Std,
    Knn2,
}

impl MatcherKind {
    pub fn label(self) -> &'static str {
        match self {
            MatcherKind::Std => "STD",
            MatcherKind::Knn2 => "KNN2",
        }
    }

    pub fn k(self) -> usize {
        match self {
            MatcherKind::Std => 1,
            MatcherKind::Knn2 => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Backend {
    BruteForce,
    FlannLsh,
}

impl Backend {
    pub fn label(self) -> &'static str {
        match self {
            Backend::BruteForce => "BRUTE_FORCE",
            Backend::FlannLsh => "FLANN_LSH",
        }
    }
}

fn len_label(m: LenMode) -> &'static str {
    match m {
        LenMode::Min => "MIN",
        LenMode::Max => "MAX",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RansacConfig {
    pub iters: usize,
    pub reproj_thresh: f64,
    /// Force DEGENERATE transforms to the worst score.
    pub matrix_filter: bool,
    pub model: Model,
    pub min_inliers: usize,
}

impl Default for RansacConfig {
    fn default() -> Self {
        Self {
            iters: 2000,
            reproj_thresh: 3.0,
            matrix_filter: true,
            model: Model::Homography,
            min_inliers: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbConfig {
    pub n: usize,
    pub len_mode: LenMode,
    pub filter: FilterKind,
    pub matcher: MatcherKind,
    pub backend: Backend,
    pub crosscheck: bool,
    #[serde(default = "default_ratio")]
    pub ratio: f64,
    #[serde(default = "default_far")]
    pub far_threshold: u32,
    #[serde(default = "default_fast")]
    pub fast_threshold: u8,
    #[serde(default)]
    pub ransac: Option<RansacConfig>,
}

fn default_ratio() -> f64 {
    DEFAULT_RATIO
}

fn default_far() -> u32 {
    DEFAULT_FAR_THRESHOLD
}

fn default_fast() -> u8 {
    20
}

impl OrbConfig {
    /// Pruning rule of the grid: the filter decides the matcher; KNN2 brute force has no cross-check.
    pub fn is_valid(&self) -> bool {
        self.filter.required_matcher() == self.matcher
            && !(self.matcher == MatcherKind::Knn2 && self.backend == Backend::BruteForce && self.crosscheck)
            && self.n > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Algorithm {
    Hash { hash: HashAlgorithm },
    Tlsh { with_length: bool },
    Orb(OrbConfig),
}

/// Image preparation applied before hashing or extraction. Grayscale conversion always happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Preprocessing {
    pub paint_boxes: Option<FillMode>,
    pub resize: Option<[u32; 2]>,
    pub edges: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub preprocessing: Preprocessing,
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub ground_truth: Option<PathBuf>,
    #[serde(default)]
    pub export_pairs: bool,
    #[serde(default)]
    pub seed: u64,
    /// Candidates scoring above this are not emitted. `None` always guesses.
    #[serde(default)]
    pub discard_threshold: Option<f64>,
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

impl RunConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            preprocessing: Preprocessing::default(),
            dataset: None,
            ground_truth: None,
            export_pairs: false,
            seed: 0,
            discard_threshold: None,
        }
    }

    /// Human-readable identifier, e.g. `ORB 500 LEN MAX FAR_THRESHOLD KNN2 FLANN_LSH CROSSCHECK_ON`.
    ///
    /// Non-default parameters append a suffix so that names stay unique.
    pub fn canonical_name(&self) -> String {
        let mut name = match &self.algorithm {
            Algorithm::Hash { hash } => hash.display_name().to_owned(),
            Algorithm::Tlsh { with_length: true } => "TLSH".to_owned(),
            Algorithm::Tlsh { with_length: false } => "TLSH NO LENGTH".to_owned(),
            Algorithm::Orb(o) => {
                let mut s = format!(
                    "ORB {} LEN {} {} {} {} CROSSCHECK_{}",
                    o.n,
                    len_label(o.len_mode),
                    o.filter.label(),
                    o.matcher.label(),
                    o.backend.label(),
                    if o.crosscheck { "ON" } else { "OFF" }
                );
                let uses_ratio = matches!(o.filter, FilterKind::RatioCorrect | FilterKind::RatioBad);
                if uses_ratio && o.ratio != DEFAULT_RATIO {
                    s.push_str(&format!(" RATIO_{}", fmt_num(o.ratio)));
                }
                if o.filter == FilterKind::FarThreshold && o.far_threshold != DEFAULT_FAR_THRESHOLD {
                    s.push_str(&format!(" FAR_{}", o.far_threshold));
                }
                if o.fast_threshold != default_fast() {
                    s.push_str(&format!(" FAST_{}", o.fast_threshold));
                }
                if let Some(r) = &o.ransac {
                    let d = RansacConfig::default();
                    s.push_str(" RANSAC");
                    if r.model == Model::Affine {
                        s.push_str(" AFFINE");
                    }
                    if r.iters != d.iters {
                        s.push_str(&format!(" ITERS_{}", r.iters));
                    }
                    if r.reproj_thresh != d.reproj_thresh {
                        s.push_str(&format!(" THRESH_{}", fmt_num(r.reproj_thresh)));
                    }
                    if r.min_inliers != d.min_inliers {
                        s.push_str(&format!(" MIN_INLIERS_{}", r.min_inliers));
                    }
                    s.push_str(if r.matrix_filter { " MATRIX_FILTER" } else { " NO_MATRIX_FILTER" });
                }
                s
            }
        };
        let p = &self.preprocessing;
        if let Some(mode) = p.paint_boxes {
            name.push_str(&format!(" BOXES_{}", mode.label()));
        }
        if let Some([w, h]) = p.resize {
            name.push_str(&format!(" RESIZE_{w}X{h}"));
        }
        if p.edges {
            name.push_str(" EDGES");
        }
        if let Some(t) = self.discard_threshold {
            name.push_str(&format!(" DISCARD_{}", fmt_num(t)));
        }
        name
    }

    /// Directory name under the output root.
    pub fn slug(&self) -> String {
        config_slug(&self.canonical_name())
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("config serializes");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Algorithm::Orb(o) = &self.algorithm {
            if !o.is_valid() {
                return Err(Error::InvalidInput(format!(
                    "{} cannot be combined with {} / {} / crosscheck={}",
                    o.filter.label(),
                    o.matcher.label(),
                    o.backend.label(),
                    o.crosscheck
                )));
            }
            if !(o.ratio > 0.0 && o.ratio.is_finite()) {
                return Err(Error::InvalidInput(format!("ratio {} must be positive", o.ratio)));
            }
            if let Some(r) = &o.ransac {
                if r.iters == 0 || !(r.reproj_thresh > 0.0) {
                    return Err(Error::InvalidInput("RANSAC needs iters > 0 and a positive threshold".into()));
                }
            }
        }
        if let Some([w, h]) = self.preprocessing.resize {
            if w == 0 || h == 0 {
                return Err(Error::InvalidInput("resize target must be non-empty".into()));
            }
        }
        if let Some(t) = self.discard_threshold {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidInput(format!("discard threshold {t} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Spaces become underscores; anything outside `[A-Za-z0-9._-]` too.
pub fn config_slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_') { c } else { '_' })
        .collect()
}

/// ORB axes of a sweep. Missing axes take every value (or the default for numeric ones).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OrbGrid {
    pub n: Vec<usize>,
    pub len_mode: Vec<LenMode>,
    pub filter: Vec<FilterKind>,
    pub matcher: Vec<MatcherKind>,
    pub backend: Vec<Backend>,
    pub crosscheck: Vec<bool>,
    pub ratio: Vec<f64>,
    pub far_threshold: Vec<u32>,
    pub fast_threshold: Vec<u8>,
    pub ransac: Vec<Option<RansacConfig>>,
}

impl Default for OrbGrid {
    fn default() -> Self {
        Self {
            n: vec![DEFAULT_ORB_FEATURES],
            len_mode: vec![LenMode::Min, LenMode::Max],
            filter: FilterKind::ALL.to_vec(),
            matcher: vec![MatcherKind::Std, MatcherKind::Knn2],
            backend: vec![Backend::BruteForce, Backend::FlannLsh],
            crosscheck: vec![false, true],
            ratio: vec![DEFAULT_RATIO],
            far_threshold: vec![DEFAULT_FAR_THRESHOLD],
            fast_threshold: vec![default_fast()],
            ransac: vec![None],
        }
    }
}

impl OrbGrid {
    fn axes_non_empty(&self) -> bool {
        !(self.n.is_empty()
            || self.len_mode.is_empty()
            || self.filter.is_empty()
            || self.matcher.is_empty()
            || self.backend.is_empty()
            || self.crosscheck.is_empty()
            || self.ratio.is_empty()
            || self.far_threshold.is_empty()
            || self.fast_threshold.is_empty()
            || self.ransac.is_empty())
    }

    fn expand(&self) -> Vec<OrbConfig> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &len_mode in &self.len_mode {
                for &filter in &self.filter {
                    for &matcher in &self.matcher {
                        for &backend in &self.backend {
                            for &crosscheck in &self.crosscheck {
                                for &ratio in &self.ratio {
                                    for &far_threshold in &self.far_threshold {
                                        for &fast_threshold in &self.fast_threshold {
                                            for &ransac in &self.ransac {
                                                let mut c = OrbConfig {
                                                    n,
                                                    len_mode,
                                                    filter,
                                                    matcher,
                                                    backend,
                                                    crosscheck,
                                                    ratio,
                                                    far_threshold,
                                                    fast_threshold,
                                                    ransac,
                                                };
                                                // parameters the filter ignores collapse to their defaults
                                                if !matches!(c.filter, FilterKind::RatioCorrect | FilterKind::RatioBad) {
                                                    c.ratio = DEFAULT_RATIO;
                                                }
                                                if c.filter != FilterKind::FarThreshold {
                                                    c.far_threshold = DEFAULT_FAR_THRESHOLD;
                                                }
                                                if c.is_valid() && !out.contains(&c) {
                                                    out.push(c);
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Declarative sweep: every listed family crossed with every preprocessing entry.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default)]
    pub hash: Vec<HashAlgorithm>,
    /// `with_length` values to run TLSH with.
    #[serde(default)]
    pub tlsh: Vec<bool>,
    #[serde(default)]
    pub orb: Option<OrbGrid>,
    /// Empty means a single default entry.
    #[serde(default)]
    pub preprocessing: Vec<Preprocessing>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub export_pairs: bool,
    #[serde(default)]
    pub discard_threshold: Option<f64>,
}

impl SweepGrid {
    /// Six perceptual hashes, both TLSH variants and the full ORB grid.
    pub fn published() -> Self {
        Self {
            hash: HashAlgorithm::ALL.to_vec(),
            tlsh: vec![true, false],
            orb: Some(OrbGrid::default()),
            ..Self::default()
        }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Expand a grid into run configurations, in grid order, with invalid ORB combinations pruned.
pub fn generate_configs(grid: &SweepGrid) -> Result<Vec<RunConfig>> {
    if grid.hash.is_empty() && grid.tlsh.is_empty() && grid.orb.is_none() {
        return Err(Error::InvalidGrid("grid lists no algorithm".into()));
    }
    let mut algorithms: Vec<Algorithm> = grid.hash.iter().map(|&hash| Algorithm::Hash { hash }).collect();
    algorithms.extend(grid.tlsh.iter().map(|&with_length| Algorithm::Tlsh { with_length }));
    if let Some(orb) = &grid.orb {
        if !orb.axes_non_empty() {
            return Err(Error::InvalidGrid("an ORB axis is empty".into()));
        }
        let expanded = orb.expand();
        if expanded.is_empty() {
            return Err(Error::InvalidGrid(
                "ORB axes admit no valid filter/matcher combination".into(),
            ));
        }
        algorithms.extend(expanded.into_iter().map(Algorithm::Orb));
    }
    let pre = if grid.preprocessing.is_empty() {
        vec![Preprocessing::default()]
    } else {
        grid.preprocessing.clone()
    };

    let mut out = Vec::with_capacity(algorithms.len() * pre.len());
    let mut seen = HashSet::new();
    for p in &pre {
        for alg in &algorithms {
            let cfg = RunConfig {
                algorithm: *alg,
                preprocessing: *p,
                dataset: None,
                ground_truth: None,
                export_pairs: grid.export_pairs,
                seed: grid.seed,
                discard_threshold: grid.discard_threshold,
            };
            cfg.validate().map_err(|e| Error::InvalidGrid(e.to_string()))?;
            if !seen.insert(cfg.slug()) {
                return Err(Error::InvalidGrid(format!(
                    "configuration `{}` appears twice",
                    cfg.canonical_name()
                )));
            }
            out.push(cfg);
        }
    }
    Ok(out)
}
