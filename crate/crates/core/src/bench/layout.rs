use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{
    inclusion_matrix, max_score, overview_report, pair_quality_matrix, OverviewRow,
};
use crate::imaging::{encode_gray_png, load_image, to_grayscale, GrayImage};
use crate::model::{deserialize_graph, load_ground_truth, serialize_graph, Dataset, GroundTruth, MatchGraph};

use super::config::RunConfig;
use super::runner::{evaluate, run_config, RunOptions, StatsRecord};

pub const GRAPH_FILE: &str = "graph.json";
pub const STATS_FILE: &str = "stats.json";
pub const CONFIG_FILE: &str = "config.json";
pub const PAIRS_DIR: &str = "pairs";
pub const REPORT_DIR: &str = "report";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.json";
/// Ordered list of configuration directories written by a sweep.
pub const MANIFEST_FILE: &str = "sweep.json";
pub const LOCK_FILE: &str = ".lock";

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

fn to_json_bytes<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("value serializes");
    out.push(b'\n');
    out
}

/// Exclusive claim on an output directory, released on drop.
#[derive(Debug)]
pub struct OutputLock {
    path: PathBuf,
}

impl OutputLock {
    pub fn acquire(out_dir: impl AsRef<Path>) -> Result<Self> {
        let out_dir = out_dir.as_ref();
        fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        let path = out_dir.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(Self { path }),
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Err(Error::InvalidInput(format!(
                "{} is in use by another run (remove {} if that run died)",
                out_dir.display(),
                path.display()
            ))),
            Err(e) => Err(Error::io(&path, e)),
        }
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// Query on the left, then its ranked candidates; panels are top-aligned and padded black.
pub fn composite_panels(panels: &[&GrayImage]) -> GrayImage {
    let height = panels.iter().map(|p| p.height()).max().unwrap_or(0);
    let mut offsets = Vec::with_capacity(panels.len());
    let mut width = 0;
    for p in panels {
        offsets.push(width);
        width += p.width();
    }
    GrayImage::from_fn(width, height, |x, y| {
        let i = offsets.partition_point(|&o| o <= x) - 1;
        let (p, px) = (panels[i], x - offsets[i]);
        if y < p.height() {
            p.get(px, y)
        } else {
            0
        }
    })
}

/// One `<query>.png` per query with edges: the query and its top `k` matches in rank order.
pub fn export_match_pairs(
    graph: &MatchGraph,
    dataset: &Dataset,
    k: usize,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths: BTreeMap<&str, &Path> = dataset.entries().iter().map(|e| (e.id.as_str(), e.path.as_path())).collect();
    let mut cache: BTreeMap<String, GrayImage> = BTreeMap::new();
    let mut gray = |id: &str| -> Result<GrayImage> {
        if let Some(img) = cache.get(id) {
            return Ok(img.clone());
        }
        let path = paths.get(id).ok_or_else(|| Error::UnknownId(id.to_owned()))?;
        let img = to_grayscale(&load_image(path)?);
        cache.insert(id.to_owned(), img.clone());
        Ok(img)
    };
    let mut written = Vec::new();
    for node in graph.nodes() {
        let ranked = graph.ranked_from(&node.id);
        if ranked.is_empty() {
            continue;
        }
        let mut images = vec![gray(&node.id)?];
        for e in ranked.iter().take(k.max(1)) {
            images.push(gray(&e.to)?);
        }
        let refs: Vec<&GrayImage> = images.iter().collect();
        let path = dir.join(format!("{}.png", node.id));
        write(&path, &encode_gray_png(&composite_panels(&refs))?)?;
        written.push(path);
    }
    Ok(written)
}

/// Stored results of one configuration.
#[derive(Debug, Clone)]
pub struct ReportEntry {
    pub config: RunConfig,
    pub stats: StatsRecord,
    pub graph: MatchGraph,
}

/// Rendered report files, keyed by their path under the output root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportBundle {
    pub files: BTreeMap<PathBuf, Vec<u8>>,
}

impl ReportBundle {
    pub fn get(&self, rel: impl AsRef<Path>) -> Option<&[u8]> {
        self.files.get(rel.as_ref()).map(Vec::as_slice)
    }

    pub fn write(&self, out_dir: impl AsRef<Path>) -> Result<()> {
        let out_dir = out_dir.as_ref();
        for (rel, bytes) in &self.files {
            let path = out_dir.join(rel);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            write(&path, bytes)?;
        }
        Ok(())
    }
}

/// Overview (text and LaTeX), both matrices and a copy of every configuration file.
pub fn merge_reports(entries: &[ReportEntry], gt: &GroundTruth) -> Result<ReportBundle> {
    if entries.is_empty() {
        return Err(Error::InvalidInput("no configuration results to report".into()));
    }
    let mut rows = Vec::with_capacity(entries.len());
    for e in entries {
        let (raw, norm, _) = evaluate(&e.graph, gt)?;
        rows.push(OverviewRow {
            name: e.config.canonical_name(),
            raw_tp: raw,
            normalized_tp: norm,
            precompute_seconds: e.stats.precompute_seconds_per_image,
            matching_seconds: e.stats.matching_seconds_per_query,
        });
    }
    let (text, tex) = overview_report(&rows);
    let graphs: Vec<&MatchGraph> = entries.iter().map(|e| &e.graph).collect();
    let inclusion = inclusion_matrix(&graphs)?;
    let quality = pair_quality_matrix(&graphs, gt)?;

    let report = Path::new(REPORT_DIR);
    let mut files = BTreeMap::new();
    files.insert(report.join("overview.txt"), text.into_bytes());
    files.insert(report.join("overview.tex"), tex.into_bytes());
    files.insert(report.join("inclusion_matrix.csv"), inclusion.to_csv().into_bytes());
    files.insert(report.join("pair_quality.csv"), quality.to_csv().into_bytes());
    for e in entries {
        files.insert(
            report.join("configs").join(format!("{}.json", e.config.slug())),
            e.config.to_json(),
        );
    }
    info!(
        "report over {} configurations, best achievable raw score {:.5}",
        entries.len(),
        max_score(gt)
    );
    Ok(ReportBundle { files })
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    configs: Vec<String>,
}

/// Write `<slug>/{graph,stats,config}.json`, plus `pairs/` when the config asks for it.
pub fn write_run(
    out_dir: impl AsRef<Path>,
    cfg: &RunConfig,
    graph: &MatchGraph,
    stats: &StatsRecord,
    dataset: &Dataset,
    k: usize,
) -> Result<PathBuf> {
    let dir = out_dir.as_ref().join(cfg.slug());
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write(&dir.join(GRAPH_FILE), &serialize_graph(graph))?;
    write(&dir.join(STATS_FILE), &to_json_bytes(stats))?;
    write(&dir.join(CONFIG_FILE), &cfg.to_json())?;
    if cfg.export_pairs {
        export_match_pairs(graph, dataset, k, dir.join(PAIRS_DIR))?;
    }
    Ok(dir)
}

/// Run configurations one after another and write the full output layout.
///
/// Without ground truth only the per-configuration files are written.
pub fn run_sweep(
    configs: &[RunConfig],
    dataset: &Dataset,
    gt: Option<&GroundTruth>,
    out_dir: impl AsRef<Path>,
    opts: &RunOptions,
) -> Result<Vec<ReportEntry>> {
    let out_dir = out_dir.as_ref();
    if configs.is_empty() {
        return Err(Error::InvalidInput("no configurations to run".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut entries = Vec::with_capacity(configs.len());
    for cfg in configs {
        info!("running {}", cfg.canonical_name());
        let out = run_config(cfg, dataset, gt, opts)?;
        write_run(out_dir, cfg, &out.graph, &out.stats, dataset, opts.top_k)?;
        entries.push(ReportEntry {
            config: cfg.clone(),
            stats: out.stats,
            graph: out.graph,
        });
    }
    let manifest = Manifest {
        configs: configs.iter().map(RunConfig::slug).collect(),
    };
    write(&out_dir.join(MANIFEST_FILE), &to_json_bytes(&manifest))?;
    match gt {
        Some(gt) => {
            write(&out_dir.join(GROUND_TRUTH_FILE), &gt.to_json())?;
            merge_reports(&entries, gt)?.write(out_dir)?;
        }
        None => warn!("no ground truth given; skipping the report"),
    }
    Ok(entries)
}

/// Read back every configuration listed in the sweep manifest.
pub fn load_results(out_dir: impl AsRef<Path>) -> Result<Vec<ReportEntry>> {
    let out_dir = out_dir.as_ref();
    let manifest_path = out_dir.join(MANIFEST_FILE);
    let manifest: Manifest = serde_json::from_slice(&read(&manifest_path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", manifest_path.display())))?;
    if manifest.configs.is_empty() {
        return Err(Error::InvalidInput(format!("{} lists no configurations", manifest_path.display())));
    }
    manifest
        .configs
        .iter()
        .map(|slug| {
            let dir = out_dir.join(slug);
            let config = RunConfig::from_json(&read(&dir.join(CONFIG_FILE))?)?;
            let stats: StatsRecord = serde_json::from_slice(&read(&dir.join(STATS_FILE))?)
                .map_err(|e| Error::Parse(format!("{}: {e}", dir.join(STATS_FILE).display())))?;
            let graph = deserialize_graph(&read(&dir.join(GRAPH_FILE))?)?;
            Ok(ReportEntry { config, stats, graph })
        })
        .collect()
}

/// Rebuild the report from stored graphs, stats and the copied ground truth.
pub fn regenerate_report(out_dir: impl AsRef<Path>) -> Result<ReportBundle> {
    let out_dir = out_dir.as_ref();
    let entries = load_results(out_dir)?;
    let gt = load_ground_truth(out_dir.join(GROUND_TRUTH_FILE))?;
    let bundle = merge_reports(&entries, &gt)?;
    bundle.write(out_dir)?;
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_places_panels_left_to_right() {
        let a = GrayImage::filled(2, 3, 10);
        let b = GrayImage::filled(3, 2, 20);
        let c = composite_panels(&[&a, &b]);
        assert_eq!((c.width(), c.height()), (5, 3));
        assert_eq!(c.get(1, 2), 10);
        assert_eq!(c.get(2, 0), 20);
        assert_eq!(c.get(4, 1), 20);
        assert_eq!(c.get(4, 2), 0);
    }

    #[test]
    fn lock_is_exclusive_and_released() {
        let dir = tempfile::tempdir().unwrap();
        let lock = OutputLock::acquire(dir.path()).unwrap();
        assert!(OutputLock::acquire(dir.path()).is_err());
        drop(lock);
        assert!(!dir.path().join(LOCK_FILE).exists());
        OutputLock::acquire(dir.path()).unwrap();
    }

    #[test]
    fn empty_report_input_is_rejected() {
        let gt = GroundTruth::new(vec![crate::model::Cluster {
            id: "a".into(),
            members: vec!["a".into()],
        }])
        .unwrap();
        assert!(merge_reports(&[], &gt).is_err());
    }

    #[test]
    fn regenerate_fails_cleanly_on_empty_dir() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(regenerate_report(dir.path()), Err(Error::Io { .. })));
    }
}
