//! Report rendering against committed golden files, and the on-disk layout of a small sweep.

use std::fs;
use std::path::{Path, PathBuf};

use imatch_core::bench::{
    generate_configs, regenerate_report, run_sweep, RunOptions, SweepGrid, CONFIG_FILE, REPORT_DIR,
};
use imatch_core::evaluation::{overview_report, OverviewRow};
use imatch_core::fuzzy_hash::HashAlgorithm;
use imatch_core::model::{Cluster, Dataset, GroundTruth};

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn published_rows() -> Vec<OverviewRow> {
    let text = fs::read_to_string(data().join("published_png_scores.csv")).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            OverviewRow {
                name: c[0].to_owned(),
                raw_tp: c[1].parse().unwrap(),
                normalized_tp: c[2].parse().unwrap(),
                precompute_seconds: c[3].parse().unwrap(),
                matching_seconds: c[4].parse().unwrap(),
            }
        })
        .collect()
}

/// Compare with a golden file; `IMATCH_UPDATE_GOLDEN=1` rewrites it instead.
fn golden(name: &str, actual: &str) {
    let path = data().join("golden").join(name);
    if std::env::var_os("IMATCH_UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "{} differs", path.display());
}

#[test]
fn published_scores_render_like_the_golden_tables() {
    let mut rows = published_rows();
    rows.reverse();
    let (text, tex) = overview_report(&rows);
    golden("overview_published.txt", &text);
    golden("overview_published.tex", &tex);
    assert_eq!(tex.lines().filter(|l| l.ends_with("\\\\ \\hline")).count(), 19);
}

fn toy() -> (tempfile::TempDir, Dataset, GroundTruth) {
    let dir = tempfile::tempdir().unwrap();
    let ids = ["bank_orig", "bank_crop", "bank_recolor", "misc_1"];
    for id in ids {
        let name = format!("{id}.png");
        fs::copy(data().join("desk30").join(&name), dir.path().join(&name)).unwrap();
    }
    let gt = GroundTruth::new(vec![
        Cluster {
            id: "bank".into(),
            members: ids[..3].iter().map(|s| s.to_string()).collect(),
        },
        Cluster {
            id: "misc_1".into(),
            members: vec!["misc_1".into()],
        },
    ])
    .unwrap();
    let ds = Dataset::scan(dir.path()).unwrap();
    (dir, ds, gt)
}

#[test]
fn one_config_gives_one_row_and_unit_matrices() {
    let (_data, ds, gt) = toy();
    let out = tempfile::tempdir().unwrap();
    let grid = SweepGrid {
        hash: vec![HashAlgorithm::Ahash],
        ..SweepGrid::default()
    };
    let configs = generate_configs(&grid).unwrap();
    run_sweep(&configs, &ds, Some(&gt), out.path(), &RunOptions::default()).unwrap();

    let report = out.path().join(REPORT_DIR);
    let overview = fs::read_to_string(report.join("overview.txt")).unwrap();
    assert_eq!(overview.lines().count(), 3);
    for csv in ["inclusion_matrix.csv", "pair_quality.csv"] {
        let text = fs::read_to_string(report.join(csv)).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 2, "{csv}");
        assert!(rows.iter().all(|r| r.split(',').count() == 2), "{csv}");
    }

    let slug = configs[0].slug();
    let stored = fs::read(out.path().join(&slug).join(CONFIG_FILE)).unwrap();
    assert_eq!(stored, configs[0].to_json());
    let copy = fs::read(report.join("configs").join(format!("{slug}.json"))).unwrap();
    assert_eq!(copy, stored);

    let before = fs::read(report.join("overview.tex")).unwrap();
    regenerate_report(out.path()).unwrap();
    assert_eq!(fs::read(report.join("overview.tex")).unwrap(), before);
}
