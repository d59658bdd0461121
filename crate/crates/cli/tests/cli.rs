use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use imatch_core::fuzzy_hash::{hash_image, normalized_hash_score, HashAlgorithm, TLSH_HEX_LEN};
use imatch_core::imaging::{load_image, to_grayscale};

const TOY: [&str; 9] = [
    "bank_orig",
    "bank_crop",
    "bank_recolor",
    "bank_overlay",
    "mail_orig",
    "mail_crop",
    "mail_recolor",
    "mail_overlay",
    "misc_1",
];

const TOY_GT: &str = r#"{"clusters": [
  {"id": "bank", "members": ["bank_orig", "bank_crop", "bank_recolor", "bank_overlay"]},
  {"id": "mail", "members": ["mail_orig", "mail_crop", "mail_recolor", "mail_overlay"]},
  {"id": "misc_1", "members": ["misc_1"]}
]}"#;

const SWEEP: &str = r#"{"hash": ["AHASH", "WHASH"], "tlsh": [true]}"#;

fn desk() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/desk30")
}

fn imatch(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_imatch"));
    cmd.env("IMATCH_WORKERS", "2");
    for a in args {
        cmd.arg(a);
    }
    cmd.output().expect("spawn imatch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Toy dataset directory, ground truth and sweep files.
fn toy(root: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let data = root.join("data");
    fs::create_dir_all(&data).unwrap();
    for id in TOY {
        fs::copy(desk().join(format!("{id}.png")), data.join(format!("{id}.png"))).unwrap();
        fs::copy(
            desk().join(format!("{id}.boxes.json")),
            data.join(format!("{id}.boxes.json")),
        )
        .unwrap();
    }
    let gt = root.join("gt.json");
    fs::write(&gt, TOY_GT).unwrap();
    let sweep = root.join("sweep.json");
    fs::write(&sweep, SWEEP).unwrap();
    (data, gt, sweep)
}

fn tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn hash_prints_one_line_per_algorithm() {
    let img = desk().join("bank_orig.png");
    let one = imatch(&[&"hash", &img, &"--algo", &"AHASH"]);
    assert!(one.status.success());
    let text = stdout(&one);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    let expected = hash_image(&to_grayscale(&load_image(&img).unwrap()), HashAlgorithm::Ahash);
    assert_eq!(lines[0], format!("bank_orig AHASH {}", expected.to_hex()));

    let all = imatch(&[&"hash", &img, &desk().join("misc_6.bmp"), &"--algo", &"all"]);
    assert!(all.status.success());
    assert_eq!(stdout(&all).lines().count(), 12);
    assert_eq!(stdout(&all), stdout(&imatch(&[&"hash", &img, &desk().join("misc_6.bmp")])));

    let tlsh = imatch(&[&"hash", &img, &"--algo", &"tlsh"]);
    assert!(tlsh.status.success());
    let text = stdout(&tlsh);
    let hex = text.trim().strip_prefix("bank_orig TLSH ").unwrap();
    assert_eq!(hex.len(), TLSH_HEX_LEN);
}

#[test]
fn hash_reports_decode_failures_and_bad_tokens() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.png");
    fs::write(&broken, b"not a png").unwrap();
    assert_eq!(imatch(&[&"hash", &broken]).status.code(), Some(2));
    let img = desk().join("bank_orig.png");
    assert_eq!(imatch(&[&"hash", &img, &"--algo", &"MD5"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(imatch(&[]).status.code(), Some(1));
    assert_eq!(imatch(&[&"frobnicate"]).status.code(), Some(1));
    assert_eq!(imatch(&[&"hash"]).status.code(), Some(1));
    assert_eq!(imatch(&[&"--help"]).status.code(), Some(0));
}

#[test]
fn match_ranks_like_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let (data, _, _) = toy(dir.path());
    let cfg = dir.path().join("ahash.json");
    fs::write(&cfg, r#"{"algorithm": {"family": "HASH", "hash": "AHASH"}}"#).unwrap();
    let query = data.join("bank_crop.png");

    let out = imatch(&[&"match", &query, &data, &"--config", &cfg, &"-k", &"5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let got: Vec<(String, f64)> = text
        .lines()
        .map(|l| {
            let (id, s) = l.split_once(' ').unwrap();
            (id.to_owned(), s.parse().unwrap())
        })
        .collect();
    assert_eq!(got.len(), 5);
    assert_eq!(got[0], ("bank_crop".to_owned(), 0.0));

    let hash = |id: &str| {
        let img = load_image(data.join(format!("{id}.png"))).unwrap();
        hash_image(&to_grayscale(&img), HashAlgorithm::Ahash)
    };
    let q = hash("bank_crop");
    let mut expected: Vec<(String, f64)> = TOY
        .iter()
        .map(|id| (id.to_string(), normalized_hash_score(&q, &hash(id)).unwrap()))
        .collect();
    expected.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    for ((gid, gs), (eid, es)) in got.iter().zip(&expected) {
        assert_eq!(gid, eid);
        assert!((gs - es).abs() < 1e-6);
    }

    let k2 = imatch(&[&"match", &query, &data, &"--config", &cfg, &"-k", &"2"]);
    assert_eq!(stdout(&k2).lines().count(), 2);
}

#[test]
fn match_on_empty_directory_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ahash.json");
    fs::write(&cfg, r#"{"algorithm": {"family": "HASH", "hash": "AHASH"}}"#).unwrap();
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let query = desk().join("bank_orig.png");
    assert_eq!(imatch(&[&"match", &query, &empty, &"--config", &cfg]).status.code(), Some(2));
}

#[test]
fn bench_writes_layout_and_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (data, gt, sweep) = toy(dir.path());
    let out = dir.path().join("out");
    let run = imatch(&[
        &"bench",
        &data,
        &"--ground-truth",
        &gt,
        &"--sweep",
        &sweep,
        &"--out",
        &out,
        &"--export-pairs",
        &"--seed",
        &"4",
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(stdout(&run).lines().count(), 3);

    for slug in ["A_HASH", "W_HASH", "TLSH"] {
        for f in ["graph.json", "stats.json", "config.json"] {
            assert!(out.join(slug).join(f).is_file(), "{slug}/{f}");
        }
        let pairs = fs::read_dir(out.join(slug).join("pairs")).unwrap().count();
        assert_eq!(pairs, TOY.len());
    }
    for f in ["overview.txt", "overview.tex", "inclusion_matrix.csv", "pair_quality.csv"] {
        assert!(out.join("report").join(f).is_file(), "report/{f}");
    }
    assert!(!out.join(".lock").exists());

    let before = tree(&out.join("report"));
    let report = imatch(&[&"report", &out]);
    assert!(report.status.success(), "{}", String::from_utf8_lossy(&report.stderr));
    assert_eq!(tree(&out.join("report")), before);
    assert!(imatch(&[&"report", &out]).status.success());
    assert_eq!(tree(&out.join("report")), before);
}

#[test]
fn bench_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (data, gt, sweep) = toy(dir.path());
    let graphs = |out: &Path| {
        let run = imatch(&[&"bench", &data, &"--ground-truth", &gt, &"--sweep", &sweep, &"--out", &out, &"--seed", &"7"]);
        assert!(run.status.success());
        ["A_HASH", "W_HASH", "TLSH"].map(|s| fs::read(out.join(s).join("graph.json")).unwrap())
    };
    assert_eq!(graphs(&dir.path().join("a")), graphs(&dir.path().join("b")));
}

#[test]
fn bench_rejects_missing_ground_truth_and_held_lock() {
    let dir = tempfile::tempdir().unwrap();
    let (data, _, sweep) = toy(dir.path());
    let out = dir.path().join("out");
    let missing = dir.path().join("nope.json");
    let run = imatch(&[&"bench", &data, &"--ground-truth", &missing, &"--sweep", &sweep, &"--out", &out]);
    assert_eq!(run.status.code(), Some(2));

    fs::create_dir_all(&out).unwrap();
    fs::write(out.join(".lock"), b"").unwrap();
    let run = imatch(&[&"bench", &data, &"--sweep", &sweep, &"--out", &out]);
    assert_eq!(run.status.code(), Some(2));
    assert!(out.join(".lock").exists());
}

#[test]
fn bench_without_ground_truth_skips_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let (data, _, sweep) = toy(dir.path());
    let out = dir.path().join("out");
    let run = imatch(&[&"bench", &data, &"--sweep", &sweep, &"--out", &out]);
    assert!(run.status.success());
    assert!(out.join("A_HASH").join("graph.json").is_file());
    assert!(!out.join("report").exists());
}

#[test]
fn report_on_empty_directory_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = imatch(&[&"report", &dir.path()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
    assert_eq!(imatch(&[&"report", &dir.path().join("missing")]).status.code(), Some(2));
}
