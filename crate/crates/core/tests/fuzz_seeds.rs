//! Every checked-in fuzz seed must be accepted by the parser its target drives.

use std::fs;
use std::path::{Path, PathBuf};

use imatch_core::bench::{generate_configs, RunConfig, SweepGrid};
use imatch_core::features::read_feature_dump;
use imatch_core::fuzzy_hash::{parse_hash_dump, TlshDigest};
use imatch_core::imaging::{decode_image, BoxList};
use imatch_core::model::{deserialize_graph, GroundTruth};

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with("seed_"))
        .map(|p| {
            let bytes = fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn check(target: &str, parse: impl Fn(&[u8]) -> bool) {
    for (path, bytes) in seeds(target) {
        assert!(parse(&bytes), "{} is rejected", path.display());
    }
}

fn text(b: &[u8]) -> &str {
    std::str::from_utf8(b).unwrap()
}

#[test]
fn seeds_parse() {
    check("ground_truth", |b| GroundTruth::from_json(b).is_ok());
    check("graph", |b| deserialize_graph(b).is_ok());
    check("boxes", |b| BoxList::from_json(b).is_ok());
    check("feature_dump", |b| read_feature_dump(b).is_ok());
    check("hash_dump", |b| parse_hash_dump(text(b)).is_ok());
    check("tlsh_hex", |b| text(b).parse::<TlshDigest>().is_ok());
    check("image_decode", |b| decode_image(b, None).is_ok());
    check("run_config", |b| RunConfig::from_json(b).is_ok());
    check("sweep_grid", |b| SweepGrid::from_json(b).and_then(|g| generate_configs(&g)).is_ok());
}
