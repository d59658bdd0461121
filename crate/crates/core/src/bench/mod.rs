//! Configuration sweeps, timed runs and the on-disk output layout.
//!
//! A sweep writes `out/<config>/{graph.json,stats.json,config.json,pairs/}` for every
//! configuration and `out/report/` with the merged tables.

mod config;
mod layout;
mod memory;
mod runner;

pub use config::{
    config_slug, generate_configs, Algorithm, Backend, FilterKind, MatcherKind, OrbConfig, OrbGrid,
    Preprocessing, RansacConfig, RunConfig, SweepGrid, DEFAULT_DISCARD_THRESHOLD, DEFAULT_ORB_FEATURES,
};
pub use layout::{
    composite_panels, export_match_pairs, load_results, merge_reports, regenerate_report, run_sweep,
    write_run, OutputLock, ReportBundle, ReportEntry, CONFIG_FILE, GRAPH_FILE, GROUND_TRUTH_FILE,
    LOCK_FILE, MANIFEST_FILE, PAIRS_DIR, REPORT_DIR, STATS_FILE,
};
pub use memory::measure_memory;
pub use runner::{rank_query, run_config, workers_from_env, RunOptions, RunOutput, SkippedImage, StatsRecord, WORKERS_ENV};
