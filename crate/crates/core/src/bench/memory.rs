use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Once;

use log::warn;

fn parse_kib(status: &str, key: &str) -> Option<u64> {
    status
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .and_then(|rest| rest.trim().strip_suffix("kB"))
        .and_then(|v| v.trim().parse::<u64>().ok())
        .map(|kib| kib * 1024)
}

static PEAK: AtomicU64 = AtomicU64::new(0);

/// Peak resident set size of this process in bytes.
///
/// Samples `VmHWM` and `VmRSS` and keeps the largest value seen so far, so repeated
/// calls never decrease even where the kernel's high-water mark is unreliable.
/// Returns 0, with a one-time warning, where `/proc/self/status` is unavailable.
pub fn measure_memory() -> u64 {
    static WARN: Once = Once::new();
    let sample = std::fs::read_to_string("/proc/self/status").ok().and_then(|s| {
        let hwm = parse_kib(&s, "VmHWM:");
        let rss = parse_kib(&s, "VmRSS:");
        hwm.max(rss)
    });
    match sample {
        Some(bytes) => PEAK.fetch_max(bytes, Ordering::Relaxed).max(bytes),
        None => {
            WARN.call_once(|| warn!("peak memory is not available on this platform; recording 0"));
            0
        }
    }
}
