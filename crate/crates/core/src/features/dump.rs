//! Binary feature dump: 16-byte header, `count` keypoint records, then `count`
//! 32-byte descriptors. All integers and floats are little-endian.
//!
//! Header: magic `IMFD`, version u32, count u32, descriptor bits u32.
//! Keypoint record (20 bytes): x f32, y f32, response f32, angle f32, octave u8, 3 zero bytes.

use crate::error::{Error, Result};

use super::{Descriptor, FeatureSet, Keypoint, DESCRIPTOR_BITS};

pub const DUMP_MAGIC: [u8; 4] = *b"IMFD";
pub const DUMP_VERSION: u32 = 1;
const HEADER_LEN: usize = 16;
const KEYPOINT_LEN: usize = 20;
const DESCRIPTOR_LEN: usize = 32;

pub fn write_feature_dump(fs: &FeatureSet) -> Vec<u8> {
    let n = fs.len();
    let mut out = Vec::with_capacity(HEADER_LEN + n * (KEYPOINT_LEN + DESCRIPTOR_LEN));
    out.extend_from_slice(&DUMP_MAGIC);
    out.extend_from_slice(&DUMP_VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&DESCRIPTOR_BITS.to_le_bytes());
    for k in fs.keypoints() {
        for v in [k.x, k.y, k.response, k.angle] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&[k.octave, 0, 0, 0]);
    }
    for d in fs.descriptors() {
        out.extend_from_slice(&d.to_bytes());
    }
    out
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

fn f32_at(bytes: &[u8], at: usize) -> f32 {
    f32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

/// Parse a dump; the image id is left empty.
pub fn read_feature_dump(bytes: &[u8]) -> Result<FeatureSet> {
    let bad = |msg: String| Error::Parse(format!("feature dump: {msg}"));
    if bytes.len() < HEADER_LEN {
        return Err(bad(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if bytes[..4] != DUMP_MAGIC {
        return Err(bad("bad magic".into()));
    }
    let version = u32_at(bytes, 4);
    if version != DUMP_VERSION {
        return Err(Error::UnknownSchemaVersion(version));
    }
    let count = u32_at(bytes, 8) as usize;
    let bits = u32_at(bytes, 12);
    if bits != DESCRIPTOR_BITS {
        return Err(bad(format!("descriptor width {bits}, expected {DESCRIPTOR_BITS}")));
    }
    let expected = count
        .checked_mul(KEYPOINT_LEN + DESCRIPTOR_LEN)
        .and_then(|b| b.checked_add(HEADER_LEN));
    if expected != Some(bytes.len()) {
        return Err(bad(format!("length {} does not match {count} records", bytes.len())));
    }
    let mut keypoints = Vec::with_capacity(count);
    for i in 0..count {
        let at = HEADER_LEN + i * KEYPOINT_LEN;
        let rec = &bytes[at..at + KEYPOINT_LEN];
        if rec[17..20] != [0, 0, 0] {
            return Err(bad(format!("keypoint {i} has nonzero padding")));
        }
        let kp = Keypoint {
            x: f32_at(rec, 0),
            y: f32_at(rec, 4),
            response: f32_at(rec, 8),
            angle: f32_at(rec, 12),
            octave: rec[16],
        };
        if !(kp.x.is_finite() && kp.y.is_finite() && kp.response.is_finite() && kp.angle.is_finite()) {
            return Err(bad(format!("keypoint {i} has a non-finite field")));
        }
        keypoints.push(kp);
    }
    let base = HEADER_LEN + count * KEYPOINT_LEN;
    let descriptors = bytes[base..]
        .chunks_exact(DESCRIPTOR_LEN)
        .map(|c| Descriptor::from_bytes(c.try_into().expect("32 bytes")))
        .collect();
    FeatureSet::new("", keypoints, descriptors)
}
