//! TLSH (Trend Micro locality-sensitive hash), 128 buckets with a 1-byte checksum.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Shortest input accepted by [`tlsh_hash`].
pub const TLSH_MIN_LEN: usize = 50;
/// Length of the canonical hex rendering (without the `T1` version prefix).
pub const TLSH_HEX_LEN: usize = 70;
/// Largest value [`tlsh_distance`] can return (length term included).
pub const TLSH_MAX_DISTANCE: u32 = 128 * LENGTH_MULT + 2 * 7 * QRATIO_MULT + 1 + 32 * 4 * 6;

const BUCKETS: usize = 128;
const CODE_SIZE: usize = 32;
const WINDOW: usize = 5;
const LENGTH_MULT: u32 = 12;
const QRATIO_MULT: u32 = 12;

/// Pearson substitution table shared by every TLSH implementation.
const PEARSON: [u8; 256] = [
    1, 87, 49, 12, 176, 178, 102, 166, 121, 193, 6, 84, 249, 230, 44, 163, 14, 197, 213, 181, 161,
    85, 218, 80, 64, 239, 24, 226, 236, 142, 38, 200, 110, 177, 104, 103, 141, 253, 255, 50, 77,
    101, 81, 18, 45, 96, 31, 222, 25, 107, 190, 70, 86, 237, 240, 34, 72, 242, 20, 214, 244, 227,
    149, 235, 97, 234, 57, 22, 60, 250, 82, 175, 208, 5, 127, 199, 111, 62, 135, 248, 174, 169,
    211, 58, 66, 154, 106, 195, 245, 171, 17, 187, 182, 179, 0, 243, 132, 56, 148, 75, 128, 133,
    158, 100, 130, 126, 91, 13, 153, 246, 216, 219, 119, 68, 223, 78, 83, 88, 201, 99, 122, 11,
    92, 32, 136, 114, 52, 10, 138, 30, 48, 183, 156, 35, 61, 26, 143, 74, 251, 94, 129, 162, 63,
    152, 170, 7, 115, 167, 241, 206, 3, 150, 55, 59, 151, 220, 90, 53, 23, 131, 125, 173, 15, 238,
    79, 95, 89, 16, 105, 137, 225, 224, 217, 160, 37, 123, 118, 73, 2, 157, 46, 116, 9, 145, 134,
    228, 207, 212, 202, 215, 69, 229, 27, 188, 67, 124, 168, 252, 42, 4, 29, 108, 21, 247, 19, 205,
    39, 203, 233, 40, 186, 147, 198, 192, 155, 33, 164, 191, 98, 204, 165, 180, 117, 76, 140, 36,
    210, 172, 41, 54, 159, 8, 185, 232, 113, 196, 231, 47, 146, 120, 51, 65, 28, 144, 254, 221, 93,
    189, 194, 139, 112, 43, 71, 109, 184, 209,
];

#[inline]
fn pearson(salt: u8, a: u8, b: u8, c: u8) -> u8 {
    let mut h = PEARSON[salt as usize];
    h = PEARSON[(h ^ a) as usize];
    h = PEARSON[(h ^ b) as usize];
    PEARSON[(h ^ c) as usize]
}

/// Digest fields. `body[i]` packs buckets `4i..4i+4`, bucket `4i+j` in bits `2j..2j+2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TlshDigest {
    pub checksum: u8,
    pub l_value: u8,
    pub q1_ratio: u8,
    pub q2_ratio: u8,
    pub body: [u8; CODE_SIZE],
}

/// Logarithmic length bucket.
fn length_bucket(len: usize) -> u8 {
    let l = (len as f32 as f64).ln();
    let i = if len <= 656 {
        (l / 0.4054651).floor()
    } else if len <= 3199 {
        (l / 0.26236426 - 8.72777).floor()
    } else {
        (l / 0.095310180 - 62.5472).floor()
    };
    (i as i64 & 0xFF) as u8
}

fn kth_smallest(values: &[u32], k: usize) -> u32 {
    let mut copy = values.to_vec();
    let (_, v, _) = copy.select_nth_unstable(k);
    *v
}

/// Build the digest of `data`.
pub fn tlsh_hash(data: &[u8]) -> Result<TlshDigest> {
    if data.len() < TLSH_MIN_LEN {
        return Err(Error::TlshTooShort(data.len()));
    }
    let mut buckets = [0u32; 256];
    let mut checksum = 0u8;
    for w in data.windows(WINDOW) {
        let (c4, c3, c2, c1, c0) = (w[0], w[1], w[2], w[3], w[4]);
        checksum = pearson(0, c0, c1, checksum);
        buckets[pearson(2, c0, c1, c2) as usize] += 1;
        buckets[pearson(3, c0, c1, c3) as usize] += 1;
        buckets[pearson(5, c0, c2, c3) as usize] += 1;
        buckets[pearson(7, c0, c2, c4) as usize] += 1;
        buckets[pearson(11, c0, c1, c4) as usize] += 1;
        buckets[pearson(13, c0, c3, c4) as usize] += 1;
    }
    let used = &buckets[..BUCKETS];
    let q1 = kth_smallest(used, BUCKETS / 4 - 1);
    let q2 = kth_smallest(used, BUCKETS / 2 - 1);
    let q3 = kth_smallest(used, 3 * BUCKETS / 4 - 1);

    let nonzero = used.iter().filter(|&&c| c > 0).count();
    if q3 == 0 || nonzero <= 2 * CODE_SIZE {
        return Err(Error::TlshDegenerate);
    }

    let mut body = [0u8; CODE_SIZE];
    for (i, byte) in body.iter_mut().enumerate() {
        for j in 0..4 {
            let k = used[4 * i + j];
            let code = if k <= q1 {
                0
            } else if k <= q2 {
                1
            } else if k <= q3 {
                2
            } else {
                3
            };
            *byte |= code << (2 * j);
        }
    }
    let ratio = |q: u32| ((q as f32 * 100.0 / q3 as f32) as u32 % 16) as u8;
    Ok(TlshDigest {
        checksum,
        l_value: length_bucket(data.len()),
        q1_ratio: ratio(q1),
        q2_ratio: ratio(q2),
        body,
    })
}

fn mod_diff(x: u32, y: u32, range: u32) -> u32 {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    (hi - lo).min(lo + range - hi)
}

fn q_penalty(diff: u32) -> u32 {
    if diff <= 1 {
        diff
    } else {
        (diff - 1) * QRATIO_MULT
    }
}

fn body_distance(a: &[u8; CODE_SIZE], b: &[u8; CODE_SIZE]) -> u32 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            (0..4)
                .map(|j| {
                    let d = ((x >> (2 * j)) & 3).abs_diff((y >> (2 * j)) & 3);
                    if d == 3 {
                        6
                    } else {
                        d as u32
                    }
                })
                .sum::<u32>()
        })
        .sum()
}

/// TLSH distance; `with_length = false` drops the length-bucket term.
pub fn tlsh_distance(a: &TlshDigest, b: &TlshDigest, with_length: bool) -> u32 {
    let mut diff = 0;
    if with_length {
        let ldiff = mod_diff(a.l_value as u32, b.l_value as u32, 256);
        diff += if ldiff <= 1 { ldiff } else { ldiff * LENGTH_MULT };
    }
    diff += q_penalty(mod_diff(a.q1_ratio as u32, b.q1_ratio as u32, 16));
    diff += q_penalty(mod_diff(a.q2_ratio as u32, b.q2_ratio as u32, 16));
    if a.checksum != b.checksum {
        diff += 1;
    }
    diff + body_distance(&a.body, &b.body)
}

fn swap_nibbles(b: u8) -> u8 {
    b.rotate_left(4)
}

impl TlshDigest {
    /// Canonical 70-character upper-case hex form.
    pub fn to_hex(&self) -> String {
        use fmt::Write;
        let mut out = String::with_capacity(TLSH_HEX_LEN);
        let header = [
            swap_nibbles(self.checksum),
            swap_nibbles(self.l_value),
            (self.q1_ratio << 4) | (self.q2_ratio & 0x0F),
        ];
        for b in header.iter().chain(self.body.iter().rev()) {
            write!(out, "{b:02X}").expect("writing to a String");
        }
        out
    }
}

impl fmt::Display for TlshDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for TlshDigest {
    type Err = Error;

    /// Accepts the 70-character form, optionally prefixed with `T1`.
    fn from_str(s: &str) -> Result<Self> {
        let hex = match s.get(..2) {
            Some(p) if p.eq_ignore_ascii_case("T1") && s.len() == TLSH_HEX_LEN + 2 => &s[2..],
            _ => s,
        };
        if hex.len() != TLSH_HEX_LEN || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::Parse(format!("not a TLSH digest: `{s}`")));
        }
        let byte = |i: usize| u8::from_str_radix(&hex[2 * i..2 * i + 2], 16).expect("validated hex");
        let mut body = [0u8; CODE_SIZE];
        for (i, slot) in body.iter_mut().enumerate() {
            *slot = byte(3 + CODE_SIZE - 1 - i);
        }
        let q = byte(2);
        Ok(TlshDigest {
            checksum: swap_nibbles(byte(0)),
            l_value: swap_nibbles(byte(1)),
            q1_ratio: q >> 4,
            q2_ratio: q & 0x0F,
            body,
        })
    }
}
