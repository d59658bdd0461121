//! Regenerates the 30-image desk dataset used by the integration tests.
//!
//! Six page themes get four variants each (original, crop, recolor, overlay), plus six
//! unrelated pages. Every image also gets a `.boxes.json` sidecar with its text lines.
//!
//! ```text
//! cargo run -p imatch-core --example gen_desk30 -- crates/core/tests/data/desk30
//! ```

use std::path::{Path, PathBuf};

use imatch_core::imaging::{encode_image, BoxList, TextBox};
use imatch_core::model::{ImageRecord, SourceFormat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const W: u32 = 320;
const H: u32 = 240;
const THEMES: [&str; 6] = ["bank", "mail", "shop", "cloud", "social", "news"];

#[derive(Clone)]
struct Canvas {
    w: u32,
    h: u32,
    px: Vec<[u8; 3]>,
    boxes: Vec<TextBox>,
}

impl Canvas {
    fn new(w: u32, h: u32, bg: [u8; 3]) -> Self {
        Self {
            w,
            h,
            px: vec![bg; (w * h) as usize],
            boxes: Vec::new(),
        }
    }

    fn put(&mut self, x: i64, y: i64, c: [u8; 3]) {
        if x >= 0 && y >= 0 && (x as u32) < self.w && (y as u32) < self.h {
            self.px[(y as u32 * self.w + x as u32) as usize] = c;
        }
    }

    fn rect(&mut self, x: i64, y: i64, w: i64, h: i64, c: [u8; 3]) {
        for yy in y..y + h {
            for xx in x..x + w {
                self.put(xx, yy, c);
            }
        }
    }

    fn gradient(&mut self, x: i64, y: i64, w: i64, h: i64, a: [u8; 3], b: [u8; 3]) {
        for yy in 0..h {
            for xx in 0..w {
                let t = (xx + yy) as f32 / (w + h).max(1) as f32;
                let c = [0, 1, 2].map(|i| (a[i] as f32 * (1.0 - t) + b[i] as f32 * t) as u8);
                self.put(x + xx, y + yy, c);
            }
        }
    }

    fn disc(&mut self, cx: i64, cy: i64, r: i64, c: [u8; 3]) {
        for y in -r..=r {
            for x in -r..=r {
                if x * x + y * y <= r * r {
                    self.put(cx + x, cy + y, c);
                }
            }
        }
    }

    fn triangle(&mut self, x: i64, y: i64, s: i64, c: [u8; 3]) {
        for yy in 0..s {
            let half = yy / 2;
            for xx in -half..=half {
                self.put(x + s / 2 + xx, y + yy, c);
            }
        }
    }

    /// A line of pseudo-text; records its bounding box.
    fn text(&mut self, rng: &mut ChaCha8Rng, glyphs: &[[u8; 7]], x: i64, y: i64, chars: usize, scale: i64, c: [u8; 3]) {
        let mut cx = x;
        let mut label = String::new();
        for i in 0..chars {
            if i > 0 && rng.random_bool(0.18) {
                cx += 4 * scale;
                label.push(' ');
                continue;
            }
            let g = rng.random_range(0..glyphs.len());
            label.push((b'a' + (g % 26) as u8) as char);
            for (row, bits) in glyphs[g].iter().enumerate() {
                for col in 0..5 {
                    if bits >> (4 - col) & 1 == 1 {
                        self.rect(cx + col * scale, y + row as i64 * scale, scale, scale, c);
                    }
                }
            }
            cx += 6 * scale;
        }
        self.boxes.push(TextBox {
            x,
            y,
            w: cx - x,
            h: 7 * scale,
            text: Some(label),
        });
    }

    fn crop(&self, l: u32, t: u32, r: u32, b: u32) -> Canvas {
        let (w, h) = (self.w - l - r, self.h - t - b);
        let mut out = Canvas::new(w, h, [0, 0, 0]);
        for y in 0..h {
            for x in 0..w {
                out.px[(y * w + x) as usize] = self.px[((y + t) * self.w + x + l) as usize];
            }
        }
        out.boxes = self
            .boxes
            .iter()
            .map(|bx| TextBox {
                x: bx.x - l as i64,
                y: bx.y - t as i64,
                ..bx.clone()
            })
            .collect();
        out
    }

    fn recolor(&self, gain: [f32; 3], bias: [f32; 3]) -> Canvas {
        let mut out = self.clone();
        for p in &mut out.px {
            *p = [0, 1, 2].map(|i| (p[i] as f32 * gain[i] + bias[i]).round().clamp(0.0, 255.0) as u8);
        }
        out
    }

    fn record(&self) -> ImageRecord {
        let flat = self.px.iter().flatten().copied().collect();
        ImageRecord::from_rgb("", self.w, self.h, flat).expect("consistent canvas")
    }
}

fn glyph_set() -> Vec<[u8; 7]> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..40)
        .map(|_| {
            let mut g = [0u8; 7];
            for row in &mut g {
                *row = rng.random_range(1..32);
            }
            g
        })
        .collect()
}

fn color(rng: &mut ChaCha8Rng, lo: u8, hi: u8) -> [u8; 3] {
    [0; 3].map(|_: u8| rng.random_range(lo..=hi))
}

/// A page with header, hero blocks, logo, text columns and a button.
fn page(seed: u64, glyphs: &[[u8; 7]]) -> Canvas {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dark = rng.random_bool(0.3);
    let bg = if dark { color(&mut rng, 10, 60) } else { color(&mut rng, 200, 255) };
    let ink = if dark { color(&mut rng, 190, 250) } else { color(&mut rng, 0, 70) };
    let mut c = Canvas::new(W, H, bg);

    let header_h = rng.random_range(22..40);
    let header = color(&mut rng, 0, 255);
    c.rect(0, 0, W as i64, header_h, header);
    let logo = color(&mut rng, 0, 255);
    if rng.random_bool(0.5) {
        c.disc(16, header_h / 2, header_h / 2 - 4, logo);
    } else {
        c.triangle(6, 4, header_h - 8, logo);
    }
    let header_ink = if header.iter().map(|&v| v as u32).sum::<u32>() > 380 { [0, 0, 0] } else { [255, 255, 255] };
    let title = rng.random_range(6..14);
    c.text(&mut rng, glyphs, 36, header_h / 2 - 7, title, 2, header_ink);

    for _ in 0..rng.random_range(1..4) {
        let (w, h) = (rng.random_range(60..150), rng.random_range(40..90));
        let x = rng.random_range(0..(W as i64 - w));
        let y = rng.random_range(header_h + 4..(H as i64 - h));
        let (a, b) = (color(&mut rng, 0, 255), color(&mut rng, 0, 255));
        c.gradient(x, y, w, h, a, b);
        let spot = color(&mut rng, 0, 255);
        c.disc(x + w / 3, y + h / 2, h.min(w) / 5, spot);
    }

    let col_x = rng.random_range(8..160);
    let mut y = header_h + rng.random_range(8..24);
    while y < H as i64 - 20 {
        let chars = rng.random_range(8..24);
        c.text(&mut rng, glyphs, col_x, y, chars, 1, ink);
        y += rng.random_range(10..16);
    }

    let (bw, bh) = (rng.random_range(50..90), 18);
    let bx = rng.random_range(4..(W as i64 - bw - 4));
    let by = H as i64 - bh - rng.random_range(4..30);
    let button = color(&mut rng, 0, 255);
    c.rect(bx, by, bw, bh, button);
    c.text(&mut rng, glyphs, bx + 6, by + 5, ((bw - 12) / 6) as usize, 1, header_ink);
    c
}

fn variants(base: &Canvas, seed: u64, glyphs: &[[u8; 7]]) -> [(&'static str, Canvas); 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
    let m = |rng: &mut ChaCha8Rng, side: u32| rng.random_range(side * 5 / 100..=side * 12 / 100);
    let crop = base.crop(m(&mut rng, W), m(&mut rng, H), m(&mut rng, W), m(&mut rng, H));
    let gain = [0; 3].map(|_: u8| rng.random_range(0.85..1.1));
    let bias = [0; 3].map(|_: u8| rng.random_range(-18.0..18.0));
    let recolor = base.recolor(gain, bias);
    let mut overlay = base.clone();
    let banner = color(&mut rng, 30, 90);
    overlay.rect(0, H as i64 - 34, W as i64, 34, banner);
    overlay.text(&mut rng, glyphs, 10, H as i64 - 24, 30, 1, [240, 240, 240]);
    overlay.rect(W as i64 - 58, 44, 50, 16, [220, 40, 40]);
    overlay.text(&mut rng, glyphs, W as i64 - 54, 48, 7, 1, [255, 255, 255]);
    [("orig", base.clone()), ("crop", crop), ("recolor", recolor), ("overlay", overlay)]
}

fn save(dir: &Path, id: &str, canvas: &Canvas, format: SourceFormat) {
    let ext = match format {
        SourceFormat::Png => "png",
        SourceFormat::Bmp => "bmp",
    };
    let bytes = encode_image(&canvas.record(), format).expect("encode");
    std::fs::write(dir.join(format!("{id}.{ext}")), bytes).expect("write image");
    let boxes = BoxList::new(canvas.boxes.clone()).clipped(canvas.w, canvas.h);
    let mut json = serde_json::to_vec_pretty(&boxes).expect("boxes serialize");
    json.push(b'\n');
    std::fs::write(dir.join(format!("{id}.boxes.json")), json).expect("write boxes");
}

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("crates/core/tests/data/desk30"));
    std::fs::create_dir_all(&dir).expect("create output directory");
    let glyphs = glyph_set();
    for (i, theme) in THEMES.iter().enumerate() {
        let seed = 100 + i as u64;
        let base = page(seed, &glyphs);
        for (suffix, canvas) in variants(&base, seed, &glyphs) {
            save(&dir, &format!("{theme}_{suffix}"), &canvas, SourceFormat::Png);
        }
    }
    for i in 0..6u64 {
        let format = if i == 5 { SourceFormat::Bmp } else { SourceFormat::Png };
        save(&dir, &format!("misc_{}", i + 1), &page(500 + i, &glyphs), format);
    }
    println!("wrote 30 images to {}", dir.display());
}
