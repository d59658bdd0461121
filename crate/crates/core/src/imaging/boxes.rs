use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ImageRecord;

/// Rectangle in pixel coordinates, optionally tagged with the text it covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextBox {
    pub x: i64,
    pub y: i64,
    pub w: i64,
    pub h: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

impl TextBox {
    pub fn new(x: i64, y: i64, w: i64, h: i64) -> Self {
        Self {
            x,
            y,
            w,
            h,
            text: None,
        }
    }

    /// Intersection with `[0,width) x [0,height)`; `None` when empty.
    fn clip(&self, width: u32, height: u32) -> Option<TextBox> {
        let x0 = self.x.max(0);
        let y0 = self.y.max(0);
        let x1 = self.x.saturating_add(self.w).min(width as i64);
        let y1 = self.y.saturating_add(self.h).min(height as i64);
        (x1 > x0 && y1 > y0).then(|| TextBox {
            x: x0,
            y: y0,
            w: x1 - x0,
            h: y1 - y0,
            text: self.text.clone(),
        })
    }
}

/// Text boxes for one image, as read from its `.boxes.json` sidecar.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxList {
    pub boxes: Vec<TextBox>,
}

impl BoxList {
    pub fn new(boxes: Vec<TextBox>) -> Self {
        Self { boxes }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Load a sidecar and clip it to the image bounds.
    pub fn load(path: impl AsRef<Path>, width: u32, height: u32) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_json(&bytes)?.clipped(width, height))
    }

    /// Drop empty boxes and clip the rest to the image bounds.
    pub fn clipped(&self, width: u32, height: u32) -> Self {
        Self {
            boxes: self.boxes.iter().filter_map(|b| b.clip(width, height)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }
}

/// Fill used by the text hider.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FillMode {
    Black,
    White,
    /// Per-box, per-channel mean of the original pixels.
    Mean,
}

impl FillMode {
    pub fn label(self) -> &'static str {
        match self {
            FillMode::Black => "BLACK",
            FillMode::White => "WHITE",
            FillMode::Mean => "MEAN",
        }
    }
}

/// Paint every box with `mode`. Means are taken over the unpainted input.
pub fn paint_boxes(img: &ImageRecord, boxes: &BoxList, mode: FillMode) -> ImageRecord {
    if boxes.is_empty() {
        return img.clone();
    }
    let (width, height) = (img.width(), img.height());
    let channels = img.channels() as usize;
    let src = img.pixels();
    let mut out = src.to_vec();
    let stride = width as usize * channels;

    for b in boxes.clipped(width, height).boxes {
        let (x0, y0) = (b.x as usize, b.y as usize);
        let (x1, y1) = (x0 + b.w as usize, y0 + b.h as usize);
        let fill: Vec<u8> = match mode {
            FillMode::Black => vec![0; channels],
            FillMode::White => vec![255; channels],
            FillMode::Mean => {
                let mut sums = vec![0u64; channels];
                for y in y0..y1 {
                    for px in src[y * stride + x0 * channels..y * stride + x1 * channels]
                        .chunks_exact(channels)
                    {
                        for (s, &v) in sums.iter_mut().zip(px) {
                            *s += v as u64;
                        }
                    }
                }
                let n = ((x1 - x0) * (y1 - y0)) as u64;
                sums.iter().map(|&s| ((2 * s + n) / (2 * n)) as u8).collect()
            }
        };
        for y in y0..y1 {
            for px in out[y * stride + x0 * channels..y * stride + x1 * channels]
                .chunks_exact_mut(channels)
            {
                px.copy_from_slice(&fill);
            }
        }
    }
    img.with_pixels(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gray(w: u32, h: u32, f: impl Fn(u32, u32) -> u8) -> ImageRecord {
        let px = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).map(|(x, y)| f(x, y)).collect();
        ImageRecord::from_luma("g", w, h, px).unwrap()
    }

    #[test]
    fn empty_list_is_identity() {
        let img = gray(5, 5, |x, y| (x * y) as u8);
        assert_eq!(paint_boxes(&img, &BoxList::default(), FillMode::Black), img);
    }

    #[test]
    fn full_black_box() {
        let rgb = ImageRecord::from_rgb("c", 3, 2, vec![200; 18]).unwrap();
        let out = paint_boxes(&rgb, &BoxList::new(vec![TextBox::new(0, 0, 3, 2)]), FillMode::Black);
        assert!(out.pixels().iter().all(|&p| p == 0));
    }

    #[test]
    fn mean_of_half_black_half_white() {
        let img = gray(8, 4, |x, _| if x < 4 { 0 } else { 255 });
        let boxes = BoxList::new(vec![TextBox::new(2, 1, 4, 2)]);
        let out = paint_boxes(&img, &boxes, FillMode::Mean);
        for y in 0..4 {
            for x in 0..8 {
                let v = out.pixel(x, y)[0];
                if (2..6).contains(&x) && (1..3).contains(&y) {
                    assert_eq!(v, 128);
                } else {
                    assert_eq!(v, img.pixel(x, y)[0]);
                }
            }
        }
    }

    #[test]
    fn boxes_are_clipped() {
        let boxes = BoxList::new(vec![
            TextBox::new(-5, -5, 8, 8),
            TextBox::new(100, 0, 5, 5),
            TextBox::new(8, 8, 10, 10),
        ]);
        let clipped = boxes.clipped(10, 10);
        assert_eq!(clipped.boxes, vec![TextBox::new(0, 0, 3, 3), TextBox::new(8, 8, 2, 2)]);
    }

    #[test]
    fn sidecar_parses() {
        let list = BoxList::from_json(br#"{"boxes":[{"x":10,"y":4,"w":120,"h":16,"text":"login"}]}"#).unwrap();
        assert_eq!(list.boxes[0].text.as_deref(), Some("login"));
        assert!(BoxList::from_json(b"[1,2]").is_err());
    }

    #[test]
    fn black_and_white_are_idempotent() {
        let img = gray(12, 9, |x, y| (x * 20 + y) as u8);
        let boxes = BoxList::new(vec![TextBox::new(1, 1, 5, 3), TextBox::new(4, 2, 6, 6)]);
        for mode in [FillMode::Black, FillMode::White] {
            let once = paint_boxes(&img, &boxes, mode);
            assert_eq!(paint_boxes(&once, &boxes, mode), once);
        }
    }
}
