use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Container format an image was decoded from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SourceFormat {
    Png,
    Bmp,
}

impl SourceFormat {
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "png" => Some(SourceFormat::Png),
            "bmp" => Some(SourceFormat::Bmp),
            _ => None,
        }
    }
}

/// Decoded 8-bit image with identity and provenance.
///
/// Pixels are stored row-major, interleaved when `channels == 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRecord {
    id: String,
    path: PathBuf,
    width: u32,
    height: u32,
    channels: u8,
    pixels: Vec<u8>,
    source_format: SourceFormat,
}

impl ImageRecord {
    pub fn new(
        id: impl Into<String>,
        path: impl Into<PathBuf>,
        width: u32,
        height: u32,
        channels: u8,
        pixels: Vec<u8>,
        source_format: SourceFormat,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidInput(format!(
                "unsupported channel count {channels}"
            )));
        }
        let expected = width as usize * height as usize * channels as usize;
        if pixels.len() != expected {
            return Err(Error::InvalidInput(format!(
                "pixel buffer holds {} samples, expected {expected}",
                pixels.len()
            )));
        }
        Ok(Self {
            id: id.into(),
            path: path.into(),
            width,
            height,
            channels,
            pixels,
            source_format,
        })
    }

    /// In-memory RGB image, mostly useful for tests and synthetic data.
    pub fn from_rgb(id: impl Into<String>, width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        Self::new(id, PathBuf::new(), width, height, 3, pixels, SourceFormat::Png)
    }

    pub fn from_luma(id: impl Into<String>, width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        Self::new(id, PathBuf::new(), width, height, 1, pixels, SourceFormat::Png)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn path(&self) -> &std::path::Path {
        &self.path
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn source_format(&self) -> SourceFormat {
        self.source_format
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn with_path(mut self, path: impl Into<PathBuf>) -> Self {
        self.path = path.into();
        self
    }

    /// Replace the pixel buffer, keeping geometry and identity.
    pub(crate) fn with_pixels(&self, pixels: Vec<u8>) -> Self {
        debug_assert_eq!(pixels.len(), self.pixels.len());
        Self {
            pixels,
            ..self.clone()
        }
    }

    /// Samples of pixel `(x, y)`; length equals the channel count.
    pub fn pixel(&self, x: u32, y: u32) -> &[u8] {
        let c = self.channels as usize;
        let start = (y as usize * self.width as usize + x as usize) * c;
        &self.pixels[start..start + c]
    }
}
