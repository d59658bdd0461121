use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ImageFormat};

use crate::error::{Error, Result};
use crate::imaging::GrayImage;
use crate::model::{image_id_from_path, ImageRecord, SourceFormat};

fn to_image_format(format: SourceFormat) -> ImageFormat {
    match format {
        SourceFormat::Png => ImageFormat::Png,
        SourceFormat::Bmp => ImageFormat::Bmp,
    }
}

/// Decode PNG or BMP bytes. Grayscale sources keep one channel; everything else
/// becomes 8-bit RGB with alpha dropped.
pub fn decode_image(bytes: &[u8], format_hint: Option<SourceFormat>) -> Result<ImageRecord> {
    if bytes.is_empty() {
        return Err(Error::InvalidInput("empty image buffer".into()));
    }
    let format = match format_hint {
        Some(f) => f,
        None => match image::guess_format(bytes) {
            Ok(ImageFormat::Png) => SourceFormat::Png,
            Ok(ImageFormat::Bmp) => SourceFormat::Bmp,
            _ => return Err(Error::UnsupportedFormat),
        },
    };
    let (width, height, channels, pixels) = match format {
        SourceFormat::Png => decode_png(bytes)?,
        SourceFormat::Bmp => decode_bmp(bytes)?,
    };
    ImageRecord::new(String::new(), "", width, height, channels, pixels, format)
}

const MAX_SIDE: u32 = 1 << 15;

fn limits() -> image::Limits {
    let mut limits = image::Limits::default();
    limits.max_image_width = Some(MAX_SIDE);
    limits.max_image_height = Some(MAX_SIDE);
    limits
}

type Decoded = (u32, u32, u8, Vec<u8>);

fn split_channels(decoded: DynamicImage) -> Decoded {
    let (width, height) = (decoded.width(), decoded.height());
    let (channels, pixels) = match decoded {
        DynamicImage::ImageLuma8(buf) => (1, buf.into_raw()),
        img @ (DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageLuma16(_)
        | DynamicImage::ImageLumaA16(_)) => (1, img.to_luma8().into_raw()),
        DynamicImage::ImageRgb8(buf) => (3, buf.into_raw()),
        other => (3, other.to_rgb8().into_raw()),
    };
    (width, height, channels, pixels)
}

fn decode_png(bytes: &[u8]) -> Result<Decoded> {
    let mut reader = image::ImageReader::with_format(Cursor::new(bytes), ImageFormat::Png);
    reader.limits(limits());
    let decoded = reader.decode().map_err(|e| Error::Decode(e.to_string()))?;
    Ok(split_channels(decoded))
}

/// BMP stores grayscale as an 8-bit palette; an all-gray palette decodes to one channel.
fn decode_bmp(bytes: &[u8]) -> Result<Decoded> {
    use image::codecs::bmp::BmpDecoder;
    use image::ImageDecoder;

    let mut decoder = BmpDecoder::new(Cursor::new(bytes)).map_err(|e| Error::Decode(e.to_string()))?;
    decoder.set_limits(limits()).map_err(|e| Error::Decode(e.to_string()))?;
    let gray_palette = decoder
        .get_palette()
        .is_some_and(|p| !p.is_empty() && p.iter().all(|[r, g, b]| r == g && g == b));
    let decoded = DynamicImage::from_decoder(decoder).map_err(|e| Error::Decode(e.to_string()))?;
    let (width, height, channels, pixels) = split_channels(decoded);
    if gray_palette && channels == 3 {
        let luma = pixels.chunks_exact(3).map(|p| p[0]).collect();
        return Ok((width, height, 1, luma));
    }
    Ok((width, height, channels, pixels))
}

/// Read and decode a file; the record id is the filename stem.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageRecord> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let hint = path
        .extension()
        .and_then(|e| e.to_str())
        .and_then(SourceFormat::from_extension);
    let id = image_id_from_path(path).unwrap_or_default();
    Ok(decode_image(&bytes, hint)?.with_id(id).with_path(path))
}

/// Losslessly encode a record as PNG or BMP.
pub fn encode_image(img: &ImageRecord, format: SourceFormat) -> Result<Vec<u8>> {
    let color = if img.channels() == 1 {
        image::ExtendedColorType::L8
    } else {
        image::ExtendedColorType::Rgb8
    };
    let mut out = Vec::new();
    image::write_buffer_with_format(
        &mut Cursor::new(&mut out),
        img.pixels(),
        img.width(),
        img.height(),
        color,
        to_image_format(format),
    )
    .map_err(|e| Error::Encode(e.to_string()))?;
    Ok(out)
}

pub fn encode_gray_png(img: &GrayImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    image::write_buffer_with_format(
        &mut Cursor::new(&mut out),
        img.pixels(),
        img.width(),
        img.height(),
        image::ExtendedColorType::L8,
        ImageFormat::Png,
    )
    .map_err(|e| Error::Encode(e.to_string()))?;
    Ok(out)
}

/// BT.601 luminance, `round(0.299 R + 0.587 G + 0.114 B)` with halves rounding up.
pub fn to_grayscale(img: &ImageRecord) -> GrayImage {
    let pixels = match img.channels() {
        1 => img.pixels().to_vec(),
        _ => img
            .pixels()
            .chunks_exact(3)
            .map(|p| {
                let weighted = 299 * p[0] as u32 + 587 * p[1] as u32 + 114 * p[2] as u32;
                ((weighted + 500) / 1000) as u8
            })
            .collect(),
    };
    GrayImage::new(img.width(), img.height(), pixels).expect("dimensions preserved")
}
