//! Target images in and reconstruction previews out.

use std::fs;
use std::path::Path;

use image::imageops::{self, FilterType};
use image::{ImageBuffer, Rgb, RgbImage};
use ndarray::{Array3, ArrayView3};
use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::hologram::CHANNELS;

/// How an input image was brought to the hologram resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResizeRecord {
    pub source_width: u32,
    pub source_height: u32,
    /// Centered crop taken before resampling, as `(x, y, width, height)`.
    pub crop: (u32, u32, u32, u32),
    pub width: u32,
    pub height: u32,
    pub filter: String,
}

/// Loads an image as 3×H×W intensities in `[0, 1]` (8-bit value / 255 per channel).
///
/// The largest centered crop with the target aspect ratio is resampled with a
/// Lanczos-3 filter to exactly `height × width`; both must be even. Grayscale
/// inputs are replicated to all three channels and alpha is dropped.
pub fn load_target(path: impl AsRef<Path>, height: usize, width: usize) -> Result<(Array3<f64>, ResizeRecord)> {
    let path = path.as_ref();
    if height == 0 || width == 0 || !height.is_multiple_of(2) || !width.is_multiple_of(2) {
        return Err(HoloError::UnsupportedShape(format!(
            "target size {height}×{width} must be positive and even"
        )));
    }
    let bytes = fs::read(path).map_err(|e| HoloError::file(path, e))?;
    let img = image::load_from_memory(&bytes)
        .map_err(|e| HoloError::Validation(format!("{}: {e}", path.display())))?
        .into_rgb8();
    let (sw, sh) = img.dimensions();
    if sw == 0 || sh == 0 {
        return Err(HoloError::DegenerateInput(format!("{}: empty image", path.display())));
    }
    // crop to the target aspect ratio, centered
    let (tw, th) = (width as u64, height as u64);
    let (cw, ch) = if sw as u64 * th > sh as u64 * tw {
        (((sh as u64 * tw) / th).max(1) as u32, sh)
    } else {
        (sw, ((sw as u64 * th) / tw).max(1) as u32)
    };
    let (cx, cy) = ((sw - cw) / 2, (sh - ch) / 2);
    let cropped = imageops::crop_imm(&img, cx, cy, cw, ch).to_image();
    let resized = if (cw, ch) == (width as u32, height as u32) {
        cropped
    } else {
        imageops::resize(&cropped, width as u32, height as u32, FilterType::Lanczos3)
    };
    let target = Array3::from_shape_fn((CHANNELS, height, width), |(c, y, x)| {
        resized.get_pixel(x as u32, y as u32)[c] as f64 / 255.0
    });
    if target.iter().all(|v| *v == 0.0) {
        return Err(HoloError::DegenerateInput(format!("{}: image is entirely black", path.display())));
    }
    let record = ResizeRecord {
        source_width: sw,
        source_height: sh,
        crop: (cx, cy, cw, ch),
        width: width as u32,
        height: height as u32,
        filter: "lanczos3".into(),
    };
    Ok((target, record))
}

/// Writes 3×H×W values in `[0, 1]` as an 8-bit RGB PNG.
pub fn save_rgb_png(values: ArrayView3<'_, f64>, path: impl AsRef<Path>) -> Result<()> {
    let (c, h, w) = values.dim();
    if c != CHANNELS {
        return Err(HoloError::UnsupportedShape(format!("expected 3 channels, got {c}")));
    }
    let img: RgbImage = ImageBuffer::from_fn(w as u32, h as u32, |x, y| {
        let px = |ch: usize| (values[[ch, y as usize, x as usize]].clamp(0.0, 1.0) * 255.0).round() as u8;
        Rgb([px(0), px(1), px(2)])
    });
    img.save(path.as_ref())?;
    Ok(())
}

/// Writes values as raw little-endian f32, channel-planar and row-major.
pub fn save_f32_raw(values: ArrayView3<'_, f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes: Vec<u8> = values.iter().flat_map(|v| (*v as f32).to_le_bytes()).collect();
    fs::write(path, bytes).map_err(|e| HoloError::file(path, e))
}
