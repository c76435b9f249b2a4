//! Phase-only hologram data, optical metadata and the on-disk `.holo` container.
//!
//! Phases are held canonically in `[0, 2π)`. Everything that learns from or
//! scores a hologram works on the normalized view `phase / 2π`, which lies in
//! `[0, 1)`.
//!
//! `.holo` layout (all little-endian):
//!
//! | bytes | content                                   |
//! |-------|-------------------------------------------|
//! | 4     | magic `PHOL`                              |
//! | 2     | version (u16, currently 1)                |
//! | 4     | height (u32)                              |
//! | 4     | width (u32)                               |
//! | 24    | wavelengths R, G, B (f64, meters)         |
//! | 8     | pixel pitch (f64, meters)                 |
//! | 12·H·W| phases, f32 radians, channel-planar, row-major |

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use image::{ImageBuffer, Luma};
use ndarray::{Array2, Array3, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};

pub const CHANNELS: usize = 3;

const HOLO_MAGIC: &[u8; 4] = b"PHOL";
const HOLO_VERSION: u16 = 1;
const HOLO_HEADER_LEN: usize = 4 + 2 + 4 + 4 + 3 * 8 + 8;

/// Wraps a phase into `[0, 2π)`.
///
/// `rem_euclid` can round up to exactly `2π` for tiny negative inputs, which is
/// folded back onto zero.
pub fn canonical_phase(phase: f64) -> f64 {
    let wrapped = phase.rem_euclid(TAU);
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Wavelengths per channel, SLM pixel pitch and the focal planes used for evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpticalConfig {
    /// Channel order is R, G, B.
    pub wavelengths: [f64; CHANNELS],
    pub pixel_pitch: f64,
    pub eval_distances: Vec<f64>,
}

impl Default for OpticalConfig {
    fn default() -> Self {
        Self {
            wavelengths: [639e-9, 515e-9, 473e-9],
            pixel_pitch: 3.74e-6,
            eval_distances: vec![-2.5e-3, 0.0, 2.5e-3],
        }
    }
}

impl OpticalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.wavelengths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(HoloError::Validation(format!(
                "wavelengths must be positive, got {:?}",
                self.wavelengths
            )));
        }
        if !(self.pixel_pitch.is_finite() && self.pixel_pitch > 0.0) {
            return Err(HoloError::Validation(format!(
                "pixel pitch must be positive, got {}",
                self.pixel_pitch
            )));
        }
        if self.eval_distances.iter().any(|d| !d.is_finite()) {
            return Err(HoloError::Validation("eval distances must be finite".into()));
        }
        Ok(())
    }

    /// Optical parameters agree; evaluation distances are not compared.
    pub fn same_optics(&self, other: &OpticalConfig) -> bool {
        self.wavelengths == other.wavelengths && self.pixel_pitch == other.pixel_pitch
    }
}

/// A 3-channel phase-only hologram.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseHologram {
    phases: Array3<f64>,
    config: OpticalConfig,
}

impl PhaseHologram {
    /// Builds a hologram from radians of any range; values are wrapped into `[0, 2π)`.
    pub fn new(mut phases: Array3<f64>, config: OpticalConfig) -> Result<Self> {
        config.validate()?;
        let (c, h, w) = phases.dim();
        if c != CHANNELS || h == 0 || w == 0 {
            return Err(HoloError::UnsupportedShape(format!(
                "expected 3×H×W with H, W > 0, got {c}×{h}×{w}"
            )));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(HoloError::Validation("hologram contains non-finite phases".into()));
        }
        phases.mapv_inplace(canonical_phase);
        Ok(Self { phases, config })
    }

    /// Builds a hologram from the normalized view `phase / 2π`.
    pub fn from_normalized(normalized: Array3<f64>, config: OpticalConfig) -> Result<Self> {
        Self::new(normalized.mapv(|n| n * TAU), config)
    }

    pub fn phases(&self) -> &Array3<f64> {
        &self.phases
    }

    pub fn channel(&self, c: usize) -> ArrayView2<'_, f64> {
        self.phases.index_axis(ndarray::Axis(0), c)
    }

    pub fn config(&self) -> &OpticalConfig {
        &self.config
    }

    pub fn with_config(mut self, config: OpticalConfig) -> Result<Self> {
        config.validate()?;
        self.config = config;
        Ok(self)
    }

    pub fn height(&self) -> usize {
        self.phases.dim().1
    }

    pub fn width(&self) -> usize {
        self.phases.dim().2
    }

    /// `phase / 2π`, in `[0, 1)`.
    pub fn normalized(&self) -> Array3<f64> {
        self.phases.mapv(|p| p / TAU)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let (_, h, w) = self.phases.dim();
        let mut out = Vec::with_capacity(HOLO_HEADER_LEN + 4 * self.phases.len());
        out.extend_from_slice(HOLO_MAGIC);
        out.extend_from_slice(&HOLO_VERSION.to_le_bytes());
        out.extend_from_slice(&(h as u32).to_le_bytes());
        out.extend_from_slice(&(w as u32).to_le_bytes());
        for wl in self.config.wavelengths {
            out.extend_from_slice(&wl.to_le_bytes());
        }
        out.extend_from_slice(&self.config.pixel_pitch.to_le_bytes());
        for p in self.phases.iter() {
            out.extend_from_slice(&(*p as f32).to_le_bytes());
        }
        out
    }

    /// Parses a `.holo` stream. Evaluation distances are not part of the
    /// container and come back as the defaults.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HOLO_HEADER_LEN {
            return Err(HoloError::integrity(
                bytes.len(),
                format!("truncated header ({} of {HOLO_HEADER_LEN} bytes)", bytes.len()),
            ));
        }
        if &bytes[0..4] != HOLO_MAGIC {
            return Err(HoloError::integrity(0, "bad magic, expected PHOL"));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != HOLO_VERSION {
            return Err(HoloError::UnsupportedVersion {
                found: version,
                expected: HOLO_VERSION,
            });
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let h = u32_at(6);
        let w = u32_at(10);
        let wavelengths = [f64_at(14), f64_at(22), f64_at(30)];
        let pixel_pitch = f64_at(38);

        let expected = HOLO_HEADER_LEN + CHANNELS * h * w * 4;
        if bytes.len() != expected {
            return Err(HoloError::integrity(
                bytes.len().min(expected),
                format!("payload length mismatch: have {} bytes, expected {expected}", bytes.len()),
            ));
        }
        let values: Vec<f64> = bytes[HOLO_HEADER_LEN..]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect();
        let phases = Array3::from_shape_vec((CHANNELS, h, w), values)
            .map_err(|e| HoloError::UnsupportedShape(e.to_string()))?;
        let config = OpticalConfig {
            wavelengths,
            pixel_pitch,
            ..OpticalConfig::default()
        };
        Self::new(phases, config)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| HoloError::file(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| HoloError::file(path, e))?;
        Self::from_bytes(&bytes)
    }

    /// Writes one channel as a 16-bit grayscale PNG, `pixel = round(phase / 2π · 65535)`.
    pub fn save_channel_png(&self, channel: usize, path: impl AsRef<Path>) -> Result<()> {
        let view = self.channel(channel);
        let (h, w) = view.dim();
        let img: ImageBuffer<Luma<u16>, Vec<u16>> = ImageBuffer::from_fn(w as u32, h as u32, |x, y| {
            let n = view[[y as usize, x as usize]] / TAU;
            Luma([(n * 65535.0).round().clamp(0.0, 65535.0) as u16])
        });
        img.save(path.as_ref())?;
        Ok(())
    }

    /// Reads three per-channel 16-bit PNGs (R, G, B order), `phase = pixel / 65535 · 2π`.
    pub fn load_channel_pngs<P: AsRef<Path>>(paths: &[P; CHANNELS], config: OpticalConfig) -> Result<Self> {
        let mut planes: Vec<Array2<f64>> = Vec::with_capacity(CHANNELS);
        for path in paths {
            let img = image::open(path.as_ref())?.into_luma16();
            let (w, h) = img.dimensions();
            let plane = Array2::from_shape_fn((h as usize, w as usize), |(y, x)| {
                img.get_pixel(x as u32, y as u32)[0] as f64 / 65535.0 * TAU
            });
            if let Some(first) = planes.first() {
                if first.dim() != plane.dim() {
                    return Err(HoloError::Structural(format!(
                        "channel PNGs differ in size: {:?} vs {:?}",
                        first.dim(),
                        plane.dim()
                    )));
                }
            }
            planes.push(plane);
        }
        let (h, w) = planes[0].dim();
        let mut phases = Array3::zeros((CHANNELS, h, w));
        for (c, plane) in planes.into_iter().enumerate() {
            phases.index_axis_mut(ndarray::Axis(0), c).assign(&plane);
        }
        Self::new(phases, config)
    }
}
