//! `.hinr` container: one parameter blob per patch plus everything needed to
//! rebuild the hologram, protected by a CRC-32.
//!
//! The byte layout is documented in `docs/format.md`. All integers and floats
//! are little-endian.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use half::f16;
use ndarray::Array3;
use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::hologram::{OpticalConfig, PhaseHologram, CHANNELS};
use crate::metrics::CompressionStats;
use crate::nn::{outputs_to_patch, patch_coordinates, InrArchitecture, InrKind, InrModel};
use crate::patch::{merge_patches, PatchGrid};

pub const HINR_MAGIC: &[u8; 4] = b"HINR";
pub const HINR_VERSION: u16 = 1;
const CHECKSUM_LEN: usize = 4;

/// Largest `f64` below one; decoded outputs are clamped to `[0, ONE_BELOW]`.
const ONE_BELOW: f64 = 1.0 - f64::EPSILON / 2.0;

/// Storage precision of every parameter in the payload.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValuePrecision {
    #[default]
    F32,
    F16,
}

impl ValuePrecision {
    pub fn bytes_per_value(self) -> usize {
        match self {
            ValuePrecision::F32 => 4,
            ValuePrecision::F16 => 2,
        }
    }

    fn tag(self) -> u8 {
        match self {
            ValuePrecision::F32 => 0,
            ValuePrecision::F16 => 1,
        }
    }

    fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(ValuePrecision::F32),
            1 => Some(ValuePrecision::F16),
            _ => None,
        }
    }

    /// Rounds a value to what this precision stores.
    pub fn quantize(self, v: f64) -> f64 {
        match self {
            ValuePrecision::F32 => v as f32 as f64,
            ValuePrecision::F16 => f16::from_f64(v).to_f64(),
        }
    }
}

impl FromStr for ValuePrecision {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f32" => Ok(ValuePrecision::F32),
            "f16" => Ok(ValuePrecision::F16),
            other => Err(HoloError::Validation(format!("unknown precision '{other}' (expected f32 or f16)"))),
        }
    }
}

impl fmt::Display for ValuePrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValuePrecision::F32 => "f32",
            ValuePrecision::F16 => "f16",
        })
    }
}

/// Parameter count over the `3·h·w` samples of one patch, in percent.
pub fn compression_ratio_exact(params: usize, patch_h: usize, patch_w: usize) -> f64 {
    100.0 * params as f64 / (CHANNELS * patch_h * patch_w) as f64
}

/// [`compression_ratio_exact`] rounded to the nearest integer percent.
pub fn compression_ratio(params: usize, patch_h: usize, patch_w: usize) -> u32 {
    compression_ratio_exact(params, patch_h, patch_w).round() as u32
}

/// Ratio of the preset architecture for a square patch.
pub fn preset_ratio(kind: InrKind, patch: usize) -> Result<u32> {
    Ok(compression_ratio(InrArchitecture::preset(kind, patch)?.parameter_count(), patch, patch))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HinrHeader {
    pub version: u16,
    pub height: usize,
    pub width: usize,
    pub patch_h: usize,
    pub patch_w: usize,
    pub arch: InrArchitecture,
    pub precision: ValuePrecision,
    /// Base training seed; patch `i` was initialized from `seed + i`.
    pub seed: u64,
    pub config: OpticalConfig,
    pub patch_count: usize,
    pub param_count: usize,
}

impl HinrHeader {
    pub fn new(grid: &PatchGrid, arch: InrArchitecture, precision: ValuePrecision, seed: u64, config: OpticalConfig) -> Self {
        let param_count = arch.parameter_count();
        Self {
            version: HINR_VERSION,
            height: grid.height,
            width: grid.width,
            patch_h: grid.patch_h,
            patch_w: grid.patch_w,
            arch,
            precision,
            seed,
            config,
            patch_count: grid.len(),
            param_count,
        }
    }

    pub fn grid(&self) -> Result<PatchGrid> {
        PatchGrid::new(self.patch_h, self.patch_w, self.height, self.width)
    }

    pub fn payload_len(&self) -> usize {
        self.patch_count * self.param_count * self.precision.bytes_per_value()
    }

    /// Parameter-over-sample accounting plus the actual
    /// size of a container of `bytes` bytes.
    pub fn stats(&self, bytes: usize) -> CompressionStats {
        let raw = CHANNELS * self.height * self.width * 4;
        CompressionStats {
            params_per_patch: self.param_count,
            patches: self.patch_count,
            ratio_percent: compression_ratio(self.param_count, self.patch_h, self.patch_w),
            ratio_exact: compression_ratio_exact(self.param_count, self.patch_h, self.patch_w),
            bytes,
            bytes_ratio_percent: 100.0 * bytes as f64 / raw as f64,
        }
    }
}

fn put_u16(out: &mut Vec<u8>, v: usize, what: &str) -> Result<()> {
    let v = u16::try_from(v).map_err(|_| HoloError::Structural(format!("{what} {v} does not fit the format")))?;
    out.extend_from_slice(&v.to_le_bytes());
    Ok(())
}

fn put_u32(out: &mut Vec<u8>, v: usize, what: &str) -> Result<()> {
    let v = u32::try_from(v).map_err(|_| HoloError::Structural(format!("{what} {v} does not fit the format")))?;
    out.extend_from_slice(&v.to_le_bytes());
    Ok(())
}

fn put_widths(out: &mut Vec<u8>, widths: &[usize], what: &str) -> Result<()> {
    put_u16(out, widths.len(), what)?;
    for &w in widths {
        put_u32(out, w, what)?;
    }
    Ok(())
}

/// Serializes trained patch models. Models must be in raster order and share
/// the header's architecture.
pub fn encode(models: &[InrModel], header: &HinrHeader) -> Result<Vec<u8>> {
    header.arch.validate()?;
    header.config.validate()?;
    let grid = header.grid()?;
    if header.patch_count != grid.len() || models.len() != header.patch_count {
        return Err(HoloError::Structural(format!(
            "header declares {} patches for a {}-patch grid, got {} models",
            header.patch_count,
            grid.len(),
            models.len()
        )));
    }
    if header.param_count != header.arch.parameter_count() {
        return Err(HoloError::Structural(format!(
            "header parameter count {} does not match the architecture ({})",
            header.param_count,
            header.arch.parameter_count()
        )));
    }
    if let Some((i, _)) = models.iter().enumerate().find(|(_, m)| m.arch != header.arch) {
        return Err(HoloError::Structural(format!("model {i} has a different architecture than the header")));
    }
    let arch = &header.arch;

    let mut out = Vec::with_capacity(128 + header.payload_len() + CHECKSUM_LEN);
    out.extend_from_slice(HINR_MAGIC);
    out.extend_from_slice(&HINR_VERSION.to_le_bytes());
    put_u32(&mut out, header.height, "height")?;
    put_u32(&mut out, header.width, "width")?;
    put_u32(&mut out, header.patch_h, "patch height")?;
    put_u32(&mut out, header.patch_w, "patch width")?;
    out.push(arch.kind.tag());
    out.push(header.precision.tag());
    put_u16(&mut out, arch.input_dim, "input dimension")?;
    put_u16(&mut out, arch.output_dim, "output dimension")?;
    out.extend_from_slice(&arch.omega0.to_le_bytes());
    put_widths(&mut out, &arch.hidden_widths, "hidden widths")?;
    put_u32(&mut out, arch.latent_dim, "latent size")?;
    put_widths(&mut out, &arch.mapping_widths, "mapping widths")?;
    out.extend_from_slice(&header.seed.to_le_bytes());
    for wl in header.config.wavelengths {
        out.extend_from_slice(&wl.to_le_bytes());
    }
    out.extend_from_slice(&header.config.pixel_pitch.to_le_bytes());
    put_u16(&mut out, header.config.eval_distances.len(), "distance count")?;
    for d in &header.config.eval_distances {
        out.extend_from_slice(&d.to_le_bytes());
    }
    put_u32(&mut out, header.patch_count, "patch count")?;
    put_u32(&mut out, header.param_count, "parameter count")?;

    for model in models {
        match header.precision {
            ValuePrecision::F32 => {
                for &p in &model.params {
                    out.extend_from_slice(&(p as f32).to_le_bytes());
                }
            }
            ValuePrecision::F16 => {
                for &p in &model.params {
                    out.extend_from_slice(&f16::from_f64(p).to_le_bytes());
                }
            }
        }
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}

/// Bounds-checked little-endian reader that reports the failing offset.
struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(HoloError::integrity(self.pos, format!("truncated while reading {what}")));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<usize> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()) as usize)
    }

    fn u32(&mut self, what: &str) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()) as usize)
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn widths(&mut self, what: &str) -> Result<Vec<usize>> {
        let n = self.u16(what)?;
        (0..n).map(|_| self.u32(what)).collect()
    }
}

/// Parses a `.hinr` stream back into models (raster order) and the header.
pub fn decode(bytes: &[u8]) -> Result<(Vec<InrModel>, HinrHeader)> {
    if bytes.len() < 6 {
        return Err(HoloError::integrity(bytes.len(), "truncated before the version field"));
    }
    if &bytes[..4] != HINR_MAGIC {
        return Err(HoloError::integrity(0, "bad magic, expected HINR"));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != HINR_VERSION {
        return Err(HoloError::UnsupportedVersion {
            found: version,
            expected: HINR_VERSION,
        });
    }
    if bytes.len() < 6 + CHECKSUM_LEN {
        return Err(HoloError::integrity(bytes.len(), "truncated before the checksum"));
    }
    let body_len = bytes.len() - CHECKSUM_LEN;
    let stored = u32::from_le_bytes(bytes[body_len..].try_into().unwrap());
    let actual = crc32fast::hash(&bytes[..body_len]);
    if stored != actual {
        return Err(HoloError::integrity(
            body_len,
            format!("checksum mismatch: stored {stored:08x}, computed {actual:08x}"),
        ));
    }

    let mut r = Reader {
        bytes: &bytes[..body_len],
        pos: 6,
    };
    let height = r.u32("height")?;
    let width = r.u32("width")?;
    let patch_h = r.u32("patch height")?;
    let patch_w = r.u32("patch width")?;
    let kind_at = r.pos;
    let kind = InrKind::from_tag(r.u8("architecture tag")?)
        .ok_or_else(|| HoloError::integrity(kind_at, "unknown architecture tag"))?;
    let precision_at = r.pos;
    let precision = ValuePrecision::from_tag(r.u8("precision tag")?)
        .ok_or_else(|| HoloError::integrity(precision_at, "unknown precision tag"))?;
    let input_dim = r.u16("input dimension")?;
    let output_dim = r.u16("output dimension")?;
    let omega0 = r.f64("omega0")?;
    let hidden_widths = r.widths("hidden widths")?;
    let latent_dim = r.u32("latent size")?;
    let mapping_widths = r.widths("mapping widths")?;
    let seed = r.u64("seed")?;
    let wavelengths = [r.f64("wavelength")?, r.f64("wavelength")?, r.f64("wavelength")?];
    let pixel_pitch = r.f64("pixel pitch")?;
    let n_dist = r.u16("distance count")?;
    let eval_distances = (0..n_dist).map(|_| r.f64("distance")).collect::<Result<Vec<_>>>()?;
    let counts_at = r.pos;
    let patch_count = r.u32("patch count")?;
    let param_count = r.u32("parameter count")?;

    let arch = InrArchitecture {
        kind,
        input_dim,
        output_dim,
        hidden_widths,
        omega0,
        latent_dim,
        mapping_widths,
    };
    arch.validate()?;
    let config = OpticalConfig {
        wavelengths,
        pixel_pitch,
        eval_distances,
    };
    config.validate()?;
    let header = HinrHeader {
        version,
        height,
        width,
        patch_h,
        patch_w,
        arch,
        precision,
        seed,
        config,
        patch_count,
        param_count,
    };
    let grid = header.grid()?;
    if patch_count != grid.len() || param_count != header.arch.parameter_count() {
        return Err(HoloError::integrity(
            counts_at,
            format!(
                "header counts ({patch_count} patches × {param_count} params) disagree with grid ({}) and architecture ({})",
                grid.len(),
                header.arch.parameter_count()
            ),
        ));
    }
    let payload_at = r.pos;
    let expected = header.payload_len();
    if body_len - payload_at != expected {
        return Err(HoloError::integrity(
            payload_at,
            format!("payload is {} bytes, header implies {expected}", body_len - payload_at),
        ));
    }

    let width_bytes = precision.bytes_per_value();
    let mut models = Vec::with_capacity(patch_count);
    for (i, blob) in bytes[payload_at..body_len].chunks_exact(param_count * width_bytes).enumerate() {
        let params: Vec<f64> = match precision {
            ValuePrecision::F32 => blob.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64).collect(),
            ValuePrecision::F16 => blob.chunks_exact(2).map(|c| f16::from_le_bytes(c.try_into().unwrap()).to_f64()).collect(),
        };
        if let Some(j) = params.iter().position(|p| !p.is_finite()) {
            return Err(HoloError::integrity(
                payload_at + (i * param_count + j) * width_bytes,
                "non-finite parameter",
            ));
        }
        models.push(InrModel::from_params(header.arch.clone(), params, seed.wrapping_add(i as u64))?);
    }
    Ok((models, header))
}

/// Evaluates every model on its patch, clamps to `[0, 1)`, scales to radians
/// and merges the patches, cropping any padding.
pub fn decompress_models(models: &[InrModel], header: &HinrHeader) -> Result<PhaseHologram> {
    let grid = header.grid()?;
    if models.len() != grid.len() {
        return Err(HoloError::Structural(format!("expected {} models, got {}", grid.len(), models.len())));
    }
    let coords = patch_coordinates(header.patch_h, header.patch_w);
    let patches = models
        .iter()
        .map(|m| {
            let out = m.forward(coords.view())?;
            Ok(outputs_to_patch(out.view(), header.patch_h, header.patch_w).mapv(|v| v.clamp(0.0, ONE_BELOW)))
        })
        .collect::<Result<Vec<Array3<f64>>>>()?;
    let merged = merge_patches(&patches, &grid)?;
    PhaseHologram::new(merged.mapv(|v| v * TAU), header.config.clone())
}

pub fn decompress(bytes: &[u8]) -> Result<PhaseHologram> {
    let (models, header) = decode(bytes)?;
    decompress_models(&models, &header)
}
