//! Per-hologram quality report: hologram-plane scores, per-focal-plane
//! reconstruction scores and compression accounting.

use std::fmt::Write as _;

use ndarray::{Array3, ArrayView3};
use serde::{Deserialize, Serialize};

use super::{display_db, psnr_per_channel, ssim};
use crate::error::{HoloError, Result};
use crate::hologram::PhaseHologram;
use crate::optics::reconstruct;

/// What reconstruction planes are compared against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceMode {
    /// The image the hologram was synthesized from.
    Source,
    /// The reconstruction of the uncompressed hologram; isolates compression loss.
    #[default]
    Uncompressed,
}

impl std::str::FromStr for ReferenceMode {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source" => Ok(Self::Source),
            "uncompressed" => Ok(Self::Uncompressed),
            other => Err(HoloError::Validation(format!(
                "unknown reference '{other}' (expected source or uncompressed)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Reference<'a> {
    /// 3×H×W target intensities; scaled by their peak before comparison.
    Source(ArrayView3<'a, f64>),
    Uncompressed,
}

impl Reference<'_> {
    pub fn mode(&self) -> ReferenceMode {
        match self {
            Reference::Source(_) => ReferenceMode::Source,
            Reference::Uncompressed => ReferenceMode::Uncompressed,
        }
    }
}

/// JSON has no infinity; PSNR of identical data is written as the string `"inf"`.
pub(crate) mod db {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("bad dB value {other}"))),
            },
        }
    }
}

pub(crate) use self::db as db_serde;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneScores {
    #[serde(with = "db")]
    pub psnr: f64,
    pub ssim: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceScores {
    /// Meters.
    pub distance: f64,
    #[serde(with = "db")]
    pub psnr: f64,
    pub ssim: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionScores {
    pub reference: ReferenceMode,
    pub planes: Vec<DistanceScores>,
    #[serde(with = "db")]
    pub mean_psnr: f64,
    pub mean_ssim: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressionStats {
    pub params_per_patch: usize,
    pub patches: usize,
    /// Parameter count over sample count, rounded to an integer percent.
    pub ratio_percent: u32,
    pub ratio_exact: f64,
    /// Size of the compressed container, header included.
    pub bytes: usize,
    /// `bytes` over the raw f32 phase payload, in percent.
    pub bytes_ratio_percent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub hologram_plane: PlaneScores,
    pub reconstruction: ReconstructionScores,
    pub compression: Option<CompressionStats>,
}

impl QualityReport {
    /// Human-readable layout: hologram plane first, then one line per focal
    /// plane with the mean last. The perceptual column is not computed.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let hp = &self.hologram_plane;
        let _ = writeln!(out, "hologram plane      PSNR {:>7} dB   SSIM {:.4}", display_db(hp.psnr), hp.ssim);
        let reference = match self.reconstruction.reference {
            ReferenceMode::Source => "source image",
            ReferenceMode::Uncompressed => "uncompressed hologram",
        };
        let _ = writeln!(out, "reconstruction (reference: {reference})");
        let _ = writeln!(out, "  {:>12}  {:>9}  {:>7}  {:>5}", "distance", "PSNR [dB]", "SSIM", "LPIPS");
        for p in &self.reconstruction.planes {
            let _ = writeln!(
                out,
                "  {:>9.3} mm  {:>9}  {:>7.4}  {:>5}",
                p.distance * 1e3,
                display_db(p.psnr),
                p.ssim,
                "n/a"
            );
        }
        let _ = writeln!(
            out,
            "  {:>12}  {:>9}  {:>7.4}  {:>5}",
            "mean",
            display_db(self.reconstruction.mean_psnr),
            self.reconstruction.mean_ssim,
            "n/a"
        );
        if let Some(c) = &self.compression {
            let _ = writeln!(
                out,
                "compression         {} params × {} patches, ratio {}% ({:.2}%), {} bytes on disk ({:.2}% of raw f32)",
                c.params_per_patch, c.patches, c.ratio_percent, c.ratio_exact, c.bytes, c.bytes_ratio_percent
            );
        }
        out
    }
}

/// Scores `decompressed` against `original` on the hologram plane and at every
/// evaluation distance of the original's optical configuration.
pub fn evaluate_pair(original: &PhaseHologram, decompressed: &PhaseHologram, reference: Reference<'_>) -> Result<QualityReport> {
    if original.phases().dim() != decompressed.phases().dim() {
        return Err(HoloError::Validation(format!(
            "hologram sizes differ: {:?} vs {:?}",
            original.phases().dim(),
            decompressed.phases().dim()
        )));
    }
    if !original.config().same_optics(decompressed.config()) {
        return Err(HoloError::Validation("holograms use different optical configurations".into()));
    }
    let hologram_plane = PlaneScores {
        psnr: psnr_per_channel(original.normalized().view(), decompressed.normalized().view())?,
        ssim: ssim(original.normalized().view(), decompressed.normalized().view())?,
    };

    let distances = &original.config().eval_distances;
    let test = reconstruct(decompressed, distances)?;
    let references: Vec<Array3<f64>> = match reference {
        Reference::Uncompressed => reconstruct(original, distances)?.planes.into_iter().map(|p| p.intensity).collect(),
        Reference::Source(image) => {
            if image.dim() != original.phases().dim() {
                return Err(HoloError::Validation(format!(
                    "source image is {:?}, hologram is {:?}",
                    image.dim(),
                    original.phases().dim()
                )));
            }
            let peak = image.iter().cloned().fold(0.0, f64::max);
            if peak <= 0.0 {
                return Err(HoloError::DegenerateInput("source image is black".into()));
            }
            vec![image.mapv(|v| v / peak); distances.len()]
        }
    };

    let mut planes = Vec::with_capacity(distances.len());
    for (plane, target) in test.planes.iter().zip(&references) {
        planes.push(DistanceScores {
            distance: plane.distance,
            psnr: psnr_per_channel(plane.intensity.view(), target.view())?,
            ssim: ssim(plane.intensity.view(), target.view())?,
        });
    }
    let n = planes.len() as f64;
    let mean_psnr = planes.iter().map(|p| p.psnr).sum::<f64>() / n;
    let mean_ssim = planes.iter().map(|p| p.ssim).sum::<f64>() / n;
    Ok(QualityReport {
        hologram_plane,
        reconstruction: ReconstructionScores {
            reference: reference.mode(),
            planes,
            mean_psnr,
            mean_ssim,
        },
        compression: None,
    })
}
