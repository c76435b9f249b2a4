//! Hologram synthesis from target images and multi-plane reconstruction.

use ndarray::{Array2, Array3, ArrayView3, Axis};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::double_phase::double_phase_encode_scaled;
use super::fft::{centered_frequencies, fft2, ifft2, ifftshift};
use super::propagate::{check_propagation, propagate_asm, transfer_function, ComplexField};
use crate::error::{HoloError, Result};
use crate::hologram::{OpticalConfig, PhaseHologram, CHANNELS};

/// Fourier-plane filter applied when viewing a hologram.
///
/// The double-phase checkerboard moves the encoding residue to the corner of
/// the spectrum; `HalfBand` passes `|fx|, |fy| ≤ 1/(4·px)` and blocks it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aperture {
    Open,
    #[default]
    HalfBand,
}

impl Aperture {
    /// 0/1 mask in FFT order.
    pub fn mask(self, height: usize, width: usize, pixel_pitch: f64) -> Array2<f64> {
        match self {
            Aperture::Open => Array2::ones((height, width)),
            Aperture::HalfBand => {
                let cutoff = 1.0 / (4.0 * pixel_pitch) * (1.0 + 1e-12);
                let fy = centered_frequencies(height, pixel_pitch);
                let fx = centered_frequencies(width, pixel_pitch);
                let centered = Array2::from_shape_fn((height, width), |(y, x)| {
                    if fx[x].abs() <= cutoff && fy[y].abs() <= cutoff {
                        1.0
                    } else {
                        0.0
                    }
                });
                ifftshift(&centered)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionPlane {
    pub distance: f64,
    /// 3×H×W, nonnegative. All planes of a stack share one scale: the largest
    /// value over every plane and channel is 1.
    pub intensity: Array3<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionStack {
    pub planes: Vec<ReconstructionPlane>,
}

/// Computes a double-phase hologram whose reconstruction at `scene_distance`
/// shows `target` (3×H×W intensities in `[0, 1]`).
///
/// Each channel's amplitude `sqrt(I)` is propagated by `-scene_distance` at its
/// wavelength and double-phase encoded. All channels share one amplitude scale
/// so their relative brightness survives.
pub fn synthesize_hologram(target: ArrayView3<'_, f64>, config: &OpticalConfig, scene_distance: f64) -> Result<PhaseHologram> {
    config.validate()?;
    let (c, h, w) = target.dim();
    if c != CHANNELS {
        return Err(HoloError::UnsupportedShape(format!("expected 3 channels, got {c}")));
    }
    if target.iter().any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0) {
        return Err(HoloError::Validation("target intensities must lie in [0, 1]".into()));
    }
    if target.iter().all(|v| *v == 0.0) {
        return Err(HoloError::DegenerateInput("target image is entirely black".into()));
    }

    let mut fields = Vec::with_capacity(CHANNELS);
    for (ch, plane) in target.axis_iter(Axis(0)).enumerate() {
        let values = plane.mapv(|i| Complex64::new(i.sqrt(), 0.0));
        let at_scene = ComplexField::new(values, config.wavelengths[ch], config.pixel_pitch)?;
        check_propagation(h, w, at_scene.wavelength, at_scene.pixel_pitch, scene_distance)?;
        fields.push(propagate_asm(&at_scene, -scene_distance)?);
    }
    let scale = fields
        .iter()
        .flat_map(|f| f.values.iter().map(|v| v.norm()))
        .fold(0.0, f64::max);

    let mut phases = Array3::zeros((CHANNELS, h, w));
    for (ch, field) in fields.iter().enumerate() {
        let encoded = double_phase_encode_scaled(field, scale)?;
        phases.index_axis_mut(Axis(0), ch).assign(&encoded.phases);
    }
    PhaseHologram::new(phases, config.clone())
}

/// Reconstructs the hologram at each distance through the default half-band aperture.
pub fn reconstruct(holo: &PhaseHologram, distances: &[f64]) -> Result<ReconstructionStack> {
    reconstruct_with(holo, distances, Aperture::default())
}

pub fn reconstruct_with(holo: &PhaseHologram, distances: &[f64], aperture: Aperture) -> Result<ReconstructionStack> {
    if distances.is_empty() {
        return Err(HoloError::Validation("no reconstruction distances given".into()));
    }
    let cfg = holo.config();
    let (h, w) = (holo.height(), holo.width());
    for &wl in &cfg.wavelengths {
        for &d in distances {
            check_propagation(h, w, wl, cfg.pixel_pitch, d)?;
        }
    }
    let mask = aperture.mask(h, w, cfg.pixel_pitch);

    let mut planes: Vec<ReconstructionPlane> = distances
        .iter()
        .map(|&distance| ReconstructionPlane {
            distance,
            intensity: Array3::zeros((CHANNELS, h, w)),
        })
        .collect();
    for ch in 0..CHANNELS {
        let slm = holo.channel(ch).mapv(|p| Complex64::from_polar(1.0, p));
        let mut spectrum = fft2(&slm);
        spectrum.zip_mut_with(&mask, |s, m| *s *= *m);
        for plane in planes.iter_mut() {
            let transfer = transfer_function(h, w, cfg.wavelengths[ch], cfg.pixel_pitch, plane.distance);
            let field = ifft2(&(&spectrum * &transfer));
            plane
                .intensity
                .index_axis_mut(Axis(0), ch)
                .assign(&field.mapv(|v| v.norm_sqr()));
        }
    }
    let peak = planes
        .iter()
        .flat_map(|p| p.intensity.iter())
        .cloned()
        .fold(0.0, f64::max);
    if peak > 0.0 {
        for plane in planes.iter_mut() {
            plane.intensity.mapv_inplace(|v| v / peak);
        }
    }
    Ok(ReconstructionStack { planes })
}
