//! Double-phase amplitude encoding.
//!
//! A complex sample `a·e^{iφ}` (with `a ≤ 1`) is the mean of two unit phasors
//! `e^{i(φ ± arccos a)}`. The two phases are interleaved on a checkerboard:
//! `θ+` where `(row + col)` is even, `θ−` where it is odd.

use ndarray::Array2;
use rustfft::num_complex::Complex64;

use super::propagate::ComplexField;
use crate::error::{HoloError, Result};
use crate::hologram::canonical_phase;

#[derive(Clone, Debug, PartialEq)]
pub struct DoublePhase {
    /// Phases in `[0, 2π)`.
    pub phases: Array2<f64>,
    /// The amplitude that was mapped to 1 before encoding.
    pub scale: f64,
}

/// Normalizes by the field's own peak amplitude and encodes.
pub fn double_phase_encode(field: &ComplexField) -> Result<DoublePhase> {
    let peak = field.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    double_phase_encode_scaled(field, peak)
}

/// Encodes `field / scale`; `scale` must be at least the peak amplitude.
pub fn double_phase_encode_scaled(field: &ComplexField, scale: f64) -> Result<DoublePhase> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(HoloError::DegenerateInput(format!(
            "encoding scale must be positive (zero-energy field?), got {scale}"
        )));
    }
    let phases = Array2::from_shape_fn(field.dim(), |(y, x)| {
        let v = field.values[[y, x]];
        let offset = (v.norm() / scale).min(1.0).acos();
        let theta = if (y + x) % 2 == 0 { v.arg() + offset } else { v.arg() - offset };
        canonical_phase(theta)
    });
    Ok(DoublePhase { phases, scale })
}

/// Recovers the field by averaging the phasors of each horizontal pixel pair
/// `(2k, 2k+1)`; both pixels of a pair receive the pair's value.
pub fn double_phase_decode(encoded: &DoublePhase, wavelength: f64, pixel_pitch: f64) -> Result<ComplexField> {
    let (h, w) = encoded.phases.dim();
    if w % 2 != 0 {
        return Err(HoloError::UnsupportedShape(format!("pairing needs an even width, got {w}")));
    }
    let mut values = Array2::zeros((h, w));
    for y in 0..h {
        for x in (0..w).step_by(2) {
            let mean = (Complex64::from_polar(1.0, encoded.phases[[y, x]])
                + Complex64::from_polar(1.0, encoded.phases[[y, x + 1]]))
                * (0.5 * encoded.scale);
            values[[y, x]] = mean;
            values[[y, x + 1]] = mean;
        }
    }
    ComplexField::new(values, wavelength, pixel_pitch)
}
