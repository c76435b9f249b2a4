//! Band-limited angular spectrum propagation.

use std::f64::consts::TAU;

use ndarray::Array2;
use rustfft::num_complex::Complex64;

use super::fft::{centered_frequencies, fft2, ifft2, ifftshift};
use crate::error::{HoloError, Result};

/// A single-wavelength complex amplitude sampled on the SLM grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    pub values: Array2<Complex64>,
    pub wavelength: f64,
    pub pixel_pitch: f64,
}

impl ComplexField {
    pub fn new(values: Array2<Complex64>, wavelength: f64, pixel_pitch: f64) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0 && pixel_pitch.is_finite() && pixel_pitch > 0.0) {
            return Err(HoloError::Validation(format!(
                "wavelength {wavelength} and pixel pitch {pixel_pitch} must be positive"
            )));
        }
        let field = Self {
            values,
            wavelength,
            pixel_pitch,
        };
        field.check_finite()?;
        Ok(field)
    }

    pub fn dim(&self) -> (usize, usize) {
        self.values.dim()
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn intensity(&self) -> Array2<f64> {
        self.values.mapv(|v| v.norm_sqr())
    }

    fn check_finite(&self) -> Result<()> {
        if self.values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(HoloError::Validation("field contains non-finite values".into()));
        }
        Ok(())
    }

    fn with_values(&self, values: Array2<Complex64>) -> Self {
        Self {
            values,
            wavelength: self.wavelength,
            pixel_pitch: self.pixel_pitch,
        }
    }
}

/// Largest |distance| the plain ASM transfer function samples without aliasing:
/// `N·px²/λ`, using the smaller axis.
pub fn max_propagation_distance(height: usize, width: usize, wavelength: f64, pixel_pitch: f64) -> f64 {
    height.min(width) as f64 * pixel_pitch * pixel_pitch / wavelength
}

pub(crate) fn check_propagation(height: usize, width: usize, wavelength: f64, pixel_pitch: f64, distance: f64) -> Result<()> {
    if !height.is_multiple_of(2) || !width.is_multiple_of(2) {
        return Err(HoloError::UnsupportedShape(format!(
            "propagation needs even dimensions, got {height}×{width}"
        )));
    }
    if !distance.is_finite() {
        return Err(HoloError::Validation(format!("non-finite distance {distance}")));
    }
    let limit = max_propagation_distance(height, width, wavelength, pixel_pitch);
    if distance.abs() > limit {
        return Err(HoloError::Validation(format!(
            "|distance| {distance:e} m exceeds sampling limit {limit:e} m"
        )));
    }
    Ok(())
}

/// `exp(i·2π·d·sqrt(1/λ² − fx² − fy²))`, zero where the root is imaginary.
/// Returned in FFT (not centered) order.
pub fn transfer_function(height: usize, width: usize, wavelength: f64, pixel_pitch: f64, distance: f64) -> Array2<Complex64> {
    let fy = centered_frequencies(height, pixel_pitch);
    let fx = centered_frequencies(width, pixel_pitch);
    let inv_wl2 = 1.0 / (wavelength * wavelength);
    let centered = Array2::from_shape_fn((height, width), |(y, x)| {
        let arg = inv_wl2 - fx[x] * fx[x] - fy[y] * fy[y];
        if arg > 0.0 {
            Complex64::from_polar(1.0, TAU * distance * arg.sqrt())
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    ifftshift(&centered)
}

pub fn propagate_asm(field: &ComplexField, distance: f64) -> Result<ComplexField> {
    let (h, w) = field.dim();
    check_propagation(h, w, field.wavelength, field.pixel_pitch, distance)?;
    field.check_finite()?;
    let mut spectrum = fft2(&field.values);
    spectrum *= &transfer_function(h, w, field.wavelength, field.pixel_pitch, distance);
    Ok(field.with_values(ifft2(&spectrum)))
}
