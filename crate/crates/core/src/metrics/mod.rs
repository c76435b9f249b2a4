//! Full-reference image quality metrics on `[0, 1]` data.

mod report;

pub(crate) use report::db_serde;

pub use report::{
    evaluate_pair, CompressionStats, PlaneScores, QualityReport, Reference, ReferenceMode, ReconstructionScores,
};

use ndarray::{Array2, ArrayView, ArrayView2, ArrayView3, Axis, Dimension};

use crate::error::{HoloError, Result};

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

/// Text reports print infinite PSNR as this value.
pub const PSNR_DISPLAY_CAP: f64 = 100.0;

pub fn mse<D: Dimension>(a: ArrayView<'_, f64, D>, b: ArrayView<'_, f64, D>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(HoloError::Structural(format!("shape mismatch: {:?} vs {:?}", a.shape(), b.shape())));
    }
    if a.is_empty() {
        return Err(HoloError::Validation("empty arrays".into()));
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(HoloError::Validation("non-finite values".into()));
    }
    let sum: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sum / a.len() as f64)
}

/// `10·log10(1/MSE)` (peak 1). Identical inputs give `+∞`.
pub fn psnr<D: Dimension>(a: ArrayView<'_, f64, D>, b: ArrayView<'_, f64, D>) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * mse.log10()
    }
}

/// Normalized 1-D Gaussian taps for the SSIM window.
pub fn gaussian_taps() -> [f64; SSIM_WINDOW] {
    let mut taps = [0.0; SSIM_WINDOW];
    let center = (SSIM_WINDOW / 2) as f64;
    for (i, t) in taps.iter_mut().enumerate() {
        let d = i as f64 - center;
        *t = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    taps
}

/// Valid-mode separable Gaussian filter.
fn blur_valid(img: &Array2<f64>, taps: &[f64; SSIM_WINDOW]) -> Array2<f64> {
    let (h, w) = img.dim();
    let (oh, ow) = (h + 1 - SSIM_WINDOW, w + 1 - SSIM_WINDOW);
    let mut rows = Array2::zeros((h, ow));
    for y in 0..h {
        for x in 0..ow {
            rows[[y, x]] = (0..SSIM_WINDOW).map(|k| taps[k] * img[[y, x + k]]).sum::<f64>();
        }
    }
    let mut out = Array2::zeros((oh, ow));
    for y in 0..oh {
        for x in 0..ow {
            out[[y, x]] = (0..SSIM_WINDOW).map(|k| taps[k] * rows[[y + k, x]]).sum::<f64>();
        }
    }
    out
}

/// Single-plane SSIM: 11×11 Gaussian window (σ = 1.5), K1 = 0.01, K2 = 0.03,
/// L = 1, averaged over all fully-contained windows.
pub fn ssim_plane(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(HoloError::Structural(format!("shape mismatch: {:?} vs {:?}", a.dim(), b.dim())));
    }
    let (h, w) = a.dim();
    if h < SSIM_WINDOW || w < SSIM_WINDOW {
        return Err(HoloError::Validation(format!(
            "SSIM needs at least {SSIM_WINDOW}×{SSIM_WINDOW} pixels, got {h}×{w}"
        )));
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(HoloError::Validation("non-finite values".into()));
    }
    let taps = gaussian_taps();
    let (a, b) = (a.to_owned(), b.to_owned());
    let mu_a = blur_valid(&a, &taps);
    let mu_b = blur_valid(&b, &taps);
    let e_aa = blur_valid(&(&a * &a), &taps);
    let e_bb = blur_valid(&(&b * &b), &taps);
    let e_ab = blur_valid(&(&a * &b), &taps);
    let c1 = SSIM_K1 * SSIM_K1;
    let c2 = SSIM_K2 * SSIM_K2;

    let mut total = 0.0;
    for i in 0..mu_a.len() {
        let (ma, mb) = (mu_a.as_slice().unwrap()[i], mu_b.as_slice().unwrap()[i]);
        let var_a = e_aa.as_slice().unwrap()[i] - ma * ma;
        let var_b = e_bb.as_slice().unwrap()[i] - mb * mb;
        let cov = e_ab.as_slice().unwrap()[i] - ma * mb;
        total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
    }
    Ok(total / mu_a.len() as f64)
}

/// Channel-averaged SSIM of two C×H×W stacks.
pub fn ssim(a: ArrayView3<'_, f64>, b: ArrayView3<'_, f64>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(HoloError::Structural(format!("shape mismatch: {:?} vs {:?}", a.dim(), b.dim())));
    }
    let channels = a.len_of(Axis(0));
    if channels == 0 {
        return Err(HoloError::Validation("no channels".into()));
    }
    let mut sum = 0.0;
    for (pa, pb) in a.axis_iter(Axis(0)).zip(b.axis_iter(Axis(0))) {
        sum += ssim_plane(pa, pb)?;
    }
    Ok(sum / channels as f64)
}

/// Channel-averaged PSNR of two C×H×W stacks.
pub fn psnr_per_channel(a: ArrayView3<'_, f64>, b: ArrayView3<'_, f64>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(HoloError::Structural(format!("shape mismatch: {:?} vs {:?}", a.dim(), b.dim())));
    }
    let channels = a.len_of(Axis(0));
    let mut sum = 0.0;
    for (pa, pb) in a.axis_iter(Axis(0)).zip(b.axis_iter(Axis(0))) {
        sum += psnr(pa, pb)?;
    }
    Ok(sum / channels as f64)
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Formats a dB value for text output, capping `+∞`.
pub fn display_db(value: f64) -> String {
    if value.is_infinite() && value > 0.0 {
        format!("{PSNR_DISPLAY_CAP:.2}")
    } else {
        format!("{value:.2}")
    }
}
